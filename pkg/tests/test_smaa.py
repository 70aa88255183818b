"""Monte Carlo engine tests: samplers, runs, exact oracle, error rates."""

import itertools
import math

import numpy as np
import pytest
from scipy import stats

from risksort import (
    Alternative,
    ConfigurationError,
    CriterionSpec,
    Evaluation,
    LambdaSpec,
    ProfileScheme,
    Project,
    RunConfig,
    UnsupportedInputError,
    WeightSampler,
    error_rates,
    exact_acceptability,
    interval_weights_from_dms,
    run_smaa,
    sample_evaluation,
    sample_weights,
)
from risksort.outranking import RULES, lambda_breakpoints
from risksort.outranking import project_scores
from risksort.project_io import report_to_dict
from risksort.smaa import draw_rng, modal_category

from conftest import random_instance


class TestWeightSamplers:
    def test_fixed_returns_vector_verbatim(self, case_study):
        expected = case_study.decision_maker("DM2").resolve_weights()
        sampler = WeightSampler.fixed(expected)
        ids = case_study.project.criterion_ids
        for i in range(5):
            assert sample_weights(sampler, ids, draw_rng(1, i)) == expected

    def test_two_simplex_first_coordinate_uniform(self):
        rng = np.random.default_rng(5)
        sampler = WeightSampler.simplex_uniform().prepare(["a", "b"])
        xs = np.array([sampler.draw(rng)[0] for _ in range(10_000)])
        assert stats.kstest(xs, "uniform").pvalue > 0.01

    def test_degenerate_box_returns_equal_weights(self):
        n = 6
        bounds = {f"g{j}": (1.0 / n, 1.0 / n) for j in range(n)}
        sampler = WeightSampler.intervals(bounds).prepare([f"g{j}" for j in range(n)])
        w = sampler.draw(np.random.default_rng(0))
        assert w == pytest.approx(np.full(n, 1.0 / n))

    def test_interval_draws_respect_bounds_and_sum(self, case_study):
        bounds = case_study.group_bounds()
        ids = case_study.project.criterion_ids
        lo = np.array([bounds[c][0] for c in ids])
        hi = np.array([bounds[c][1] for c in ids])
        prepared = WeightSampler.intervals(bounds).prepare(ids)
        rng = np.random.default_rng(9)
        for _ in range(2_000):
            w = prepared.draw(rng)
            assert (w >= lo - 1e-12).all() and (w <= hi + 1e-12).all()
            assert abs(w.sum() - 1.0) <= 1e-9

    def test_empty_region_fault_names_bounds(self):
        bounds = {"a": (0.6, 0.9), "b": (0.6, 0.9)}  # lows alone exceed 1
        with pytest.raises(ConfigurationError, match=r"sum\(lo\)=1\.2"):
            WeightSampler.intervals(bounds).prepare(["a", "b"])

    def test_caps_too_small_fault(self):
        bounds = {"a": (0.0, 0.4), "b": (0.0, 0.4)}  # his cannot reach 1
        with pytest.raises(ConfigurationError, match="no feasible weights"):
            WeightSampler.intervals(bounds).prepare(["a", "b"])

    def test_rejection_budget_exhaustion_fault(self):
        # a feasible but vanishingly thin region: every coordinate capped
        # barely above the equal split
        n = 12
        eps = 1e-4
        bounds = {f"g{j}": (0.0, 1.0 / n + eps) for j in range(n)}
        prepared = WeightSampler.intervals(bounds, rejection_budget=500).prepare(
            [f"g{j}" for j in range(n)])
        with pytest.raises(ConfigurationError, match="budget"):
            prepared.draw(np.random.default_rng(3))

    def test_sampler_consumption_is_stream_deterministic(self, case_study):
        bounds = case_study.group_bounds()
        ids = case_study.project.criterion_ids
        prepared = WeightSampler.intervals(bounds).prepare(ids)
        a = prepared.draw(draw_rng(7, 123))
        b = prepared.draw(draw_rng(7, 123))
        assert np.array_equal(a, b)


class TestSampleEvaluation:
    def test_point_passes_through(self):
        crit = CriterionSpec(id="g", group="g", scale=(1, 5))
        assert sample_evaluation(Evaluation.point(4), crit, draw_rng(0, 0)) == 4.0

    def test_ordinal_interval_uniform_over_integers(self):
        crit = CriterionSpec(id="g", group="g", scale=(1, 5))
        rng = np.random.default_rng(13)
        draws = [sample_evaluation(Evaluation.interval(3, 5), crit, rng)
                 for _ in range(10_000)]
        counts = {v: draws.count(v) / len(draws) for v in (3.0, 4.0, 5.0)}
        assert set(draws) == {3.0, 4.0, 5.0}
        for share in counts.values():
            assert share == pytest.approx(1 / 3, abs=0.02)

    def test_ratio_interval_uniform_mean(self):
        crit = CriterionSpec(id="g", group="g")
        rng = np.random.default_rng(17)
        draws = [sample_evaluation(Evaluation.interval(0.44, 0.55), crit, rng)
                 for _ in range(10_000)]
        assert np.mean(draws) == pytest.approx(0.495, abs=0.005)
        assert min(draws) >= 0.44 and max(draws) <= 0.55


def tiny_project(evaluation=4.0, interval=None, profiles=(2.0, 4.0, 6.0)):
    criteria = (CriterionSpec(id="g", group="g"),)
    ev = Evaluation.point(evaluation) if interval is None else Evaluation.interval(*interval)
    alternatives = (Alternative(id="x", evaluations={"g": ev}),)
    scheme = ProfileScheme(
        categories=tuple(f"C{k}" for k in range(1, len(profiles) + 2)),
        base_profiles={"g": tuple(profiles)},
    )
    return Project(criteria, alternatives, scheme)


class TestRunSmaa:
    def test_never_outranking_lands_in_worst(self):
        project = tiny_project(evaluation=0.0)
        config = RunConfig(draws=500, seed=1, lam=LambdaSpec(0.65, 0.85), rule="pessimistic")
        report = run_smaa(project, WeightSampler.simplex_uniform(), config)
        assert report.rows[0].pi[0] == 1.0

    def test_row_sums_to_one_within_inverse_draws(self, case_study):
        config = RunConfig(draws=777, seed=3, lam=case_study.lam)
        sampler = WeightSampler.intervals(case_study.group_bounds())
        report = run_smaa(case_study.project, sampler, config, cutoff=3)
        for row in report.rows:
            assert abs(math.fsum(row.pi) - 1.0) <= 1.0 / config.draws

    def test_degenerate_lambda_and_fixed_weights_one_hot(self, case_study):
        from risksort import assign

        weights = case_study.decision_maker("DM3").resolve_weights()
        config = RunConfig(draws=200, seed=5, lam=LambdaSpec(0.7, 0.7), rule="pessimistic")
        report = run_smaa(case_study.project, WeightSampler.fixed(weights), config, cutoff=3)
        scores = project_scores(case_study.project, weights)
        for row in report.rows:
            expected = assign(scores[row.alternative], 0.7, "pessimistic")
            one_hot = [0.0] * 5
            one_hot[expected - 1] = 1.0
            assert list(row.pi) == one_hot

    def test_matches_exact_within_mc_error(self, case_study):
        weights = case_study.decision_maker("DM4").resolve_weights()
        config = RunConfig(draws=10_000, seed=11, lam=case_study.lam, rule="pessimistic")
        mc = run_smaa(case_study.project, WeightSampler.fixed(weights), config, cutoff=3)
        ex = exact_acceptability(case_study.project, weights, case_study.lam,
                                 "pessimistic", cutoff=3)
        bound = 2.0 / math.sqrt(config.draws)
        for row, erow in zip(mc.rows, ex.rows):
            for a, b in zip(row.pi, erow.pi):
                assert abs(a - b) <= bound

    def test_bit_identical_across_worker_counts(self, interval_case_study):
        pf = interval_case_study
        sampler = WeightSampler.intervals(pf.group_bounds())
        config = RunConfig(draws=800, seed=21, lam=pf.lam, evaluation_sampling=True)
        reports = [
            report_to_dict(run_smaa(pf.project, sampler, config, workers=w, cutoff=3))
            for w in (1, 2, 8)
        ]
        assert reports[0] == reports[1] == reports[2]

    def test_widening_intervals_never_loses_reachable_categories(self):
        # exact enumeration over all integer evaluations and lambda pieces
        weights = {"g": 1.0}
        lam = LambdaSpec(0.65, 0.85)

        def reachable(lo, hi):
            cats = set()
            for value in range(int(lo), int(hi) + 1):
                project = tiny_project(evaluation=float(value))
                scores = project_scores(project, weights)["x"]
                for iv in lambda_breakpoints(scores, "pessimistic"):
                    if min(iv.hi, lam.hi) - max(iv.lo, lam.lo) > 0:
                        cats.add(iv.category)
            return cats

        for lo in range(0, 8):
            for hi in range(lo, 8):
                narrow = reachable(lo, hi)
                for wid in range(0, 3):
                    wide = reachable(max(0, lo - wid), hi + wid)
                    assert narrow <= wide


class TestExactAcceptability:
    def test_dominant_alternative_is_certain(self):
        project = tiny_project(evaluation=99.0)
        report = exact_acceptability(project, {"g": 1.0}, LambdaSpec(0.65, 0.85),
                                     "pessimistic")
        assert report.rows[0].pi[-1] == 1.0

    def test_two_category_split(self):
        # single profile, sigma(a, b1) = 0.75 via a half-weight criterion pair
        criteria = (CriterionSpec(id="a", group="g"), CriterionSpec(id="b", group="g"))
        alternatives = (Alternative(id="x", evaluations={
            "a": Evaluation.point(5), "b": Evaluation.point(0)}),)
        scheme = ProfileScheme(categories=("C1", "C2"),
                               base_profiles={"a": (3.0,), "b": (3.0,)})
        project = Project(criteria, alternatives, scheme)
        report = exact_acceptability(project, {"a": 0.75, "b": 0.25},
                                     LambdaSpec(0.65, 0.85), "pessimistic")
        assert report.rows[0].pi == (pytest.approx(0.5), pytest.approx(0.5))

    def test_interval_evaluations_unsupported(self):
        project = tiny_project(interval=(2, 5))
        with pytest.raises(UnsupportedInputError):
            exact_acceptability(project, {"g": 1.0}, LambdaSpec(0.65, 0.85))

    @pytest.mark.parametrize("rule", RULES)
    def test_cross_validates_run_smaa_on_random_projects(self, rule):
        rng = np.random.default_rng(29)
        draws = 4_000
        for trial in range(10):
            inst = random_instance(rng, m_alts=2, with_veto=True)
            lam = LambdaSpec(0.6, 0.9)
            config = RunConfig(draws=draws, seed=trial, lam=lam, rule=rule)
            mc = run_smaa(inst.project, WeightSampler.fixed(inst.weights), config)
            ex = exact_acceptability(inst.project, inst.weights, lam, rule)
            for row, erow in zip(mc.rows, ex.rows):
                for a, b in zip(row.pi, erow.pi):
                    se = math.sqrt(max(b * (1 - b), 1e-12) / draws)
                    assert abs(a - b) <= max(3 * se, 2.0 / draws)

    def test_rows_sum_exactly_to_one(self, case_study):
        weights = case_study.decision_maker("DM5").resolve_weights()
        report = exact_acceptability(case_study.project, weights, case_study.lam,
                                     "pessimistic-strict", cutoff=3)
        for row in report.rows:
            assert math.fsum(row.pi) == pytest.approx(1.0, abs=1e-12)


class TestIntervalWeightAggregation:
    def test_case_study_bounds_are_componentwise_extrema(self, case_study):
        reported = {
            "awards": (0.022, 0.112),
            "technique_advantage": (0.0934, 0.165),
            "potential_market": (0.019, 0.184),
            "unit_pilots": (0.035, 0.196),
            "roa": (0.0632, 0.125),
        }
        bounds = case_study.group_bounds()
        for cid, expected in reported.items():
            assert bounds[cid] == expected

    def test_single_vector_degenerates(self):
        v = {"a": 0.3, "b": 0.7}
        assert interval_weights_from_dms([v]) == {"a": (0.3, 0.3), "b": (0.7, 0.7)}

    def test_two_vectors_match_bruteforce(self):
        rng = np.random.default_rng(33)
        for _ in range(100):
            k = rng.integers(1, 9, size=4).astype(float)
            v1 = dict(zip("abcd", (k / k.sum()).tolist()))
            k = rng.integers(1, 9, size=4).astype(float)
            v2 = dict(zip("abcd", (k / k.sum()).tolist()))
            got = interval_weights_from_dms([v1, v2])
            for cid in "abcd":
                assert got[cid][0] == min(v1[cid], v2[cid])
                assert got[cid][1] == max(v1[cid], v2[cid])

    def test_mismatched_criteria_fault(self):
        with pytest.raises(ConfigurationError):
            interval_weights_from_dms([{"a": 1.0}, {"b": 1.0}])


class TestErrorRates:
    def test_low_risk_modal_reports_type_one(self):
        t1, t2 = error_rates((0.0, 0.03, 0.07, 0.90, 0.0), cutoff=3)
        assert t1 == pytest.approx(0.10)
        assert t2 is None

    def test_high_risk_modal_reports_type_two(self):
        t1, t2 = error_rates((1.0, 0.0, 0.0, 0.0, 0.0), cutoff=3)
        assert t1 is None
        assert t2 == 0.0

    def test_group_style_row(self):
        t1, t2 = error_rates((0.0, 0.0, 0.40, 0.50, 0.10), cutoff=3)
        assert t1 == pytest.approx(0.40)
        assert t2 is None

    def test_cutoff_out_of_range(self):
        with pytest.raises(ConfigurationError):
            error_rates((0.5, 0.5), cutoff=2)
        with pytest.raises(ConfigurationError):
            error_rates((0.5, 0.5), cutoff=0)

    def test_modal_tie_breaks_to_riskier_category(self):
        assert modal_category((0.0, 0.5, 0.5, 0.0, 0.0)) == 2

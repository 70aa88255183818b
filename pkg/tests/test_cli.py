"""Command-line interface tests (exit codes, outputs, determinism)."""

import json

import pytest

from risksort.cli import main
from risksort.casestudy import data_path
from risksort.project_io import load_project, read_report
from risksort.smaa import RunConfig, WeightSampler, run_smaa


@pytest.fixture()
def project_path(tmp_path, case_study):
    from risksort.project_io import save_project

    path = tmp_path / "case.json"
    save_project(case_study, path)
    return path


@pytest.fixture()
def deck_path(tmp_path):
    path = tmp_path / "deck.json"
    path.write_text(data_path("dm1_deck.json").read_text())
    return path


@pytest.fixture()
def cash_path(tmp_path):
    path = tmp_path / "cash.json"
    path.write_text(data_path("cash_flows.json").read_text())
    return path


class TestRunCommand:
    def test_single_dm_run_writes_report(self, project_path, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(["run", str(project_path), "--dm", "DM1", "--draws", "2000",
                     "--seed", "42", "--out", str(out), "--format", "json"])
        assert code == 0
        report = read_report(out)
        assert {r.alternative for r in report.rows} == {
            "company_a", "company_b", "company_c", "company_d"}
        assert all(r.dm == "DM1" for r in report.rows)

    def test_reversed_lambda_exits_2(self, project_path, capsys):
        code = main(["run", str(project_path), "--dm", "DM1", "--lambda", "0.9:0.8"])
        assert code == 2
        assert "configuration fault" in capsys.readouterr().err

    def test_unknown_dm_exits_2(self, project_path, capsys):
        assert main(["run", str(project_path), "--dm", "DMX"]) == 2

    def test_broken_project_exits_1(self, tmp_path, project_path, capsys):
        doc = json.loads(project_path.read_text())
        doc["profiles"]["base"]["awards"] = [4, 3, 2, 1]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        assert main(["run", str(bad), "--dm", "DM1"]) == 1
        assert "dominance" in capsys.readouterr().err

    def test_same_seed_byte_identical_outputs(self, project_path, tmp_path, capsys):
        outs = []
        for name in ("one.csv", "two.csv"):
            out = tmp_path / name
            code = main(["run", str(project_path), "--group", "--draws", "1500",
                         "--seed", "9", "--out", str(out), "--format", "csv",
                         "--workers", "4"])
            assert code == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_all_dms_is_default(self, project_path, tmp_path, capsys):
        out = tmp_path / "all.csv"
        code = main(["run", str(project_path), "--draws", "200", "--seed", "1",
                     "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 5 * 4  # header + 5 DMs x 4 alternatives

    def test_group_runs_modal_category_on_stderr(self, project_path, capsys, tmp_path):
        out = tmp_path / "group.csv"
        code = main(["run", str(project_path), "--group", "--draws", "2000",
                     "--seed", "42", "--out", str(out)])
        assert code == 0
        err = capsys.readouterr().err
        assert "company_a" in err and "modal C" in err


class TestWeightsCommand:
    def test_published_totals_in_table(self, deck_path, capsys):
        assert main(["weights", str(deck_path)]) == 0
        output = capsys.readouterr().out
        assert "40.63" in output
        assert "1.63" in output and "2.90" in output and "6.72" in output

    def test_single_rank_equal_weights(self, tmp_path, capsys):
        deck = tmp_path / "flat.json"
        deck.write_text(json.dumps(
            {"ranks": [["a", "b", "c", "d"]], "white_cards": [], "z": 5}))
        assert main(["weights", str(deck)]) == 0
        out = capsys.readouterr().out
        assert out.count("0.250000") == 4

    def test_json_output_feeds_back_as_fixed_weights(self, deck_path, project_path,
                                                     tmp_path, capsys, case_study):
        assert main(["weights", str(deck_path), "--format", "json"]) == 0
        weights = json.loads(capsys.readouterr().out)["weights"]

        # a project whose DM carries the deck itself
        doc = json.loads(project_path.read_text())
        doc["decision_makers"] = [{"id": "officer", "deck": json.loads(deck_path.read_text())}]
        deck_proj = tmp_path / "deck_proj.json"
        deck_proj.write_text(json.dumps(doc))

        # the same project with the resolved vector pasted in as fixed weights
        doc2 = json.loads(project_path.read_text())
        doc2["decision_makers"] = [{"id": "officer", "weights": weights}]
        fixed_proj = tmp_path / "fixed_proj.json"
        fixed_proj.write_text(json.dumps(doc2))

        out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
        assert main(["run", str(deck_proj), "--dm", "officer", "--draws", "1000",
                     "--seed", "3", "--out", str(out1), "--format", "json"]) == 0
        assert main(["run", str(fixed_proj), "--dm", "officer", "--draws", "1000",
                     "--seed", "3", "--out", str(out2), "--format", "json"]) == 0
        capsys.readouterr()
        assert out1.read_bytes() == out2.read_bytes()

    def test_z_override(self, tmp_path, capsys):
        deck = tmp_path / "two.json"
        deck.write_text(json.dumps({"ranks": [["a"], ["b"]], "white_cards": [0], "z": 3}))
        assert main(["weights", str(deck), "--z", "5", "--format", "json"]) == 0
        body = json.loads(capsys.readouterr().out)
        assert body["rank_weights"] == [1.0, 5.0]

    def test_invalid_deck_exits_1(self, tmp_path, capsys):
        deck = tmp_path / "dup.json"
        deck.write_text(json.dumps({"ranks": [["a"], ["a"]], "white_cards": [0], "z": 2}))
        assert main(["weights", str(deck)]) == 1

    def test_z_not_above_one_exits_2(self, tmp_path, capsys):
        deck = tmp_path / "flatz.json"
        deck.write_text(json.dumps({"ranks": [["a"], ["b"]], "white_cards": [0], "z": 1.0}))
        assert main(["weights", str(deck)]) == 2


class TestNpvCommand:
    def test_scenario_table_with_reference_column(self, cash_path, capsys):
        assert main(["npv", str(cash_path)]) == 0
        out = capsys.readouterr().out
        assert "company_a" in out
        assert "reported" in out
        assert "153,732.50" not in out  # discounted, not summed

    def test_zero_rate_gives_sums(self, cash_path, capsys):
        assert main(["npv", str(cash_path), "--rate", "0"]) == 0
        out = capsys.readouterr().out
        assert "153,732.50" in out

    def test_zero_severity_equals_base(self, cash_path, capsys):
        assert main(["npv", str(cash_path), "--scenarios", "0",
                     "--format", "json"]) == 0
        body = json.loads(capsys.readouterr().out)
        for rows in body["series"].values():
            assert rows[0]["npv"] == rows[1]["npv"]

    def test_rate_at_minus_one_exits_2(self, cash_path, capsys):
        assert main(["npv", str(cash_path), "--rate", "-1"]) == 2

    def test_bare_series_file_needs_rate(self, tmp_path, capsys):
        path = tmp_path / "flows.json"
        path.write_text(json.dumps({"a": [1.0, 2.0]}))
        assert main(["npv", str(path)]) == 2
        assert main(["npv", str(path), "--rate", "0.05"]) == 0


class TestCliHttpParity:
    def test_cli_and_http_reports_identical(self, project_path, tmp_path, case_study, capsys):
        from fastapi.testclient import TestClient
        from risksort.project_io import project_file_to_dict
        from risksort.service import create_app

        out = tmp_path / "cli.json"
        assert main(["run", str(project_path), "--dm", "DM3", "--draws", "1000",
                     "--seed", "17", "--out", str(out), "--format", "json"]) == 0
        capsys.readouterr()
        cli_report = json.loads(out.read_text())

        client = TestClient(create_app(run_in_background=False))
        pid = client.post("/projects", json=project_file_to_dict(case_study)).json()["project_id"]
        handle = client.post(f"/projects/{pid}/runs",
                             json={"dm": "DM3", "draws": 1000, "seed": 17}).json()
        http_report = client.get(f"/runs/{handle['run_id']}").json()["report"]
        assert cli_report == http_report

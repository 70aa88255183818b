"""Command-line front end.

Subcommands: run (Monte Carlo acceptability), weights (resolve a card deck),
npv (scenario cash-flow table), serve (HTTP service). Exit codes: 0 success,
1 validation fault in the input data, 2 configuration fault.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .finance import CashFlowSeries, scenario_table
from .model import ConfigurationError, LambdaSpec
from .outranking import DEFAULT_RULE, RULES
from .project_io import (
    GROUP_DM,
    ProjectValidationError,
    SchemaError,
    load_project,
    merge_reports,
    parse_deck,
    report_to_dict,
    write_report,
)
from .simos import CardDeck, display_value, preorder_check, simos_resolve
from .smaa import RunConfig, WeightSampler, run_smaa

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIGURATION = 2

DEFAULT_BIND = os.environ.get("RISKSORT_BIND", "127.0.0.1:8099")


def _parse_lambda(text: str) -> LambdaSpec:
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise ConfigurationError(f"--lambda expects lo:hi, got {text!r}")
    return LambdaSpec(lo, hi)


def _cmd_run(args: argparse.Namespace) -> int:
    pf = load_project(args.project)
    lam = _parse_lambda(args.lam) if args.lam else pf.lam
    config = RunConfig(
        draws=args.draws if args.draws is not None else pf.run.draws,
        seed=args.seed if args.seed is not None else pf.run.seed,
        lam=lam,
        rule=args.rule or pf.run.rule,
        evaluation_sampling=(
            pf.run.evaluation_sampling if args.intervals is None else args.intervals == "on"
        ),
    )

    jobs: list[tuple[WeightSampler, str]] = []
    if args.dm:
        try:
            dm = pf.decision_maker(args.dm)
        except KeyError:
            raise ConfigurationError(f"unknown decision maker {args.dm!r}")
        jobs.append((dm.sampler(), dm.id))
    elif args.group:
        jobs.append((WeightSampler.intervals(pf.group_bounds()), GROUP_DM))
    elif pf.decision_makers:
        jobs.extend((dm.sampler(), dm.id) for dm in pf.decision_makers)
    else:
        jobs.append((WeightSampler.simplex_uniform(), "uniform"))

    reports = [
        run_smaa(pf.project, sampler, config, workers=args.workers,
                 cutoff=pf.risk_cutoff, dm_label=label)
        for sampler, label in jobs
    ]
    report = merge_reports(reports)
    if args.out:
        write_report(report, args.format, args.out)
        print(f"wrote {args.format} report to {args.out}")
    else:
        json.dump(report_to_dict(report), sys.stdout, indent=2)
        print()
    for row in report.rows:
        pis = "  ".join(f"{x:6.1%}" for x in row.pi)
        print(f"{row.dm:>8}  {row.alternative:<12} modal C{row.modal}  [{pis}]",
              file=sys.stderr)
    return EXIT_OK


def _cmd_weights(args: argparse.Namespace) -> int:
    data = json.loads(Path(args.deck).read_text())
    deck = parse_deck(data, str(args.deck))
    if args.z is not None:
        deck = CardDeck(ranks=deck.ranks, white_cards=deck.white_cards, z=args.z)
    result = simos_resolve(deck)
    if args.format == "json":
        json.dump(
            {
                "rank_weights": list(result.rank_weights),
                "rank_totals": list(result.rank_totals()),
                "total": result.total,
                "weights": result.weights,
                "preorder": preorder_check(deck).chain(),
            },
            sys.stdout, indent=2,
        )
        print()
        return EXIT_OK
    # table view truncates at two decimals, the convention of elicitation
    # worksheets; json output carries full precision
    print(f"{'rank':>4}  {'criteria':<44} {'white':>5} {'k(r)':>8} {'total':>8}")
    for r, rank in enumerate(deck.ranks):
        white = deck.white_cards[r] if r < len(deck.white_cards) else ""
        k = display_value(result.rank_weights[r])
        tot = display_value(result.rank_totals()[r])
        print(f"{r + 1:>4}  {', '.join(rank):<44} {white!s:>5} {k:>8.2f} {tot:>8.2f}")
    print(f"{'':>4}  {'sum of non-normalized weights':<44} {'':>5} {'':>8} "
          f"{display_value(result.total):>8.2f}")
    print("\nnormalized weights:")
    for cid in deck.criterion_ids:
        print(f"  {cid:<28} {result.weights[cid]:.6f}")
    return EXIT_OK


def _cmd_npv(args: argparse.Namespace) -> int:
    data = json.loads(Path(args.cashflows).read_text())
    if "series" in data:
        series_map = {k: CashFlowSeries(tuple(v), label=k) for k, v in data["series"].items()}
        default_rate = data.get("rate")
        reported = data.get("reported_npv", {})
    else:
        series_map = {k: CashFlowSeries(tuple(v), label=k) for k, v in data.items()}
        default_rate, reported = None, {}
    rate = args.rate if args.rate is not None else default_rate
    if rate is None:
        raise ConfigurationError("no discount rate: pass --rate or put \"rate\" in the file")
    severities = [float(s) for s in args.scenarios.split(",")] if args.scenarios else [0.2, 0.4]
    rows_out = {}
    for label, series in series_map.items():
        rows = scenario_table(series, rate, severities, reported.get(label))
        rows_out[label] = rows
        if args.format == "table":
            print(f"{label} (rate {rate:.4%})")
            for row in rows:
                ref = f"  reported {row['reported_npv']:>14,.2f}" if "reported_npv" in row else ""
                print(f"  {row['scenario']:>5}: npv {row['npv']:>14,.2f}{ref}")
    if args.format == "json":
        json.dump({"rate": rate, "series": rows_out}, sys.stdout, indent=2)
        print()
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    host, _, port = args.bind.rpartition(":")
    serve(host or "127.0.0.1", int(port), project_dir=args.project_dir)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risksort",
        description="Sort alternatives into ordered risk categories with "
                    "outranking and Monte Carlo acceptability analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the acceptability simulation on a project file")
    run.add_argument("project", help="project JSON file")
    who = run.add_mutually_exclusive_group()
    who.add_argument("--dm", help="run a single decision maker")
    who.add_argument("--group", action="store_true",
                     help="aggregate all decision makers into interval weights")
    who.add_argument("--all-dms", action="store_true",
                     help="one run per decision maker (default)")
    run.add_argument("--draws", type=int, default=None)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--lambda", dest="lam", default=None, metavar="LO:HI")
    run.add_argument("--rule", choices=RULES, default=None,
                     help=f"assignment rule (default from file, typically {DEFAULT_RULE})")
    run.add_argument("--intervals", choices=["on", "off"], default=None,
                     help="sample interval evaluations per draw")
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--out", default=None, help="write the report to this path")
    run.add_argument("--format", choices=["csv", "json"], default="csv")
    run.set_defaults(func=_cmd_run)

    weights = sub.add_parser("weights", help="resolve a card deck into criterion weights")
    weights.add_argument("deck", help="deck JSON file")
    weights.add_argument("--z", type=float, default=None,
                         help="override the most/least importance ratio")
    weights.add_argument("--format", choices=["table", "json"], default="table")
    weights.set_defaults(func=_cmd_weights)

    npv_cmd = sub.add_parser("npv", help="scenario NPV table from a cash-flow file")
    npv_cmd.add_argument("cashflows", help="cash-flow JSON file")
    npv_cmd.add_argument("--rate", type=float, default=None)
    npv_cmd.add_argument("--scenarios", default=None, metavar="S1,S2,...",
                         help="severities, e.g. 0.2,0.4 (the default)")
    npv_cmd.add_argument("--format", choices=["table", "json"], default="table")
    npv_cmd.set_defaults(func=_cmd_npv)

    serve_cmd = sub.add_parser("serve", help="start the HTTP service")
    serve_cmd.add_argument("--bind", default=DEFAULT_BIND, metavar="HOST:PORT",
                           help="bind address (env RISKSORT_BIND)")
    serve_cmd.add_argument("--project-dir", default=None,
                           help="write projects and finished runs through to this directory")
    serve_cmd.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, ProjectValidationError, json.JSONDecodeError) as exc:
        print(f"validation fault:\n{exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ConfigurationError, FileNotFoundError) as exc:
        print(f"configuration fault: {exc}", file=sys.stderr)
        return EXIT_CONFIGURATION
    except ValueError as exc:  # malformed deck or data structures
        print(f"validation fault:\n{exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())

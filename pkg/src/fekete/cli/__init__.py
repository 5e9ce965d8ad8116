"""Command-line front end.

Subcommands ``solve``, ``verify``, ``roundtrip``, ``family`` and ``lift`` take
a scenario JSON file or a directory of them; ``classical`` runs the built-in
classical suite. Every run writes ``<out>/<name>/report.json`` plus CSV, SVG
and timing files.

Exit codes: 0 when every check of every scenario passes, 1 when some check
fails, 2 for invalid input (nothing is computed), 3 when a stage raised.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .output import dumps, write_report
from .pipeline import (RunReport, classical_rows, run_classical_case, run_classical_suite,
                       run_roundtrip, run_scenario, validate)
from .scenario import PIPELINES, SCHEMA, Scenario, ScenarioError, default_digits, load_scenarios

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_STAGE = 0, 1, 2, 3

__all__ = ["EXIT_FAILED", "EXIT_INVALID", "EXIT_OK", "EXIT_STAGE", "PIPELINES", "RunReport",
           "SCHEMA", "Scenario", "ScenarioError", "build_parser", "classical_rows", "main",
           "run_classical_suite", "run_roundtrip", "run_scenario"]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fekete", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in PIPELINES:
        sp = sub.add_parser(name)
        if name == "classical":
            sp.add_argument("--n", type=int, nargs="+", default=[2, 5, 10])
        else:
            sp.add_argument("scenario", help="scenario JSON file or directory of them")
        sp.add_argument("--digits", type=int, default=None,
                        help="decimal digits (default: scenario, then FEKETE_DIGITS, then 50)")
        sp.add_argument("--tol", default=None, help="solver tolerance, e.g. 1e-45")
        sp.add_argument("--seed", type=int, default=None, help="rng seed override")
        sp.add_argument("--out", default=None,
                        help="output directory (default: scenario 'output', then fekete-out)")
        sp.add_argument("--jobs", type=int, default=1, help="scenarios run in parallel")
    return p


def _run_one(sc: Scenario) -> RunReport:
    return run_scenario(sc)


def _classical_one(args) -> RunReport:
    name, n, digits, seed = args
    row = next(r for r in classical_rows() if r.name == name)
    return run_classical_case(row, n, digits, seed)


def _exit_code(reports) -> int:
    if any(r.failed_stage for r in reports):
        return EXIT_STAGE
    if not all(r.passed for r in reports):
        return EXIT_FAILED
    return EXIT_OK


def _map(fn, items, jobs):
    # mp precision is process-global, so parallel runs use processes
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _summary_line(name, report):
    status = "PASS" if report.passed else ("ERROR" if report.failed_stage else "FAIL")
    bad = [k for k, v in sorted(report.checks.items()) if not v]
    extra = f" stage={report.failed_stage}" if report.failed_stage else ""
    extra += f" failed={','.join(bad)}" if bad else ""
    return f"{status} {name}{extra}"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Path(args.out or "fekete-out")
    try:
        if args.command == "classical":
            digits = args.digits or default_digits()
            items = [(row.name, n, digits, args.seed or 0) for row in classical_rows()
                     for n in args.n]
            reports = _map(_classical_one, items, args.jobs)
            names = [f"{name}_n{n}" for name, n, _, _ in items]
        else:
            scenarios = load_scenarios(args.scenario, pipeline=args.command, digits=args.digits,
                                       tol=args.tol, seed=args.seed)
            for sc in scenarios:
                validate(sc)
            reports = _map(_run_one, scenarios, args.jobs)
            names = [sc.name for sc in scenarios]
            if args.out is None and scenarios[0].source.get("output"):
                out = Path(scenarios[0].source["output"])
    except ScenarioError as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return EXIT_INVALID
    summary = {}
    for name, rep in zip(names, reports):
        write_report(rep, out / name, rep.scenario.get("svg", True))
        summary[name] = {"passed": rep.passed, "failed_stage": rep.failed_stage}
        print(_summary_line(name, rep))
    out.mkdir(parents=True, exist_ok=True)
    (out / "summary.json").write_text(dumps(summary))
    return _exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())

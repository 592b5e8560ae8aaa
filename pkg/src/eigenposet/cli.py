"""Command-line interface.

Subcommands: poset, homology, character, verify, battery, e8-formula.
Reports are JSON; battery output also gets a TSV verdict summary and,
on request, rendered figures.  Exit status is nonzero iff a task FAILed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .jobs import (
    JobSpec,
    TASKS,
    battery,
    e8_formula,
    load_suite,
    report_to_json,
    report_tsv_lines,
    run,
)
from .refl import data_dir


def _add_common(parser):
    parser.add_argument("--group", default="sym:3",
                        help="gmpn:m,p,n | sym:n | file:path | st:k")
    parser.add_argument("--gamma", default="identity",
                        help="identity | scalar:m:k | file:path")
    parser.add_argument("--zeta", default="1:0", help="rootspec m:k")
    parser.add_argument("--budget-elements", type=int, default=10**6)
    parser.add_argument("--budget-simplices", type=int, default=10**7)
    parser.add_argument("--out", default=None, help="write the JSON report here")


def _job_from_args(args, tasks) -> JobSpec:
    return JobSpec(
        group=args.group,
        gamma=args.gamma,
        zeta=args.zeta,
        tasks=tuple(tasks),
        budget_elements=args.budget_elements,
        budget_simplices=args.budget_simplices,
        expect_count=getattr(args, "expect_count", None),
        out=args.out,
    )


def _emit(report: dict, out) -> None:
    text = report_to_json(report)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _exit_code(report: dict) -> int:
    tasks = report.get("tasks")
    if tasks is not None:
        return 1 if any(t["verdict"] == "FAIL" for t in tasks) else 0
    return 0 if report.get("ok") else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="eigenposet",
        description="Eigenspace posets of unitary reflection groups: exact "
                    "homology, characters, and verification batteries.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_poset = sub.add_parser("poset", help="build the poset tower and dump it")
    _add_common(p_poset)

    p_hom = sub.add_parser("homology", help="Betti numbers and torsion")
    _add_common(p_hom)
    p_hom.add_argument("--emit-matrices", action="store_true",
                       help="include boundary matrices as sparse triplets")
    p_hom.add_argument("--figures", default=None, metavar="DIR",
                       help="render a Betti bar chart into DIR")

    p_char = sub.add_parser("character", help="Lefschetz and top characters")
    _add_common(p_char)

    p_verify = sub.add_parser("verify", help="run verification tasks")
    p_verify.add_argument("tasks", nargs="+",
                          choices=[t for t in TASKS if t.startswith("verify")],
                          help="verification tasks to run")
    _add_common(p_verify)
    p_verify.add_argument("--expect-count", type=int, default=None)

    p_batt = sub.add_parser("battery", help="run a named or custom suite")
    p_batt.add_argument("suite", help="quick | full | path to a .jobs file")
    p_batt.add_argument("--out", default=None)
    p_batt.add_argument("--figures", default=None, metavar="DIR")
    p_batt.add_argument("--jobs", type=int, default=4,
                        help="concurrent workers")

    p_e8 = sub.add_parser("e8-formula",
                          help="sphere count from the rank-8 table row")
    p_e8.add_argument("--m", type=int, required=True)
    p_e8.add_argument("--expect-count", type=int, default=None)
    p_e8.add_argument("--out", default=None)

    args = parser.parse_args(argv)

    if args.command == "poset":
        report = run(_job_from_args(args, ["poset"]))
        _emit(report, args.out)
        return _exit_code(report)

    if args.command == "homology":
        report = run(_job_from_args(args, ["homology"]),
                     emit_matrices=args.emit_matrices)
        _emit(report, args.out)
        if args.figures:
            from .plots import render_betti_figure

            fig_dir = Path(args.figures)
            fig_dir.mkdir(parents=True, exist_ok=True)
            render_betti_figure(report, fig_dir / "betti.png")
        return _exit_code(report)

    if args.command == "character":
        report = run(_job_from_args(args, ["characters"]))
        _emit(report, args.out)
        return _exit_code(report)

    if args.command == "verify":
        report = run(_job_from_args(args, args.tasks))
        _emit(report, args.out)
        return _exit_code(report)

    if args.command == "battery":
        suite_path = _resolve_suite(args.suite)
        jobs = load_suite(suite_path)
        aggregate = battery(jobs, workers=args.jobs)
        _emit(aggregate, args.out)
        if args.out:
            tsv = Path(args.out).with_suffix(".tsv")
            tsv.write_text("\n".join(report_tsv_lines(aggregate)) + "\n")
        if args.figures:
            from .plots import render_battery_figure

            fig_dir = Path(args.figures)
            fig_dir.mkdir(parents=True, exist_ok=True)
            render_battery_figure(aggregate, fig_dir / "battery.png")
        return 0 if aggregate["ok"] else 1

    if args.command == "e8-formula":
        payload = e8_formula(args.m)
        verdict = "PASS"
        if args.expect_count is not None and payload["count"] != args.expect_count:
            verdict = "FAIL"
        report = {"job": f"e8-formula m={args.m}",
                  "tasks": [{"name": "e8-formula", "verdict": verdict,
                             "payload": payload}]}
        _emit(report, args.out)
        return _exit_code(report)

    return 2


def _resolve_suite(name: str) -> Path:
    if name in ("quick", "full"):
        return data_dir() / f"battery_{name}.jobs"
    return Path(name)


if __name__ == "__main__":
    raise SystemExit(main())

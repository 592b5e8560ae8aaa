"""Job specifications, task execution, and report assembly.

A job names a group, a coset twist, an eigenvalue, and a set of tasks.
Reports are JSON-ready dicts; identical jobs produce identical reports
apart from the timestamp and timing fields, so they diff cleanly as
golden files.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .cyclo import parse_rootspec
from .equivariant import (
    build_posets,
    lefschetz_character,
    top_homology_character,
    verify_decomposition,
    verify_identity_suspension,
    verify_sphere_count,
    NotConcentratedError,
)
from .gposet import dump_poset, proper_part, suspension, poset_length
from .homology import (
    BudgetExceededError,
    homology,
    order_complex,
    chain_euler,
)
from .refl import (
    BudgetError,
    GroupError,
    ReflCoset,
    parse_gamma_spec,
    parse_group_spec,
    shephard_todd_table,
)

__all__ = ["JobSpec", "run", "battery", "load_suite", "report_to_json",
           "report_tsv_lines", "TASKS"]

TASKS = (
    "poset",
    "homology",
    "characters",
    "verify-us",
    "verify-webb",
    "verify-corollary",
    "verify-mv",
    "verify-suspension",
    "verify-wedge",
    "e8-formula",
)


@dataclass(frozen=True)
class JobSpec:
    group: str = "sym:3"
    gamma: str = "identity"
    zeta: str = "1:0"
    tasks: tuple[str, ...] = ("poset",)
    budget_elements: int = 10**6
    budget_simplices: int = 10**7
    expect_count: int | None = None
    out: str | None = None

    def __post_init__(self):
        for t in self.tasks:
            if t not in TASKS:
                raise ValueError(f"unknown task {t!r}")
        parse_rootspec(self.zeta)  # reject bad rootspecs at parse time

    def format(self) -> str:
        parts = [
            f"group={self.group}",
            f"gamma={self.gamma}",
            f"zeta={self.zeta}",
            "tasks=" + ",".join(self.tasks),
            f"budget-elements={self.budget_elements}",
            f"budget-simplices={self.budget_simplices}",
        ]
        if self.expect_count is not None:
            parts.append(f"expect-count={self.expect_count}")
        if self.out is not None:
            parts.append(f"out={self.out}")
        return " ".join(parts)

    @classmethod
    def parse(cls, line: str) -> "JobSpec":
        kwargs = {}
        for tok in line.split():
            key, _, value = tok.partition("=")
            if key == "group":
                kwargs["group"] = value
            elif key == "gamma":
                kwargs["gamma"] = value
            elif key == "zeta":
                kwargs["zeta"] = value
            elif key == "tasks":
                kwargs["tasks"] = tuple(value.split(","))
            elif key == "budget-elements":
                kwargs["budget_elements"] = int(value)
            elif key == "budget-simplices":
                kwargs["budget_simplices"] = int(value)
            elif key == "expect-count":
                kwargs["expect_count"] = int(value)
            elif key == "out":
                kwargs["out"] = value
            else:
                raise ValueError(f"unknown job key {key!r}")
        return cls(**kwargs)


def _task_poset(tower, **_) -> dict:
    return {
        "verdict": "PASS",
        "payload": {
            "sizes": {
                "full": tower.full.n,
                "truncated": tower.truncated.n,
                "nonminimal": tower.nonminimal.n,
                "pointed": tower.pointed.n,
            },
            "length_pointed": poset_length(tower.pointed),
            "unique_maximal": tower.full.unique_maximal_index() is not None,
            "dump_pointed": dump_poset(tower.pointed),
        },
    }


def _task_homology(tower, emit_matrices=False, budget=10**7, **_) -> dict:
    cx = order_complex(tower.pointed, budget)
    h = homology(cx)
    tilde = proper_part(tower.full)
    h_tilde = homology(order_complex(tilde, budget))
    payload = {
        "pointed": _homology_payload(h),
        "proper": _homology_payload(h_tilde),
    }
    if emit_matrices:
        payload["matrices"] = _sparse_triplets(cx)
    return {"verdict": "PASS", "payload": payload}


def _homology_payload(h) -> dict:
    return {
        "betti": {str(d): b for d, b in sorted(h.betti.items()) if b},
        "torsion": {str(d): list(t) for d, t in sorted(h.torsion.items())},
        "reduced_euler": h.reduced_euler,
    }


def _sparse_triplets(cx) -> list[str]:
    lines = []
    for d in range(0, cx.top_dim + 1):
        bnd = cx.boundary(d)
        for i, row in enumerate(bnd):
            for j, v in enumerate(row):
                if v:
                    lines.append(f"{d} {i} {j} {v}")
    return lines


def _task_characters(tower, **_) -> dict:
    lef = lefschetz_character(tower.pointed)
    payload = {"lefschetz": lef.table()}
    try:
        top = top_homology_character(tower.pointed)
        payload["top"] = top.table()
        payload["top_dimension"] = str(top.dimension())
    except NotConcentratedError as exc:
        payload["top"] = None
        payload["note"] = str(exc)
    return {"verdict": "PASS", "payload": payload}


def _task_verify_us(group, **_) -> dict:
    rep = verify_identity_suspension(group)
    return {"verdict": rep.pop("verdict"), "payload": rep}


def _task_verify_webb(coset, root, **_) -> dict:
    rep = verify_decomposition(coset, root)
    return {"verdict": rep.pop("verdict"), "payload": rep}


def _task_verify_corollary(coset, root, expect=None, **_) -> dict:
    rep = verify_sphere_count(coset, root)
    verdict = rep.pop("verdict")
    if verdict == "PASS" and expect is not None:
        got = rep["counts"]["homology"]
        if got != expect:
            verdict = "FAIL"
            rep["witness"] = {"expected_count": expect, "computed": got}
    return {"verdict": verdict, "payload": rep}


def _task_verify_mv(tower, **_) -> dict:
    from .homology import verify_mayer_vietoris

    rep = verify_mayer_vietoris(tower.truncated, tower.ideal_indices)
    verdict = "PASS" if rep["exact"] else "FAIL"
    payload = {"nodes_checked": len(rep["nodes"]),
               "decomposition": rep["decomposition"]}
    if "witness" in rep:
        payload["witness"] = rep["witness"]
    return {"verdict": verdict, "payload": payload}


def _task_verify_suspension(tower, group, **_) -> dict:
    tilde = proper_part(tower.full)
    sus = suspension(tilde)
    h_r = homology(order_complex(tilde))
    h_s = homology(order_complex(sus))
    top = max(poset_length(sus), 0)
    shift_ok = all(
        h_s.rank(n) == h_r.rank(n - 1)
        and h_s.elementary_divisors(n) == h_r.elementary_divisors(n - 1)
        for n in range(0, top + 1)
    )
    lef_ok = all(
        chain_euler(sus, k) == -chain_euler(tilde, k)
        for k in range(group.order)
    )
    verdict = "PASS" if (shift_ok and lef_ok) else "FAIL"
    return {"verdict": verdict,
            "payload": {"homology_shift": shift_ok, "lefschetz_negated": lef_ok}}


def _task_verify_wedge(coset, root, **_) -> dict:
    rep = verify_decomposition(coset, root)
    if rep.get("verdict") == "SKIPPED" or "checks" not in rep:
        return {"verdict": "SKIPPED", "payload": rep}
    checks = {k: rep["checks"][k] for k in ("wedge_homology", "wedge_lefschetz")}
    verdict = "PASS" if all(checks.values()) else "FAIL"
    return {"verdict": verdict, "payload": {"checks": checks}}


def e8_formula(m: int) -> dict:
    """The regular-eigenvalue sphere count for the rank-8 exceptional row,
    straight from the shipped tables, with the factor lists echoed."""
    table = shephard_todd_table()
    row = table["ST37"]
    degrees, codegrees = row["degrees"], row["codegrees"]
    deg_f = [d for d in degrees if d % m != 0]
    codeg_f = [c + 1 for c in codegrees if c % m == 0]
    count = 1
    for d in deg_f:
        count *= d
    for c in codeg_f:
        count *= c
    stab_degrees = tuple(d for d in degrees if d % m == 0)
    stab = None
    for name, r in table.items():
        if name != "ST37" and tuple(r["degrees"]) == stab_degrees:
            order = 1
            for d in r["degrees"]:
                order *= d
            if order == r["order"]:
                stab = name
    a_m = len(stab_degrees)
    b_m = sum(1 for c in codegrees if c % m == 0)
    return {
        "m": m,
        "count": count,
        "degree_factors": deg_f,
        "codegree_factors": codeg_f,
        "stabilizer_quotient": stab,
        "regular": a_m == b_m,
        "eigenspace_dim": a_m,
        "sphere_dim": a_m - 1,
    }


def _task_e8_formula(root, expect=None, **_) -> dict:
    m = root.effective_order()
    payload = e8_formula(m)
    verdict = "PASS"
    if expect is not None and payload["count"] != expect:
        verdict = "FAIL"
        payload["witness"] = {"expected_count": expect,
                              "computed": payload["count"]}
    return {"verdict": verdict, "payload": payload}


def run(job: JobSpec, emit_matrices: bool = False) -> dict:
    """Execute the job's tasks in dependency order and assemble a report."""
    t_start = time.time()
    report = {"job": job.format(), "tasks": [], "timings": {}}
    root = parse_rootspec(job.zeta)
    needs_group = any(t != "e8-formula" for t in job.tasks)
    group = coset = tower = None
    group_error = None
    if needs_group:
        try:
            group = parse_group_spec(job.group, budget=job.budget_elements)
            gamma = parse_gamma_spec(job.gamma, group)
            coset = ReflCoset(group, gamma)
        except (BudgetError, GroupError) as exc:
            group_error = str(exc)
    for task in job.tasks:
        t0 = time.time()
        try:
            if task == "e8-formula":
                entry = _task_e8_formula(root, expect=job.expect_count)
            elif group_error is not None:
                entry = {"verdict": "SKIPPED", "payload": {"reason": group_error}}
            else:
                if tower is None and task != "verify-us":
                    tower = build_posets(coset, root)
                if task != "verify-us" and tower is None:
                    entry = {"verdict": "SKIPPED",
                             "payload": {"reason": "degenerate: single eigenspace"}}
                elif task == "poset":
                    entry = _task_poset(tower)
                elif task == "homology":
                    entry = _task_homology(tower, emit_matrices=emit_matrices,
                                           budget=job.budget_simplices)
                elif task == "characters":
                    entry = _task_characters(tower)
                elif task == "verify-us":
                    entry = _task_verify_us(group)
                elif task == "verify-webb":
                    entry = _task_verify_webb(coset, root)
                elif task == "verify-corollary":
                    entry = _task_verify_corollary(coset, root,
                                                   expect=job.expect_count)
                elif task == "verify-mv":
                    entry = _task_verify_mv(tower)
                elif task == "verify-suspension":
                    entry = _task_verify_suspension(tower, group)
                elif task == "verify-wedge":
                    entry = _task_verify_wedge(coset, root)
                else:
                    raise AssertionError(task)
        except (BudgetError, BudgetExceededError) as exc:
            entry = {"verdict": "SKIPPED", "payload": {"reason": str(exc)}}
        entry["name"] = task
        report["tasks"].append(entry)
        report["timings"][task] = round((time.time() - t0) * 1000, 3)
    report["timings"]["total"] = round((time.time() - t_start) * 1000, 3)
    report["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    return report


def battery(jobs, workers: int = 4) -> dict:
    """Run a suite of jobs concurrently; aggregation follows suite order.
    The aggregate passes iff every task verdict is PASS or SKIPPED."""
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        reports = list(pool.map(run, jobs))
    summary = {"PASS": 0, "FAIL": 0, "SKIPPED": 0, "INDETERMINATE": 0}
    for rep in reports:
        for task in rep["tasks"]:
            summary[task["verdict"]] += 1
    return {
        "suite_size": len(jobs),
        "reports": reports,
        "summary": summary,
        "ok": summary["FAIL"] == 0 and summary["INDETERMINATE"] == 0,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }


def load_suite(path) -> list[JobSpec]:
    jobs = []
    from pathlib import Path

    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        jobs.append(JobSpec.parse(line))
    return jobs


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def strip_volatile(report: dict) -> dict:
    """Drop the timestamp/timing fields; what remains is deterministic."""
    out = dict(report)
    out.pop("timestamp", None)
    out.pop("timings", None)
    if "reports" in out:
        out["reports"] = [strip_volatile(r) for r in out["reports"]]
    return out


def report_tsv_lines(aggregate: dict) -> list[str]:
    """One delimited line per executed task, for quick scanning and diffing."""
    lines = ["index\tgroup\tzeta\ttask\tverdict"]
    for idx, rep in enumerate(aggregate.get("reports", [aggregate])):
        fields = dict(tok.split("=", 1) for tok in rep["job"].split())
        for task in rep["tasks"]:
            lines.append("\t".join([
                str(idx), fields.get("group", "?"), fields.get("zeta", "?"),
                task["name"], task["verdict"],
            ]))
    return lines

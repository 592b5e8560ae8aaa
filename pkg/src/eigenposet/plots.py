"""Figure rendering for reports: Betti bar charts and battery verdict grids.

Figures are written next to the delimited/JSON outputs; matplotlib is
imported lazily so the computational paths never pay for it.
"""

from __future__ import annotations

from pathlib import Path

VERDICT_COLORS = {
    "PASS": "#2e7d32",
    "FAIL": "#c62828",
    "SKIPPED": "#9e9e9e",
    "INDETERMINATE": "#f9a825",
}


def _matplotlib():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_betti_figure(report: dict, path) -> Path | None:
    """Bar chart of the pointed poset's Betti numbers, if the report has a
    homology task."""
    task = next((t for t in report["tasks"] if t["name"] == "homology"
                 and t["verdict"] == "PASS"), None)
    if task is None:
        return None
    betti = task["payload"]["pointed"]["betti"]
    plt = _matplotlib()
    fig, ax = plt.subplots(figsize=(4.2, 3.0))
    degrees = sorted(int(d) for d in betti)
    ranks = [betti[str(d)] for d in degrees]
    ax.bar([str(d) for d in degrees], ranks, color="#1565c0")
    ax.set_xlabel("degree")
    ax.set_ylabel("rank")
    fields = dict(tok.split("=", 1) for tok in report["job"].split())
    ax.set_title(f"{fields.get('group')}  zeta={fields.get('zeta')}")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_battery_figure(aggregate: dict, path) -> Path:
    """Verdict grid: one row per job, one column per task name."""
    plt = _matplotlib()
    reports = aggregate["reports"]
    task_names = []
    for rep in reports:
        for task in rep["tasks"]:
            if task["name"] not in task_names:
                task_names.append(task["name"])
    fig, ax = plt.subplots(
        figsize=(1.0 + 0.75 * len(task_names), 0.8 + 0.32 * len(reports)))
    labels = []
    for r, rep in enumerate(reports):
        fields = dict(tok.split("=", 1) for tok in rep["job"].split())
        labels.append(f"{fields.get('group')} z={fields.get('zeta')}")
        verdicts = {t["name"]: t["verdict"] for t in rep["tasks"]}
        for c, name in enumerate(task_names):
            v = verdicts.get(name)
            if v is None:
                continue
            ax.add_patch(plt.Rectangle(
                (c, len(reports) - 1 - r), 0.92, 0.92,
                color=VERDICT_COLORS[v]))
    ax.set_xlim(0, len(task_names))
    ax.set_ylim(0, len(reports))
    ax.set_xticks([c + 0.46 for c in range(len(task_names))])
    ax.set_xticklabels(task_names, rotation=45, ha="right", fontsize=7)
    ax.set_yticks([len(reports) - 1 - r + 0.46 for r in range(len(reports))])
    ax.set_yticklabels(labels, fontsize=7)
    ax.set_aspect("equal")
    ax.set_title("battery verdicts", fontsize=9)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path

"""Render a pipeline report to files: delimited tables plus figures.

Writes into an output directory:

    report.json        full pipeline report
    ranking.csv        alternative, score, position
    consensus.csv      maker, distance (when the conflict stage ran)
    ranking.png        final scores bar chart
    consensus.png      per-maker distance bars with the conflict threshold
    flows.png          positive/negative outranking flows (flow methods)
    rank_frequencies.png   alternative x position heatmap (simulation runs)
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

FIG_SIZE = (6.4, 3.6)
BAR_COLOR = "#3c6fb4"
NEG_COLOR = "#b4533c"


def _stage(report_doc: dict, name: str) -> dict | None:
    for stage in report_doc.get("stages", []):
        if stage["stage"] == name:
            return stage
    return None


def _save(fig, path: Path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_ranking_csv(report_doc: dict, path: Path) -> None:
    result = report_doc["result"]
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["alternative", "score", "position"])
        for pos, alt in enumerate(result["order"], start=1):
            writer.writerow([alt, f"{result['scores'][alt]:.6f}", pos])


def write_consensus_csv(report_doc: dict, path: Path) -> bool:
    conflict = _stage(report_doc, "conflict")
    if conflict is None or "perMaker" not in conflict["payload"]:
        return False
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["maker", "distance"])
        for maker, distance in sorted(conflict["payload"]["perMaker"].items()):
            writer.writerow([maker, f"{distance:.6f}"])
    return True


def plot_ranking(report_doc: dict, path: Path) -> None:
    result = report_doc["result"]
    order = result["order"]
    scores = [result["scores"][a] for a in order]
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    colors = [BAR_COLOR if s >= 0 else NEG_COLOR for s in scores]
    ax.bar(order, scores, color=colors)
    ax.set_ylabel("score")
    ax.set_title(f"Final ranking ({result['method']})")
    ax.axhline(0, color="black", linewidth=0.8)
    _save(fig, path)


def plot_consensus(report_doc: dict, path: Path, threshold: float = 0.5) -> bool:
    conflict = _stage(report_doc, "conflict")
    if conflict is None or "perMaker" not in conflict["payload"]:
        return False
    payload = conflict["payload"]
    makers = sorted(payload["perMaker"])
    distances = [payload["perMaker"][m] for m in makers]
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    ax.bar(makers, distances, color=BAR_COLOR)
    ax.axhline(threshold, color=NEG_COLOR, linestyle="--", linewidth=1.0, label="conflict threshold")
    ax.set_ylim(0, 1)
    ax.set_ylabel("distance to group ranking")
    ax.set_title(f"Consensus index {payload['consensusIndex']:.3f}")
    ax.legend(loc="upper right")
    _save(fig, path)
    return True


def plot_flows(report_doc: dict, path: Path) -> bool:
    coordination = _stage(report_doc, "coordination")
    if coordination is None:
        return False
    diagnostics = coordination["payload"].get("diagnostics", {})
    flows = diagnostics.get("flows")
    if flows is None and "superiority" in diagnostics:
        flows = {"positive": diagnostics["superiority"], "negative": diagnostics["inferiority"]}
    if flows is None:
        return False
    alts = sorted(flows["positive"])
    xs = range(len(alts))
    width = 0.4
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    ax.bar([x - width / 2 for x in xs], [flows["positive"][a] for a in alts], width, label="leaving", color=BAR_COLOR)
    ax.bar([x + width / 2 for x in xs], [flows["negative"][a] for a in alts], width, label="entering", color=NEG_COLOR)
    ax.set_xticks(list(xs), alts)
    ax.set_ylabel("flow")
    ax.set_title("Outranking flows")
    ax.legend()
    _save(fig, path)
    return True


def plot_rank_frequencies(report_doc: dict, path: Path) -> bool:
    coordination = _stage(report_doc, "coordination")
    if coordination is None:
        return False
    freq = coordination["payload"].get("diagnostics", {}).get("frequencies")
    if freq is None:
        return False
    alts = sorted(freq)
    grid = [freq[a] for a in alts]
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    im = ax.imshow(grid, cmap="Blues", vmin=0, vmax=1, aspect="auto")
    ax.set_yticks(range(len(alts)), alts)
    ax.set_xticks(range(len(grid[0])), [str(i + 1) for i in range(len(grid[0]))])
    ax.set_xlabel("position")
    ax.set_title("Rank-position frequencies")
    fig.colorbar(im, ax=ax, label="frequency")
    _save(fig, path)
    return True


def render_report(report_doc: dict, out_dir: str | Path) -> list[str]:
    """Write the report document, delimited tables and figures; returns filenames."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[str] = []

    (out / "report.json").write_text(
        json.dumps(report_doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    written.append("report.json")

    if "result" in report_doc:
        write_ranking_csv(report_doc, out / "ranking.csv")
        written.append("ranking.csv")
        plot_ranking(report_doc, out / "ranking.png")
        written.append("ranking.png")
        if write_consensus_csv(report_doc, out / "consensus.csv"):
            written.append("consensus.csv")
        if plot_consensus(report_doc, out / "consensus.png"):
            written.append("consensus.png")
        if plot_flows(report_doc, out / "flows.png"):
            written.append("flows.png")
        if plot_rank_frequencies(report_doc, out / "rank_frequencies.png"):
            written.append("rank_frequencies.png")
    return written

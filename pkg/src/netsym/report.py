"""Report rendering: JSON to stdout, CSV and matplotlib figures to files.

Every CLI run produces one report dict.  When a report directory is given
the same payload is written as ``report.json``, flattened into
``report.csv``, and rendered into one or more PNG figures chosen by the
subcommand.
"""

from __future__ import annotations

import csv
import json
import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .graphs import Graph


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def _flatten(prefix: str, value, rows: list):
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], rows)
    elif isinstance(value, (list, tuple)):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, value))


def write_csv(report: dict, path: str) -> None:
    rows: list = []
    _flatten("", report, rows)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["key", "value"])
        writer.writerows(rows)


def save_report(report: dict, directory: str, figures: dict[str, "plt.Figure"]) -> list[str]:
    os.makedirs(directory, exist_ok=True)
    written = []
    jpath = os.path.join(directory, "report.json")
    with open(jpath, "w") as fh:
        fh.write(report_json(report) + "\n")
    written.append(jpath)
    cpath = os.path.join(directory, "report.csv")
    write_csv(report, cpath)
    written.append(cpath)
    for name, fig in figures.items():
        fpath = os.path.join(directory, f"{name}.png")
        fig.savefig(fpath, dpi=150, bbox_inches="tight")
        plt.close(fig)
        written.append(fpath)
    return written


# -- figures -----------------------------------------------------------------

def witness_figure(report_results: dict) -> "plt.Figure":
    """Bar chart of squared term values against the bound."""
    terms = report_results["terms"]
    vals = [
        (t["value"] if t["kind"] == "direct" else t["clamped"]) ** 2 for t in terms
    ]
    labels = [
        t["observable"] if t["kind"] == "direct" else " + ".join(t["observables"])
        for t in terms
    ]
    fig, ax = plt.subplots(figsize=(1.8 + 1.4 * len(vals), 3.4))
    ax.bar(range(len(vals)), vals, color="#4878cf", width=0.6)
    ax.axhline(1.0, color="#d65f5f", linestyle="--", label="bound on the sum")
    ax.set_xticks(range(len(vals)))
    ax.set_xticklabels(labels, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("squared term value")
    lhs = report_results["lhs"]
    ax.set_title(f"lhs = {lhs:.6f} ({'violated' if report_results['violated'] else 'satisfied'})")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def threshold_figure(ps: np.ndarray, lhs: np.ndarray, threshold: float | None) -> "plt.Figure":
    fig, ax = plt.subplots(figsize=(4.4, 3.2))
    ax.plot(ps, lhs, color="#4878cf")
    ax.axhline(1.0, color="#d65f5f", linestyle="--")
    if threshold is not None and threshold < 1.0:
        ax.axvline(threshold, color="#6acc65", linestyle=":", label=f"threshold {threshold:.6f}")
        ax.legend(fontsize=8)
    ax.set_xlabel("visibility p")
    ax.set_ylabel("witness lhs")
    fig.tight_layout()
    return fig


def graph_figure(g: Graph, highlight=(), title: str = "") -> "plt.Figure":
    """Circular-layout drawing with an optional highlighted vertex set."""
    fig, ax = plt.subplots(figsize=(3.6, 3.6))
    angles = [2 * math.pi * k / g.n for k in range(g.n)]
    xs = [math.cos(t) for t in angles]
    ys = [math.sin(t) for t in angles]
    for i, j in g.edges():
        ax.plot([xs[i], xs[j]], [ys[i], ys[j]], color="#888888", zorder=1)
    hi = set(highlight)
    for v in range(g.n):
        color = "#d65f5f" if v in hi else "#4878cf"
        ax.scatter([xs[v]], [ys[v]], s=260, color=color, zorder=2)
        ax.text(xs[v], ys[v], str(v), ha="center", va="center", color="white", zorder=3)
    ax.set_title(title, fontsize=9)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.tight_layout()
    return fig


def bound_curve_figure(fs: np.ndarray, margins: np.ndarray, bound: float, label: str) -> "plt.Figure":
    fig, ax = plt.subplots(figsize=(4.4, 3.2))
    ax.plot(fs, margins, color="#4878cf")
    ax.axhline(0.0, color="#d65f5f", linestyle="--")
    ax.axvline(bound, color="#6acc65", linestyle=":", label=f"bound {bound:.6f}")
    ax.set_xlabel("fidelity F")
    ax.set_ylabel("feasibility margin")
    ax.set_title(label, fontsize=9)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def spectrum_figure(cut_labels: list[str], min_eigs: list[float]) -> "plt.Figure":
    fig, ax = plt.subplots(figsize=(1.6 + 1.0 * len(min_eigs), 3.2))
    colors = ["#d65f5f" if v < -1e-9 else "#4878cf" for v in min_eigs]
    ax.bar(range(len(min_eigs)), min_eigs, color=colors, width=0.6)
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xticks(range(len(min_eigs)))
    ax.set_xticklabels(cut_labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("min partial-transpose eigenvalue")
    fig.tight_layout()
    return fig


def inflation_figure(registers, sources, title: str = "") -> "plt.Figure":
    """Node copies on concentric rings; one polyline per source instance."""
    fig, ax = plt.subplots(figsize=(4.6, 4.6))
    copies = 1 + max(c for _, c in registers)
    base_nodes = []
    for node, _ in registers:
        if node not in base_nodes:
            base_nodes.append(node)
    pos = {}
    for node, c in registers:
        k = base_nodes.index(node)
        angle = 2 * math.pi * k / len(base_nodes)
        radius = 1.0 + 0.55 * c
        pos[(node, c)] = (radius * math.cos(angle), radius * math.sin(angle))
    cmap = plt.get_cmap("tab10")
    for idx, ((sid, inst), endpoints) in enumerate(sorted(sources.items())):
        col = cmap(idx % 10)
        pts = [pos[nc] for nc in endpoints]
        if len(pts) == 2:
            ax.plot([pts[0][0], pts[1][0]], [pts[0][1], pts[1][1]], color=col, alpha=0.8)
        else:
            cx = sum(p[0] for p in pts) / len(pts)
            cy = sum(p[1] for p in pts) / len(pts)
            for p in pts:
                ax.plot([cx, p[0]], [cy, p[1]], color=col, alpha=0.8)
    for (node, c), (x, y) in pos.items():
        ax.scatter([x], [y], s=240, color="#4878cf", zorder=2)
        suffix = "'" * c
        ax.text(x, y, f"{node}{suffix}", ha="center", va="center", color="white", fontsize=7, zorder=3)
    ax.set_title(title, fontsize=9)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.tight_layout()
    return fig

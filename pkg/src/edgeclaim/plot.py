"""Static SVG figures: labeled scatter plots, graph drawings colored by
community and edge class, and critical-difference rank lines."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import networkx as nx
import numpy as np
from matplotlib.collections import LineCollection

from .graph import WeightedGraph

_CMAP = plt.get_cmap("tab20")


def _color(i: int):
    return _CMAP(i % 20)


def scatter_svg(points: np.ndarray, labels, path: str | Path, title: str | None = None) -> None:
    labels = np.asarray(labels)
    fig, ax = plt.subplots(figsize=(6, 6))
    for lab in np.unique(labels):
        mask = labels == lab
        ax.scatter(
            points[mask, 0], points[mask, 1], s=12, color=_color(int(lab)),
            label=f"cluster {int(lab)}",
        )
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(loc="best", fontsize=8)
    if title:
        ax.set_title(title)
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)


def graph_svg(
    g: WeightedGraph,
    path: str | Path,
    vertex_labels=None,
    edge_classes=None,
    layout_seed: int = 0,
    title: str | None = None,
) -> None:
    """Spring-layout drawing; vertices colored by community, edges by the
    class that claimed them."""
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.vertex_count))
    nxg.add_weighted_edges_from(
        zip(g.edges_u.tolist(), g.edges_v.tolist(), g.weights.tolist())
    )
    pos = nx.spring_layout(nxg, seed=layout_seed)
    xy = np.array([pos[i] for i in range(g.vertex_count)])

    fig, ax = plt.subplots(figsize=(6, 6))
    segments = [
        (pos[int(u)], pos[int(v)]) for u, v in zip(g.edges_u, g.edges_v)
    ]
    if edge_classes is not None:
        edge_colors = [_color(int(c)) for c in edge_classes]
    else:
        edge_colors = ["0.6"] * g.edge_count
    ax.add_collection(LineCollection(segments, colors=edge_colors, linewidths=1.0))

    if vertex_labels is not None:
        node_colors = [_color(int(c)) for c in vertex_labels]
    else:
        node_colors = ["0.3"] * g.vertex_count
    ax.scatter(xy[:, 0], xy[:, 1], s=60, c=node_colors, zorder=2, edgecolors="black",
               linewidths=0.5)
    for i in range(g.vertex_count):
        ax.annotate(str(i), xy[i], fontsize=6, ha="center", va="center", zorder=3)
    ax.set_axis_off()
    if title:
        ax.set_title(title)
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)


def rank_line_svg(
    avg_ranks,
    names,
    cd: float,
    path: str | Path,
    title: str | None = None,
) -> None:
    """Mean ranks on a horizontal axis with the critical-difference interval
    drawn around the best-ranked technique."""
    ranks = np.asarray(avg_ranks, dtype=np.float64)
    k = ranks.size
    order = np.argsort(ranks)
    fig, ax = plt.subplots(figsize=(7, 2 + 0.3 * k))
    lo = np.floor(ranks.min()) - 0.5
    hi = np.ceil(ranks.max()) + 0.5
    ax.hlines(0, lo, hi, color="black", linewidth=1)
    for tick in np.arange(np.ceil(lo), np.floor(hi) + 1):
        ax.vlines(tick, -0.05, 0.05, color="black", linewidth=1)
        ax.annotate(f"{tick:g}", (tick, 0.1), ha="center", fontsize=8)

    control = order[0]
    ax.hlines(
        -0.2, ranks[control], ranks[control] + cd, color="firebrick", linewidth=3,
        label=f"critical difference = {cd:.2f}",
    )
    for row, idx in enumerate(order):
        y = -0.45 - 0.25 * row
        ax.plot([ranks[idx], ranks[idx]], [0, y], color="0.5", linewidth=0.7)
        ax.annotate(
            f"{names[idx]} ({ranks[idx]:.2f})", (ranks[idx], y), fontsize=8,
            ha="left", va="center",
        )
    ax.legend(loc="upper right", fontsize=8)
    ax.set_ylim(-0.45 - 0.25 * k, 0.6)
    ax.set_xlim(lo - 0.2, hi + 2.0)
    ax.set_axis_off()
    if title:
        ax.set_title(title)
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)

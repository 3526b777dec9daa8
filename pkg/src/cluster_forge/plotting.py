"""Figure rendering for the report path.

Quivers are drawn with mutable vertices as circles and frozen vertices as
squares; arrow labels show the valuation when it differs from (1,1),
matching the usual drawing convention.  Exchange graphs use a spring
layout.  Everything renders to files through the Agg backend; nothing here
is needed by the computational core.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import networkx as nx

from .quiver import IceMatrix, matrix_to_quiver


def _quiver_layout(mtx: IceMatrix) -> dict:
    g = nx.DiGraph()
    g.add_nodes_from(range(1, mtx.m + 1))
    for a in matrix_to_quiver(mtx).arrows:
        g.add_edge(a.source, a.target)
    if mtx.m <= 3:
        return nx.circular_layout(g)
    return nx.spring_layout(g, seed=11, iterations=200)


def draw_quiver(mtx: IceMatrix, path: str, title: str = "") -> None:
    pres = matrix_to_quiver(mtx)
    pos = _quiver_layout(mtx)
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    for a in pres.arrows:
        x1, y1 = pos[a.source]
        x2, y2 = pos[a.target]
        dx, dy = x2 - x1, y2 - y1
        dist = math.hypot(dx, dy) or 1.0
        pad = 0.09
        ax.annotate(
            "", xy=(x2 - pad * dx / dist, y2 - pad * dy / dist),
            xytext=(x1 + pad * dx / dist, y1 + pad * dy / dist),
            arrowprops=dict(arrowstyle="-|>", lw=1.2, color="0.2"),
        )
        if a.valuation != (1, 1):
            ax.text((x1 + x2) / 2, (y1 + y2) / 2, f"({a.valuation[0]},{a.valuation[1]})",
                    fontsize=8, ha="center", va="bottom", color="0.25")
    for v in range(1, mtx.m + 1):
        x, y = pos[v]
        frozen = v > mtx.n
        marker = "s" if frozen else "o"
        color = "#cfe3f7" if frozen else "#f7e3cf"
        ax.scatter([x], [y], s=560, marker=marker, c=color, edgecolors="0.2", zorder=3)
        ax.text(x, y, str(v), ha="center", va="center", zorder=4)
    ax.set_axis_off()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def draw_exchange_graph(graph, path: str, title: str = "") -> None:
    g = nx.MultiGraph()
    g.add_nodes_from(range(graph.num_vertices))
    for i, j, mult in graph.edges:
        for _ in range(mult):
            g.add_edge(i, j)
    pos = nx.spring_layout(g, seed=7, iterations=300)
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    for i, j, _ in g.edges(keys=True):
        x1, y1 = pos[i]
        x2, y2 = pos[j]
        ax.plot([x1, x2], [y1, y2], color="0.6", lw=1.0, zorder=1)
    xs = [pos[i][0] for i in range(graph.num_vertices)]
    ys = [pos[i][1] for i in range(graph.num_vertices)]
    colors = ["#d95f02" if i == graph.root else "#7570b3" for i in range(graph.num_vertices)]
    ax.scatter(xs, ys, s=120, c=colors, zorder=2)
    ax.set_axis_off()
    label = title or f"{graph.num_vertices} seeds, {graph.num_edges} edges"
    ax.set_title(label)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

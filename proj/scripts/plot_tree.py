#!/usr/bin/env python3
"""Render an exploration table (explore output) as a radial tree, nodes
colored by logical error rate."""
import math
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main() -> None:
    if len(sys.argv) != 3:
        sys.exit("usage: plot_tree.py explore.csv out.png")
    df = pd.read_csv(sys.argv[1], comment="#")
    kids = {}
    for _, row in df.iterrows():
        if row.parent_id >= 0:
            kids.setdefault(int(row.parent_id), []).append(int(row.node_id))

    pos = {}

    def layout(node: int, lo: float, hi: float, depth: int) -> None:
        mid = (lo + hi) / 2
        pos[node] = (depth * math.cos(mid), depth * math.sin(mid))
        children = kids.get(node, [])
        for i, kid in enumerate(children):
            layout(kid, lo + (hi - lo) * i / len(children),
                   lo + (hi - lo) * (i + 1) / len(children), depth + 1)

    layout(0, 0.0, 2 * math.pi, 0)
    fig, ax = plt.subplots(figsize=(7, 7))
    for _, row in df.iterrows():
        if row.parent_id >= 0:
            x0, y0 = pos[int(row.parent_id)]
            x1, y1 = pos[int(row.node_id)]
            ax.plot([x0, x1], [y0, y1], color="0.8", lw=0.4, zorder=1)
    xs = [pos[int(n)][0] for n in df.node_id]
    ys = [pos[int(n)][1] for n in df.node_id]
    sc = ax.scatter(xs, ys, c=df.p_hat, cmap="viridis", s=14, zorder=2)
    fig.colorbar(sc, label="estimated logical error rate")
    ax.set_aspect("equal")
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(sys.argv[2], dpi=150)


if __name__ == "__main__":
    main()

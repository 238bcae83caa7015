"""Static figure rendering for layout documents.

Takes the node/link export form (the same document the HTTP layout
endpoint returns) and draws it with matplotlib, next to wherever the
delimited output went. Direct edges are solid, conceptual ones dashed;
methods used across subject areas are drawn red.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")  # file output only, no display server

import matplotlib.pyplot as plt
from matplotlib.collections import LineCollection

__all__ = ["render_layout"]

_FLAGGED = "#d62728"
_PLAIN = "#1f77b4"
_EDGE = "#555555"
_LABEL_LIMIT = 60  # past this, labels are unreadable smears


def render_layout(document: dict, out_path: str | Path, title: str | None = None) -> Path:
    """Draw a layout document to an image file. Format follows the
    suffix (.png, .svg, .pdf, anything the backend knows)."""
    nodes = document.get("nodes", [])
    links = document.get("links", [])
    if not nodes:
        raise ValueError("layout document has no nodes")
    three_d = "z" in nodes[0]
    out_path = Path(out_path)

    index = {node["id"]: node for node in nodes}
    xs = [n["x"] for n in nodes]
    ys = [n["y"] for n in nodes]
    colors = [_FLAGGED if n.get("flag") else _PLAIN for n in nodes]

    fig = plt.figure(figsize=(8, 8))
    if three_d:
        ax = fig.add_subplot(111, projection="3d")
        zs = [n["z"] for n in nodes]
        for link in links:
            a, b = index[link["source"]], index[link["target"]]
            ax.plot(
                [a["x"], b["x"]],
                [a["y"], b["y"]],
                [a["z"], b["z"]],
                color=_EDGE,
                linewidth=0.8,
                linestyle="--" if link.get("kind") == "conceptual" else "-",
                alpha=0.6,
            )
        ax.scatter(xs, ys, zs, c=colors, s=40, depthshade=False)
        if len(nodes) <= _LABEL_LIMIT:
            for n in nodes:
                ax.text(n["x"], n["y"], n["z"], n["id"], fontsize=7)
    else:
        ax = fig.add_subplot(111)
        segments, styles = [], []
        for link in links:
            a, b = index[link["source"]], index[link["target"]]
            segments.append([(a["x"], a["y"]), (b["x"], b["y"])])
            styles.append("dashed" if link.get("kind") == "conceptual" else "solid")
        if segments:
            ax.add_collection(
                LineCollection(
                    segments, colors=_EDGE, linewidths=0.8, linestyles=styles, alpha=0.6
                )
            )
        ax.scatter(xs, ys, c=colors, s=40, zorder=2)
        if len(nodes) <= _LABEL_LIMIT:
            for n in nodes:
                ax.annotate(
                    n["id"],
                    (n["x"], n["y"]),
                    textcoords="offset points",
                    xytext=(4, 4),
                    fontsize=7,
                )
        ax.set_aspect("equal", adjustable="datalim")
    if title:
        ax.set_title(title)
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path

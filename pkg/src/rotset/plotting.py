"""Static scatter plots of rotation vectors."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

AXES = (-0.2, 1.2)

STYLE = {
    "font.size": 9,
    "axes.linewidth": 0.6,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "svg.hashsalt": "rotset",
    "svg.fonttype": "none",
}


def scatter_rotation_set(points, path, title="", hull=None, reference=None, weights=None):
    """Write a scatter of rotation vectors over the fixed window [-0.2, 1.2]^2.

    ``hull`` and ``reference`` are optional ConvexPolygons drawn as outlines.
    ``weights`` scales marker area (e.g. by basin mass).
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.0, 4.0))
        if reference is not None:
            _outline(ax, reference.vertices, color="0.6", ls="--", lw=0.8, label="reference")
        if hull is not None and len(hull.vertices) > 1:
            _outline(ax, hull.vertices, color="C3", lw=0.8, label="hull")
        sizes = 6.0
        if weights is not None and len(pts):
            w = np.asarray(weights, dtype=float)
            sizes = 6.0 + 30.0 * np.sqrt(w / w.max())
        ax.scatter(pts[:, 0], pts[:, 1], s=sizes, c="k", marker=".", linewidths=0, zorder=3)
        ax.set_xlim(*AXES)
        ax.set_ylim(*AXES)
        ax.set_aspect("equal")
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path, metadata={"Date": None})
        plt.close(fig)
    return path


def _outline(ax, vertices, **kw):
    v = np.asarray(vertices)
    closed = np.vstack([v, v[:1]])
    ax.plot(closed[:, 0], closed[:, 1], **kw)

"""Parameters of the published figures, kept in one versioned table.

``caption`` holds the caption parameters; ``desk`` is the default scaled-down
run for the figures whose caption run takes minutes to hours.
"""

from __future__ import annotations

from .errors import UnknownFigure

PRESETS_VERSION = 1

FIGURES = {
    1: dict(map="f1", method="observable", caption=dict(mode="random", count=1000, length=1000),
            check="center_cluster"),
    2: dict(map="f1", method="observable", caption=dict(mode="grid", count=500, length=1000),
            desk=dict(mode="grid", count=50, length=1000), check=None),
    3: dict(map="f1", method="observable", caption=dict(mode="grid", count=750, length=1000),
            desk=dict(mode="grid", count=75, length=1000), check=None),
    4: dict(map="f1", method="observable", caption=dict(mode="grid", count=1000, length=1000),
            desk=dict(mode="grid", count=100, length=1000), check=None),
    5: dict(map="f1", method="discretized", caption=dict(n=100), check="hull_square"),
    6: dict(map="f1", method="discretized", caption=dict(n=1000), check="hull_square"),
    7: dict(map="f1", method="asymptotic", caption=dict(n_min=100, n_max=1000, step=1),
            desk=dict(n_min=100, n_max=200, step=10), check="hull_square_vertices"),
    8: dict(map="f2", method="observable", caption=dict(mode="random", count=1000, length=1000),
            check="five_clusters"),
    9: dict(map="f2", method="discretized", caption=dict(n=1000), check="hull_square"),
}


def preset(figure: int, scale: float = 1.0, full: bool = False) -> dict:
    """Resolved run parameters for a figure; ``scale`` multiplies sample counts and grid sides."""
    if figure not in FIGURES:
        raise UnknownFigure(f"no preset for figure {figure!r}; choose from 1..{len(FIGURES)}")
    entry = FIGURES[figure]
    params = dict(entry["caption"] if full or "desk" not in entry else entry["desk"])
    if scale != 1.0:
        if entry["method"] == "observable":
            params["count"] = max(1, round(params["count"] * scale))
        elif entry["method"] == "discretized":
            params["n"] = max(1, round(params["n"] * scale))
        else:
            span = params["n_max"] - params["n_min"]
            params["n_max"] = params["n_min"] + max(0, round(span * scale))
    return dict(figure=figure, map=entry["map"], method=entry["method"],
                check=entry["check"], params=params, full=full)

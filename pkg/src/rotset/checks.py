"""Pass/fail checks comparing computed rotation sets with the known square [0,1]^2."""

from __future__ import annotations

import numpy as np

from .geometry import convex_hull, hausdorff, unit_square

SQUARE_VERTICES = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
CENTER = np.array([0.5, 0.5])


def center_cluster(vectors, radius=0.15, rate=0.95) -> dict:
    v = np.asarray(vectors, dtype=float).reshape(-1, 2)
    frac = float(np.mean(np.linalg.norm(v - CENTER, axis=1) <= radius))
    return dict(name="center_cluster", passed=frac >= rate, fraction=frac,
                radius=radius, required=rate)


def five_clusters(vectors, radius=0.15, rate=0.90, vertex_rate=0.01, min_vertices=3) -> dict:
    v = np.asarray(vectors, dtype=float).reshape(-1, 2)
    targets = np.vstack([SQUARE_VERTICES, CENTER])
    near = np.linalg.norm(v[:, None, :] - targets[None], axis=2) <= radius
    frac = float(np.mean(near.any(axis=1)))
    per_vertex = near[:, :4].mean(axis=0).tolist()
    hit = sum(f >= vertex_rate for f in per_vertex)
    return dict(name="five_clusters", passed=frac >= rate and hit >= min_vertices,
                fraction=frac, vertex_fractions=per_vertex, vertices_hit=hit,
                radius=radius, required=rate)


def hull_square(points, tol=0.05) -> dict:
    dist = hausdorff(convex_hull(points), unit_square())
    return dict(name="hull_square", passed=dist <= tol, hausdorff=dist, tolerance=tol)


def hull_square_vertices(points, tol=0.05, vertex_tol=0.02) -> dict:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    result = hull_square(pts, tol)
    gaps = [float(np.min(np.linalg.norm(pts - c, axis=1))) for c in SQUARE_VERTICES]
    passed = result["passed"] and max(gaps) <= vertex_tol
    return dict(result, name="hull_square_vertices", passed=passed,
                vertex_gaps=gaps, vertex_tolerance=vertex_tol)


CHECKS = {
    "center_cluster": center_cluster,
    "five_clusters": five_clusters,
    "hull_square": hull_square,
    "hull_square_vertices": hull_square_vertices,
}

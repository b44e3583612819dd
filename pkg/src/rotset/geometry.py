"""Planar hulls and Hausdorff distances between point sets and convex regions.

A :class:`ConvexPolygon` is always treated as the filled region it bounds.
Polygons with one or two vertices are degenerate (a point, a segment).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from .errors import EmptyInput

EPS = 1e-12


@dataclass(frozen=True)
class ConvexPolygon:
    vertices: np.ndarray  # (k, 2), counterclockwise

    @property
    def degenerate(self) -> bool:
        return len(self.vertices) < 3

    def to_json(self) -> dict:
        return {"vertices": self.vertices.tolist(), "degenerate": self.degenerate}

    @classmethod
    def from_json(cls, data) -> ConvexPolygon:
        return cls(np.asarray(data["vertices"], dtype=float).reshape(-1, 2))

    def __eq__(self, other):
        return (isinstance(other, ConvexPolygon)
                and self.vertices.shape == other.vertices.shape
                and np.allclose(self.vertices, other.vertices, rtol=0, atol=EPS))


def unit_square() -> ConvexPolygon:
    return ConvexPolygon(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))


def segment(a, b) -> ConvexPolygon:
    return convex_hull([a, b])


def _points(ps) -> np.ndarray:
    pts = np.asarray(ps, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise EmptyInput("point set is empty")
    return pts


def _orient(o, a, b) -> int:
    """Exact sign of the cross product (a - o) x (b - o)."""
    l = (a[0] - o[0]) * (b[1] - o[1])
    r = (a[1] - o[1]) * (b[0] - o[0])
    det = l - r
    if abs(det) > 1e-14 * (abs(l) + abs(r)) + 1e-300:
        return 1 if det > 0 else -1
    fo, fa, fb = ([Fraction(float(c)) for c in p] for p in (o, a, b))
    det = (fa[0] - fo[0]) * (fb[1] - fo[1]) - (fa[1] - fo[1]) * (fb[0] - fo[0])
    return (det > 0) - (det < 0)


def _merge_close(pts):
    """Drop points within EPS (max-norm) of an earlier kept point."""
    drop = set()
    for i, j in sorted(cKDTree(pts).query_pairs(EPS, p=np.inf)):
        if i not in drop:
            drop.add(j)
    return pts[[k for k in range(len(pts)) if k not in drop]]


def _nearly_straight(prev, cur, nxt) -> bool:
    """``cur`` lies within EPS (relative) of the segment prev-nxt, between its ends."""
    u = cur - prev
    w = nxt - prev
    lw = float(np.hypot(*w))
    if lw == 0.0:
        return True
    off = abs(u[0] * w[1] - u[1] * w[0]) / lw
    along = (u @ w) / lw
    return off <= EPS * max(1.0, lw) and -EPS <= along <= lw + EPS


def convex_hull(ps) -> ConvexPolygon:
    """Monotone-chain hull, counterclockwise from the lexicographically smallest vertex.

    Orientation signs are exact; afterwards vertices within 1e-12 of the
    segment joining their neighbours are dropped, and points closer than 1e-12
    are merged.
    """
    pts = _points(ps)
    pts = np.unique(pts, axis=0)  # lexicographic by (x, y)
    if len(pts) > 1:
        pts = _merge_close(pts)
    if len(pts) <= 2:
        return ConvexPolygon(pts.copy())

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _orient(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(pts[::-1])
    hull = lower[:-1] + upper[:-1]
    changed = True
    while changed and len(hull) > 2:
        changed = False
        for k in range(len(hull)):
            if _nearly_straight(hull[k - 1], hull[k], hull[(k + 1) % len(hull)]):
                del hull[k]
                changed = True
                break
    hull = np.array(hull)
    first = int(np.lexsort((hull[:, 1], hull[:, 0]))[0])
    return ConvexPolygon(np.roll(hull, -first, axis=0))


def _point_segment_dist(p, a, b):
    """Distances from points ``p`` (m, 2) to segment ``ab``."""
    ab = b - a
    ends = np.minimum(np.linalg.norm(p - a, axis=1), np.linalg.norm(p - b, axis=1))
    length = float(np.hypot(*ab))
    if length == 0.0:
        return ends
    rel = p - a
    t = (rel @ ab) / (length * length)
    perp = np.abs(rel[:, 0] * ab[1] - rel[:, 1] * ab[0]) / length
    return np.where((t > 0) & (t < 1), np.minimum(perp, ends), ends)


def region_distance(points, poly: ConvexPolygon) -> np.ndarray:
    """Distance of each point to the filled polygon (0 inside)."""
    p = _points(points)
    v = poly.vertices
    if len(v) == 1:
        return np.linalg.norm(p - v[0], axis=1)
    edges = list(zip(v, np.roll(v, -1, axis=0)))
    if len(v) == 2:
        edges = edges[:1]
    d = np.min([_point_segment_dist(p, a, b) for a, b in edges], axis=0)
    if len(v) >= 3:
        e = np.roll(v, -1, axis=0) - v
        rel = p[:, None, :] - v[None, :, :]
        crosses = e[None, :, 0] * rel[..., 1] - e[None, :, 1] * rel[..., 0]
        inside = np.all(crosses >= -EPS, axis=1)
        d[inside] = 0.0
    return d


def _clip(poly, normal, offset):
    """Keep the part of ``poly`` where ``x . normal <= offset``."""
    out = []
    k = len(poly)
    for idx in range(k):
        cur, nxt = poly[idx], poly[(idx + 1) % k]
        fc = cur @ normal - offset
        fn = nxt @ normal - offset
        if fc <= 0:
            out.append(cur)
        if (fc < 0 < fn) or (fn < 0 < fc):
            out.append(cur + (nxt - cur) * (fc / (fc - fn)))
    return out


def _region_sup_to_points(poly: ConvexPolygon, pts: np.ndarray) -> float:
    """``max over the region of the distance to the nearest point of pts``.

    The maximum of the distance to a finite set over a convex region sits on a
    vertex of some Voronoi cell clipped to the region; cells are built by
    half-plane clipping against neighbours in increasing distance.
    """
    pts = np.unique(pts, axis=0)
    region = [v.copy() for v in poly.vertices]
    if len(pts) == 1:
        return float(np.max(np.linalg.norm(poly.vertices - pts[0], axis=1)))
    tree = cKDTree(pts)
    best = 0.0
    for i, c in enumerate(pts):
        cell = region
        k = min(len(pts), 16)
        done = 0
        while cell:
            dist, idx = tree.query(c, k=k)
            for dj, j in zip(dist[done:], idx[done:]):
                if j == i:
                    continue
                radius = max(np.linalg.norm(q - c) for q in cell)
                if dj > 2.0 * radius:
                    break
                other = pts[j]
                normal = other - c
                cell = _clip(cell, normal, 0.5 * (other @ other - c @ c))
                if not cell:
                    break
            else:
                if k < len(pts):
                    done, k = k, min(len(pts), 2 * k)
                    continue
            break
        if cell:
            best = max(best, max(float(np.linalg.norm(q - c)) for q in cell))
    return best


def directed_hausdorff(a, b) -> float:
    """``sup over a of the distance to b``; each side a point set or ConvexPolygon."""
    if isinstance(a, ConvexPolygon):
        if isinstance(b, ConvexPolygon):
            # distance to a convex set is convex, so its max sits on a vertex
            return float(np.max(region_distance(a.vertices, b)))
        return _region_sup_to_points(a, _points(b))
    pa = _points(a)
    if isinstance(b, ConvexPolygon):
        return float(np.max(region_distance(pa, b)))
    dist, _ = cKDTree(_points(b)).query(pa)
    return float(np.max(dist))


def hausdorff(a, b) -> float:
    return max(directed_hausdorff(a, b), directed_hausdorff(b, a))


def within_neighborhood(ps, target: ConvexPolygon, eps: float):
    """Whether every point lies within ``eps`` of the target region.

    Returns ``(ok, worst_distance, worst_point)``.
    """
    if eps < 0:
        raise ValueError("eps must be >= 0")
    pts = _points(ps)
    d = region_distance(pts, target)
    k = int(np.argmax(d))
    # EPS slack: points dropped from a hull as collinear may sit 1e-12 outside it
    return bool(d[k] <= eps + EPS), float(d[k]), tuple(pts[k].tolist())

"""Distances between step fuzzy sets.

The endograph of a step set is the zero slab R^m x {0} together with one
vertical segment {y} x [0, u(y)] per support point.  The distance from
(x, t) to it therefore has the closed form

    min(t, min_y sqrt(|x - y|^2 + max(0, t - u(y))^2)),

which is nondecreasing in t; the supremum over the endograph of ``u`` is
reached at the segment tops (x, u(x)).  Nothing is ever sampled.
"""

from __future__ import annotations

import numpy as np

from .fuzzy import LevelFuzzySet, cut, empty_fuzzy, from_level_family
from .geometry import (
    INF,
    DimensionMismatch,
    PointCloud,
    _row_blocks,
    as_vector,
    grid_points,
    hausdorff,
    squared_distances,
)


def _check(u: LevelFuzzySet, v: LevelFuzzySet) -> None:
    if u.dim != v.dim:
        raise DimensionMismatch(f"dimension mismatch: {u.dim} vs {v.dim}")


def _graph_distances(x: np.ndarray, t: np.ndarray, y: np.ndarray, s: np.ndarray) -> np.ndarray:
    """min over j of sqrt(|x_i - y_j|^2 + max(0, t_i - s_j)^2), for each i."""
    out = np.empty(len(x))
    for rows in _row_blocks(len(x), len(y)):
        d2 = squared_distances(x[rows], y)
        gap = np.maximum(0.0, t[rows, None] - s[None, :])
        out[rows] = np.sqrt((d2 + gap * gap).min(axis=1))
    return out


def point_to_endograph(x, t: float, v: LevelFuzzySet) -> float:
    """Euclidean distance from (x, t) to the endograph of ``v``."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t={t!r} outside [0, 1]")
    xv = as_vector(x, v.dim)
    if v.is_empty:
        return float(t)
    d = _graph_distances(xv[None, :], np.array([float(t)]),
                         v.support.points, v.support_values)[0]
    return float(min(t, d))


def directed_endograph(u: LevelFuzzySet, v: LevelFuzzySet, radius: float | None = None) -> float:
    """sup over end u of the distance to end v.

    With ``radius`` the supremum runs only over points of end u whose
    spatial part lies in the closed ball B(0, radius).
    """
    _check(u, v)
    x, tu = u.support.points, u.support_values
    if radius is not None and len(x):
        inside = np.sqrt((x ** 2).sum(axis=1)) <= radius
        x, tu = x[inside], tu[inside]
    if len(x) == 0:
        return 0.0
    if v.is_empty:
        return float(tu.max())
    d = _graph_distances(x, tu, v.support.points, v.support_values)
    return float(np.minimum(tu, d).max())


def endograph_metric(u: LevelFuzzySet, v: LevelFuzzySet) -> float:
    """Hausdorff distance between endographs; always in [0, 1]."""
    return max(directed_endograph(u, v), directed_endograph(v, u))


def directed_sendograph(u: LevelFuzzySet, v: LevelFuzzySet) -> float:
    _check(u, v)
    if u.is_empty:
        return 0.0
    if v.is_empty:
        return INF
    return float(_graph_distances(u.support.points, u.support_values,
                                  v.support.points, v.support_values).max())


def sendograph_metric(u: LevelFuzzySet, v: LevelFuzzySet) -> float:
    """Hausdorff distance between sendographs (endographs without the zero slab)."""
    return max(directed_sendograph(u, v), directed_sendograph(v, u))


def _level_breaks(u: LevelFuzzySet, v: LevelFuzzySet) -> list[float]:
    return sorted({0.0, 1.0, *u.levels, *v.levels})


def dp_integral(u: LevelFuzzySet, v: LevelFuzzySet, p: float = 1.0) -> float:
    """The integral of H(cut(u, a), cut(v, a))^p over a in [0, 1].

    Both cut maps are constant on each interval (b_j, b_{j+1}] between
    consecutive merged levels, so the integral is a finite sum.
    """
    _check(u, v)
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p!r}")
    total = 0.0
    breaks = _level_breaks(u, v)
    for lo, hi in zip(breaks, breaks[1:]):
        h = hausdorff(cut(u, hi), cut(v, hi))
        if h == INF:
            return INF
        total += (hi - lo) * h ** p
    return total


def dp_metric(u: LevelFuzzySet, v: LevelFuzzySet, p: float = 1.0) -> float:
    total = dp_integral(u, v, p)
    return INF if total == INF else total ** (1.0 / p)


def ball_fuzzy(r: float, dim: int, grid_spacing: float | None = None) -> LevelFuzzySet:
    """Characteristic function of a lattice sample of the closed ball B(0, r)."""
    if not r > 0:
        raise ValueError("radius must be positive")
    h = r / 16 if grid_spacing is None else float(grid_spacing)
    if not h > 0:
        raise ValueError("grid spacing must be positive")
    pts = grid_points([-r] * dim, [r] * dim, h)
    pts = pts[np.sqrt((pts ** 2).sum(axis=1)) <= r * (1 + 1e-12)]
    return from_level_family(dim, [1.0], [PointCloud(dim, pts)])


def join(u: LevelFuzzySet, v: LevelFuzzySet) -> LevelFuzzySet:
    """Pointwise maximum: cuts of the join are unions of cuts."""
    _check(u, v)
    levels = sorted(set(u.levels) | set(v.levels))
    if not levels:
        return empty_fuzzy(u.dim)
    cuts = [cut(u, a).union(cut(v, a)) for a in levels]
    return from_level_family(u.dim, levels, cuts)


def r_excess(u: LevelFuzzySet, r: float, grid_spacing: float | None = None,
             ball: LevelFuzzySet | None = None) -> float:
    """How far ``u`` escapes the ball B(0, r), measured in the endograph metric.

    ``ball`` may be passed to reuse a precomputed :func:`ball_fuzzy` sample.
    """
    b = ball_fuzzy(r, u.dim, grid_spacing) if ball is None else ball
    return endograph_metric(join(u, b), b)


"""Point-cloud primitives.

A compact subset of R^m is represented by a finite point cloud.  Distances
between clouds are exact on the representation; connectivity, convexity and
star-shapedness are epsilon-sample predicates governed by a
:class:`GeometryConfig`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

INF = math.inf

# Distance comparisons against user tolerances get this much relative slack so
# that grid points sitting exactly at the tolerance are not lost to rounding.
_TOL_SLACK = 1e-9

# Brute-force kernels work on blocks of at most this many pairwise entries.
_BLOCK = 1 << 21

# Above this many point pairs, method="auto" switches to a k-d tree.
_AUTO_TREE_PAIRS = 4_000_000


class DimensionMismatch(ValueError):
    """Two objects living in different ambient dimensions were combined."""


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Finite sample of a compact set in R^dim (possibly empty).

    Points are stored as a read-only ``(n, dim)`` array with duplicates
    removed and rows in lexicographic order, so two clouds are equal exactly
    when they are equal as sets.
    """

    dim: int
    points: np.ndarray

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim!r}")
        pts = np.asarray(self.points, dtype=float)
        if pts.size == 0:
            pts = np.empty((0, int(self.dim)))
        if pts.ndim == 1 and self.dim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise DimensionMismatch(
                f"points must have shape (n, {self.dim}), got {pts.shape}"
            )
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        # +0.0 folds negative zeros so set semantics are sign-agnostic
        pts = np.unique(pts + 0.0, axis=0) if len(pts) else pts
        pts.setflags(write=False)
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "points", pts)

    @classmethod
    def _from_rows(cls, dim: int, rows: np.ndarray) -> "PointCloud":
        """Wrap rows taken, in order, from an existing cloud (already canonical)."""
        obj = object.__new__(cls)
        rows = np.array(rows, dtype=float).reshape(-1, dim)
        rows.setflags(write=False)
        object.__setattr__(obj, "dim", int(dim))
        object.__setattr__(obj, "points", rows)
        return obj

    @classmethod
    def empty(cls, dim: int) -> "PointCloud":
        return cls(dim, np.empty((0, dim)))

    @classmethod
    def from_points(cls, points: Iterable, dim: int | None = None) -> "PointCloud":
        """Build a cloud from any nested sequence; scalars are 1-D points."""
        arr = np.asarray(list(points) if not isinstance(points, np.ndarray) else points,
                         dtype=float)
        if dim is None:
            if arr.size == 0:
                raise ValueError("dim is required for an empty cloud")
            dim = 1 if arr.ndim == 1 else arr.shape[1]
        if arr.ndim == 1 and arr.size:
            arr = arr.reshape(-1, dim)
        return cls(dim, arr)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __bool__(self) -> bool:
        return len(self.points) > 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointCloud):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.points, other.points)

    def __hash__(self) -> int:
        return hash((self.dim, self.points.tobytes()))

    def __repr__(self) -> str:
        return f"PointCloud(dim={self.dim}, n={len(self)})"

    @cached_property
    def keys(self) -> frozenset:
        return frozenset(map(tuple, self.points.tolist()))

    def __contains__(self, x) -> bool:
        return tuple(np.asarray(x, dtype=float).reshape(-1).tolist()) in self.keys

    @property
    def is_empty(self) -> bool:
        return len(self.points) == 0

    def issubset(self, other: "PointCloud") -> bool:
        _check_dims(self, other)
        return self.keys <= other.keys

    def union(self, other: "PointCloud") -> "PointCloud":
        _check_dims(self, other)
        return PointCloud(self.dim, np.vstack([self.points, other.points]))

    def intersection(self, other: "PointCloud") -> "PointCloud":
        _check_dims(self, other)
        keep = [tuple(p) in other.keys for p in self.points.tolist()]
        return PointCloud._from_rows(self.dim, self.points[np.asarray(keep, dtype=bool)])

    def within_ball(self, radius: float, center=None) -> "PointCloud":
        """Points with ``||x - center|| <= radius`` (no tolerance)."""
        c = np.zeros(self.dim) if center is None else np.asarray(center, dtype=float)
        if self.is_empty:
            return self
        mask = np.sqrt(((self.points - c) ** 2).sum(axis=1)) <= radius
        if mask.all():
            return self
        return PointCloud._from_rows(self.dim, self.points[mask])

    def translate(self, shift) -> "PointCloud":
        return PointCloud(self.dim, self.points + np.asarray(shift, dtype=float))

    def scale_about(self, center, factor: float) -> "PointCloud":
        c = np.asarray(center, dtype=float)
        return PointCloud(self.dim, c + factor * (self.points - c))


@dataclass(frozen=True)
class GeometryConfig:
    """Tolerances for the epsilon-sample predicates.

    Attributes:
        tol_membership: a point counts as "in" a cloud when it lies within
            this distance of some cloud point.
        conn_radius: adjacency radius of the connectivity graph.
        segment_samples: number of lambda values (endpoints included) used to
            sample each segment.
    """

    tol_membership: float = 0.02
    conn_radius: float = 0.02
    segment_samples: int = 64

    def __post_init__(self):
        if not (self.tol_membership > 0 and self.conn_radius > 0):
            raise ValueError("tolerances must be strictly positive")
        if int(self.segment_samples) != self.segment_samples or self.segment_samples < 2:
            raise ValueError("segment_samples must be an integer >= 2")

    @classmethod
    def for_spacing(cls, spacing: float, segment_samples: int = 64) -> "GeometryConfig":
        """Defaults for a grid sample: both radii are twice the spacing."""
        return cls(2.0 * spacing, 2.0 * spacing, segment_samples)


def _check_dims(a, b) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {b.dim}")


def as_vector(x, dim: int) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.shape != (dim,):
        raise DimensionMismatch(f"expected a {dim}-vector, got shape {v.shape}")
    return v


def squared_distances(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Pairwise squared Euclidean distances by explicit differences.

    Differences are formed coordinate-wise (not via the ``|x|^2 - 2x.y + |y|^2``
    expansion) so that every caller sharing this helper sees bit-identical
    values.
    """
    diff = x[:, None, :] - y[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _row_blocks(n_rows: int, n_cols: int):
    step = max(1, _BLOCK // max(1, n_cols))
    for start in range(0, n_rows, step):
        yield slice(start, min(n_rows, start + step))


def nearest_distances(a: PointCloud, b: PointCloud, method: str = "auto") -> np.ndarray:
    """Distance from each point of ``a`` to the cloud ``b`` (``b`` nonempty)."""
    _check_dims(a, b)
    if b.is_empty:
        raise ValueError("target cloud is empty")
    if a.is_empty:
        return np.empty(0)
    if method == "auto":
        method = "kdtree" if len(a) * len(b) > _AUTO_TREE_PAIRS else "brute"
    if method == "kdtree":
        d, _ = cKDTree(b.points).query(a.points)
        return np.asarray(d, dtype=float)
    if method != "brute":
        raise ValueError(f"unknown method {method!r}")
    out = np.empty(len(a))
    for rows in _row_blocks(len(a), len(b)):
        out[rows] = np.sqrt(squared_distances(a.points[rows], b.points).min(axis=1))
    return out


def directed_hausdorff(a: PointCloud, b: PointCloud, method: str = "auto") -> float:
    """sup over x in a of d(x, b); 0 for empty ``a``, inf if only ``b`` is empty."""
    _check_dims(a, b)
    if a.is_empty or a is b:
        return 0.0
    if b.is_empty:
        return INF
    return float(nearest_distances(a, b, method).max())


def hausdorff(a: PointCloud, b: PointCloud, method: str = "auto") -> float:
    """Hausdorff distance extended to the empty set (H(empty, M) = inf)."""
    return max(directed_hausdorff(a, b, method), directed_hausdorff(b, a, method))


def bounding_radius(a: PointCloud) -> float:
    """Largest Euclidean norm in ``a`` (0 for the empty cloud)."""
    if a.is_empty:
        return 0.0
    return float(np.sqrt((a.points ** 2).sum(axis=1)).max())


def is_connected(a: PointCloud, cfg: GeometryConfig = GeometryConfig()) -> bool:
    """Connectivity of the graph joining points at distance <= conn_radius."""
    n = len(a)
    if n <= 1:
        return True
    pairs = cKDTree(a.points).query_pairs(cfg.conn_radius * (1 + _TOL_SLACK),
                                          output_type="ndarray")
    if len(pairs) < n - 1:
        return False
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    n_comp, _ = connected_components(graph, directed=False)
    return n_comp == 1


class _Coverage:
    """Answers "is every query point within tol of the cloud?" in batches."""

    def __init__(self, a: PointCloud, tol: float):
        self.tree = cKDTree(a.points)
        self.bound = tol * (1 + _TOL_SLACK)

    def covers(self, q: np.ndarray) -> bool:
        if len(q) == 0:
            return True
        d, _ = self.tree.query(q, distance_upper_bound=self.bound)
        return bool(np.all(np.isfinite(d)))

    def covered_mask(self, q: np.ndarray) -> np.ndarray:
        d, _ = self.tree.query(q, distance_upper_bound=self.bound)
        return np.isfinite(d)


def _interior_lambdas(cfg: GeometryConfig) -> np.ndarray:
    return np.linspace(0.0, 1.0, int(cfg.segment_samples))[1:-1]


def is_convex_sample(a: PointCloud, cfg: GeometryConfig = GeometryConfig()) -> bool:
    """True when every sampled point of every segment between cloud points is covered."""
    n = len(a)
    if n <= 1:
        return True
    cov = _Coverage(a, cfg.tol_membership)
    lam = _interior_lambdas(cfg)
    i, j = np.triu_indices(n, k=1)
    per_pair = max(1, len(lam) * a.dim)
    step = max(1, _BLOCK // per_pair)
    p = a.points
    for s in range(0, len(i), step):
        y, z = p[i[s:s + step]], p[j[s:s + step]]
        q = z[:, None, :] + lam[None, :, None] * (y - z)[:, None, :]
        if not cov.covers(q.reshape(-1, a.dim)):
            return False
    return True


def _star_mask(a: PointCloud, centers: np.ndarray, cfg: GeometryConfig) -> np.ndarray:
    """For each candidate center, whether every segment to every cloud point is covered."""
    cov = _Coverage(a, cfg.tol_membership)
    lam = _interior_lambdas(cfg)
    p = a.points
    ok = cov.covered_mask(centers) if len(centers) else np.zeros(0, dtype=bool)
    # far targets first: non-centers are rejected after the first block
    for c_idx in np.flatnonzero(ok):
        x = centers[c_idx]
        order = np.argsort(-((p - x) ** 2).sum(axis=1), kind="stable")
        targets = p[order]
        step = max(1, _BLOCK // max(1, len(lam) * a.dim))
        for s in range(0, len(targets), step):
            y = targets[s:s + step]
            q = x[None, None, :] + lam[None, :, None] * (y - x)[:, None, :]
            if not cov.covers(q.reshape(-1, a.dim)):
                ok[c_idx] = False
                break
    return ok


def is_star_shaped_about(a: PointCloud, x, cfg: GeometryConfig = GeometryConfig()) -> bool:
    """Every sampled segment point from ``x`` to the cloud is covered.

    ``x`` itself must lie within ``tol_membership`` of ``a``; an uncovered
    center is reported as ``False`` rather than raised.
    """
    v = as_vector(x, a.dim)
    if a.is_empty:
        return False
    return bool(_star_mask(a, v[None, :], cfg)[0])


def kernel(a: PointCloud, cfg: GeometryConfig = GeometryConfig()) -> PointCloud:
    """Sub-cloud of cloud points about which ``a`` is star-shaped."""
    if len(a) <= 1:
        return a
    mask = _star_mask(a, a.points, cfg)
    return PointCloud(a.dim, a.points[mask])


def is_star_shaped(a: PointCloud, cfg: GeometryConfig = GeometryConfig()) -> bool:
    return not kernel(a, cfg).is_empty


def grid_points(lower: Sequence[float], upper: Sequence[float], spacing: float) -> np.ndarray:
    """Lattice ``spacing * Z^m`` restricted to the box ``[lower, upper]``.

    Box corners need not be lattice points; every coordinate is an exact
    integer multiple of ``spacing`` so that different boxes share points.
    """
    lower = np.atleast_1d(np.asarray(lower, dtype=float))
    upper = np.atleast_1d(np.asarray(upper, dtype=float))
    axes = []
    for lo, hi in zip(lower, upper):
        k0 = math.ceil(lo / spacing - 1e-9)
        k1 = math.floor(hi / spacing + 1e-9)
        axes.append(np.arange(k0, k1 + 1) * spacing)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1) if axes else np.empty((0, 0))


def interval_sample(a: float, b: float, spacing: float) -> np.ndarray:
    """Evenly spaced 1-D sample of [a, b] with both endpoints exact."""
    if b < a:
        raise ValueError("empty interval")
    k = max(1, math.ceil((b - a) / spacing - 1e-9))
    pts = np.linspace(a, b, k + 1)
    return pts.reshape(-1, 1)


def segment_sample(x, y, samples: int) -> np.ndarray:
    """``samples`` points on the segment from x to y, endpoints included."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    lam = np.linspace(0.0, 1.0, samples)
    return x[None, :] + lam[:, None] * (y - x)[None, :]

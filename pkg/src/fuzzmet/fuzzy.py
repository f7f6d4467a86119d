"""Step fuzzy sets built from finitely many nested point-cloud cuts."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .geometry import (
    DimensionMismatch,
    GeometryConfig,
    PointCloud,
    as_vector,
    hausdorff,
    is_connected,
    is_convex_sample,
    kernel,
)


class RepresentationError(ValueError):
    """Levels or cuts do not describe a valid step fuzzy set."""


@dataclass(frozen=True, eq=False)
class LevelFuzzySet:
    """USC step fuzzy set u(x) = max{levels[i] : x in cuts[i]}.

    ``levels`` is strictly increasing in (0, 1] and ``cuts`` is the matching
    list of nonempty, nested clouds (``cuts[0]`` is the support).  With no
    levels the object is the empty fuzzy set, identically 0.
    """

    dim: int
    levels: tuple
    cuts: tuple

    def __post_init__(self):
        levels = tuple(float(a) for a in self.levels)
        cuts = tuple(self.cuts)
        if len(levels) != len(cuts):
            raise RepresentationError(
                f"{len(levels)} levels but {len(cuts)} cuts"
            )
        for a in levels:
            if not (0.0 < a <= 1.0) or math.isnan(a):
                raise RepresentationError(f"level {a!r} outside (0, 1]")
        for lo, hi in zip(levels, levels[1:]):
            if not lo < hi:
                raise RepresentationError(f"levels not strictly increasing at {lo!r}, {hi!r}")
        for i, c in enumerate(cuts):
            if not isinstance(c, PointCloud):
                raise RepresentationError(f"cut {i} is not a PointCloud")
            if c.dim != self.dim:
                raise DimensionMismatch(f"cut {i} has dim {c.dim}, expected {self.dim}")
            if c.is_empty:
                raise RepresentationError(f"cut {i} at level {levels[i]!r} is empty")
        for i in range(1, len(cuts)):
            if not cuts[i].issubset(cuts[i - 1]):
                raise RepresentationError(
                    f"cut {i} at level {levels[i]!r} is not contained in cut {i - 1}"
                )
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "cuts", cuts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LevelFuzzySet):
            return NotImplemented
        return (self.dim == other.dim and self.levels == other.levels
                and self.cuts == other.cuts)

    def __hash__(self) -> int:
        return hash((self.dim, self.levels, self.cuts))

    def __repr__(self) -> str:
        sizes = [len(c) for c in self.cuts]
        return f"LevelFuzzySet(dim={self.dim}, levels={list(self.levels)}, cut_sizes={sizes})"

    @property
    def is_empty(self) -> bool:
        return not self.levels

    @property
    def support(self) -> PointCloud:
        return self.cuts[0] if self.cuts else PointCloud.empty(self.dim)

    @cached_property
    def support_values(self) -> np.ndarray:
        """Membership value of each support point, aligned with ``support.points``."""
        supp = self.support
        values = np.zeros(len(supp))
        index = {k: i for i, k in enumerate(map(tuple, supp.points.tolist()))}
        for level, c in zip(self.levels, self.cuts):
            rows = [index[k] for k in map(tuple, c.points.tolist())]
            values[rows] = level
        values.setflags(write=False)
        return values

    def membership(self, x) -> float:
        v = as_vector(x, self.dim)
        key = tuple(v.tolist())
        for level, c in zip(reversed(self.levels), reversed(self.cuts)):
            if key in c.keys:
                return level
        return 0.0

    def canonical(self) -> "LevelFuzzySet":
        """Drop levels whose cut equals the next one (they are not membership values)."""
        keep = [i for i in range(len(self.levels))
                if i == len(self.levels) - 1 or self.cuts[i] != self.cuts[i + 1]]
        return LevelFuzzySet(self.dim, tuple(self.levels[i] for i in keep),
                             tuple(self.cuts[i] for i in keep))

    def same_function(self, other: "LevelFuzzySet") -> bool:
        return self.canonical() == other.canonical()


def from_level_family(dim: int, levels: Sequence[float], cuts: Sequence) -> LevelFuzzySet:
    """The step fuzzy set whose cut at ``levels[i]`` is ``cuts[i]``.

    Cuts may be given as :class:`PointCloud` objects or as point lists.
    """
    clouds = tuple(c if isinstance(c, PointCloud) else PointCloud.from_points(c, dim=dim)
                   for c in cuts)
    return LevelFuzzySet(dim, tuple(levels), clouds)


def empty_fuzzy(dim: int) -> LevelFuzzySet:
    return LevelFuzzySet(dim, (), ())


def crisp(cloud: PointCloud) -> LevelFuzzySet:
    """Characteristic function of a cloud; the empty cloud gives the empty fuzzy set."""
    if cloud.is_empty:
        return empty_fuzzy(cloud.dim)
    return LevelFuzzySet(cloud.dim, (1.0,), (cloud,))


def from_membership(points, values, dim: int) -> LevelFuzzySet:
    """Step fuzzy set taking ``values[i]`` at ``points[i]`` and 0 elsewhere.

    Repeated points keep their largest value; zero values are dropped.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, dim)
    vals = np.asarray(values, dtype=float).reshape(-1)
    if len(pts) != len(vals):
        raise ValueError("points and values differ in length")
    if np.any((vals < 0) | (vals > 1)):
        raise RepresentationError("membership values must lie in [0, 1]")
    uniq, inv = np.unique(pts + 0.0, axis=0, return_inverse=True)
    best = np.zeros(len(uniq))
    np.maximum.at(best, inv.reshape(-1), vals)
    levels = sorted(set(best[best > 0].tolist()))
    cuts = [PointCloud(dim, uniq[best >= a]) for a in levels]
    return LevelFuzzySet(dim, tuple(levels), tuple(cuts))


def _check_alpha(alpha: float, closed_top: bool = True) -> float:
    a = float(alpha)
    ok = 0.0 <= a <= 1.0 if closed_top else 0.0 <= a < 1.0
    if not ok:
        rng = "[0, 1]" if closed_top else "[0, 1)"
        raise ValueError(f"alpha={alpha!r} outside {rng}")
    return a


def cut(u: LevelFuzzySet, alpha: float) -> PointCloud:
    """Alpha-cut; at alpha = 0 this is the support."""
    a = _check_alpha(alpha)
    if u.is_empty:
        return PointCloud.empty(u.dim)
    if a == 0.0:
        return u.cuts[0]
    i = bisect.bisect_left(u.levels, a)
    return u.cuts[i] if i < len(u.levels) else PointCloud.empty(u.dim)


def strong_cut(u: LevelFuzzySet, alpha: float) -> PointCloud:
    """Strong cut {x : u(x) > alpha}."""
    a = _check_alpha(alpha, closed_top=False)
    i = bisect.bisect_right(u.levels, a)
    return u.cuts[i] if i < len(u.levels) else PointCloud.empty(u.dim)


def top_level(u: LevelFuzzySet) -> float | None:
    return u.levels[-1] if u.levels else None


def platform_points(u: LevelFuzzySet) -> list[float]:
    """Levels in (0, 1) where the closed cut strictly exceeds the strong cut."""
    out = []
    k = len(u.levels)
    for i, a in enumerate(u.levels):
        if not 0.0 < a < 1.0:
            continue
        if i == k - 1 or u.cuts[i + 1] != u.cuts[i]:
            out.append(a)
    return out


def cut_discontinuities(u: LevelFuzzySet) -> list[float]:
    """Levels alpha in (0, 1) with cut(u, alpha) not contained in strong_cut(u, alpha).

    Between two consecutive levels both accessors return the same cloud, so
    only the levels themselves are candidates.
    """
    return [a for a in u.levels
            if 0.0 < a < 1.0 and not cut(u, a).issubset(strong_cut(u, a))]


def cut_map_left_residual(u: LevelFuzzySet, alpha: float, deltas: Iterable[float]) -> list[float]:
    """H(cut(u, alpha - d), cut(u, alpha)) for each d > 0 with alpha - d >= 0."""
    a = float(alpha)
    if not 0.0 < a < 1.0:
        raise ValueError(f"alpha={alpha!r} outside (0, 1)")
    ref = cut(u, a)
    return [hausdorff(cut(u, a - d), ref) for d in deltas if d > 0 and a - d >= 0.0]


def cut_map_right_residual(u: LevelFuzzySet, alpha: float, deltas: Iterable[float]) -> list[float]:
    """H(cut(u, alpha + d), cut(u, alpha)) for each d > 0 with alpha + d <= 1."""
    a = float(alpha)
    if not 0.0 < a < 1.0:
        raise ValueError(f"alpha={alpha!r} outside (0, 1)")
    ref = cut(u, a)
    return [hausdorff(cut(u, a + d), ref) for d in deltas if d > 0 and a + d <= 1.0]


# ---------------------------------------------------------------------------
# classification

LABEL_ORDER = ("F_USC", "F_USCG", "F_USCB", "F_USCGCON",
               "S~_nc", "S_nc", "E_nc", "S~", "S", "E")


@dataclass(frozen=True)
class ClassReport:
    usc: bool
    uscg: bool
    uscb: bool
    normal: bool
    empty: bool
    all_cuts_connected: bool
    all_cuts_convex: bool
    all_cuts_star_shaped: bool
    shared_star_center_exists: bool
    labels: tuple = field(default=())

    def has(self, label: str) -> bool:
        return label in self.labels

    def to_dict(self) -> dict:
        return {
            "usc": self.usc,
            "uscg": self.uscg,
            "uscb": self.uscb,
            "normal": self.normal,
            "empty": self.empty,
            "all_cuts_connected": self.all_cuts_connected,
            "all_cuts_convex": self.all_cuts_convex,
            "all_cuts_star_shaped": self.all_cuts_star_shaped,
            "shared_star_center_exists": self.shared_star_center_exists,
            "labels": list(self.labels),
        }


def all_cuts_connected(u: LevelFuzzySet, cfg: GeometryConfig = GeometryConfig()) -> bool:
    return all(is_connected(c, cfg) for c in u.cuts)


def first_disconnected_cut(u: LevelFuzzySet, cfg: GeometryConfig = GeometryConfig()):
    """Level of the first disconnected cut, or None."""
    for a, c in zip(u.levels, u.cuts):
        if not is_connected(c, cfg):
            return a
    return None


def classify(u: LevelFuzzySet, cfg: GeometryConfig = GeometryConfig()) -> ClassReport:
    """Place ``u`` in the usual taxonomy of USC fuzzy sets.

    Every finite representation is bounded, so F_USC, F_USCG and F_USCB always
    hold.  The noncompact labels (``*_nc``) follow from their compact
    counterparts for the same reason.  On epsilon-samples the raw flags can
    disagree with the exact inclusions (a star-shaped sample need not be
    connected at ``conn_radius``), so each label also requires the labels it
    is contained in.
    """
    connected = all_cuts_connected(u, cfg)
    convex_flags = [is_convex_sample(c, cfg) for c in u.cuts]
    convex = all(convex_flags)
    # a convex sample is star-shaped about each of its points
    kernels = [c if ok else kernel(c, cfg) for c, ok in zip(u.cuts, convex_flags)]
    star = all(not k.is_empty for k in kernels)
    shared = False
    if kernels and star:
        common = kernels[0]
        for k in kernels[1:]:
            common = common.intersection(k)
            if common.is_empty:
                break
        shared = not common.is_empty
    normal = bool(u.levels) and u.levels[-1] == 1.0

    labels = ["F_USC", "F_USCG", "F_USCB"]
    if connected:
        labels.append("F_USCGCON")
        gen_star = normal and star
        fuzzy_star = gen_star and shared
        fuzzy_convex = fuzzy_star and convex
        if gen_star:
            labels += ["S~_nc", "S~"]
        if fuzzy_star:
            labels += ["S_nc", "S"]
        if fuzzy_convex:
            labels += ["E_nc", "E"]
    labels.sort(key=LABEL_ORDER.index)
    return ClassReport(
        usc=True, uscg=True, uscb=True, normal=normal, empty=u.is_empty,
        all_cuts_connected=connected, all_cuts_convex=convex,
        all_cuts_star_shaped=star, shared_star_center_exists=shared,
        labels=tuple(labels),
    )


# ---------------------------------------------------------------------------
# support function of the cuts inside a ball


@dataclass(frozen=True)
class SupportFunctionTrace:
    direction: np.ndarray
    center: np.ndarray
    radius: float
    samples: tuple  # ((alpha, value), ...) with value = -inf for empty intersections

    @property
    def alphas(self) -> list[float]:
        return [a for a, _ in self.samples]

    @property
    def values(self) -> list[float]:
        return [v for _, v in self.samples]

    def is_nonincreasing(self) -> bool:
        vals = self.values
        return all(b <= a for a, b in zip(vals, vals[1:]))

    def jump_levels(self) -> list[float]:
        """Grid levels in (0, 1) where the trace drops before the next grid point."""
        out = []
        for (a, va), (_, vb) in zip(self.samples, self.samples[1:]):
            if 0.0 < a < 1.0 and va > -math.inf and vb < va:
                out.append(a)
        return out


def default_level_grid(u: LevelFuzzySet) -> list[float]:
    """0, 1, every level of ``u`` and the midpoints between consecutive ones."""
    knots = sorted({0.0, 1.0, *u.levels})
    grid = set(knots)
    grid.update((lo + hi) / 2 for lo, hi in zip(knots, knots[1:]))
    return sorted(grid)


def support_function_trace(u: LevelFuzzySet, t, r: float, e,
                           alphas: Sequence[float] | None = None) -> SupportFunctionTrace:
    """Trace of alpha -> sup{<e, x - t> : x in cut(u, alpha), ||x - t|| <= r}."""
    tv = as_vector(t, u.dim)
    ev = as_vector(e, u.dim)
    if abs(float(np.linalg.norm(ev)) - 1.0) > 1e-9:
        raise ValueError("direction must be a unit vector")
    if not r > 0:
        raise ValueError("radius must be positive")
    grid = default_level_grid(u) if alphas is None else sorted(float(a) for a in alphas)
    samples = []
    for a in grid:
        pts = cut(u, a).points
        if len(pts):
            rel = pts - tv
            inside = np.sqrt((rel ** 2).sum(axis=1)) <= r
            rel = rel[inside]
        else:
            rel = pts
        value = float((rel @ ev).max()) if len(rel) else -math.inf
        samples.append((a, value))
    return SupportFunctionTrace(ev, tv, float(r), tuple(samples))

"""Finite witnesses of total boundedness and relative compactness."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._parallel import pmap
from .convergence import _as_prefix
from .fuzzy import LevelFuzzySet, cut, empty_fuzzy, from_level_family
from .geometry import DimensionMismatch, PointCloud, bounding_radius, hausdorff
from .metrics import endograph_metric


class StabilizationError(ValueError):
    """Per-level cuts of a prefix did not settle; carries the offending levels."""

    def __init__(self, levels: Sequence[float]):
        self.levels = list(levels)
        super().__init__(f"cuts did not stabilize at levels {self.levels}")


@dataclass(frozen=True)
class FuzzyFamily:
    members: tuple
    note: str = ""

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise ValueError("a family needs at least one member")
        if len({m.dim for m in members}) != 1:
            raise DimensionMismatch("family members have different dimensions")
        object.__setattr__(self, "members", members)

    @property
    def dim(self) -> int:
        return self.members[0].dim

    def __len__(self) -> int:
        return len(self.members)


def _as_family(U) -> FuzzyFamily:
    return U if isinstance(U, FuzzyFamily) else FuzzyFamily(tuple(U))


def family_profile(U, alpha_grid: Iterable[float]) -> dict:
    """Bounding radius of U(alpha), the union of the members' alpha-cuts."""
    U = _as_family(U)
    return {float(a): max(bounding_radius(cut(u, a)) for u in U.members) for a in alpha_grid}


@dataclass(frozen=True)
class EpsilonNet:
    epsilon: float
    centers: tuple      # member indices
    assignment: tuple   # assignment[i] = index of the center covering member i
    distances: tuple    # H_end from member i to its center

    def __len__(self) -> int:
        return len(self.centers)

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "centers": list(self.centers),
            "assignment": {str(i): c for i, c in enumerate(self.assignment)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def greedy_epsilon_net(U, eps: float, threads: int | None = None) -> EpsilonNet:
    """Internal epsilon-net under H_end by farthest-point insertion.

    The first member is the first center; each further center is the member
    farthest from the current centers (lowest index on ties), until every
    member is within ``eps``.  Each member is assigned to its nearest center.
    """
    if not eps > 0:
        raise ValueError("epsilon must be positive")
    U = _as_family(U)
    members = U.members

    def row(c):
        return np.array(pmap(lambda m: endograph_metric(members[c], m), members, threads))

    centers = [0]
    rows = [row(0)]
    nearest = rows[0].copy()
    while nearest.max() > eps:
        c = int(np.argmax(nearest))
        centers.append(c)
        rows.append(row(c))
        nearest = np.minimum(nearest, rows[-1])
    dist = np.vstack(rows)
    which = np.argmin(dist, axis=0)
    assignment = tuple(int(centers[k]) for k in which)
    distances = tuple(float(dist[k, i]) for i, k in enumerate(which))
    assert max(distances) <= eps
    return EpsilonNet(float(eps), tuple(centers), assignment, distances)


def pairwise_endograph(U, threads: int | None = None) -> np.ndarray:
    U = _as_family(U)
    m = U.members
    n = len(m)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    vals = pmap(lambda ij: endograph_metric(m[ij[0]], m[ij[1]]), pairs, threads)
    out = np.zeros((n, n))
    for (i, j), v in zip(pairs, vals):
        out[i, j] = out[j, i] = v
    return out


def truncate_below(u: LevelFuzzySet, alpha: float) -> LevelFuzzySet:
    """u^(alpha): keep membership values >= alpha, zero out the rest."""
    a = float(alpha)
    if not 0.0 < a <= 1.0:
        raise ValueError(f"alpha={alpha!r} outside (0, 1]")
    keep = [i for i, lvl in enumerate(u.levels) if lvl >= a]
    if not keep:
        return empty_fuzzy(u.dim)
    return LevelFuzzySet(u.dim, tuple(u.levels[i] for i in keep),
                         tuple(u.cuts[i] for i in keep))


def diagonal_limit_candidate(seq, level_grid: Sequence[float] | None = None,
                             threshold: float = 0.02, radius: float | None = 16.0,
                             ) -> LevelFuzzySet:
    """Candidate limit of a numerically Cauchy prefix, assembled level by level.

    At each grid level the cuts (restricted to the ball B(0, radius), or
    unrestricted when ``radius`` is None) must settle: every consecutive pair
    over the last quarter of the prefix (at least one pair) is within
    ``threshold`` in Hausdorff distance.  The settled cut of the last element
    is taken, each cut is intersected with all cuts at lower grid levels to
    force nesting, and the result is assembled into a step fuzzy set.

    Raises:
        StabilizationError: listing every level whose cuts never settled.
    """
    seq = _as_prefix(seq)
    if level_grid is None:
        level_grid = sorted({a for u in seq.items for a in u.levels})
    grid = sorted({float(a) for a in level_grid if 0.0 < a <= 1.0})
    if not grid:
        return empty_fuzzy(seq.dim)

    def trunc(c: PointCloud) -> PointCloud:
        return c if radius is None else c.within_ball(radius)

    n_pairs = max(1, (len(seq) - 1) // 4)
    unsettled, settled = [], []
    for q in grid:
        cuts_q = [trunc(cut(u, q)) for u in seq.items]
        tail = list(zip(cuts_q[-n_pairs - 1:], cuts_q[-n_pairs:])) if len(seq) >= 2 else []
        if any(hausdorff(a, b) > threshold for a, b in tail):
            unsettled.append(q)
        settled.append(cuts_q[-1])
    if unsettled:
        raise StabilizationError(unsettled)

    levels, cuts = [], []
    running = None
    for q, c in zip(grid, settled):
        running = c if running is None else running.intersection(c)
        if running.is_empty:
            break
        levels.append(q)
        cuts.append(running)
    if not levels:
        return empty_fuzzy(seq.dim)
    return from_level_family(seq.dim, levels, cuts)


def monotone_limit_residuals(cuts: Sequence[PointCloud], decreasing: bool = True) -> list[float]:
    """H(C_n, limit) for a nested family, the limit being the intersection or union."""
    limit = cuts[0]
    for c in cuts[1:]:
        limit = limit.intersection(c) if decreasing else limit.union(c)
    return [hausdorff(c, limit) for c in cuts]

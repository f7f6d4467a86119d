"""Shared generators and brute-force oracles for the test suite."""

import math

import numpy as np
from hypothesis import strategies as st

from fuzzmet.fuzzy import LevelFuzzySet, from_level_family
from fuzzmet.geometry import PointCloud


def random_step_set(rng, dim, max_levels=4, max_points=8, scale=2.0) -> LevelFuzzySet:
    """Nested random clouds built top-down; levels random in (0, 1]."""
    k = int(rng.integers(1, max_levels + 1))
    levels = np.sort(rng.choice(np.arange(1, 101), size=k, replace=False)) / 100.0
    acc = np.round(rng.uniform(-scale, scale, size=(int(rng.integers(1, max_points)), dim)), 3)
    cuts = []
    for _ in range(k):
        cuts.append(acc)
        extra = np.round(rng.uniform(-scale, scale, size=(int(rng.integers(0, max_points)), dim)), 3)
        acc = np.vstack([acc, extra])
    cuts.reverse()
    return from_level_family(dim, levels.tolist(), [PointCloud(dim, c) for c in cuts])


@st.composite
def step_sets(draw, dim=None, max_levels=4, max_points=6, allow_empty=True):
    """Hypothesis strategy for valid step fuzzy sets."""
    m = draw(st.integers(1, 3)) if dim is None else dim
    k = draw(st.integers(0 if allow_empty else 1, max_levels))
    levels = sorted(draw(st.sets(st.integers(1, 100), min_size=k, max_size=k)))
    coord = st.integers(-20, 20).map(lambda v: v / 8)
    point = st.tuples(*[coord] * m)
    acc = draw(st.lists(point, min_size=1, max_size=max_points))
    cuts = []
    for _ in range(k):
        cuts.append(list(acc))
        acc = acc + draw(st.lists(point, max_size=max_points))
    cuts.reverse()
    return from_level_family(m, [a / 100 for a in levels],
                             [PointCloud(m, np.array(c).reshape(-1, m)) for c in cuts])


def brute_membership(u: LevelFuzzySet, x) -> float:
    x = tuple(float(c) for c in np.atleast_1d(x))
    best = 0.0
    for a, c in zip(u.levels, u.cuts):
        if any(tuple(p) == x for p in c.points.tolist()):
            best = max(best, a)
    return best


def brute_directed_endograph(u: LevelFuzzySet, v: LevelFuzzySet, t_samples=1000) -> float:
    """sup over a densified end u of the exact distance to end v.

    Every vertical segment of end u is sampled at ``t_samples`` heights; the
    distance from (x, t) to end v is the minimum over the zero slab (t) and
    every segment {y} x [0, v(y)], computed by clamping.
    """
    if u.is_empty:
        return 0.0
    ys = v.support.points if not v.is_empty else np.empty((0, u.dim))
    vs = v.support_values if not v.is_empty else np.empty(0)
    best = 0.0
    for x, top in zip(u.support.points, u.support_values):
        t = np.linspace(0.0, top, t_samples)
        d = t.copy()
        if len(ys):
            dx2 = ((ys - x) ** 2).sum(axis=1)
            gap = np.maximum(0.0, t[:, None] - vs[None, :])
            d = np.minimum(d, np.sqrt(dx2[None, :] + gap ** 2).min(axis=1))
        best = max(best, float(d.max()))
    return best


def dist(x, y):
    return math.dist(x, y)

"""Closed-form sequence generators and seeded random class members.

Kinds
-----
gse
    1̂ on {0, n} in R^1, converging in Γ but not in H_end to 1̂ on {0}.
dphe
    Two-level step version of a sequence with membership 1 on [0, 1/n] and
    1/n on [1/n, n]; converges in H_end but not in d_p to 1̂ on {0}.
translate, shrink
    A base fuzzy number moved by shift/n, or scaled by 1 + scale/n about its
    core; both converge to the base in every sense.
random_E, random_S, random_USCG
    Seeded random members of the fuzzy numbers, fuzzy star-shaped numbers and
    general bounded USC fuzzy sets.
escaping_connected
    1̂ on a lattice sample of [n, n + 1]: connected cuts escaping to infinity.

Random shapes live on the lattice ``grid_spacing * Z^m``; nesting is exact
because cuts are built top-down by growing shapes and taking unions.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .fuzzy import LevelFuzzySet, crisp, empty_fuzzy, from_level_family
from .geometry import PointCloud, grid_points, interval_sample
from .io import fuzzy_from_dict

KINDS = ("gse", "dphe", "translate", "shrink", "random_E", "random_S",
         "random_USCG", "escaping_connected")

_ONE_DIM_ONLY = {"gse", "dphe", "escaping_connected"}
_BASE_STREAM = 0x5EED


class FamilyError(ValueError):
    pass


class NoClosedFormLimit(FamilyError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    dim: int = 1
    n_min: int = 1
    n_max: int = 100
    grid_spacing: float = 0.01
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FamilyError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.dim < 1:
            raise FamilyError("dim must be positive")
        if self.kind in _ONE_DIM_ONLY and self.dim != 1:
            raise FamilyError(f"kind {self.kind!r} lives in R^1")
        if not 1 <= self.n_min <= self.n_max:
            raise FamilyError(f"empty index range [{self.n_min}, {self.n_max}]")
        if not self.grid_spacing > 0:
            raise FamilyError("grid_spacing must be positive")

    @property
    def indices(self) -> range:
        return range(self.n_min, self.n_max + 1)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "FamilySpec":
        known = {"kind", "dim", "n_min", "n_max", "grid_spacing", "seed", "params"}
        extra = set(d) - known
        if extra:
            raise FamilyError(f"unknown FamilySpec fields: {sorted(extra)}")
        if "kind" not in d:
            raise FamilyError("FamilySpec needs a 'kind'")
        return cls(**d)


def _box(lower_cells, upper_cells, h: float) -> np.ndarray:
    return grid_points(np.asarray(lower_cells) * h, np.asarray(upper_cells) * h, h)


def _random_levels(rng: np.random.Generator, normal: bool = True) -> list[float]:
    k = int(rng.integers(1, 5))
    inner = sorted(set(np.round(rng.uniform(0.05, 0.95, size=k - 1), 6).tolist()))
    if normal:
        return inner + [1.0]
    top = float(np.round(rng.uniform(0.3, 1.0), 6))
    return [a for a in inner if a < top] + [top]


def random_fuzzy_number(rng: np.random.Generator, dim: int, h: float,
                        max_cells: int | None = None) -> LevelFuzzySet:
    """Nested lattice boxes with top level 1 (a fuzzy number).

    ``max_cells`` bounds the top box half-widths in lattice cells; by default
    2 up to the plane and 1 beyond, which keeps cuts around a hundred points.
    """
    if max_cells is None:
        max_cells = 2 if dim <= 2 else 1
    levels = _random_levels(rng)
    center = rng.integers(-max_cells, max_cells + 1, size=dim)
    lo = center - rng.integers(0, max_cells + 1, size=dim)
    hi = center + rng.integers(0, max_cells + 1, size=dim)
    cuts = []
    for _ in levels:
        cuts.append(_box(lo, hi, h))
        lo = lo - rng.integers(0, 2, size=dim)
        hi = hi + rng.integers(0, 2, size=dim)
    cuts.reverse()
    return from_level_family(dim, levels, [PointCloud(dim, c) for c in cuts])


def random_star_number(rng: np.random.Generator, dim: int, h: float,
                       max_cells: int | None = None) -> LevelFuzzySet:
    """Nested lattice crosses sharing a center cell (a fuzzy star-shaped number).

    In R^1 a cross is an interval, so this falls back to a fuzzy number.
    """
    if dim == 1:
        return random_fuzzy_number(rng, dim, h, max_cells)
    if max_cells is None:
        max_cells = 3 if dim <= 2 else 2
    levels = _random_levels(rng)
    center = rng.integers(-max_cells, max_cells + 1, size=dim)
    arm = rng.integers(1, max_cells + 1, size=(dim, 2))  # per axis, (down, up)
    width = rng.integers(0, 2, size=dim)
    cuts = []
    for _ in levels:
        pts = []
        for axis in range(dim):
            lo = center - width
            hi = center + width
            lo[axis] = center[axis] - arm[axis, 0]
            hi[axis] = center[axis] + arm[axis, 1]
            pts.append(_box(lo, hi, h))
        cuts.append(np.vstack(pts))
        arm = arm + rng.integers(0, 3, size=arm.shape)
    cuts.reverse()
    return from_level_family(dim, levels, [PointCloud(dim, c) for c in cuts])


def random_uscg(rng: np.random.Generator, dim: int) -> LevelFuzzySet:
    """Nested random clouds in [-1, 1]^m with random (not necessarily normal) levels."""
    levels = _random_levels(rng, normal=bool(rng.integers(0, 2)))
    acc = rng.uniform(-1, 1, size=(int(rng.integers(1, 5)), dim))
    cuts = []
    for i in range(len(levels)):
        cuts.append(acc)
        extra = rng.uniform(-1 - i, 1 + i, size=(int(rng.integers(0, 5)), dim))
        acc = np.vstack([acc, extra])
    cuts.reverse()
    return from_level_family(dim, levels, [PointCloud(dim, c) for c in cuts])


def _base(spec: FamilySpec) -> LevelFuzzySet:
    if "base" in spec.params:
        base = fuzzy_from_dict(spec.params["base"])
        if base.dim != spec.dim:
            raise FamilyError("base dimension differs from spec dim")
        return base
    rng = np.random.default_rng([spec.seed, _BASE_STREAM])
    return random_fuzzy_number(rng, spec.dim, spec.grid_spacing)


def _shift(spec: FamilySpec) -> np.ndarray:
    if "shift" in spec.params:
        s = np.asarray(spec.params["shift"], dtype=float).reshape(-1)
        if s.shape != (spec.dim,):
            raise FamilyError("shift must have dim coordinates")
        return s
    rng = np.random.default_rng([spec.seed, _BASE_STREAM + 1])
    v = rng.normal(size=spec.dim)
    return float(spec.params.get("shift_scale", 1.0)) * v / np.linalg.norm(v)


def _map_cuts(u: LevelFuzzySet, fn) -> LevelFuzzySet:
    return LevelFuzzySet(u.dim, u.levels, tuple(fn(c) for c in u.cuts))


def generate(spec: FamilySpec, n: int) -> LevelFuzzySet:
    """Member ``n`` of the family; a deterministic function of (spec, n)."""
    if not spec.n_min <= n <= spec.n_max:
        raise FamilyError(f"index {n} outside [{spec.n_min}, {spec.n_max}]")
    h = spec.grid_spacing
    kind = spec.kind
    if kind == "gse":
        return crisp(PointCloud.from_points([0.0, float(n)]))
    if kind == "dphe":
        top = interval_sample(0.0, 1.0 / n, h)
        if n == 1:
            return crisp(PointCloud(1, top))
        low = np.vstack([interval_sample(0.0, float(n), h), top])
        return from_level_family(1, [1.0 / n, 1.0], [PointCloud(1, low), PointCloud(1, top)])
    if kind == "translate":
        shift = _shift(spec) / n
        return _map_cuts(_base(spec), lambda c: c.translate(shift))
    if kind == "shrink":
        base = _base(spec)
        center = base.cuts[-1].points[0]
        factor = 1.0 + float(spec.params.get("scale", 1.0)) / n
        return _map_cuts(base, lambda c: c.scale_about(center, factor))
    if kind == "escaping_connected":
        return crisp(PointCloud(1, interval_sample(float(n), float(n) + 1.0, h)))
    rng = np.random.default_rng([spec.seed, n])
    if kind == "random_E":
        return random_fuzzy_number(rng, spec.dim, h)
    if kind == "random_S":
        return random_star_number(rng, spec.dim, h)
    return random_uscg(rng, spec.dim)


def generate_prefix(spec: FamilySpec) -> list[LevelFuzzySet]:
    return [generate(spec, n) for n in spec.indices]


def limit_of(spec: FamilySpec) -> LevelFuzzySet:
    """Closed-form limit of the family.

    For ``escaping_connected`` this is the Γ-limit (the empty fuzzy set); the
    sequence has no H_end limit.
    """
    if spec.kind in ("gse", "dphe"):
        return crisp(PointCloud.from_points([0.0]))
    if spec.kind in ("translate", "shrink"):
        return _base(spec)
    if spec.kind == "escaping_connected":
        return empty_fuzzy(1)
    raise NoClosedFormLimit(f"kind {spec.kind!r} has no closed-form limit")

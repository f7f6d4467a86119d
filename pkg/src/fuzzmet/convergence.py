"""Convergence diagnostics on finite sequence prefixes.

Limits become residual sequences.  Kuratowski convergence of closed sets
C_n -> C is witnessed by two residuals:

* the inner residual ``H*(C, C_n)`` (every point of C is a limit of points
  of C_n);
* the truncated outer residual ``H*(C_n & B(0, R), C)`` for each radius R
  (every cluster point of the C_n lies in C, while mass escaping to infinity
  is ignored).

Γ-convergence is Kuratowski convergence of endographs; it is checked both
directly on the endographs and level by level.  A residual sequence is
turned into a verdict by :func:`decay_verdict`.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ._parallel import pmap
from .fuzzy import (
    LevelFuzzySet,
    crisp,
    cut,
    first_disconnected_cut,
    platform_points,
    strong_cut,
)
from .geometry import (
    INF,
    DimensionMismatch,
    GeometryConfig,
    PointCloud,
    bounding_radius,
    directed_hausdorff,
    hausdorff,
)
from .metrics import directed_endograph, dp_metric, endograph_metric, sendograph_metric

DEFAULT_RADII = (1.0, 4.0, 16.0, 64.0)
DEFAULT_SPACING = 0.01


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"

    def __str__(self) -> str:
        return self.value


class ImplicationViolation(RuntimeError):
    """Observed verdicts contradict a known implication; this signals a defect in the code."""

    def __init__(self, report: "ImplicationReport"):
        self.report = report
        names = ", ".join(c.name for c in report.violations)
        super().__init__(f"implication violated: {names}")


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class SequencePrefix:
    """Finite prefix u_1, ..., u_N of a sequence, with its indices."""

    items: tuple
    indices: tuple = ()

    def __post_init__(self):
        items = tuple(crisp(x) if isinstance(x, PointCloud) else x for x in self.items)
        if not items:
            raise ValueError("a sequence prefix needs at least one item")
        dims = {x.dim for x in items}
        if len(dims) != 1:
            raise DimensionMismatch(f"mixed dimensions in sequence: {sorted(dims)}")
        indices = tuple(self.indices) or tuple(range(1, len(items) + 1))
        if len(indices) != len(items):
            raise ValueError("indices and items differ in length")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "indices", indices)

    @property
    def dim(self) -> int:
        return self.items[0].dim

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


def _as_prefix(seq) -> SequencePrefix:
    return seq if isinstance(seq, SequencePrefix) else SequencePrefix(tuple(seq))


def inner_residual(c: PointCloud, cn: PointCloud) -> float:
    """H*(C, C_n): how far C is from being covered by C_n."""
    return directed_hausdorff(c, cn)


def truncated_outer_residual(cn: PointCloud, c: PointCloud, radius: float) -> float:
    """H*(C_n restricted to B(0, radius), C); 0 when the restriction is empty."""
    if cn.dim != c.dim:
        raise DimensionMismatch(f"dimension mismatch: {cn.dim} vs {c.dim}")
    return directed_hausdorff(cn.within_ball(radius), c)


def default_alpha_grid(u: LevelFuzzySet) -> list[float]:
    """Midpoints between consecutive values of {0, levels of u, 1}."""
    knots = sorted({0.0, 1.0, *u.levels})
    return [(lo + hi) / 2 for lo, hi in zip(knots, knots[1:])]


def admissible_grid(u: LevelFuzzySet, alpha_grid: Iterable[float] | None) -> list[float]:
    """Grid levels in (0, 1), with the platform points of ``u`` removed."""
    if alpha_grid is None:
        alpha_grid = default_alpha_grid(u)
    banned = set(platform_points(u))
    grid = sorted({float(a) for a in alpha_grid if 0.0 < a < 1.0 and float(a) not in banned})
    if not grid:
        raise ValueError("alpha grid is empty after removing platform points")
    return grid


# ---------------------------------------------------------------------------
# residual tables


@dataclass(frozen=True)
class ResidualRow:
    n: int
    alpha: float
    a_n: float
    b_n: tuple  # one entry per radius
    h_cut: float


@dataclass(frozen=True)
class ResidualTable:
    radii: tuple
    alphas: tuple
    rows: tuple
    hend: dict = field(default_factory=dict)
    dp: dict = field(default_factory=dict)
    send: dict = field(default_factory=dict)
    p: float = 1.0

    @cached_property
    def _by_alpha(self) -> dict:
        out = {}
        for row in self.rows:
            out.setdefault(row.alpha, []).append(row)
        return out

    def column(self, alpha: float, name: str, radius: float | None = None) -> list[float]:
        """Residual sequence over n for one level; ``name`` is a_n, b_n or h_cut."""
        out = []
        for row in self._by_alpha.get(alpha, []):
            if name == "b_n":
                out.append(row.b_n[self.radii.index(radius)])
            else:
                out.append(getattr(row, name))
        return out

    @property
    def indices(self) -> list[int]:
        return sorted(self.hend)

    def header(self) -> list[str]:
        return (["n", "alpha", "a_n"] + [f"b_n@{_fmt_radius(r)}" for r in self.radii]
                + ["H_cut", "H_end", "d_p", "sendograph"])

    def to_csv(self, fh=None) -> str | None:
        """Write the table as CSV to ``fh`` (or return it as a string)."""
        target = io.StringIO() if fh is None else fh
        w = csv.writer(target, lineterminator="\n")
        w.writerow(self.header())
        for row in self.rows:
            w.writerow([row.n, _fmt(row.alpha), _fmt(row.a_n), *map(_fmt, row.b_n),
                        _fmt(row.h_cut), _fmt(self.hend[row.n]), _fmt(self.dp[row.n]),
                        _fmt(self.send[row.n])])
        return target.getvalue() if fh is None else None


def _fmt(x: float) -> str:
    return "inf" if x == INF else repr(float(x))


def _fmt_radius(r: float) -> str:
    return str(int(r)) if float(r).is_integer() else repr(float(r))


def gamma_residual_table(seq, u: LevelFuzzySet, alpha_grid=None,
                         radii: Sequence[float] = DEFAULT_RADII, p: float = 1.0,
                         threads: int | None = None) -> ResidualTable:
    """Per-index, per-level Kuratowski residuals of the cuts of ``seq`` against ``u``.

    The inner target at level a is the strong cut {u > a} and the outer target
    the closed cut; they agree off the platform points, which are removed
    from the grid.
    """
    seq = _as_prefix(seq)
    if seq.dim != u.dim:
        raise DimensionMismatch(f"dimension mismatch: {seq.dim} vs {u.dim}")
    grid = admissible_grid(u, alpha_grid)
    radii = tuple(float(r) for r in radii)
    targets = [(a, strong_cut(u, a), cut(u, a)) for a in grid]

    def one(item):
        n, un = item
        rows, seen = [], {}
        for a, inner_t, outer_t in targets:
            cn = cut(un, a)
            # cuts are shared objects, so levels in one step interval reuse work
            key = (id(cn), id(inner_t), id(outer_t))
            if key not in seen:
                seen[key] = (inner_residual(inner_t, cn),
                             tuple(truncated_outer_residual(cn, outer_t, r) for r in radii),
                             hausdorff(cn, outer_t))
            a_n, b_n, h_cut = seen[key]
            rows.append(ResidualRow(n=n, alpha=a, a_n=a_n, b_n=b_n, h_cut=h_cut))
        return rows, endograph_metric(un, u), dp_metric(un, u, p), sendograph_metric(un, u)

    results = pmap(one, zip(seq.indices, seq.items), threads)
    rows, hend, dp, send = [], {}, {}, {}
    for n, (r, h, d, s) in zip(seq.indices, results):
        rows.extend(r)
        hend[n], dp[n], send[n] = h, d, s
    return ResidualTable(radii, tuple(grid), tuple(rows), hend, dp, send, float(p))


@dataclass(frozen=True)
class HendResiduals:
    hend: list
    per_level: dict  # alpha -> list over n of H(cut(u_n, alpha), cut(u, alpha))

    def level_max(self) -> list[float]:
        cols = list(self.per_level.values())
        return [max(vals) for vals in zip(*cols)]


def hend_residuals(seq, u: LevelFuzzySet, alpha_grid=None,
                   threads: int | None = None) -> HendResiduals:
    seq = _as_prefix(seq)
    grid = admissible_grid(u, alpha_grid)
    hend = pmap(lambda un: endograph_metric(un, u), seq.items, threads)
    targets = {a: cut(u, a) for a in grid}
    seen = {}

    def h(un, a):
        cn, c = cut(un, a), targets[a]
        key = (id(cn), id(c))
        if key not in seen:
            seen[key] = hausdorff(cn, c)
        return seen[key]

    per_level = {}
    for a in grid:
        per_level[a] = [h(un, a) for un in seq.items]
    return HendResiduals(hend, per_level)


@dataclass(frozen=True)
class EndographResiduals:
    """Kuratowski residuals of endographs: the direct Γ witness."""

    inner: list
    outer: dict  # radius -> list over n


def endograph_gamma_residuals(seq, u: LevelFuzzySet, radii: Sequence[float] = DEFAULT_RADII,
                              threads: int | None = None) -> EndographResiduals:
    seq = _as_prefix(seq)
    inner = pmap(lambda un: directed_endograph(u, un), seq.items, threads)
    outer = {float(r): pmap(lambda un, r=r: directed_endograph(un, u, radius=r), seq.items, threads)
             for r in radii}
    return EndographResiduals(inner, outer)


def boundedness_profile(seq, alpha_grid: Iterable[float]) -> dict:
    """Per level, the bounding radius of the union over the prefix of the cuts."""
    seq = _as_prefix(seq)
    return {float(a): max(bounding_radius(cut(un, a)) for un in seq.items) for a in alpha_grid}


def running_profile(seq, alpha: float) -> list[float]:
    """Bounding radius of the union of the first N cuts, for N = 1..len(seq)."""
    seq = _as_prefix(seq)
    radii = np.array([bounding_radius(cut(un, alpha)) for un in seq.items])
    return np.maximum.accumulate(radii).tolist()


# ---------------------------------------------------------------------------
# verdicts


def decay_threshold(spacing: float = DEFAULT_SPACING) -> float:
    return 10.0 * spacing


def decay_verdict(values: Sequence[float], threshold: float) -> Verdict:
    """Decide whether a residual sequence tends to 0 from a finite prefix.

    YES when the last quarter stays below ``threshold`` or when the second
    half is nonincreasing and at least halves; NO when the last quarter stays
    above ``threshold``; INCONCLUSIVE otherwise.
    """
    r = np.asarray(values, dtype=float)
    if len(r) == 0:
        raise ValueError("empty residual sequence")
    tail = r[(3 * len(r)) // 4:] if len(r) >= 4 else r[-1:]
    if tail.max() <= threshold:
        return Verdict.YES
    half = r[(len(r) - 1) // 2:]
    if (len(half) >= 2 and np.all(np.isfinite(half)) and np.all(np.diff(half) <= 0)
            and half[-1] <= 0.5 * half[0]):
        return Verdict.YES
    if tail.min() > threshold:
        return Verdict.NO
    return Verdict.INCONCLUSIVE


def combine(verdicts: Iterable[Verdict]) -> Verdict:
    """Conjunction: NO if any NO, YES if all YES, INCONCLUSIVE otherwise."""
    vs = list(verdicts)
    if any(v is Verdict.NO for v in vs):
        return Verdict.NO
    if all(v is Verdict.YES for v in vs):
        return Verdict.YES
    return Verdict.INCONCLUSIVE


def growth_verdict(running: Sequence[float], threshold: float) -> Verdict:
    """YES (bounded) when the running radius stops growing over the last quarter."""
    r = np.asarray(running, dtype=float)
    ref = r[(3 * len(r)) // 4 - 1] if len(r) >= 4 else r[0]
    return Verdict.YES if r[-1] - ref <= threshold else Verdict.NO


def boundedness_verdict(seq, alpha_grid: Iterable[float], threshold: float) -> Verdict:
    return combine(growth_verdict(running_profile(seq, a), threshold) for a in alpha_grid)


def gamma_verdict(res: EndographResiduals, threshold: float) -> Verdict:
    return combine([decay_verdict(res.inner, threshold),
                    *(decay_verdict(v, threshold) for v in res.outer.values())])


def level_gamma_verdict(table: ResidualTable, threshold: float,
                        radii: Sequence[float] | None = None) -> Verdict:
    radii = table.radii if radii is None else tuple(float(r) for r in radii)
    parts = []
    for a in table.alphas:
        parts.append(decay_verdict(table.column(a, "a_n"), threshold))
        parts.extend(decay_verdict(table.column(a, "b_n", r), threshold) for r in radii)
    return combine(parts)


@dataclass(frozen=True)
class Check:
    name: str
    holds: bool


@dataclass(frozen=True)
class ImplicationReport:
    dp: Verdict
    hend: Verdict
    gamma: Verdict
    gamma_levels: Verdict
    hend_levels: Verdict
    bounded: Verdict
    support_bounded: Verdict
    checks: tuple

    @property
    def violations(self) -> list[Check]:
        return [c for c in self.checks if not c.holds]

    def to_dict(self) -> dict:
        return {
            "dp": str(self.dp), "hend": str(self.hend), "gamma": str(self.gamma),
            "gamma_levels": str(self.gamma_levels), "hend_levels": str(self.hend_levels),
            "bounded": str(self.bounded), "support_bounded": str(self.support_bounded),
            "checks": {c.name: c.holds for c in self.checks},
        }


def _implies(p: Verdict, q: Verdict) -> bool:
    return not (p is Verdict.YES and q is Verdict.NO)


def _agree(p: Verdict, q: Verdict) -> bool:
    return Verdict.INCONCLUSIVE in (p, q) or p is q


def implication_report(seq, u: LevelFuzzySet, alpha_grid=None,
                       radii: Sequence[float] = DEFAULT_RADII, p: float = 1.0,
                       spacing: float = DEFAULT_SPACING, strict: bool = True,
                       threads: int | None = None) -> ImplicationReport:
    """Verdicts for d_p, H_end and Γ convergence, checked against the known implications.

    Checked relations: d_p => H_end => Γ; H_end <=> (Γ and bounded cuts);
    Γ <=> level-wise Kuratowski convergence; H_end <=> level-wise Hausdorff
    convergence; Γ with bounded supports => d_p.  With ``strict`` a
    violation raises :class:`ImplicationViolation`.
    """
    seq = _as_prefix(seq)
    theta = decay_threshold(spacing)
    grid = admissible_grid(u, alpha_grid)
    table = gamma_residual_table(seq, u, grid, radii, p, threads)
    n_order = list(seq.indices)
    hend_seq = [table.hend[n] for n in n_order]
    dp_seq = [table.dp[n] for n in n_order]
    level_h = [max(vals) for vals in zip(*(table.column(a, "h_cut") for a in grid))]

    v_dp = decay_verdict(dp_seq, theta)
    v_hend = decay_verdict(hend_seq, theta)
    v_gamma = gamma_verdict(endograph_gamma_residuals(seq, u, radii, threads), theta)
    v_gamma_lv = level_gamma_verdict(table, theta)
    v_hend_lv = decay_verdict(level_h, theta)
    v_bounded = boundedness_verdict(seq, grid, theta)
    v_supp = growth_verdict(running_profile(seq, 0.0), theta)

    checks = (
        Check("dp => hend", _implies(v_dp, v_hend)),
        Check("hend => gamma", _implies(v_hend, v_gamma)),
        Check("hend <=> gamma and bounded",
              _implies(v_hend, combine([v_gamma, v_bounded]))
              and _implies(combine([v_gamma, v_bounded]), v_hend)),
        Check("gamma <=> level kuratowski", _agree(v_gamma, v_gamma_lv)),
        Check("hend <=> level hausdorff", _agree(v_hend, v_hend_lv)),
        Check("gamma and bounded support => dp",
              _implies(combine([v_gamma, v_supp]), v_dp)),
    )
    report = ImplicationReport(v_dp, v_hend, v_gamma, v_gamma_lv, v_hend_lv,
                               v_bounded, v_supp, checks)
    if strict and report.violations:
        raise ImplicationViolation(report)
    return report


@dataclass(frozen=True)
class ConnectedVerdict:
    gamma: Verdict
    hend: Verdict

    @property
    def equal(self) -> bool:
        return self.gamma is self.hend


def gamma_equals_hend_on_connected(seq, u: LevelFuzzySet,
                                   radii: Sequence[float] = DEFAULT_RADII,
                                   cfg: GeometryConfig | None = None,
                                   spacing: float = DEFAULT_SPACING,
                                   check_connected: bool = True,
                                   threads: int | None = None) -> ConnectedVerdict:
    """Γ and H_end verdicts for a sequence whose members all have connected cuts.

    With a nonempty candidate the two verdicts must coincide; the outcome is
    reported through :attr:`ConnectedVerdict.equal`.  ``check_connected=False``
    skips the precondition so the same computation can be run on
    disconnected families, where the verdicts may differ.
    """
    seq = _as_prefix(seq)
    if u.is_empty:
        raise PreconditionError("candidate limit must be nonempty")
    cfg = GeometryConfig.for_spacing(spacing) if cfg is None else cfg
    if check_connected:
        for n, un in zip(seq.indices, seq.items):
            lvl = first_disconnected_cut(un, cfg)
            if lvl is not None:
                raise PreconditionError(f"item n={n} has a disconnected cut at level {lvl!r}")
    theta = decay_threshold(spacing)
    v_gamma = gamma_verdict(endograph_gamma_residuals(seq, u, radii, threads), theta)
    v_hend = decay_verdict(pmap(lambda un: endograph_metric(un, u), seq.items, threads), theta)
    return ConnectedVerdict(v_gamma, v_hend)


import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzmet.families import FamilySpec, generate, limit_of
from fuzzmet.fuzzy import crisp, cut, empty_fuzzy, from_level_family
from fuzzmet.geometry import INF, DimensionMismatch, PointCloud, bounding_radius, hausdorff
from fuzzmet.metrics import (
    ball_fuzzy,
    directed_endograph,
    directed_sendograph,
    dp_integral,
    dp_metric,
    endograph_metric,
    join,
    point_to_endograph,
    r_excess,
    sendograph_metric,
)

from helpers import brute_directed_endograph, random_step_set, step_sets

pc = PointCloud.from_points


def riemann_dp_integral(u, v, p, n=100):
    """Midpoint rule on a grid of width 1/n; exact when all levels are multiples of 1/n."""
    total = 0.0
    for j in range(n):
        a = (j + 0.5) / n
        total += hausdorff(cut(u, a), cut(v, a)) ** p / n
    return total


# --- point_to_endograph ---------------------------------------------------

def test_point_inside_endograph():
    v = from_level_family(1, [0.5, 1.0], [[0, 1], [0]])
    assert point_to_endograph([1], 0.5, v) == 0.0
    assert point_to_endograph([0], 1.0, v) == 0.0


def test_point_to_empty_endograph_is_height():
    assert point_to_endograph([3], 0.7, empty_fuzzy(1)) == 0.7


@pytest.mark.parametrize("n", [1, 2, 10])
def test_point_above_far_support(n):
    assert point_to_endograph([n], 1.0, crisp(pc([0]))) == 1.0


def test_point_to_endograph_closed_form():
    v = from_level_family(1, [0.5, 1.0], [[0, 1], [0]])
    # nearest point of end v to (1, 1) is the top of the segment over 1
    assert point_to_endograph([1], 1.0, v) == pytest.approx(min(1.0, 0.5, 1.0))
    # (0.3, 0.2): zero slab at distance 0.2 beats the segments
    assert point_to_endograph([0.3], 0.2, v) == pytest.approx(0.2)
    with pytest.raises(ValueError):
        point_to_endograph([0], 1.5, v)


# --- endograph metric -----------------------------------------------------

@pytest.mark.parametrize("n", [1, 3, 50])
def test_two_point_sequence_has_unit_distance(n):
    un = crisp(pc([0, n]))
    u = crisp(pc([0]))
    assert endograph_metric(un, u) == 1.0
    assert endograph_metric(u, u) == 0.0


def test_crisp_identity_examples():
    rng = np.random.default_rng(1)
    for _ in range(30):
        dim = int(rng.integers(1, 4))
        D = PointCloud(dim, rng.uniform(-1, 1, size=(int(rng.integers(1, 30)), dim)))
        G = PointCloud(dim, rng.uniform(-1, 1, size=(int(rng.integers(1, 30)), dim)))
        assert abs(endograph_metric(crisp(D), crisp(G)) - min(hausdorff(D, G), 1.0)) <= 1e-12


def test_endograph_with_empty():
    u = from_level_family(1, [0.3, 0.8], [[0, 1], [0]])
    assert endograph_metric(u, empty_fuzzy(1)) == 0.8
    assert endograph_metric(empty_fuzzy(1), empty_fuzzy(1)) == 0.0
    with pytest.raises(DimensionMismatch):
        endograph_metric(u, empty_fuzzy(2))


def test_directed_endograph_radius_restriction():
    un = crisp(pc([0, 5]))
    u = crisp(pc([0]))
    assert directed_endograph(un, u) == 1.0
    assert directed_endograph(un, u, radius=4.0) == 0.0
    assert directed_endograph(un, u, radius=5.0) == 1.0


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(step_sets(d), step_sets(d))))
def test_endograph_bounded_and_zero_iff_equal(uv):
    u, v = uv
    d = endograph_metric(u, v)
    assert 0.0 <= d <= 1.0
    assert (d == 0.0) == u.same_function(v)
    assert d == endograph_metric(v, u)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(step_sets(d, max_points=4),
                                                    step_sets(d, max_points=4))))
def test_closed_form_dominates_densified_oracle(uv):
    u, v = uv
    closed = directed_endograph(u, v)
    dense = brute_directed_endograph(u, v, t_samples=200)
    assert dense <= closed + 1e-12
    assert dense == pytest.approx(closed, abs=1e-12)  # the top sample is included


# --- sendograph -----------------------------------------------------------

@pytest.mark.parametrize("n", [1, 4, 30])
def test_sendograph_two_point_sequence(n):
    assert sendograph_metric(crisp(pc([0, n])), crisp(pc([0]))) == n


def test_sendograph_examples():
    rng = np.random.default_rng(2)
    for _ in range(20):
        D = PointCloud(2, rng.uniform(-3, 3, size=(5, 2)))
        G = PointCloud(2, rng.uniform(-3, 3, size=(7, 2)))
        assert sendograph_metric(crisp(D), crisp(G)) == pytest.approx(hausdorff(D, G), rel=1e-12)
    u = crisp(pc([0]))
    assert sendograph_metric(u, u) == 0.0
    assert sendograph_metric(u, empty_fuzzy(1)) == INF
    assert sendograph_metric(empty_fuzzy(1), empty_fuzzy(1)) == 0.0
    assert directed_sendograph(empty_fuzzy(1), u) == 0.0


def test_sendograph_splits_into_endograph_and_support():
    """On translates: send -> 0 with H_end and support distance; on two-point sets it diverges."""
    spec = FamilySpec("translate", dim=2, seed=4, n_max=40)
    u = limit_of(spec)
    send = [sendograph_metric(generate(spec, n), u) for n in (10, 20, 40)]
    assert send == sorted(send, reverse=True) and send[-1] < 0.05
    gse = [sendograph_metric(crisp(pc([0, n])), crisp(pc([0]))) for n in (10, 20, 40)]
    assert gse == [10, 20, 40]


# --- d_p ------------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3, 10, 50])
@pytest.mark.parametrize("p", [1.0, 2.0, 3.5])
def test_dp_step_analogue_interval_sum(n, p):
    spec = FamilySpec("dphe")
    un, u = generate(spec, n), limit_of(spec)
    want = (1 / n) * n ** p + (1 - 1 / n) * (1 / n) ** p
    assert dp_integral(un, u, p) == pytest.approx(want, rel=1e-12)
    assert dp_metric(un, u, p) == pytest.approx(want ** (1 / p), rel=1e-12)
    assert dp_integral(un, u, p) >= 1.0


def test_dp_hand_computed_value():
    spec = FamilySpec("dphe")
    # H = 2 on (0, 1/2], H = 1/2 on (1/2, 1]
    assert dp_integral(generate(spec, 2), limit_of(spec), 2.0) == pytest.approx(2.125, rel=1e-15)


def test_dp_examples():
    u = from_level_family(1, [0.5, 1.0], [[0, 1], [0]])
    assert dp_metric(u, u, 1.0) == 0.0
    D, G = pc([0, 1, 5]), pc([2])
    assert dp_metric(crisp(D), crisp(G), 2.0) == pytest.approx(hausdorff(D, G))
    assert dp_metric(u, crisp(pc([0])), 1.0) == pytest.approx(0.5)


def test_dp_one_sided_empty_is_infinite():
    u = from_level_family(1, [0.5], [[0]])
    v = crisp(pc([0]))
    assert dp_metric(u, v) == INF
    assert dp_metric(empty_fuzzy(1), v) == INF
    assert dp_metric(empty_fuzzy(1), empty_fuzzy(1)) == 0.0


def test_dp_rejects_small_p():
    u = crisp(pc([0]))
    with pytest.raises(ValueError):
        dp_metric(u, u, 0.5)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(step_sets(d, allow_empty=False),
                                                    step_sets(d, allow_empty=False))),
       st.sampled_from([1.0, 2.0, 3.0]))
def test_dp_matches_riemann_oracle(uv, p):
    u, v = uv
    got = dp_integral(u, v, p)
    want = riemann_dp_integral(u, v, p)
    if want == INF:
        assert got == INF
    else:
        assert got == pytest.approx(want, rel=1e-9, abs=1e-12)


# --- ball, join, r-excess -------------------------------------------------

def test_ball_fuzzy_examples():
    b = ball_fuzzy(1.0, 1, 0.5)
    assert b.support.points.ravel().tolist() == [-1, -0.5, 0, 0.5, 1]
    assert set(b.support_values.tolist()) == {1.0}
    b2 = ball_fuzzy(2.0, 2)
    assert bounding_radius(b2.support) <= 2.0 + 1e-12
    assert len(b2.support) > 1
    with pytest.raises(ValueError):
        ball_fuzzy(0.0, 1)


def test_join_examples():
    u = from_level_family(1, [0.5, 1.0], [[0, 1], [0]])
    assert join(u, empty_fuzzy(1)) == u
    assert join(u, u) == u
    j = join(crisp(pc([0])), crisp(pc([1])))
    assert j.levels == (1.0,) and cut(j, 1.0) == pc([0, 1])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(step_sets(d), step_sets(d))))
def test_join_is_pointwise_max(uv):
    u, v = uv
    j = join(u, v)
    for x in j.support.points:
        assert j.membership(x) == max(u.membership(x), v.membership(x))


def test_r_excess_examples():
    r = 2.0
    inside = from_level_family(1, [0.4, 1.0], [[-1, 0.5], [0.5]])
    assert r_excess(inside, r, 0.5) == 0.0
    out = crisp(pc([r + 2]))
    e = r_excess(out, r, 0.5)
    assert 0 < e <= 1.0
    assert e == 1.0  # the escaped point is two units from the ball


def test_r_excess_is_monotone_in_radius():
    rng = np.random.default_rng(3)
    for _ in range(20):
        u = random_step_set(rng, 2, scale=4.0)
        vals = [r_excess(u, r, 0.25) for r in (1.0, 2.0, 3.0, 6.0)]
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))
        # support inside the ball: only the lattice covering radius remains
        assert vals[-1] <= 0.25 * math.sqrt(2) / 2 + 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 2).flatmap(lambda d: st.tuples(step_sets(d), step_sets(d))))
def test_r_excess_lipschitz(uv):
    u, v = uv
    ball = ball_fuzzy(1.0, u.dim, 0.25)
    lhs = abs(r_excess(u, 1.0, ball=ball) - r_excess(v, 1.0, ball=ball))
    assert lhs <= endograph_metric(u, v) + 1e-9

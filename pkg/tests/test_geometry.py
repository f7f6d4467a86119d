import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzmet.geometry import (
    INF,
    DimensionMismatch,
    GeometryConfig,
    PointCloud,
    bounding_radius,
    directed_hausdorff,
    grid_points,
    hausdorff,
    interval_sample,
    is_connected,
    is_convex_sample,
    is_star_shaped,
    is_star_shaped_about,
    kernel,
    nearest_distances,
    segment_sample,
)

pc = PointCloud.from_points


def brute_directed(a, b):
    if not a:
        return 0.0
    if not b:
        return INF
    return max(min(math.dist(x, y) for y in b) for x in a)


def clouds(dim, min_size=0, max_size=12):
    # rounded so squared differences never underflow
    coords = st.floats(-5, 5, allow_nan=False, allow_infinity=False).map(lambda v: round(v, 6))
    return st.lists(st.tuples(*[coords] * dim), min_size=min_size, max_size=max_size).map(
        lambda pts: PointCloud(dim, np.array(pts).reshape(-1, dim)))


# --- PointCloud -----------------------------------------------------------

def test_cloud_dedups_and_sorts():
    c = pc([[1, 0], [0, 0], [1, 0]])
    assert len(c) == 2
    assert c.points.tolist() == [[0, 0], [1, 0]]
    assert not c.points.flags.writeable


def test_cloud_equality_is_set_equality():
    assert pc([3, 1, 2]) == pc([2, 3, 1, 1])
    assert hash(pc([3, 1])) == hash(pc([1, 3]))
    assert pc([-0.0]) == pc([0.0])
    assert pc([1.0]) != pc([[1.0, 0.0]])


def test_cloud_rejects_bad_input():
    with pytest.raises(DimensionMismatch):
        PointCloud(2, [[1, 2, 3]])
    with pytest.raises(ValueError):
        PointCloud(1, [[math.inf]])
    with pytest.raises(ValueError):
        PointCloud(0, [])
    with pytest.raises(ValueError):
        pc([])


def test_empty_cloud():
    e = PointCloud.empty(3)
    assert e.is_empty and len(e) == 0 and not e
    assert e.points.shape == (0, 3)


def test_set_operations():
    a, b = pc([0, 1, 2]), pc([1, 2, 3])
    assert a.union(b) == pc([0, 1, 2, 3])
    assert a.intersection(b) == pc([1, 2])
    assert pc([1]).issubset(a) and not b.issubset(a)
    assert 2.0 in a and 5.0 not in a
    assert a.within_ball(1.0) == pc([0, 1])
    assert a.translate([1]) == pc([1, 2, 3])
    assert a.scale_about([0], 2.0) == pc([0, 2, 4])
    with pytest.raises(DimensionMismatch):
        a.union(PointCloud.empty(2))


# --- distances ------------------------------------------------------------

def test_directed_hausdorff_examples():
    assert directed_hausdorff(pc([0, 1]), pc([0.5])) == 0.5
    a = pc([[0, 0], [1, 2]])
    assert directed_hausdorff(a, a) == 0.0
    assert directed_hausdorff(pc([0]), PointCloud.empty(1)) == INF
    assert directed_hausdorff(PointCloud.empty(1), pc([0])) == 0.0


def test_hausdorff_examples():
    for n in (1, 7, 50):
        assert hausdorff(pc([0, n]), pc([0])) == n
    assert hausdorff(PointCloud.empty(2), PointCloud.empty(2)) == 0.0
    assert hausdorff(pc([[0, 0]]), pc([[3, 4]])) == 5.0
    with pytest.raises(DimensionMismatch):
        hausdorff(pc([0]), pc([[0, 0]]))


def test_bounding_radius_examples():
    assert bounding_radius(pc([[3, 4]])) == 5.0
    assert bounding_radius(PointCloud.empty(2)) == 0.0
    assert bounding_radius(pc([0, 9])) == 9.0


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_kdtree_matches_brute_force(dim):
    rng = np.random.default_rng(dim)
    for _ in range(10):
        a = PointCloud(dim, rng.normal(size=(int(rng.integers(1, 300)), dim)))
        b = PointCloud(dim, rng.normal(size=(int(rng.integers(1, 300)), dim)))
        brute = nearest_distances(a, b, method="brute")
        tree = nearest_distances(a, b, method="kdtree")
        np.testing.assert_allclose(tree, brute, rtol=1e-12, atol=1e-15)


def test_nearest_distances_rejects_unknown_method():
    with pytest.raises(ValueError):
        nearest_distances(pc([0]), pc([1]), method="magic")


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(clouds(d), clouds(d))))
def test_directed_matches_pairwise_oracle(ab):
    a, b = ab
    got = directed_hausdorff(a, b)
    want = brute_directed(a.points.tolist(), b.points.tolist())
    if want == INF:
        assert got == INF
    else:
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(clouds(d, 1), clouds(d, 1), clouds(d, 1))))
def test_hausdorff_is_a_metric(abc):
    a, b, c = abc
    assert hausdorff(a, a) == 0.0
    assert hausdorff(a, b) == hausdorff(b, a)
    assert (hausdorff(a, b) == 0.0) == (a == b)
    assert hausdorff(a, c) <= (hausdorff(a, b) + hausdorff(b, c)) * (1 + 1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(clouds(d), clouds(d))))
def test_zero_directed_iff_containment(ab):
    a, b = ab
    assert (directed_hausdorff(a, b) == 0.0) == a.issubset(b)
    assert directed_hausdorff(a, a.union(b)) == 0.0


# --- predicates -----------------------------------------------------------

def union_find_components(points, radius):
    parent = list(range(len(points)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(len(points)), 2):
        if math.dist(points[i], points[j]) <= radius:
            parent[find(i)] = find(j)
    return len({find(i) for i in range(len(points))})


def test_connectivity_examples():
    cfg = GeometryConfig(0.02, 0.15, 64)
    assert is_connected(pc([0, 0.1, 0.2]), cfg)
    assert not is_connected(pc([0, 5]), GeometryConfig(0.02, 4.9, 64))
    assert is_connected(pc([7]))
    assert is_connected(PointCloud.empty(2))


def test_connectivity_matches_union_find():
    rng = np.random.default_rng(11)
    for _ in range(40):
        dim = int(rng.integers(1, 4))
        pts = rng.uniform(0, 1, size=(int(rng.integers(2, 25)), dim))
        r = float(rng.uniform(0.1, 0.6))
        cloud = PointCloud(dim, pts)
        want = union_find_components(cloud.points.tolist(), r) == 1
        assert is_connected(cloud, GeometryConfig(0.02, r, 8)) == want


def test_connectivity_radius_is_inclusive():
    assert is_connected(pc([0.0, 0.02]), GeometryConfig.for_spacing(0.01))


def test_convexity_examples():
    cfg = GeometryConfig.for_spacing(0.01)
    assert is_convex_sample(PointCloud(1, interval_sample(0, 1, 0.01)), cfg)
    assert not is_convex_sample(pc([0, 1]), GeometryConfig(0.01, 0.01, 64))
    assert is_convex_sample(PointCloud.empty(1))
    assert is_convex_sample(pc([[1, 2]]))


def l_shape(h=0.05):
    horiz = grid_points([0, 0], [1, 0.2], h)
    vert = grid_points([0, 0], [0.2, 1], h)
    return PointCloud(2, np.vstack([horiz, vert]))


L_CFG = GeometryConfig(0.04, 0.1, 16)  # tol just above the lattice covering radius


def brute_star_about(a, x, cfg):
    lam = np.linspace(0, 1, cfg.segment_samples)[1:-1]
    q = x[None, None, :] + lam[None, :, None] * (a.points - x)[:, None, :]
    q = q.reshape(-1, a.dim)
    d = np.sqrt(((q[:, None, :] - a.points[None, :, :]) ** 2).sum(axis=2)).min(axis=1)
    return bool(np.all(d <= cfg.tol_membership * (1 + 1e-9)))


def test_star_examples():
    cfg = GeometryConfig.for_spacing(0.1, segment_samples=16)
    box = PointCloud(2, grid_points([0, 0], [0.5, 0.5], 0.1))
    assert all(is_star_shaped_about(box, x, cfg) for x in box.points)
    assert is_star_shaped_about(l_shape(), [0.0, 0.0], L_CFG)
    assert not is_star_shaped_about(l_shape(), [1.0, 0.0], L_CFG)
    assert not is_star_shaped_about(pc([0, 5]), [0.0], GeometryConfig(0.02, 0.02, 64))
    assert not is_star_shaped_about(pc([0, 1]), [0.5], cfg)  # uncovered center


def test_kernel_examples():
    cfg = GeometryConfig.for_spacing(0.1, segment_samples=16)
    box = PointCloud(2, grid_points([0, 0], [0.5, 0.5], 0.1))
    assert kernel(box, cfg) == box
    L = l_shape()
    k = kernel(L, L_CFG)
    assert not k.is_empty and k.issubset(L)
    # only points near the corner square see both arm tips
    assert np.all(k.points <= 0.2 + L_CFG.tol_membership)
    want = [x for x in L.points if brute_star_about(L, x, L_CFG)]
    assert k == PointCloud(2, np.array(want))
    assert kernel(pc([0, 5]), GeometryConfig(0.02, 0.02, 64)).is_empty
    assert not is_star_shaped(pc([0, 5]))


def test_kernel_of_grid_sample_is_convex():
    k = kernel(l_shape(), L_CFG)
    assert is_convex_sample(k, L_CFG)


def test_geometry_config_validation():
    assert GeometryConfig() == GeometryConfig(0.02, 0.02, 64)
    assert GeometryConfig.for_spacing(0.05) == GeometryConfig(0.1, 0.1, 64)
    with pytest.raises(ValueError):
        GeometryConfig(0.0, 1.0, 64)
    with pytest.raises(ValueError):
        GeometryConfig(1.0, 1.0, 1)


# --- samplers -------------------------------------------------------------

def test_grid_points_are_lattice_multiples():
    g = grid_points([-0.25, 0], [0.25, 0.1], 0.1)
    assert g.shape == (5 * 2, 2)
    assert np.all(np.isin(np.round(g[:, 0] / 0.1), [-2, -1, 0, 1, 2]))
    # shared points between boxes are bitwise equal
    a = PointCloud(2, grid_points([0, 0], [0.3, 0.3], 0.01))
    b = PointCloud(2, grid_points([0.1, 0.1], [0.5, 0.5], 0.01))
    assert len(a.intersection(b)) == 21 * 21


def test_interval_and_segment_samples():
    s = interval_sample(0, 1, 0.25)
    assert s.ravel().tolist() == [0, 0.25, 0.5, 0.75, 1]
    assert interval_sample(2, 2, 0.1).ravel().tolist() == [2, 2]
    with pytest.raises(ValueError):
        interval_sample(1, 0, 0.1)
    seg = segment_sample([0, 0], [1, 2], 3)
    assert seg.tolist() == [[0, 0], [0.5, 1], [1, 2]]

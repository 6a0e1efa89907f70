import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hrvtail.errors import InsideForbiddenZone, InvalidWedge, OutOfDomain, OutOfRangeAngle, ZeroPoint
from hrvtail.geometry import (
    Branch,
    Wedge,
    diamond_array,
    dist_to_wedge,
    gpolar,
    gpolar_array,
    gpolar_inverse,
    l1_polar,
    region_filter_upper,
    to_diamond,
    wedge_distances,
    wedge_from_angles,
)

W = Wedge(0.67, 1.5)


@pytest.mark.parametrize("p, expected", [((3, 1), (4, 0.75)), ((0, 5), (5, 0.0)), ((-2, 2), (4, -0.5))])
def test_l1_polar(p, expected):
    assert l1_polar(p) == pytest.approx(expected, abs=1e-15)


def test_l1_polar_origin():
    with pytest.raises(ZeroPoint):
        l1_polar((0, 0))


@pytest.mark.parametrize("p, expected", [
    ((3, 1), (0.75, 0.25, 4)),
    ((1, 1), (0.5, 0.5, 2)),
    ((-1, 3), (-0.25, 0.75, 4)),
])
def test_to_diamond(p, expected):
    d = to_diamond(p)
    assert (d.theta1, d.theta2, d.norm) == pytest.approx(expected, abs=1e-15)
    with pytest.raises(ZeroPoint):
        to_diamond((0.0, 0.0))


def test_wedge_from_angles():
    w = wedge_from_angles(0.4, 0.6)
    assert w.a_l == pytest.approx(2 / 3, abs=1e-12)
    assert w.a_u == pytest.approx(1.5, abs=1e-12)
    w = wedge_from_angles(0.4479, 0.5305)
    assert w.a_l == pytest.approx(0.885, abs=1e-3)
    assert w.a_u == pytest.approx(1.233, abs=1e-3)
    w = wedge_from_angles(0.5, 0.5)
    assert (w.a_l, w.a_u) == (1.0, 1.0)
    assert w.is_ray


@pytest.mark.parametrize("th", [(0.0, 0.5), (0.6, 0.4), (0.5, 1.0), (-0.1, 0.2)])
def test_wedge_from_angles_range(th):
    with pytest.raises(OutOfRangeAngle):
        wedge_from_angles(*th)


def test_wedge_angle_roundtrip():
    w = Wedge(0.8, 1.3)
    w2 = wedge_from_angles(w.theta_l, w.theta_u)
    assert w2.a_l == pytest.approx(w.a_l, rel=1e-12)
    assert w2.a_u == pytest.approx(w.a_u, rel=1e-12)


def test_wedge_validation():
    with pytest.raises(InvalidWedge):
        Wedge(2.0, 1.0)
    with pytest.raises(InvalidWedge):
        Wedge(0.0, 1.0)
    with pytest.raises(InvalidWedge):
        Wedge(1.0, math.inf)
    assert Wedge(0.5, 2).valid
    assert not Wedge(1.1, 2).valid
    assert Wedge.diag() == Wedge(1.0, 1.0)


def test_dist_examples():
    d, b = dist_to_wedge((0, 1), W)
    assert d == pytest.approx(1 / math.sqrt(3.25), abs=1e-12) and b is Branch.ABOVE
    d, b = dist_to_wedge((3, 1), Wedge.diag())
    assert d == pytest.approx(math.sqrt(2), abs=1e-12) and b is Branch.BELOW
    with pytest.raises(InsideForbiddenZone):
        dist_to_wedge((1, 1), W)


def test_dist_boundary_is_inside():
    with pytest.raises(InsideForbiddenZone):
        dist_to_wedge((2, 3), Wedge(0.5, 1.5))
    with pytest.raises(InsideForbiddenZone):
        dist_to_wedge((2, 1), Wedge(0.5, 1.5))


def test_dist_negative_rejected():
    with pytest.raises(OutOfDomain):
        dist_to_wedge((-1, 2), W)


def test_gpolar_examples():
    g = gpolar((3, 1), Wedge.diag())
    assert g.r == pytest.approx(math.sqrt(2), abs=1e-12)
    assert g.mu == pytest.approx((3 / math.sqrt(2), 1 / math.sqrt(2)), abs=1e-12)
    g = gpolar((0, math.sqrt(3.25)), W)
    assert g.r == pytest.approx(1.0, abs=1e-12)
    g = gpolar((2, 6), Wedge(0.5, 2))
    assert g.r == pytest.approx(2 / math.sqrt(5), abs=1e-12)
    assert g.mu == pytest.approx((2.23607, 6.70820), abs=1e-5)
    assert gpolar_inverse(g.r, g.mu) == pytest.approx((2, 6), rel=1e-12)
    assert g.to_cartesian() == pytest.approx((2, 6), rel=1e-12)


def test_region_filter_upper():
    w = Wedge(0.7, 1.545)
    pts = np.array([[-1, 2], [-3, 1], [1, 1], [1, 3], [1, -1]], dtype=float)
    out = region_filter_upper(pts, w)
    assert out.tolist() == [[-1.0, 2.0], [1.0, 3.0]]
    assert region_filter_upper(np.array([[1.0, 1.0]]), w).shape == (0, 2)


def test_vectorised_matches_scalar():
    rng = np.random.default_rng(11)
    pts = rng.exponential(size=(500, 2))
    d, side = wedge_distances(pts, W)
    for p, di, s in zip(pts, d, side):
        if s == 0:
            with pytest.raises(InsideForbiddenZone):
                dist_to_wedge(p, W)
        else:
            ds, b = dist_to_wedge(p, W)
            assert ds == pytest.approx(di, rel=1e-14)
            assert (b is Branch.ABOVE) == (s == 1)


def test_diag_reduction_bulk():
    rng = np.random.default_rng(0)
    pts = rng.uniform(0, 10, size=(100_000, 2))
    d, side = wedge_distances(pts, Wedge.diag())
    m = side != 0
    assert np.max(np.abs(d[m] - np.abs(pts[m, 0] - pts[m, 1]) / math.sqrt(2))) <= 1e-12


def test_gpolar_roundtrip_bulk():
    rng = np.random.default_rng(1)
    pts = rng.pareto(1.5, size=(100_000, 2)) + 1
    idx, r, mu, _ = gpolar_array(pts, W)
    rec = r[:, None] * mu
    assert np.max(np.abs(rec - pts[idx]) / np.abs(pts[idx]).max(axis=1, keepdims=True)) <= 1e-12
    # the unit sphere of the wedge complement; storing mu in floats costs
    # about |mu| ulps near the boundary rays
    d, _ = wedge_distances(mu, W)
    size = np.abs(mu).max(axis=1)
    assert np.all(np.abs(d - 1) <= 1e-12 * np.maximum(1.0, size))
    assert np.max(np.abs(d[size <= 10] - 1)) <= 1e-12


def test_diamond_array_sums_to_one():
    pts = np.array([[3.0, 1.0], [-1.0, 3.0], [0.0, 2.0]])
    th = diamond_array(pts)
    assert np.allclose(np.abs(th).sum(axis=1), 1.0, atol=1e-12)


pos = st.floats(min_value=1e-3, max_value=1e6, allow_nan=False)
scale = st.floats(min_value=1e-3, max_value=1e3)
wedges = st.tuples(st.floats(0.1, 1.0), st.floats(1.0, 10.0))


@settings(max_examples=200, deadline=None)
@given(pos, pos, scale, wedges)
def test_scale_equivariance(x1, x2, c, ab):
    w = Wedge(*ab)
    try:
        d, b = dist_to_wedge((x1, x2), w)
    except InsideForbiddenZone:
        return
    try:
        dc, bc = dist_to_wedge((c * x1, c * x2), w)
    except InsideForbiddenZone:
        # scaling can only move a point onto the boundary by rounding
        assert d <= 1e-9 * max(x1, x2)
        return
    assert bc is b
    assert dc == pytest.approx(c * d, rel=1e-9, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(pos, pos, scale)
def test_diamond_angle_invariance(x1, x2, c):
    a, b = to_diamond((x1, x2)), to_diamond((c * x1, c * x2))
    assert b.theta1 == pytest.approx(a.theta1, rel=1e-12)
    assert b.theta2 == pytest.approx(a.theta2, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(pos, pos, wedges)
def test_gpolar_roundtrip_and_sphere(x1, x2, ab):
    w = Wedge(*ab)
    try:
        g = gpolar((x1, x2), w)
    except InsideForbiddenZone:
        return
    back = gpolar_inverse(g.r, g.mu)
    assert back.x1 == pytest.approx(x1, rel=1e-12, abs=1e-12 * max(x1, x2))
    assert back.x2 == pytest.approx(x2, rel=1e-12, abs=1e-12 * max(x1, x2))
    d, _ = dist_to_wedge(g.mu, w)
    assert d == pytest.approx(1.0, abs=1e-12 * max(1.0, abs(g.mu[0]), abs(g.mu[1])))

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helixlab.curves import (
    ANALYTIC,
    FINITE_DIFFERENCE,
    EuclidHelix,
    FrenetODECurve,
    JetCallbackCurve,
    MinkowskiHelix,
    PolynomialCurve,
    SampledCurve,
    WCurve,
    build_grid,
    constancy_test,
    jet_eval,
    speed,
    unit_speed_jet,
)
from helixlab.errors import (
    DimensionError,
    DomainError,
    EmptyInput,
    NullCurveError,
    OrderError,
    UnsupportedOrder,
)
from helixlab.pseudometric import SignatureMetric
from helixlab.tolerances import Tolerances

from conftest import assert_close

SQRT2 = math.sqrt(2.0)


def null_line():
    return PolynomialCurve(((0, 1), (0, 1), (0, 0)), (0.0, 1.0))


def unit_helix_callback():
    """(cos(s/r2), sin(s/r2), s/r2) written out by hand, unit speed in E^3."""
    w = 1.0 / SQRT2

    def jet(s, order):
        rows = []
        for k in range(order + 1):
            c = w**k * math.cos(w * s + k * math.pi / 2)
            sn = w**k * math.sin(w * s + k * math.pi / 2)
            z = w * s if k == 0 else (w if k == 1 else 0.0)
            rows.append([c, sn, z])
        return np.array(rows)

    return JetCallbackCurve(3, jet, (0.0, 2 * math.pi * SQRT2), "unit helix")


# -- jets ---------------------------------------------------------------


def test_helix_jet_example(helix):
    j = jet_eval(helix, 0.0, 2)
    np.testing.assert_allclose(j.point, [1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(j.d(1), [0, 1, 1], atol=1e-15)
    np.testing.assert_allclose(j.d(2), [-1, 0, 0], atol=1e-15)


def test_line_jet_example():
    line = PolynomialCurve(((0, 1), (0,), (0,)), (0.0, 10.0))
    j = jet_eval(line, 5.0, 2)
    np.testing.assert_array_equal(j.d(1), [1, 0, 0])
    np.testing.assert_array_equal(j.d(2), [0, 0, 0])


def test_helix_fd_matches_analytic(helix):
    a = jet_eval(helix, 0.3, 3, ANALYTIC)
    f = jet_eval(helix, 0.3, 3, FINITE_DIFFERENCE)
    assert_close(f.derivs, a.derivs, 1e-6)


GALLERY_CURVES = [
    EuclidHelix(1.0, 1.0),
    MinkowskiHelix(1.0, SQRT2),
    WCurve(1.0, 1.0, 1.0, 2.0),
    WCurve(1.0, 1.0, 2.0, 2.0),
    PolynomialCurve(((0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)), (-1.0, 1.0)),
]


@pytest.mark.parametrize("c", GALLERY_CURVES, ids=lambda c: c.family)
@pytest.mark.parametrize("frac", [0.1, 0.37, 0.8])
def test_fd_vs_analytic_on_gallery(c, frac):
    t = c.domain[0] + frac * (c.domain[1] - c.domain[0])
    a = jet_eval(c, t, c.dim, ANALYTIC)
    f = jet_eval(c, t, c.dim, FINITE_DIFFERENCE)
    for k in range(1, c.dim + 1):
        bound = 1e-6 if k <= 3 else 1e-4
        assert_close(f.d(k), a.d(k), bound)


def test_frenet_ode_jets_match_fd():
    c = FrenetODECurve((1, 1, 1, 1), (("const", 1.0), ("const", 1.0), ("cos", 1.0, 1.0)), (0.25, 1.45))
    a = jet_eval(c, 0.8, 4, ANALYTIC)
    f = jet_eval(c, 0.8, 4, FINITE_DIFFERENCE)
    assert_close(f.d(1), a.d(1), 1e-6)
    assert_close(f.d(4), a.d(4), 1e-4)
    # unit speed and curvature k_1 = 1 at every point
    assert np.linalg.norm(a.d(1)) == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.norm(a.d(2)) == pytest.approx(1.0, abs=1e-10)


def test_jet_errors(helix):
    with pytest.raises(OrderError):
        jet_eval(helix, 0.0, 4)
    with pytest.raises(OrderError):
        jet_eval(helix, 0.0, 0)
    with pytest.raises(DomainError):
        jet_eval(helix, -1.0, 2)
    t = np.linspace(0, 1, 20)
    sampled = SampledCurve(tuple(t), tuple(map(tuple, np.c_[np.cos(t), np.sin(t), t, t**2])))
    with pytest.raises(UnsupportedOrder):
        jet_eval(sampled, 0.5, 4)


def test_sampled_curve_derivatives():
    t = np.linspace(0, 2, 81)
    sampled = SampledCurve(tuple(t), tuple(map(tuple, np.c_[np.cos(t), np.sin(t), t])))
    j = jet_eval(sampled, 1.0, 3)
    np.testing.assert_allclose(j.d(1), [-math.sin(1), math.cos(1), 1], atol=1e-6)
    np.testing.assert_allclose(j.d(2), [-math.cos(1), -math.sin(1), 0], atol=1e-4)


# -- speed ----------------------------------------------------------------


@pytest.mark.parametrize("t", [0.0, 0.7, 3.0])
def test_speed_examples(t, e3, m3, helix, mhelix):
    assert speed(e3, jet_eval(helix, t, 1)) == pytest.approx(SQRT2, abs=1e-14)
    assert speed(m3, jet_eval(mhelix, t, 1)) == pytest.approx(1.0, abs=1e-14)
    assert speed(m3, jet_eval(null_line(), 0.5, 1)) == 0.0


# -- arclength grid -------------------------------------------------------


def test_grid_helix_length(e3, helix):
    g = build_grid(e3, helix, 101)
    assert abs(g.arclengths[-1] - 2 * math.pi * SQRT2) < 1e-9
    assert np.all(np.diff(g.arclengths) > 0)


def test_grid_unit_speed_is_identity(m3, mhelix):
    g = build_grid(m3, mhelix, 101)
    assert_close(g.arclengths, g.params, 1e-9)


def test_grid_rejects_null_curve(m3):
    with pytest.raises(NullCurveError):
        build_grid(m3, null_line(), 51)


def test_grid_errors(e3, e4, helix):
    with pytest.raises(DomainError):
        build_grid(e3, helix, 5)
    with pytest.raises(DimensionError):
        build_grid(e4, helix, 51)


@pytest.mark.parametrize("c", GALLERY_CURVES, ids=lambda c: c.family)
def test_grid_quadrature_halving(c):
    m = SignatureMetric((-1, 1, 1)) if c.family == "minkowski_helix" else SignatureMetric.euclidean(c.dim)
    tol = Tolerances()
    a = build_grid(m, c, 51, tol=tol).arclengths[-1]
    b = build_grid(m, c, 51, tol=tol.with_overrides(quad_tol=tol.quad_tol / 2)).arclengths[-1]
    assert abs(a - b) < 1e-10 * abs(a)


def test_near_null_flag():
    # spacelike line that is almost null: g(a', a') = -1 + (1 + d)^2
    m = SignatureMetric((-1, 1, 1))
    d = 1e-8
    c = PolynomialCurve(((0, 1), (0, 1 + d), (0, 0)), (0.0, 1.0))
    g = build_grid(m, c, 11)
    assert g.near_null(Tolerances().null_tol)
    assert not build_grid(m, MinkowskiHelix(), 11).near_null(1e-9)


# -- arclength jets ---------------------------------------------------------


def test_unit_speed_jet_of_unit_speed_curve(m3, mhelix):
    for t in (0.0, 1.3):
        assert_close(unit_speed_jet(m3, mhelix, t, 3).stack(), jet_eval(mhelix, t, 3).stack(), 1e-12)


def test_unit_speed_jet_helix_second_derivative(e3, helix):
    j = unit_speed_jet(e3, helix, 0.0, 2)
    np.testing.assert_allclose(j.d(2), [-0.5, 0, 0], atol=1e-14)


def test_unit_speed_jet_matches_explicit_arclength_helix(e3, helix):
    ref = unit_helix_callback()
    for t in (0.0, 0.9, 4.0):
        got = unit_speed_jet(e3, helix, t, 3)
        want = jet_eval(ref, t * SQRT2, 3)
        assert_close(got.stack(), want.stack(), 1e-12)


def test_unit_speed_jet_null_raises(m3):
    with pytest.raises(NullCurveError):
        unit_speed_jet(m3, null_line(), 0.5, 2)


def affine_reparam(c, a, b):
    """Curve u -> c(a u + b) with exact chain-rule jets."""
    t0, t1 = c.domain
    dom = ((t0 - b) / a, (t1 - b) / a)

    def jet(u, order):
        base = c.analytic_jet(a * u + b, order)
        return base * (a ** np.arange(order + 1))[:, None]

    return JetCallbackCurve(c.dim, jet, dom)


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from(range(len(GALLERY_CURVES))),
    st.floats(0.3, 3.0),
    st.floats(-2.0, 2.0),
    st.floats(0.05, 0.95),
)
def test_reparametrization_invariance(idx, a, b, frac):
    c = GALLERY_CURVES[idx]
    m = SignatureMetric((-1, 1, 1)) if c.family == "minkowski_helix" else SignatureMetric.euclidean(c.dim)
    r = affine_reparam(c, a, b)
    t = c.domain[0] + frac * (c.domain[1] - c.domain[0])
    u = (t - b) / a
    j1 = unit_speed_jet(m, c, t, c.dim)
    j2 = unit_speed_jet(m, r, u, c.dim)
    assert_close(j2.stack(), j1.stack(), 1e-8)


# -- constancy ------------------------------------------------------------


def test_constancy_examples():
    v = constancy_test([1 / SQRT2] * 50)
    assert v.is_constant and v.is_nonzero
    z = constancy_test([0.0] * 50)
    assert z.is_constant and not z.is_nonzero
    s = constancy_test(np.sin(np.linspace(0, math.pi, 101)))
    assert not s.is_constant
    # endpoints sin(0) = sin(pi) = 0 sit furthest below the mean
    assert s.max_abs_dev == pytest.approx(s.mean, abs=1e-12)


def test_constancy_empty():
    with pytest.raises(EmptyInput):
        constancy_test([])


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=40))
def test_constancy_invariants(values):
    v = constancy_test(values)
    assert v.max_abs_dev >= 0
    assert v.is_constant == (v.max_abs_dev <= 1e-9 + 1e-7 * abs(v.mean))
    assert v.is_nonzero == (abs(v.mean) > 1e-6)
    assert constancy_test(values) == v

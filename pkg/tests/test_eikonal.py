import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from helixlab.curves import build_grid
from helixlab.eikonal import (
    HYPOTHESIS_FAILED,
    NOT_SLANT,
    SLANT_HELIX,
    ScalarField,
    axis_reconstruct,
    axis_system_residual,
    builtin_field,
    eikonal_check,
    full_report,
    gradient_along_curve,
    parallel_check,
    slant_detect,
)
from helixlab.errors import DimensionError, MissingHessian, SpecParseError
from helixlab.frenet import frame_field
from helixlab.harmonic import harmonic_profile
from helixlab.pseudometric import SignatureMetric

from conftest import assert_close

SQRT2 = math.sqrt(2.0)
_cache = {}


def frames(m, c, samples=201):
    key = (m, repr(c), samples)
    if key not in _cache:
        ff = frame_field(m, c, build_grid(m, c, samples))
        _cache[key] = (ff, harmonic_profile(ff))
    return _cache[key]


def test_gradient_examples(e3, m3, helix, mhelix):
    ff, _ = frames(e3, helix)
    assert_close(gradient_along_curve(e3, ScalarField.linear([0, 0, 1]), ff), [0, 0, 1], 0.0)
    mf, _ = frames(m3, mhelix)
    assert_close(gradient_along_curve(m3, ScalarField.linear([1, 0, 0]), mf), [-1, 0, 0], 0.0)
    G = gradient_along_curve(e3, builtin_field("quadratic_x1", 3), ff)
    t = ff.grid.params
    assert_close(G, np.c_[2 * np.cos(t), 0 * t, 0 * t], 1e-12)


def test_gradient_dimension_mismatch(e3, helix):
    ff, _ = frames(e3, helix)
    with pytest.raises(DimensionError):
        gradient_along_curve(e3, ScalarField.linear([0, 0, 0, 1]), ff)


def test_eikonal_examples(e3, m3, helix, mhelix):
    ff, _ = frames(e3, helix)
    v = eikonal_check(e3, ScalarField.linear([0.3, -2, 1]), ff)
    # every sample is identical; only the mean carries rounding
    assert v.is_constant and v.max_abs_dev < 1e-14
    mf, _ = frames(m3, mhelix)
    v = eikonal_check(m3, ScalarField.linear([1, 0, 0]), mf)
    assert v.is_constant and v.is_nonzero and v.mean == -1.0
    q = eikonal_check(e3, builtin_field("quadratic_x1", 3), ff)
    assert not q.is_constant
    # 4 cos^2 t on [0, 2 pi] has mean 2 and max deviation 2
    assert q.mean == pytest.approx(2.0, abs=1e-2)
    assert q.max_abs_dev == pytest.approx(2.0, abs=1e-2)


def test_parallel_examples(e3, helix):
    ff, _ = frames(e3, helix)
    assert parallel_check(e3, ScalarField.linear([1, 2, 3]), ff)
    quad = parallel_check(e3, builtin_field("quadratic_x1", 3), ff)
    assert not quad and quad.max_hessian == 2.0
    lin = parallel_check(e3, builtin_field("linear_sum", 3), ff)
    assert lin.ok and lin.max_hessian == 0.0 and lin.fd_drift <= lin.fd_floor


def test_parallel_cross_check_catches_lying_hessian(e3, helix):
    ff, _ = frames(e3, helix)
    quad = builtin_field("quadratic_x1", 3)
    liar = ScalarField(3, "liar", f=quad.f, grad=quad.grad, hessian=lambda x: np.zeros((3, 3)))
    v = parallel_check(e3, liar, ff)
    assert v.max_hessian == 0.0 and v.fd_drift > v.fd_floor and not v


def test_missing_hessian(e3, helix):
    ff, _ = frames(e3, helix)
    sf = ScalarField(3, "nohess", f=lambda x: x[2], grad=lambda x: np.array([0.0, 0.0, 1.0]))
    with pytest.raises(MissingHessian):
        parallel_check(e3, sf, ff)


def test_unknown_builtin():
    with pytest.raises(SpecParseError):
        builtin_field("nope", 3)


def test_slant_examples(e3, m3, helix, mhelix, cubic):
    ff, _ = frames(e3, helix)
    d = slant_detect(e3, ScalarField.linear([0, 0, 1]), ff)
    assert d.verdict.kind == SLANT_HELIX
    assert d.slant.mean == pytest.approx(1 / SQRT2, abs=1e-9) and d.slant.max_abs_dev < 1e-9
    mf, _ = frames(m3, mhelix)
    d = slant_detect(m3, ScalarField.linear([1, 0, 0]), mf)
    assert d.verdict.kind == SLANT_HELIX and d.slant.mean == pytest.approx(-1.0, abs=1e-9)
    cf, _ = frames(e3, cubic)
    assert slant_detect(e3, ScalarField.linear([0, 0, 1]), cf).verdict.kind == NOT_SLANT


def test_gate_order(e3, helix):
    ff, _ = frames(e3, helix)
    assert str(slant_detect(e3, builtin_field("quadratic_x1", 3), ff).verdict) == "HypothesisFailed(eikonal)"
    assert str(slant_detect(e3, builtin_field("radial_xy", 3), ff).verdict) == "HypothesisFailed(parallel)"
    # orthogonal axis: constant but zero slant value
    d = slant_detect(e3, ScalarField.linear([1e-9, 0, 0]), ff)
    assert d.verdict.kind == NOT_SLANT and not d.slant.is_nonzero


def test_system_examples(e3, m3, helix, mhelix, cubic):
    ff, hp = frames(e3, helix)
    r = axis_system_residual(e3, ScalarField.linear([0, 0, 1]), ff, hp)
    assert r.max_system_residual < 1e-9 and r.vn1_orthogonality < 1e-9
    mf, mhp = frames(m3, mhelix)
    sf = ScalarField.linear([1, 0, 0])
    r = axis_system_residual(m3, sf, mf, mhp)
    assert r.max_system_residual < 1e-9 and r.vn1_orthogonality < 1e-9
    G = gradient_along_curve(m3, sf, mf)
    # g(V_1, grad f) = sqrt 2 at every sample
    g1 = np.einsum("sk,k,sk->s", mf.frames[:, 0], m3.diag, G)
    assert_close(g1, SQRT2, 1e-12)
    cf, chp = frames(e3, cubic)
    assert axis_system_residual(e3, ScalarField.linear([0, 0, 1]), cf, chp).max_system_residual > 1e-3


def test_axis_examples(e3, m3, helix, mhelix):
    ff, hp = frames(e3, helix)
    ax = axis_reconstruct(e3, ScalarField.linear([0, 0, 1]), ff, hp)
    assert_close(ax.reconstructed_axis, [0, 0, 1], 1e-9)
    assert ax.comparison_error < 1e-9 and ax.expansion_error < 1e-12 and ax.lambda_n1_max < 1e-8
    mf, mhp = frames(m3, mhelix)
    ax = axis_reconstruct(m3, ScalarField.linear([1, 0, 0]), mf, mhp)
    assert ax.slant_constant == pytest.approx(-1.0, abs=1e-12)
    assert_close(ax.reconstructed_axis, [-1, 0, 0], 1e-9)
    # -sqrt2 V_1 - V_3 by hand
    hand = -SQRT2 * mf.frames[:, 0] - mf.frames[:, 2]
    assert_close(hand, [-1, 0, 0], 1e-9)


@pytest.mark.parametrize("c_scale", [0.5, 3.0, 17.0])
def test_axis_scales_linearly(m3, mhelix, c_scale):
    mf, mhp = frames(m3, mhelix)
    base = axis_reconstruct(m3, ScalarField.linear([1, 0, 0]), mf, mhp)
    scaled_field = ScalarField.linear([c_scale, 0, 0])
    scaled = axis_reconstruct(m3, scaled_field, mf, mhp)
    assert_close(scaled.reconstructed_axis, c_scale * base.reconstructed_axis, 1e-12 * c_scale)
    assert slant_detect(m3, scaled_field, mf).verdict.kind == SLANT_HELIX


def test_full_report_examples(e3, m3, helix, mhelix):
    ff, hp = frames(e3, helix)
    r = full_report(e3, ScalarField.linear([0, 0, 1]), ff, hp)
    assert r.verdict.kind == SLANT_HELIX
    assert r.signed_sum.mean == pytest.approx(1.0, abs=1e-9) and r.signed_sum.is_constant
    assert r.last_harmonic_residual < 1e-6
    mf, mhp = frames(m3, mhelix)
    r = full_report(m3, ScalarField.linear([1, 0, 0]), mf, mhp)
    assert r.verdict.kind == SLANT_HELIX and r.signed_sum.mean == pytest.approx(-2.0, abs=1e-9)
    r = full_report(e3, builtin_field("quadratic_x1", 3), ff, hp)
    assert str(r.verdict) == "HypothesisFailed(eikonal)"
    j = r.to_json()
    assert j["verdict"] == "HypothesisFailed(eikonal)" and "model_regime" in j


def _sound(r):
    if r.verdict.kind == SLANT_HELIX:
        assert r.eikonal.is_constant and r.parallel_ok and r.slant.is_constant and r.slant.is_nonzero


nonzero_df = st.lists(st.floats(-5, 5), min_size=3, max_size=3).filter(lambda v: max(map(abs, v)) > 1e-3)


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(nonzero_df)
def test_no_false_positive_on_cubic(e3, cubic, df):
    ff, hp = frames(e3, cubic)
    r = full_report(e3, ScalarField.linear(df), ff, hp)
    _sound(r)
    assert r.verdict.kind == NOT_SLANT


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(nonzero_df, st.sampled_from(["quadratic_x1", "radial_xy", "linear_sum", None]))
def test_gate_soundness_on_helix(e3, helix, df, builtin):
    ff, hp = frames(e3, helix)
    sf = builtin_field(builtin, 3) if builtin else ScalarField.linear(df)
    r = full_report(e3, sf, ff, hp)
    _sound(r)
    if r.verdict.kind == HYPOTHESIS_FAILED:
        assert r.verdict.reason in ("eikonal", "parallel")
    # residual bounds only promised when the slant verdict holds
    if r.verdict.kind == SLANT_HELIX:
        assert r.system_residual < 1e-6 and r.axis_error < 1e-6


def test_n4_lorentz_field_dimension():
    m = SignatureMetric((-1, 1, 1, 1))
    assert builtin_field("radial_xy", 4).hessian_at(np.zeros(4)).shape == (4, 4)
    assert ScalarField.linear([0, 1, 0, 1]).to_json() == {"dim": 4, "form": "linear", "df": [0.0, 1.0, 0.0, 1.0]}
    assert m.dim == 4

"""Scalar fields along curves, slant-helix detection and axis checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import stencils
from .curves import ConstancyVerdict, constancy_with
from .errors import DimensionError, MissingHessian, SpecParseError
from .frenet import FrameField
from .harmonic import EquivalenceReport, HarmonicProfile, last_harmonic_residual, sum_derivative_equivalence
from .pseudometric import SignatureMetric, inner, raise_covector
from .tolerances import Tolerances

MODEL_REGIME = "flat/parallel => constant axis, coincides with V_n-slant helix"

SLANT_HELIX = "SlantHelix"
NOT_SLANT = "NotSlant"
HYPOTHESIS_FAILED = "HypothesisFailed"


@dataclass(frozen=True)
class ScalarField:
    """A linear field (constant differential ``df``) or an analytic field
    given by callbacks for f, its differential and its coordinate Hessian."""

    dim: int
    label: str
    df: tuple[float, ...] | None = None
    f: Callable[[np.ndarray], float] | None = None
    grad: Callable[[np.ndarray], np.ndarray] | None = None
    hessian: Callable[[np.ndarray], np.ndarray] | None = None
    builtin: str | None = None

    @classmethod
    def linear(cls, df, label: str | None = None) -> ScalarField:
        df = tuple(float(x) for x in df)
        return cls(len(df), label or f"linear{list(df)}", df=df)

    @property
    def is_linear(self) -> bool:
        return self.df is not None

    def value(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if self.is_linear:
            return float(np.dot(self.df, x))
        return float(self.f(x))

    def differential(self, x) -> np.ndarray:
        if self.is_linear:
            return np.array(self.df)
        return np.asarray(self.grad(np.asarray(x, dtype=float)), dtype=float)

    def hessian_at(self, x) -> np.ndarray:
        if self.is_linear:
            return np.zeros((self.dim, self.dim))
        if self.hessian is None:
            raise MissingHessian(f"field {self.label!r} has no Hessian callback")
        return np.asarray(self.hessian(np.asarray(x, dtype=float)), dtype=float)

    def to_json(self) -> dict:
        if self.is_linear:
            return {"dim": self.dim, "form": "linear", "df": list(self.df)}
        return {"dim": self.dim, "form": "analytic", "builtin": self.builtin or self.label}


def _quadratic_x1(dim):
    def grad(x):
        g = np.zeros(dim)
        g[0] = 2.0 * x[0]
        return g

    def hess(x):
        h = np.zeros((dim, dim))
        h[0, 0] = 2.0
        return h

    return ScalarField(dim, "quadratic_x1", f=lambda x: x[0] ** 2, grad=grad, hessian=hess, builtin="quadratic_x1")


def _radial_xy(dim):
    def grad(x):
        g = np.zeros(dim)
        g[:2] = x[:2]
        return g

    def hess(x):
        h = np.zeros((dim, dim))
        h[0, 0] = h[1, 1] = 1.0
        return h

    return ScalarField(
        dim, "radial_xy", f=lambda x: 0.5 * (x[0] ** 2 + x[1] ** 2), grad=grad, hessian=hess, builtin="radial_xy"
    )


def _linear_sum(dim):
    def grad(x):
        g = np.zeros(dim)
        g[:2] = 1.0
        return g

    return ScalarField(
        dim,
        "linear_sum",
        f=lambda x: x[0] + x[1],
        grad=grad,
        hessian=lambda x: np.zeros((dim, dim)),
        builtin="linear_sum",
    )


BUILTIN_FIELDS: dict[str, Callable[[int], ScalarField]] = {
    # f = x_1^2: neither eikonal along a helix nor parallel
    "quadratic_x1": _quadratic_x1,
    # f = (x_1^2 + x_2^2)/2: eikonal along circular helices, Hessian != 0
    "radial_xy": _radial_xy,
    # f = x_1 + x_2 through callbacks, Hessian == 0
    "linear_sum": _linear_sum,
}


def builtin_field(name: str, dim: int) -> ScalarField:
    try:
        return BUILTIN_FIELDS[name](dim)
    except KeyError:
        raise SpecParseError(f"unknown builtin field {name!r}; known: {sorted(BUILTIN_FIELDS)}") from None


def _check_dims(m: SignatureMetric, sf: ScalarField, ff: FrameField):
    if sf.dim != m.dim or ff.dim != m.dim:
        raise DimensionError(f"field dim {sf.dim}, metric dim {m.dim}, frame dim {ff.dim} disagree")


def gradient_along_curve(m: SignatureMetric, sf: ScalarField, ff: FrameField) -> np.ndarray:
    """grad f at every sample point, shape (m, n)."""
    _check_dims(m, sf, ff)
    return np.array([raise_covector(m, sf.differential(x)) for x in ff.points])


def eikonal_check(m: SignatureMetric, sf: ScalarField, ff: FrameField, tol: Tolerances | None = None) -> ConstancyVerdict:
    G = gradient_along_curve(m, sf, ff)
    return constancy_with(inner(m, G, G), tol or Tolerances())


@dataclass(frozen=True)
class ParallelVerdict:
    ok: bool
    max_hessian: float
    fd_drift: float
    fd_floor: float

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "max_hessian": self.max_hessian, "fd_drift": self.fd_drift, "fd_floor": self.fd_floor}


def parallel_check(m: SignatureMetric, sf: ScalarField, ff: FrameField, tol: Tolerances | None = None) -> ParallelVerdict:
    """Is grad f parallel along the curve?

    In the flat model this means the Hessian vanishes. The grid derivative
    of grad f along the curve is compared with a roundoff floor as an
    independent cross-check of the Hessian callback.
    """
    tol = tol or Tolerances()
    G = gradient_along_curve(m, sf, ff)
    drift = float(np.max(np.abs(stencils.derivative(ff.s, G))))
    floor = 64.0 * np.finfo(float).eps * (1.0 + float(np.max(np.abs(G)))) / float(np.min(np.diff(ff.s)))
    if sf.is_linear:
        return ParallelVerdict(True, 0.0, drift, float(floor))
    hmax = max(float(np.max(np.abs(sf.hessian_at(x)))) for x in ff.points)
    return ParallelVerdict(bool(hmax <= tol.atol and drift <= floor), hmax, drift, float(floor))


@dataclass(frozen=True)
class Verdict:
    kind: str
    reason: str | None = None

    def __str__(self):
        return f"{self.kind}({self.reason})" if self.reason else self.kind


@dataclass(frozen=True)
class SlantDetection:
    eikonal: ConstancyVerdict
    parallel: ParallelVerdict
    slant: ConstancyVerdict
    verdict: Verdict


def slant_values(m: SignatureMetric, sf: ScalarField, ff: FrameField) -> np.ndarray:
    """g(grad f, V_n) at every sample."""
    G = gradient_along_curve(m, sf, ff)
    return inner(m, G, ff.frames[:, -1])


def slant_detect(m: SignatureMetric, sf: ScalarField, ff: FrameField, tol: Tolerances | None = None) -> SlantDetection:
    tol = tol or Tolerances()
    eik = eikonal_check(m, sf, ff, tol)
    par = parallel_check(m, sf, ff, tol)
    slant = constancy_with(slant_values(m, sf, ff), tol)
    if not eik.is_constant:
        verdict = Verdict(HYPOTHESIS_FAILED, "eikonal")
    elif not par.ok:
        verdict = Verdict(HYPOTHESIS_FAILED, "parallel")
    elif slant.is_constant and slant.is_nonzero:
        verdict = Verdict(SLANT_HELIX)
    else:
        verdict = Verdict(NOT_SLANT)
    return SlantDetection(eik, par, slant, verdict)


@dataclass(frozen=True)
class SystemResidual:
    # max_i,s |g(V_{n-i-1}, grad f) - H*_i g(V_n, grad f)|
    max_system_residual: float
    # max_s |g(grad f, V_{n-1})|
    vn1_orthogonality: float
    per_index: tuple[float, ...]


def axis_system_residual(m: SignatureMetric, sf: ScalarField, ff: FrameField, hp: HarmonicProfile) -> SystemResidual:
    """Residuals of g(V_{n-(i+1)}, grad f) = H*_i g(V_n, grad f), i = 1..n-2,
    and of the orthogonality g(grad f, V_{n-1}) = 0."""
    n = ff.dim
    G = gradient_along_curve(m, sf, ff)
    V = ff.frames
    gn = inner(m, G, V[:, n - 1])
    per = []
    for i in range(1, n - 1):
        lhs = inner(m, V[:, n - i - 2], G)
        per.append(float(np.max(np.abs(lhs - hp.H(i) * gn))))
    orth = float(np.max(np.abs(inner(m, G, V[:, n - 2]))))
    return SystemResidual(max(per), orth, tuple(per))


@dataclass(frozen=True)
class AxisDecomposition:
    """grad f in the frame: measured coefficients vs. the harmonic formula."""

    coefficients: np.ndarray  # (m, n): lambda_j = eps_{j-1} g(grad f, V_j)
    reconstructed_axis: np.ndarray  # (m, n)
    actual_axis: np.ndarray  # (m, n)
    slant_constant: float
    comparison_error: float
    expansion_error: float  # |sum lambda_j V_j - grad f|
    lambda_n1_max: float


def axis_reconstruct(
    m: SignatureMetric,
    sf: ScalarField,
    ff: FrameField,
    hp: HarmonicProfile,
    slant_constant: float | None = None,
) -> AxisDecomposition:
    """Rebuild grad f as
    {eps_0 H*_{n-2} V_1 + ... + eps_{n-3} H*_1 V_{n-2} + eps_{n-1} V_n} * c
    with c the (mean) value of g(grad f, V_n)."""
    n = ff.dim
    eps = ff.epsilons
    G = gradient_along_curve(m, sf, ff)
    V = ff.frames
    if slant_constant is None:
        slant_constant = float(np.mean(inner(m, G, V[:, n - 1])))
    lam = np.stack([eps[j] * inner(m, G, V[:, j]) for j in range(n)], axis=1)
    expansion = np.einsum("sj,sjk->sk", lam, V)

    rec = eps[n - 1] * V[:, n - 1].copy()
    for j in range(1, n - 1):  # V_j for j = 1..n-2 carries eps_{j-1} H*_{n-1-j}
        rec += eps[j - 1] * hp.H(n - 1 - j)[:, None] * V[:, j - 1]
    rec *= slant_constant
    return AxisDecomposition(
        coefficients=lam,
        reconstructed_axis=rec,
        actual_axis=G,
        slant_constant=slant_constant,
        comparison_error=float(np.max(np.abs(rec - G))),
        expansion_error=float(np.max(np.abs(expansion - G))),
        lambda_n1_max=float(np.max(np.abs(lam[:, n - 2]))),
    )


@dataclass(frozen=True)
class SlantReport:
    field_label: str
    eikonal: ConstancyVerdict
    parallel: ParallelVerdict
    slant: ConstancyVerdict
    system_residual: float
    system_residual_per_index: tuple[float, ...]
    vn1_orthogonality: float
    axis_error: float
    lambda_n1_max: float
    signed_sum: ConstancyVerdict
    last_harmonic: ConstancyVerdict
    equivalence: EquivalenceReport
    last_harmonic_residual: float
    verdict: Verdict
    near_null: bool = False
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def parallel_ok(self) -> bool:
        return self.parallel.ok

    def to_json(self) -> dict:
        return {
            "field": self.field_label,
            "verdict": str(self.verdict),
            "eikonal": self.eikonal.to_json(),
            "parallel": self.parallel.to_json(),
            "slant": self.slant.to_json(),
            "system_residual": self.system_residual,
            "system_residual_per_index": list(self.system_residual_per_index),
            "vn1_orthogonality": self.vn1_orthogonality,
            "axis_error": self.axis_error,
            "lambda_n1_max": self.lambda_n1_max,
            "signed_sum": self.signed_sum.to_json(),
            "last_harmonic_abs": self.last_harmonic.to_json(),
            "sum_derivative_equivalence": self.equivalence.to_json(),
            "last_harmonic_residual": self.last_harmonic_residual,
            "near_null": self.near_null,
            "model_regime": MODEL_REGIME,
            "notes": list(self.notes),
        }


def full_report(
    m: SignatureMetric,
    sf: ScalarField,
    ff: FrameField,
    hp: HarmonicProfile,
    tol: Tolerances | None = None,
) -> SlantReport:
    """Every check on one curve/field pair. Residuals are always reported;
    only the verdict depends on the hypotheses."""
    tol = tol or Tolerances()
    det = slant_detect(m, sf, ff, tol)
    sysres = axis_system_residual(m, sf, ff, hp)
    axis = axis_reconstruct(m, sf, ff, hp, det.slant.mean)
    eq = sum_derivative_equivalence(hp, ff, tol)
    signed = constancy_with(hp.sum_signed, tol)
    notes = []
    if eq.anomalous_zero_sum:
        notes.append("AnomalousZeroSum: signed harmonic sum is constant but zero")
    if det.verdict.kind == SLANT_HELIX and not (signed.is_constant and eq.last_harmonic.is_nonzero):
        notes.append("slant helix without constant signed sum / nonvanishing last harmonic curvature")
    near = ff.grid.near_null(tol.null_tol)
    if near:
        notes.append("curve passes within 10x of the null tolerance")
    return SlantReport(
        field_label=sf.label,
        eikonal=det.eikonal,
        parallel=det.parallel,
        slant=det.slant,
        system_residual=sysres.max_system_residual,
        system_residual_per_index=sysres.per_index,
        vn1_orthogonality=sysres.vn1_orthogonality,
        axis_error=axis.comparison_error,
        lambda_n1_max=axis.lambda_n1_max,
        signed_sum=signed,
        last_harmonic=eq.last_harmonic,
        equivalence=eq,
        last_harmonic_residual=last_harmonic_residual(hp, ff),
        verdict=det.verdict,
        near_null=near,
        notes=tuple(notes),
    )

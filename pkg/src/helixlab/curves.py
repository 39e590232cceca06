"""Curve representations, jets, arclength grids and the constancy test.

Every curve exposes ``point(t)`` and, when closed-form derivatives are
known, ``analytic_jet(t, order)`` returning an ``(order + 1, dim)`` array
whose row k is the k-th derivative at t.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from . import series
from .errors import (
    DimensionError,
    DomainError,
    EmptyInput,
    NullCurveError,
    OrderError,
    SpecParseError,
    UnsupportedOrder,
)
from .pseudometric import CausalCharacter, SignatureMetric, causal_character, inner, norm, null_margin
from .tolerances import Tolerances

ANALYTIC = "analytic"
FINITE_DIFFERENCE = "finite_difference"
JET_MODES = (ANALYTIC, FINITE_DIFFERENCE)
MIN_SAMPLES = 9

# d^k cos and d^k sin cycle through these (exact signs, no phase rounding)
_COS_CYCLE = (np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x), np.sin)
_SIN_CYCLE = (np.sin, np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x))


def _dcos(omega: float, t: float, k: int) -> float:
    return omega**k * _COS_CYCLE[k % 4](omega * t)


def _dsin(omega: float, t: float, k: int) -> float:
    return omega**k * _SIN_CYCLE[k % 4](omega * t)


@dataclass(frozen=True)
class Jet:
    """Point and derivatives d^1..d^order of a curve at one parameter."""

    order: int
    point: np.ndarray
    derivs: np.ndarray

    def __post_init__(self):
        if self.derivs.shape != (self.order, self.point.shape[0]):
            raise DimensionError(
                f"jet of order {self.order} needs {self.order} derivative rows "
                f"of length {self.point.shape[0]}, got {self.derivs.shape}"
            )

    @classmethod
    def from_stack(cls, stack: np.ndarray) -> Jet:
        stack = np.asarray(stack, dtype=float)
        return cls(stack.shape[0] - 1, stack[0].copy(), stack[1:].copy())

    def stack(self) -> np.ndarray:
        return np.vstack([self.point, self.derivs])

    def d(self, k: int) -> np.ndarray:
        """k-th derivative (k >= 1)."""
        return self.derivs[k - 1]


class CurveSpec:
    """Base class for curves; subclasses fill in ``point``/``analytic_jet``."""

    dim: int
    domain: tuple[float, float]
    max_order: int | None = None
    family: str = "custom"

    def point(self, t: float) -> np.ndarray:
        return self.analytic_jet(t, 0)[0]

    def analytic_jet(self, t: float, order: int) -> np.ndarray:
        raise NotImplementedError

    def params_json(self) -> dict:
        return {}

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "family": self.family,
            "params": self.params_json(),
            "domain": list(self.domain),
        }

    def _check_domain(self):
        t0, t1 = self.domain
        if not t0 < t1:
            raise DomainError(f"empty parameter domain {self.domain!r}")


@dataclass(frozen=True)
class EuclidHelix(CurveSpec):
    """Circular helix (a cos t, a sin t, b t) in E^3."""

    a: float = 1.0
    b: float = 1.0
    domain: tuple[float, float] = (0.0, 2 * math.pi)
    dim: int = field(default=3, init=False)
    family = "euclid_helix"

    def __post_init__(self):
        if self.a <= 0:
            raise SpecParseError("euclid_helix needs a > 0")
        self._check_domain()

    def analytic_jet(self, t, order):
        rows = []
        for k in range(order + 1):
            z = self.b * t if k == 0 else (self.b if k == 1 else 0.0)
            rows.append([self.a * _dcos(1.0, t, k), self.a * _dsin(1.0, t, k), z])
        return np.array(rows)

    def params_json(self):
        return {"a": self.a, "b": self.b}


@dataclass(frozen=True)
class MinkowskiHelix(CurveSpec):
    """Timelike helix (b t, a cos t, a sin t) in diag(-1, 1, 1); needs b^2 > a^2."""

    a: float = 1.0
    b: float = math.sqrt(2.0)
    domain: tuple[float, float] = (0.0, 2 * math.pi)
    dim: int = field(default=3, init=False)
    family = "minkowski_helix"

    def __post_init__(self):
        if self.a <= 0:
            raise SpecParseError("minkowski_helix needs a > 0")
        if self.b**2 <= self.a**2:
            raise SpecParseError("minkowski_helix needs b^2 > a^2 (timelike)")
        self._check_domain()

    def analytic_jet(self, t, order):
        rows = []
        for k in range(order + 1):
            x = self.b * t if k == 0 else (self.b if k == 1 else 0.0)
            rows.append([x, self.a * _dcos(1.0, t, k), self.a * _dsin(1.0, t, k)])
        return np.array(rows)

    def params_json(self):
        return {"a": self.a, "b": self.b}


@dataclass(frozen=True)
class WCurve(CurveSpec):
    """(a cos pt, a sin pt, b cos qt, b sin qt) in R^4: all curvatures constant."""

    a: float = 1.0
    p: float = 1.0
    b: float = 1.0
    q: float = 2.0
    domain: tuple[float, float] = (0.0, 2 * math.pi)
    dim: int = field(default=4, init=False)
    family = "w_curve"

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise SpecParseError("w_curve needs a > 0 and b > 0")
        self._check_domain()

    def analytic_jet(self, t, order):
        return np.array([
            [
                self.a * _dcos(self.p, t, k),
                self.a * _dsin(self.p, t, k),
                self.b * _dcos(self.q, t, k),
                self.b * _dsin(self.q, t, k),
            ]
            for k in range(order + 1)
        ])

    def params_json(self):
        return {"a": self.a, "p": self.p, "b": self.b, "q": self.q}


@dataclass(frozen=True)
class PolynomialCurve(CurveSpec):
    """Row j of ``coefficients`` holds coordinate j in ascending powers of t."""

    coefficients: tuple[tuple[float, ...], ...]
    domain: tuple[float, float] = (-1.0, 1.0)
    family = "polynomial"

    def __post_init__(self):
        rows = tuple(tuple(float(c) for c in row) for row in self.coefficients)
        if len(rows) < 2 or any(len(r) == 0 for r in rows):
            raise SpecParseError("polynomial curve needs >= 2 non-empty coefficient rows")
        object.__setattr__(self, "coefficients", rows)
        self._check_domain()

    @property
    def dim(self) -> int:
        return len(self.coefficients)

    @cached_property
    def _polys(self):
        return [np.polynomial.Polynomial(r) for r in self.coefficients]

    def analytic_jet(self, t, order):
        return np.array([[p.deriv(k)(t) if k else p(t) for p in self._polys] for k in range(order + 1)])

    def params_json(self):
        return {"coefficients": [list(r) for r in self.coefficients]}


@dataclass(frozen=True)
class JetCallbackCurve(CurveSpec):
    """Curve given by a callback ``jet_fn(t, order) -> (order+1, dim) array``."""

    dim: int
    jet_fn: Callable[[float, int], np.ndarray]
    domain: tuple[float, float] = (0.0, 1.0)
    label: str = "callback"
    family = "callback"

    def __post_init__(self):
        self._check_domain()

    def analytic_jet(self, t, order):
        out = np.asarray(self.jet_fn(t, order), dtype=float)
        if out.shape != (order + 1, self.dim):
            raise DimensionError(
                f"jet callback returned shape {out.shape}, expected {(order + 1, self.dim)}"
            )
        return out

    def params_json(self):
        return {"label": self.label}


@dataclass(frozen=True)
class SampledCurve(CurveSpec):
    """Tabulated curve; derivatives (order <= 3) come from a quintic spline."""

    params: tuple[float, ...]
    points: tuple[tuple[float, ...], ...]
    max_order = 3
    family = "sampled"

    def __post_init__(self):
        t = np.asarray(self.params, dtype=float)
        x = np.asarray(self.points, dtype=float)
        if t.ndim != 1 or x.ndim != 2 or x.shape[0] != t.shape[0]:
            raise DimensionError("sampled curve needs m parameters and an (m, n) point table")
        if t.shape[0] < 6 or np.any(np.diff(t) <= 0):
            raise DomainError("sampled curve needs >= 6 strictly increasing parameters")
        object.__setattr__(self, "params", tuple(t.tolist()))
        object.__setattr__(self, "points", tuple(map(tuple, x.tolist())))

    @property
    def dim(self) -> int:
        return len(self.points[0])

    @property
    def domain(self) -> tuple[float, float]:
        return (self.params[0], self.params[-1])

    @cached_property
    def _spline(self):
        from scipy.interpolate import make_interp_spline

        return make_interp_spline(np.asarray(self.params), np.asarray(self.points), k=5)

    def analytic_jet(self, t, order):
        if order > self.max_order:
            raise UnsupportedOrder(f"sampled curves support derivatives up to order {self.max_order}")
        return np.array([self._spline(t, nu=k) for k in range(order + 1)])

    def params_json(self):
        return {"params": list(self.params), "points": [list(p) for p in self.points]}


def _profile_derivs(profile: Sequence, s: float, count: int) -> np.ndarray:
    """Derivatives 0..count-1 of one curvature profile ``(kind, amp, freq)``."""
    kind, amp, w = profile[0], float(profile[1]), float(profile[2]) if len(profile) > 2 else 0.0
    out = np.zeros(count)
    for m in range(count):
        if kind == "const":
            out[m] = amp if m == 0 else 0.0
        elif kind == "cos":
            out[m] = amp * _dcos(w, s, m)
        elif kind == "sin":
            out[m] = amp * _dsin(w, s, m)
        elif kind == "cosh":
            out[m] = amp * w**m * (math.cosh(w * s) if m % 2 == 0 else math.sinh(w * s))
        else:
            raise SpecParseError(f"unknown curvature profile kind {kind!r}")
    return out


def frenet_matrix(signs: Sequence[int], curvatures: Sequence[float]) -> np.ndarray:
    """K with V_a' = sum_b K[a, b] V_b for the Frenet equations (0-based rows)."""
    n = len(signs)
    K = np.zeros((n, n))
    for a in range(n):
        if a + 1 < n:
            K[a, a + 1] = curvatures[a]
        if a >= 1:
            K[a, a - 1] = -signs[a - 1] * signs[a] * curvatures[a - 1]
    return K


@dataclass(frozen=True)
class FrenetODECurve(CurveSpec):
    """Unit-speed curve with prescribed curvature functions.

    The frame starts as the standard basis at s = 0 (so the causal
    characters are ``signs``) and the position starts at the origin.
    Derivatives of the position are exact combinations of frame vectors;
    the frame itself comes from a tight DOP853 integration.
    """

    signs: tuple[int, ...]
    curvatures: tuple[tuple, ...]
    domain: tuple[float, float] = (-1.0, 1.0)
    family = "frenet_ode"
    pad: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        object.__setattr__(self, "curvatures", tuple(tuple(c) for c in self.curvatures))
        if len(self.curvatures) != len(self.signs) - 1:
            raise SpecParseError("frenet_ode needs dim - 1 curvature profiles")
        self._check_domain()

    @property
    def dim(self) -> int:
        return len(self.signs)

    def _curv(self, s: float, count: int) -> np.ndarray:
        """(count, n-1) array of curvature derivatives at s."""
        return np.array([_profile_derivs(p, s, count) for p in self.curvatures]).T

    @cached_property
    def _solutions(self):
        from scipy.integrate import solve_ivp

        n = self.dim
        y0 = np.concatenate([np.zeros(n), np.eye(n).ravel()])

        def rhs(s, y):
            V = y[n:].reshape(n, n)
            K = frenet_matrix(self.signs, self._curv(s, 1)[0])
            return np.concatenate([V[0], (K @ V).ravel()])

        t0, t1 = self.domain
        sols = []
        for end in (t0 - self.pad, t1 + self.pad):
            if end == 0.0:
                continue
            sols.append(
                solve_ivp(rhs, (0.0, end), y0, method="DOP853", rtol=1e-13, atol=1e-14, dense_output=True)
            )
        return sols

    def _state(self, s: float):
        t0, t1 = self.domain
        if not (t0 - self.pad <= s <= t1 + self.pad):
            raise DomainError(f"s={s} outside integrated range of frenet_ode curve")
        n = self.dim
        if s == 0.0:
            return np.zeros(n), np.eye(n)
        for sol in self._solutions:
            lo, hi = sorted((sol.t[0], sol.t[-1]))
            if lo <= s <= hi:
                y = sol.sol(s)
                return y[:n], y[n:].reshape(n, n)
        raise DomainError(f"s={s} not covered")

    def analytic_jet(self, s, order):
        n = self.dim
        x, V = self._state(s)
        N = max(order, 1)
        kd = self._curv(s, N + 1)
        # K(s + h) as a matrix-valued Taylor series
        Kser = np.array([frenet_matrix(self.signs, kd[m]) / math.factorial(m) for m in range(N + 1)])
        c = np.zeros((N + 1, n))
        c[0, 0] = 1.0
        rows = [x]
        for j in range(1, order + 1):
            rows.append(c[0] @ V)
            # c <- dc/dh + c K, as series
            dc = np.zeros_like(c)
            dc[:-1] = c[1:] * np.arange(1, N + 1)[:, None]
            prod = np.zeros_like(c)
            for a in range(N + 1):
                for b in range(N + 1 - a):
                    prod[a + b] += c[a] @ Kser[b]
            c = dc + prod
        return np.array(rows)

    def params_json(self):
        return {"signs": list(self.signs), "curvatures": [list(p) for p in self.curvatures]}


# ---------------------------------------------------------------------------
# jets


def _fd_weights(order: int) -> np.ndarray:
    """Composite weights on offsets -2k..2k: the 4th-order first-derivative
    stencil applied ``order`` times."""
    base = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
    w = np.array([1.0])
    for _ in range(order):
        w = np.convolve(w, base)
    return w


def fd_step(order: int, width: float) -> float:
    return np.finfo(float).eps ** (1.0 / (order + 4)) * min(1.0, width)


def _check_order(c: CurveSpec, order: int):
    if order < 1 or order > c.dim:
        raise OrderError(f"jet order must be in [1, {c.dim}], got {order}")
    if c.max_order is not None and order > c.max_order:
        raise UnsupportedOrder(f"{c.family} curves support jets up to order {c.max_order}")


def _check_t(c: CurveSpec, t: float):
    t0, t1 = c.domain
    slack = 1e-12 * (t1 - t0)
    if not (t0 - slack <= t <= t1 + slack):
        raise DomainError(f"t={t} outside curve domain [{t0}, {t1}]")


def jet_eval(c: CurveSpec, t: float, order: int, mode: str = ANALYTIC) -> Jet:
    """Point and t-derivatives through ``order``.

    ``finite_difference`` mode differentiates ``c.point`` with recursive
    4th-order central stencils; the stencil may reach slightly outside the
    domain, which every built-in family tolerates.
    """
    _check_order(c, order)
    _check_t(c, t)
    if mode == ANALYTIC or isinstance(c, SampledCurve):
        return Jet.from_stack(c.analytic_jet(t, order))
    if mode != FINITE_DIFFERENCE:
        raise ValueError(f"unknown jet mode {mode!r}")
    width = c.domain[1] - c.domain[0]
    rows = [np.asarray(c.point(t), dtype=float)]
    for k in range(1, order + 1):
        h = fd_step(k, width)
        w = _fd_weights(k)
        offsets = np.arange(-2 * k, 2 * k + 1)
        acc = np.zeros(c.dim)
        for wi, o in zip(w, offsets):
            if wi != 0.0:
                acc += wi * np.asarray(c.point(t + o * h), dtype=float)
        rows.append(acc / h**k)
    return Jet.from_stack(np.array(rows))


def speed(m: SignatureMetric, j: Jet) -> float:
    if j.order < 1:
        raise OrderError("speed needs a jet of order >= 1")
    return norm(m, j.d(1))


def _check_non_null(m: SignatureMetric, tangent: np.ndarray, t: float, null_tol: float):
    if causal_character(m, tangent, null_tol) is CausalCharacter.NULL:
        raise NullCurveError(f"tangent is null at t={t} (g(a', a') = {inner(m, tangent, tangent):.3e})")


def reparametrize_jet(m: SignatureMetric, tjet: Jet, null_tol: float = 1e-9, t: float = float("nan")) -> Jet:
    """Turn t-derivatives into arclength derivatives.

    Works on Taylor series: the speed series is sqrt(|g(a', a')|), its
    integral is s(t), which is reverted to t(s) and composed with a(t).
    This is the Faa di Bruno chain rule carried out coefficientwise.
    """
    k = tjet.order
    _check_non_null(m, tjet.d(1), t, null_tol)
    a = series.from_derivatives(tjet.stack())
    # a'(t0 + h) coefficients up to h^(k-1)
    da = np.array([(j + 1) * a[j + 1] for j in range(k)])
    sign = 1.0 if np.sum(m.diag * da[0] ** 2) > 0 else -1.0
    q = np.zeros(k)
    for r in range(k):
        q[r] = sign * sum(float(np.sum(m.diag * da[i] * da[r - i])) for i in range(r + 1))
    v = series.sqrt(q, k - 1)
    s = series.integrate(v)
    h = series.revert(s, k)
    b = series.compose(a, h, k)
    return Jet.from_stack(series.to_derivatives(b))


def unit_speed_jet(
    m: SignatureMetric,
    c: CurveSpec,
    t: float,
    order: int,
    mode: str = ANALYTIC,
    null_tol: float = 1e-9,
) -> Jet:
    """Derivatives of the curve with respect to arclength at parameter t."""
    if m.dim != c.dim:
        raise DimensionError(f"metric dim {m.dim} != curve dim {c.dim}")
    return reparametrize_jet(m, jet_eval(c, t, order, mode), null_tol, t)


# ---------------------------------------------------------------------------
# arclength grid


@dataclass(frozen=True)
class SampleGrid:
    params: np.ndarray
    arclengths: np.ndarray
    # smallest |g(a',a')| / (1 + |a'|^2) seen on the refinement grid
    null_margin: float = float("inf")

    def __post_init__(self):
        if self.params.shape != self.arclengths.shape or self.params.shape[0] < MIN_SAMPLES:
            raise DomainError(f"grid needs >= {MIN_SAMPLES} matching params and arclengths")

    def __len__(self):
        return self.params.shape[0]

    def near_null(self, null_tol: float) -> bool:
        return self.null_margin <= 10.0 * null_tol


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float, max_depth: int = 18) -> float:
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)

    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, a, m)
        right = simpson(fm, frm, fb, m, b)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        return rec(a, m, fa, flm, fm, left, tol / 2, depth - 1) + rec(m, b, fm, frm, fb, right, tol / 2, depth - 1)

    return rec(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, max_depth)


def build_grid(
    m: SignatureMetric,
    c: CurveSpec,
    samples: int = 201,
    mode: str = ANALYTIC,
    tol: Tolerances | None = None,
) -> SampleGrid:
    """Uniform parameter grid with arclengths by adaptive Simpson quadrature."""
    tol = tol or Tolerances.for_mode(mode)
    if samples < MIN_SAMPLES:
        raise DomainError(f"need at least {MIN_SAMPLES} samples, got {samples}")
    if m.dim != c.dim:
        raise DimensionError(f"metric dim {m.dim} != curve dim {c.dim}")
    t0, t1 = c.domain
    params = np.linspace(t0, t1, samples)

    def tangent(t):
        return jet_eval(c, min(max(t, t0), t1), 1, mode).d(1)

    margin = float("inf")
    for t in np.linspace(t0, t1, 4 * (samples - 1) + 1):
        d1 = tangent(t)
        _check_non_null(m, d1, t, tol.null_tol)
        margin = min(margin, null_margin(m, d1))

    def spd(t):
        return norm(m, tangent(t))

    width = t1 - t0
    arcs = np.zeros(samples)
    for j in range(1, samples):
        a, b = params[j - 1], params[j]
        arcs[j] = arcs[j - 1] + adaptive_simpson(spd, a, b, tol.quad_tol * (b - a) / width)
    return SampleGrid(params, arcs, margin)


# ---------------------------------------------------------------------------
# constancy


@dataclass(frozen=True)
class ConstancyVerdict:
    mean: float
    max_abs_dev: float
    rel_dev: float
    is_constant: bool
    is_nonzero: bool

    def to_json(self) -> dict:
        return {
            "mean": self.mean,
            "max_abs_dev": self.max_abs_dev,
            "rel_dev": self.rel_dev,
            "is_constant": self.is_constant,
            "is_nonzero": self.is_nonzero,
        }


def constancy_test(values, atol: float = 1e-9, rtol: float = 1e-7, atol_zero: float = 1e-6) -> ConstancyVerdict:
    """Decide whether sampled values are constant (and nonzero)."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise EmptyInput("constancy_test needs at least one value")
    mean = float(np.mean(v))
    dev = float(np.max(np.abs(v - mean)))
    return ConstancyVerdict(
        mean=mean,
        max_abs_dev=dev,
        rel_dev=dev / (atol + abs(mean)),
        is_constant=bool(dev <= atol + rtol * abs(mean)),
        is_nonzero=bool(abs(mean) > atol_zero),
    )


def constancy_with(values, tol: Tolerances) -> ConstancyVerdict:
    return constancy_test(values, tol.atol, tol.rtol, tol.atol_zero)

"""Harmonic curvature functions H*_0..H*_{n-2} along a frame field.

With 1-based curvatures k_i and 0-based causal characters eps_j:

    H*_0 = 0
    H*_1 = eps_{n-3} eps_{n-2} k_{n-1} / k_{n-2}
    H*_i = (k_{n-i} H*_{i-2} - dH*_{i-1}/ds) eps_{n-i-2} eps_{n-i-1} / k_{n-i-1},   2 <= i <= n-2

Derivatives along the curve are grid differences in arclength.
"""
from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass

import numpy as np

from . import stencils
from .curves import ConstancyVerdict, constancy_with
from .errors import NotProperOrderError
from .frenet import FrameField
from .tolerances import Tolerances


def recursion_indices(n: int) -> list[tuple[int, int, int, int, int]]:
    """(i, k_num, k_den, eps_a, eps_b) for every recursive step 2 <= i <= n-2.

    Asserts that every causal-character subscript lands in [0, n-1].
    """
    steps = []
    for i in range(2, n - 1):
        ea, eb = n - (i + 2), n - (i + 1)
        assert 0 <= ea <= n - 1 and 0 <= eb <= n - 1, (n, i, ea, eb)
        steps.append((i, n - i, n - (i + 1), ea, eb))
    return steps


def sum_weights(n: int) -> list[int]:
    """Index of the causal character multiplying H*_i^2 in the signed sum."""
    return [n - 2 - i for i in range(1, n - 1)]


@dataclass(frozen=True)
class HarmonicProfile:
    """``values[:, i]`` is H*_i at each sample (i = 0..n-2)."""

    s: np.ndarray
    values: np.ndarray
    sum_signed: np.ndarray
    derivative_residual: np.ndarray
    # H*_{n-2}' and k_1 H*_{n-3} separately, for diagnostics
    last_derivative: np.ndarray
    last_target: np.ndarray
    depth: int

    @property
    def n(self) -> int:
        return self.values.shape[1] + 1

    def H(self, i: int) -> np.ndarray:
        return self.values[:, i]

    @property
    def interior(self) -> slice:
        return stencils.interior(len(self.s), self.depth)


def harmonic_profile(ff: FrameField, tol: Tolerances | None = None) -> HarmonicProfile:
    tol = tol or Tolerances()
    n = ff.dim
    if n < 3:
        raise ValueError("harmonic curvatures need n >= 3")
    k = ff.curvatures  # k[:, i-1] == k_i
    eps = ff.epsilons
    if np.any(k <= tol.atol):
        raise NotProperOrderError("a curvature vanishes on the grid")

    def kk(i):
        return k[:, i - 1]

    s = ff.s
    m = len(ff)
    H = np.zeros((m, n - 1))
    H[:, 1] = (eps[n - 3] * eps[n - 2]) * kk(n - 1) / kk(n - 2)
    for i, num, den, ea, eb in recursion_indices(n):
        dprev = stencils.derivative(s, H[:, i - 1])
        H[:, i] = (kk(num) * H[:, i - 2] - dprev) * (eps[ea] * eps[eb]) / kk(den)

    total = np.zeros(m)
    for i, w in zip(range(1, n - 1), sum_weights(n)):
        total += eps[w] * H[:, i] ** 2

    last_d = stencils.derivative(s, H[:, n - 2])
    target = kk(1) * H[:, n - 3]
    # the last column went through n-3 differentiations, plus one more here
    depth = n - 2
    return HarmonicProfile(s, H, total, last_d - target, last_d, target, depth)


def sum_invariant(hp: HarmonicProfile, tol: Tolerances | None = None) -> ConstancyVerdict:
    """Constancy verdict on eps_{n-3} H*_1^2 + ... + eps_0 H*_{n-2}^2."""
    return constancy_with(hp.sum_signed, tol or Tolerances())


class Applicability(str, enum.Enum):
    APPLICABLE = "Applicable"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class EquivalenceReport:
    """Sum constant <=> H*_{n-2}' = k_1 H*_{n-3}, checked on one curve."""

    status: Applicability
    last_harmonic: ConstancyVerdict
    sum_constant: bool
    identity_holds: bool
    max_residual: float
    threshold: float
    # constant sum that is zero: the claimed non-vanishing failed
    anomalous_zero_sum: bool

    @property
    def agree(self) -> bool | None:
        if self.status is Applicability.NOT_APPLICABLE:
            return None
        return self.sum_constant == self.identity_holds

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "last_harmonic": self.last_harmonic.to_json(),
            "sum_constant": self.sum_constant,
            "identity_holds": self.identity_holds,
            "agree": self.agree,
            "max_residual": self.max_residual,
            "threshold": self.threshold,
            "anomalous_zero_sum": self.anomalous_zero_sum,
        }


def sum_derivative_equivalence(hp: HarmonicProfile, ff: FrameField, tol: Tolerances | None = None) -> EquivalenceReport:
    """Check that constancy of the signed sum agrees with the identity
    H*_{n-2}' = k_1 H*_{n-3}, provided H*_{n-2} does not vanish."""
    tol = tol or Tolerances()
    n = hp.n
    last = constancy_with(np.abs(hp.H(n - 2)), tol)
    verdict = sum_invariant(hp, tol)
    inside = hp.interior
    res = float(np.max(np.abs(hp.derivative_residual[inside])))
    # both sides scale like k_1 * H*; for n = 3 the right side is identically zero
    k1 = ff.curvatures[:, 0]
    scale = max(
        float(np.max(np.abs(hp.last_target[inside]))),
        float(np.max(np.abs(k1[inside] * hp.H(n - 2)[inside]))),
    )
    thr = tol.atol + tol.rtol * scale
    status = Applicability.APPLICABLE if last.is_nonzero else Applicability.NOT_APPLICABLE
    return EquivalenceReport(
        status=status,
        last_harmonic=last,
        sum_constant=verdict.is_constant,
        identity_holds=res <= thr,
        max_residual=res,
        threshold=thr,
        anomalous_zero_sum=verdict.is_constant and not verdict.is_nonzero,
    )


def last_harmonic_residual(hp: HarmonicProfile, ff: FrameField | None = None) -> float:
    """max over interior samples of |H*_{n-2}' - k_1 H*_{n-3}|."""
    return float(np.max(np.abs(hp.derivative_residual[hp.interior])))


def harmonic_csv(hp: HarmonicProfile) -> str:
    n = hp.n
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s"] + [f"H{i}" for i in range(n - 1)] + ["sum_signed", "derivative_residual"])
    for j in range(len(hp.s)):
        w.writerow(
            [f"{hp.s[j]:.12g}"]
            + [f"{x:.12g}" for x in hp.values[j]]
            + [f"{hp.sum_signed[j]:.12g}", f"{hp.derivative_residual[j]:.12g}"]
        )
    return buf.getvalue()

"""Finite-difference derivatives of sampled functions on non-uniform grids."""
from __future__ import annotations

import numpy as np

STENCIL = 5


def fornberg_weights(x0: float, xs: np.ndarray, deriv: int = 1) -> np.ndarray:
    """Weights w with sum(w * f(xs)) ~ f^(deriv)(x0) (Fornberg 1988)."""
    n = len(xs)
    c = np.zeros((n, deriv + 1))
    c1, c4 = 1.0, xs[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, deriv)
        c2, c5, c4 = 1.0, c4, xs[i] - x0
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, deriv]


def derivative(x: np.ndarray, values: np.ndarray) -> np.ndarray:
    """d(values)/dx at every sample: 5-point centred inside, one-sided at the ends.

    ``values`` may carry trailing axes (vectors, frames); the derivative is
    taken along axis 0.
    """
    x = np.asarray(x, dtype=float)
    v = np.asarray(values, dtype=float)
    m = x.shape[0]
    if m < STENCIL:
        raise ValueError(f"need at least {STENCIL} samples for a derivative")
    out = np.empty_like(v)
    half = STENCIL // 2
    for j in range(m):
        lo = min(max(j - half, 0), m - STENCIL)
        idx = slice(lo, lo + STENCIL)
        w = fornberg_weights(x[j], x[idx])
        out[j] = np.tensordot(w, v[idx], axes=(0, 0))
    return out


def interior(m: int, depth: int = 1) -> slice:
    """Samples whose centred stencils never touched a one-sided end value,
    after ``depth`` nested differentiations."""
    half = STENCIL // 2
    return slice(half * depth, m - half * depth)

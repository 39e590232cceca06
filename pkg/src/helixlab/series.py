"""Truncated Taylor series arithmetic.

A series is an array whose first axis indexes the coefficient of h**k;
trailing axes (if any) hold vector components. All operations truncate
at degree ``N``.
"""
from __future__ import annotations

from math import factorial

import numpy as np


def from_derivatives(derivs) -> np.ndarray:
    """Taylor coefficients d_k / k! from a stack of derivatives d_0..d_N."""
    d = np.asarray(derivs, dtype=float)
    scale = np.array([1.0 / factorial(k) for k in range(d.shape[0])])
    return d * scale.reshape((-1,) + (1,) * (d.ndim - 1))


def to_derivatives(coeffs) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    scale = np.array([float(factorial(k)) for k in range(c.shape[0])])
    return c * scale.reshape((-1,) + (1,) * (c.ndim - 1))


def mul(a, b, N: int) -> np.ndarray:
    """Cauchy product of two scalar series truncated at degree N."""
    out = np.zeros(N + 1)
    for k in range(N + 1):
        acc = 0.0
        for j in range(k + 1):
            if j < len(a) and k - j < len(b):
                acc += a[j] * b[k - j]
        out[k] = acc
    return out


def sqrt(q, N: int) -> np.ndarray:
    """Square root of a series with positive constant term."""
    if q[0] <= 0:
        raise ValueError("series square root needs a positive constant term")
    v = np.zeros(N + 1)
    v[0] = np.sqrt(q[0])
    for k in range(1, N + 1):
        qk = q[k] if k < len(q) else 0.0
        acc = sum(v[j] * v[k - j] for j in range(1, k))
        v[k] = (qk - acc) / (2.0 * v[0])
    return v


def integrate(v) -> np.ndarray:
    """Antiderivative vanishing at h = 0 (degree grows by one)."""
    out = np.zeros(len(v) + 1)
    for k, c in enumerate(v):
        out[k + 1] = c / (k + 1)
    return out


def revert(s, N: int) -> np.ndarray:
    """Compositional inverse of s(h) = s1 h + s2 h^2 + ..., s1 != 0."""
    if s[0] != 0.0:
        raise ValueError("series reversion needs s(0) == 0")
    s1 = s[1]
    h = np.zeros(N + 1)
    h[1] = 1.0 / s1
    # each sweep fixes one more coefficient
    for _ in range(N):
        higher = np.zeros(N + 1)
        power = h.copy()
        for j in range(2, min(len(s), N + 1)):
            power = mul(power, h, N)
            higher += s[j] * power
        new = -higher / s1
        new[1] += 1.0 / s1
        h = new
    return h


def compose(a, h, N: int) -> np.ndarray:
    """Coefficients of a(h(x)) for h(0) == 0; ``a`` may be vector valued."""
    a = np.asarray(a, dtype=float)
    out = np.zeros((N + 1,) + a.shape[1:])
    out[0] = a[0]
    power = np.zeros(N + 1)
    power[0] = 1.0
    for j in range(1, min(len(a), N + 1)):
        power = mul(power, h, N)
        out += np.multiply.outer(power, a[j])
    return out

import math

import numpy as np
import pytest

from helixlab import series


def test_sqrt_of_one_plus_x():
    # sqrt(1 + x) = 1 + x/2 - x^2/8 + x^3/16 - 5x^4/128
    got = series.sqrt([1.0, 1.0], 4)
    np.testing.assert_allclose(got, [1, 0.5, -0.125, 0.0625, -5 / 128], rtol=1e-15)


def test_revert_sin_gives_arcsin():
    N = 7
    sin = [0.0 if k % 2 == 0 else (-1) ** (k // 2) / math.factorial(k) for k in range(N + 1)]
    # arcsin x = x + x^3/6 + 3x^5/40 + 5x^7/112
    want = [0, 1, 0, 1 / 6, 0, 3 / 40, 0, 5 / 112]
    np.testing.assert_allclose(series.revert(np.array(sin), N), want, atol=1e-15)


def test_compose_against_direct_evaluation():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(6, 3))
    h = np.array([0.0, 0.7, -0.2, 0.1, 0.05, 0.0])
    c = series.compose(a, h, 5)
    # a(h(x)) for tiny x agrees with the truncated composition to O(x^6)
    for x in (1e-2, 2e-2):
        hx = sum(h[k] * x**k for k in range(6))
        direct = sum(a[j] * hx**j for j in range(6))
        approx = sum(c[k] * x**k for k in range(6))
        assert np.max(np.abs(direct - approx)) < 50 * x**6


def test_derivative_round_trip():
    d = np.arange(1.0, 7.0)
    np.testing.assert_allclose(series.to_derivatives(series.from_derivatives(d)), d)


def test_revert_rejects_constant_term():
    with pytest.raises(ValueError):
        series.revert(np.array([1.0, 1.0]), 3)

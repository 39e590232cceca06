import math

import numpy as np
import pytest

from helixlab import EuclidHelix, MinkowskiHelix, PolynomialCurve, SignatureMetric, WCurve
from helixlab import gallery

SQRT2 = math.sqrt(2.0)


@pytest.fixture
def e3():
    return SignatureMetric.euclidean(3)


@pytest.fixture
def e4():
    return SignatureMetric.euclidean(4)


@pytest.fixture
def m3():
    return SignatureMetric((-1, 1, 1))


@pytest.fixture
def helix():
    return EuclidHelix(1.0, 1.0)


@pytest.fixture
def mhelix():
    return MinkowskiHelix(1.0, SQRT2)


@pytest.fixture
def wcurve():
    return WCurve(1.0, 1.0, 1.0, 2.0)


@pytest.fixture
def cubic():
    return PolynomialCurve(((0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)), (-1.0, 1.0))


@pytest.fixture(scope="session")
def gallery_runs():
    """Analytic-jet analysis of every gallery entry, computed once."""
    return {e.name: gallery.check_entry(e) for e in gallery.entries()}


def assert_close(got, want, tol):
    err = float(np.max(np.abs(np.asarray(got, dtype=float) - np.asarray(want, dtype=float))))
    assert err <= tol, f"max error {err:.3e} > {tol:.1e}"

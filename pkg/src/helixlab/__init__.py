"""Frenet apparatus, harmonic curvatures and eikonal slant-helix checks for
non-null curves in flat pseudo-Euclidean spaces."""

from .curves import (
    ANALYTIC,
    FINITE_DIFFERENCE,
    ConstancyVerdict,
    CurveSpec,
    EuclidHelix,
    FrenetODECurve,
    Jet,
    JetCallbackCurve,
    MinkowskiHelix,
    PolynomialCurve,
    SampledCurve,
    SampleGrid,
    WCurve,
    build_grid,
    constancy_test,
    jet_eval,
    speed,
    unit_speed_jet,
)
from .eikonal import (
    ScalarField,
    SlantReport,
    axis_reconstruct,
    axis_system_residual,
    builtin_field,
    eikonal_check,
    full_report,
    gradient_along_curve,
    parallel_check,
    slant_detect,
)
from .errors import *  # noqa: F401,F403
from .frenet import FrameField, FrenetApparatus, frame_field, frenet_at, frenet_residual
from .harmonic import (
    HarmonicProfile,
    harmonic_profile,
    last_harmonic_residual,
    sum_derivative_equivalence,
    sum_invariant,
)
from .pipeline import Analysis, analyze
from .pseudometric import CausalCharacter, SignatureMetric, causal_character, inner, norm, raise_covector
from .tolerances import Tolerances

__version__ = "0.1.0"

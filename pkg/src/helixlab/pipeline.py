"""grid -> frame field -> harmonic profile -> slant report, in one call."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import ANALYTIC, CurveSpec, SampleGrid, build_grid
from .eikonal import ScalarField, SlantReport, full_report
from .frenet import FrameField, frame_field, frenet_residual, orthonormality_error
from .harmonic import HarmonicProfile, harmonic_profile
from .pseudometric import SignatureMetric
from .tolerances import Tolerances


@dataclass(frozen=True)
class Analysis:
    metric: SignatureMetric
    curve: CurveSpec
    field: ScalarField
    mode: str
    tol: Tolerances
    grid: SampleGrid
    frames: FrameField
    harmonic: HarmonicProfile
    report: SlantReport
    frenet_residual: float
    orthonormality: float

    def summary_json(self) -> dict:
        k = self.frames.curvatures
        return {
            "curve": self.curve.to_json(),
            "metric": self.metric.to_json(),
            "field": self.field.to_json(),
            "samples": len(self.grid),
            "jet_mode": self.mode,
            "tolerances": {
                "atol": self.tol.atol,
                "rtol": self.tol.rtol,
                "atol_zero": self.tol.atol_zero,
                "null_tol": self.tol.null_tol,
            },
            "frenet": {
                "epsilons": list(self.frames.epsilons),
                "curvature_min": k.min(axis=0),
                "curvature_max": k.max(axis=0),
                "frenet_residual": self.frenet_residual,
                "orthonormality": self.orthonormality,
                "sign_flips": self.frames.flips,
                "arclength": float(self.grid.arclengths[-1]),
            },
            "harmonic": {
                "mean": self.harmonic.values.mean(axis=0),
                "min": self.harmonic.values.min(axis=0),
                "max": self.harmonic.values.max(axis=0),
            },
            "report": self.report.to_json(),
        }


def analyze(
    m: SignatureMetric,
    c: CurveSpec,
    sf: ScalarField,
    samples: int = 201,
    mode: str = ANALYTIC,
    tol: Tolerances | None = None,
) -> Analysis:
    tol = tol or Tolerances.for_mode(mode)
    grid = build_grid(m, c, samples, mode, tol)
    ff = frame_field(m, c, grid, mode, tol)
    hp = harmonic_profile(ff, tol)
    rep = full_report(m, sf, ff, hp, tol)
    return Analysis(m, c, sf, mode, tol, grid, ff, hp, rep, frenet_residual(m, ff), orthonormality_error(m, ff))

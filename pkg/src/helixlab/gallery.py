"""Built-in curve gallery with pinned expectations (``gallery.json``)."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .curves import ANALYTIC, CurveSpec
from .eikonal import SLANT_HELIX, ScalarField, axis_reconstruct
from .errors import HelixLabError
from .harmonic import Applicability
from .io import curve_from_json, field_from_json, metric_from_json
from .pipeline import Analysis, analyze
from .pseudometric import SignatureMetric
from .tolerances import Tolerances

# nested grid differences on top of FD jets are too noisy beyond n = 3
FD_MAX_DIM = 3


@lru_cache(maxsize=1)
def manifest() -> dict:
    return json.loads(resources.files("helixlab").joinpath("gallery.json").read_text(encoding="utf-8"))


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    description: str
    curve: CurveSpec
    metric: SignatureMetric
    field: ScalarField
    expected: dict
    raw: dict

    def expectation_text(self) -> str:
        verdict = self.expected["verdict"]
        text = f"expected: {verdict}"
        if verdict == SLANT_HELIX:
            df = ",".join(f"{x:g}" for x in self.field.df)
            text += f" with df=({df})"
        if self.expected.get("equivalence") == "NotApplicable":
            text += "; sum/derivative equivalence NotApplicable (H*_{n-2} = 0)"
        return text


def entries() -> list[GalleryEntry]:
    out = []
    for e in manifest()["entries"]:
        curve = curve_from_json(e["curve"])
        out.append(
            GalleryEntry(
                e["name"],
                e.get("description", ""),
                curve,
                metric_from_json(e["metric"]),
                field_from_json(e["field"], curve.dim),
                e["expected"],
                e,
            )
        )
    return out


def entry(name: str) -> GalleryEntry:
    for e in entries():
        if e.name == name:
            return e
    raise KeyError(name)


def names() -> list[str]:
    return [e["name"] for e in manifest()["entries"]]


@dataclass
class EntryResult:
    name: str
    verdict: str
    system_residual: float = float("nan")
    axis_error: float = float("nan")
    sum_deviation: float = float("nan")
    last_harmonic_residual: float = float("nan")
    failures: list[str] = field(default_factory=list)
    analysis: Analysis | None = None
    skipped: str | None = None

    @property
    def passed(self) -> bool:
        return not self.failures


def _bounds(mode: str) -> dict:
    b = dict(manifest()["bounds"])
    if mode != ANALYTIC:
        # finite-difference jets: relaxed residual and constant tolerances
        for key in ("frenet_residual", "system_residual", "axis_error", "last_harmonic_residual"):
            b[key] = max(b[key], 1e-4)
        b["vn1_orthogonality"] = max(b["vn1_orthogonality"], 1e-4)
        b["expected_value"] = 1e-5
    return b


def check_entry(e: GalleryEntry, mode: str = ANALYTIC, samples: int | None = None, tol: Tolerances | None = None) -> EntryResult:
    """Run one gallery entry and compare against its pinned expectations.

    Every failed expectation is recorded; nothing stops at the first one.
    """
    samples = samples or manifest()["samples"]
    tol = tol or Tolerances.for_mode(mode)
    b = _bounds(mode)
    if mode != ANALYTIC and e.curve.dim > FD_MAX_DIM:
        return EntryResult(e.name, "Skipped", skipped=f"finite-difference jets not supported for n > {FD_MAX_DIM}")
    try:
        a = analyze(e.metric, e.curve, e.field, samples, mode, tol)
    except HelixLabError as exc:
        return EntryResult(e.name, "Error", failures=[f"computation failed: {exc}"])
    rep = a.report
    res = EntryResult(
        e.name,
        str(rep.verdict),
        rep.system_residual,
        rep.axis_error,
        rep.signed_sum.max_abs_dev,
        rep.last_harmonic_residual,
        analysis=a,
    )
    fail = res.failures

    def bound(label, value, key):
        if not value <= b[key]:
            fail.append(f"{label} {value:.3e} > {b[key]:.1e}")

    exp = e.expected
    if str(rep.verdict) != exp["verdict"]:
        fail.append(f"verdict {rep.verdict} != expected {exp['verdict']}")
    bound("frenet residual", a.frenet_residual, "frenet_residual")
    bound("orthonormality", a.orthonormality, "orthonormality")
    if not (a.frames.curvatures > 0).all():
        fail.append("non-positive curvature")
    if rep.verdict.kind == SLANT_HELIX:
        if not (rep.eikonal.is_constant and rep.parallel_ok and rep.slant.is_constant and rep.slant.is_nonzero):
            fail.append("SlantHelix verdict without every gate passing")
        bound("system residual", rep.system_residual, "system_residual")
        bound("|g(grad f, V_{n-1})|", rep.vn1_orthogonality, "vn1_orthogonality")
        bound("axis error", rep.axis_error, "axis_error")
        bound("H*_{n-2}' - k1 H*_{n-3}", rep.last_harmonic_residual, "last_harmonic_residual")
        if not (rep.signed_sum.is_constant and rep.signed_sum.is_nonzero):
            fail.append("signed harmonic sum not a nonzero constant")
        if not rep.last_harmonic.is_nonzero:
            fail.append("last harmonic curvature vanishes")

    eq = rep.equivalence
    want = exp.get("equivalence")
    if want == "agree" and not (eq.status is Applicability.APPLICABLE and eq.agree):
        fail.append(f"sum/derivative equivalence: status={eq.status.value} agree={eq.agree}")
    if want == "NotApplicable" and eq.status is not Applicability.NOT_APPLICABLE:
        fail.append("sum/derivative equivalence should be NotApplicable")

    # entries whose harmonic values go through grid differences pin a looser tolerance
    tv = max(exp.get("value_tol", 0.0), b["expected_value"])

    def close(label, got, want):
        err = float(np.max(np.abs(np.asarray(got, dtype=float) - np.asarray(want, dtype=float))))
        if not err <= tv:
            fail.append(f"{label} off by {err:.3e} (tol {tv:.0e})")

    if "curvatures" in exp:
        close("curvatures", a.frames.curvatures, np.broadcast_to(exp["curvatures"], a.frames.curvatures.shape))
    if "epsilons" in exp and list(a.frames.epsilons) != exp["epsilons"]:
        fail.append(f"epsilons {a.frames.epsilons} != {tuple(exp['epsilons'])}")
    if "harmonic" in exp:
        close("harmonic curvatures", a.harmonic.values, np.broadcast_to(exp["harmonic"], a.harmonic.values.shape))
    if "slant_constant" in exp:
        close("g(grad f, V_n)", rep.slant.mean, exp["slant_constant"])
        if not rep.slant.max_abs_dev <= tv:
            fail.append(f"g(grad f, V_n) deviation {rep.slant.max_abs_dev:.3e}")
    if "signed_sum" in exp:
        close("signed sum", rep.signed_sum.mean, exp["signed_sum"])
    if "axis" in exp:
        ax = axis_reconstruct(a.metric, a.field, a.frames, a.harmonic)
        close("reconstructed axis", ax.reconstructed_axis, np.broadcast_to(exp["axis"], ax.reconstructed_axis.shape))
    return res


TABLE_HEADER = f"{'curve':<16} {'verdict':<27} {'system_res':>10} {'axis_err':>10} {'sum_dev':>10} {'hderiv_res':>10}  result"


def format_row(r: EntryResult) -> str:
    return (
        f"{r.name:<16} {r.verdict:<27} {r.system_residual:>10.3e} {r.axis_error:>10.3e} "
        f"{r.sum_deviation:>10.3e} {r.last_harmonic_residual:>10.3e}  {'SKIP' if r.skipped else 'PASS' if r.passed else 'FAIL'}"
    )

"""JSON schemas for curves, fields and metrics; deterministic file output."""
from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .curves import (
    CurveSpec,
    EuclidHelix,
    FrenetODECurve,
    MinkowskiHelix,
    PolynomialCurve,
    SampledCurve,
    WCurve,
)
from .eikonal import ScalarField, builtin_field
from .errors import SpecParseError
from .pseudometric import SignatureMetric


def _domain(data: dict, default=None):
    dom = data.get("domain", default)
    if dom is None:
        raise SpecParseError("curve spec needs a 'domain': [t0, t1]")
    if len(dom) != 2:
        raise SpecParseError(f"domain must have two entries, got {dom!r}")
    return (float(dom[0]), float(dom[1]))


def curve_from_json(data: dict) -> CurveSpec:
    if not isinstance(data, dict):
        raise SpecParseError("curve spec must be a JSON object")
    family = data.get("family")
    p = data.get("params", {})
    try:
        if family == "euclid_helix":
            c = EuclidHelix(float(p["a"]), float(p["b"]), _domain(data))
        elif family == "minkowski_helix":
            c = MinkowskiHelix(float(p["a"]), float(p["b"]), _domain(data))
        elif family == "w_curve":
            c = WCurve(float(p["a"]), float(p["p"]), float(p["b"]), float(p["q"]), _domain(data))
        elif family == "polynomial":
            c = PolynomialCurve(tuple(map(tuple, p["coefficients"])), _domain(data))
        elif family == "frenet_ode":
            c = FrenetODECurve(tuple(p["signs"]), tuple(map(tuple, p["curvatures"])), _domain(data))
        elif family == "sampled":
            c = SampledCurve(tuple(p["params"]), tuple(map(tuple, p["points"])))
        else:
            raise SpecParseError(f"unknown curve family {family!r}")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SpecParseError):
            raise
        raise SpecParseError(f"bad parameters for curve family {family!r}: {exc}") from exc
    if "dim" in data and int(data["dim"]) != c.dim:
        raise SpecParseError(f"curve spec says dim={data['dim']} but family {family!r} has dim {c.dim}")
    return c


def field_from_json(data: dict, dim: int | None = None) -> ScalarField:
    if not isinstance(data, dict):
        raise SpecParseError("field spec must be a JSON object")
    form = data.get("form")
    if form == "linear":
        try:
            sf = ScalarField.linear(data["df"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecParseError(f"bad linear field: {exc}") from exc
    elif form == "analytic":
        d = int(data.get("dim", dim or 0))
        if d <= 0:
            raise SpecParseError("analytic field needs a dimension")
        sf = builtin_field(data.get("builtin", ""), d)
    else:
        raise SpecParseError(f"unknown field form {form!r}")
    if "dim" in data and int(data["dim"]) != sf.dim:
        raise SpecParseError(f"field spec says dim={data['dim']} but df has length {sf.dim}")
    return sf


def metric_from_json(data: dict) -> SignatureMetric:
    try:
        return SignatureMetric.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecParseError(f"bad metric: {exc}") from exc


def read_json_source(source: str) -> dict:
    """Inline JSON text or a path to a JSON file."""
    text = source.strip()
    if not text.startswith("{"):
        path = Path(source)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise SpecParseError(f"cannot read {source}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"malformed JSON in {source[:60]!r}: {exc}") from exc


def parse_metric(source: str, dim: int | None = None) -> SignatureMetric:
    """``euclidean``, ``lorentzian``, ``-1,1,1``, inline JSON or a JSON path."""
    text = source.strip()
    if text in ("euclidean", "lorentzian"):
        if dim is None:
            raise SpecParseError(f"metric {text!r} needs the curve dimension")
        return SignatureMetric.euclidean(dim) if text == "euclidean" else SignatureMetric.lorentzian(dim)
    if text and text[0] in "+-0123456789" and "," in text:
        try:
            return SignatureMetric(tuple(int(x) for x in text.split(",")))
        except ValueError as exc:
            raise SpecParseError(f"bad inline metric {text!r}: {exc}") from exc
    return metric_from_json(read_json_source(source))


# ---------------------------------------------------------------------------
# output


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps(obj) -> str:
    """Deterministic JSON: insertion-ordered keys, round-trip float repr."""
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

"""Command line front end.

  helixlab analyze --curve euclid_helix --out out/
  helixlab verify [--only NAME]
  helixlab gallery
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import gallery
from .curves import ANALYTIC, FINITE_DIFFERENCE, MIN_SAMPLES
from .eikonal import BUILTIN_FIELDS, HYPOTHESIS_FAILED, NOT_SLANT, SLANT_HELIX, ScalarField, builtin_field
from .errors import HelixLabError, SpecParseError
from .frenet import frenet_csv
from .harmonic import harmonic_csv
from .io import curve_from_json, dumps, field_from_json, parse_metric, read_json_source, write_atomic
from .pipeline import analyze
from .tolerances import Tolerances

EXIT_SLANT, EXIT_NOT_SLANT, EXIT_HYPOTHESIS, EXIT_COMPUTE, EXIT_INPUT = 0, 1, 2, 3, 4
VERDICT_EXIT = {SLANT_HELIX: EXIT_SLANT, NOT_SLANT: EXIT_NOT_SLANT, HYPOTHESIS_FAILED: EXIT_HYPOTHESIS}
JETS = {"analytic": ANALYTIC, "fd": FINITE_DIFFERENCE, FINITE_DIFFERENCE: FINITE_DIFFERENCE}


def _load_field(source: str, dim: int) -> ScalarField:
    text = source.strip()
    if text in BUILTIN_FIELDS:
        return builtin_field(text, dim)
    if text and text[0] in "+-.0123456789" and "," in text:
        try:
            return ScalarField.linear([float(x) for x in text.split(",")])
        except ValueError as exc:
            raise SpecParseError(f"bad inline covector {text!r}") from exc
    return field_from_json(read_json_source(source), dim)


def _resolve(args):
    """Curve, metric and field from CLI arguments (gallery names allowed)."""
    if args.curve in gallery.names():
        e = gallery.entry(args.curve)
        curve, metric, field = e.curve, e.metric, e.field
    else:
        curve = curve_from_json(read_json_source(args.curve))
        metric, field = None, None
    if args.metric:
        metric = parse_metric(args.metric, curve.dim)
    if metric is None:
        metric = parse_metric("euclidean", curve.dim)
    if args.field:
        field = _load_field(args.field, curve.dim)
    if field is None:
        raise SpecParseError("--field is required unless --curve names a gallery entry")
    if metric.dim != curve.dim or field.dim != curve.dim:
        raise SpecParseError(f"curve dim {curve.dim}, metric dim {metric.dim} and field dim {field.dim} must agree")
    return curve, metric, field


def _tolerances(args, mode: str) -> Tolerances:
    return Tolerances.for_mode(mode).with_overrides(atol=args.atol, rtol=args.rtol)


def cmd_analyze(args) -> int:
    mode = JETS[args.jets]
    try:
        if args.samples < MIN_SAMPLES:
            raise SpecParseError(f"--samples must be >= {MIN_SAMPLES}")
        curve, metric, field = _resolve(args)
        tol = _tolerances(args, mode)
    except (SpecParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        a = analyze(metric, curve, field, args.samples, mode, tol)
    except HelixLabError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    out = Path(args.out)
    try:
        if args.format in ("csv", "both"):
            write_atomic(out / "frenet.csv", frenet_csv(a.frames))
            write_atomic(out / "harmonic.csv", harmonic_csv(a.harmonic))
        if args.format in ("json", "both"):
            write_atomic(out / "report.json", dumps(a.summary_json()))
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"verdict: {a.report.verdict}")
    return VERDICT_EXIT[a.report.verdict.kind]


def cmd_verify(args) -> int:
    mode = JETS[args.jets]
    try:
        tol = Tolerances.for_mode(mode)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.only:
        if args.only not in gallery.names():
            print(f"error: unknown gallery entry {args.only!r}", file=sys.stderr)
            return EXIT_INPUT
        selected = [gallery.entry(args.only)]
    else:
        selected = gallery.entries()
    results = [gallery.check_entry(e, mode, args.samples, tol) for e in selected]
    lines = [gallery.TABLE_HEADER] + [gallery.format_row(r) for r in results]
    for r in results:
        if r.skipped:
            lines.append(f"  {r.name}: skipped, {r.skipped}")
        for msg in r.failures:
            lines.append(f"  {r.name}: {msg}")
    ran = [r for r in results if not r.skipped]
    npass = sum(r.passed for r in ran)
    lines.append(f"{npass}/{len(ran)} gallery entries passed" + (f", {len(results) - len(ran)} skipped" if len(ran) < len(results) else ""))
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        for r in results:
            if r.analysis is not None:
                write_atomic(out / r.name / "report.json", dumps(r.analysis.summary_json()))
        write_atomic(out / "summary.txt", text)
    return 0 if npass == len(ran) else EXIT_NOT_SLANT


def cmd_gallery(args) -> int:
    for e in gallery.entries():
        print(f"{e.name}: {e.description}")
        print(f"  curve:  {e.curve.family} {e.raw['curve'].get('params', {})} on {list(e.curve.domain)}")
        print(f"  metric: signs={list(e.metric.signs)}")
        print(f"  field:  {e.raw['field']}")
        print(f"  {e.expectation_text()}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="helixlab", description="Frenet apparatus and eikonal slant-helix checks")
    sub = ap.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="analyse one curve/field pair")
    an.add_argument("--curve", required=True, help="gallery name, JSON file or inline JSON")
    an.add_argument("--field", help="builtin field name, 'c1,c2,...' covector, JSON file or inline JSON")
    an.add_argument("--metric", help="'euclidean', 'lorentzian', '--metric=-1,1,1', JSON file or inline JSON")
    an.add_argument("--samples", type=int, default=201)
    an.add_argument("--jets", choices=sorted(JETS), default="analytic")
    an.add_argument("--out", default="helixlab_out")
    an.add_argument("--format", choices=("json", "csv", "both"), default="both")
    an.add_argument("--atol", type=float)
    an.add_argument("--rtol", type=float)
    an.set_defaults(func=cmd_analyze)

    ve = sub.add_parser("verify", help="run the gallery acceptance checks")
    ve.add_argument("--only", metavar="NAME")
    ve.add_argument("--jets", choices=sorted(JETS), default="analytic")
    ve.add_argument("--samples", type=int, default=None)
    ve.add_argument("--out", help="also write per-entry reports here")
    ve.set_defaults(func=cmd_verify)

    ga = sub.add_parser("gallery", help="list the built-in gallery")
    ga.set_defaults(func=cmd_gallery)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())

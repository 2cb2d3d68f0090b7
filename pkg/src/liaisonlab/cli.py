"""Command-line front end: verify / construct / gb / invariants.

Exit codes: 0 all checks passed; 1 a check failed (the certificate is
still written); 2 degenerate-sample exhaustion; 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .algebra_core import MonomialOrder, PrimeField
from .errors import DegenerateSampleError, LiaisonError
from .ideal_ops import read_ideal_text, saturate_irrelevant, write_ideal_text
from .invariants import curve_invariants
from .pipelines import PIPELINES, run_pipeline

USAGE_ERROR = 64


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="liaisonlab",
        description="Exact liaison constructions over F_p with replayable certificates.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, pipeline_required=True):
        sp.add_argument("--pipeline", choices=PIPELINES, required=pipeline_required)
        sp.add_argument("--prime", type=int, default=10007)
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--output", help="certificate file (stdout if omitted)")
        sp.add_argument("--jobs", type=int, default=1, help="parallel fiber-scan workers")
        sp.add_argument("--scan-extension-cap", type=int, default=1, choices=(1, 2, 3))
        sp.add_argument("--n", type=int, default=5, help="marked points for m10-n")
        sp.add_argument("--points-mode", choices=("ambient", "on-curve"), default="ambient")

    v = sub.add_parser("verify", help="run a pipeline and check every assertion")
    common(v)
    c = sub.add_parser("construct", help="run a pipeline and dump intermediate data")
    common(c)
    c.add_argument("--dump-ideals", metavar="DIR", help="write every intermediate ideal here")
    c.add_argument("--dump-choices", action="store_true", help="include sampled raw data in the certificate")

    g = sub.add_parser("gb", help="reduced Groebner basis of an ideal file")
    g.add_argument("--input", required=True)
    g.add_argument("--order", default="grevlex", help="grevlex or block:<name>,<name>,...")
    g.add_argument("--output")

    i = sub.add_parser("invariants", help="curve invariants of an ideal file")
    i.add_argument("--input", required=True)
    i.add_argument("--saturate", action="store_true")
    return ap


def _emit(text: str, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _format_cert(cert, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(cert.to_dict(), indent=2)
    lines = [
        f"pipeline {cert.pipeline}  prime {cert.prime}  seed {cert.seed}  "
        f"{'PASS' if cert.passed else 'FAIL'}"
    ]
    for c in cert.checks:
        mark = "ok " if c.passed else "FAIL"
        lines.append(f"  [{mark}] {c.name}: expected {c.expected!r}, computed {c.computed!r}")
    for r in cert.resamples:
        lines.append(f"  resample: {r}")
    return "\n".join(lines)


def run(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return USAGE_ERROR if e.code not in (0, None) else 0
    try:
        if args.command in ("verify", "construct"):
            return _run_pipeline_command(args)
        if args.command == "gb":
            return _run_gb(args)
        if args.command == "invariants":
            return _run_invariants(args)
    except (ValueError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return USAGE_ERROR
    return USAGE_ERROR


def _run_pipeline_command(args) -> int:
    try:
        PrimeField(args.prime)
    except ValueError as e:
        sys.stderr.write(f"error: {e}\n")
        return USAGE_ERROR
    kw = {
        "jobs": args.jobs,
        "scan_extension_cap": args.scan_extension_cap,
        "n": args.n,
        "points_mode": args.points_mode,
    }
    dump_dir = getattr(args, "dump_ideals", None)
    if args.command == "construct" and dump_dir:
        os.makedirs(dump_dir, exist_ok=True)
        from . import pipelines as _pl

        _pl._DUMP_DIR = dump_dir
    try:
        if args.command == "construct" and getattr(args, "dump_choices", False):
            from . import pipelines as _pl

            _pl._DUMP_CHOICES = True
        cert = run_pipeline(args.pipeline, args.prime, args.seed, **kw)
    except DegenerateSampleError as e:
        sys.stderr.write(f"degenerate samples exhausted: {e}\n")
        return 2
    except LiaisonError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    finally:
        from . import pipelines as _pl

        _pl._DUMP_DIR = None
        _pl._DUMP_CHOICES = False
    _emit(_format_cert(cert, args.format), args.output)
    return 0 if cert.passed else 1


def _parse_order(ring, spec: str):
    if spec == "grevlex":
        return MonomialOrder.grevlex(ring)
    if spec.startswith("block:"):
        return MonomialOrder(ring, spec[6:].split(","))
    raise ValueError(f"unknown order {spec!r}")


def _run_gb(args) -> int:
    with open(args.input) as fh:
        I = read_ideal_text(fh.read())
    order = _parse_order(I.ring, args.order)
    gb = I.groebner(order)
    out = write_ideal_text(
        type(I)(I.ring, list(gb.elements), I.saturated)
    )
    _emit(out, args.output)
    return 0


def _run_invariants(args) -> int:
    with open(args.input) as fh:
        I = read_ideal_text(fh.read())
    if args.saturate or not I.saturated:
        I = saturate_irrelevant(I)
    inv = curve_invariants(I)
    payload = {
        "ambient": str(inv.ambient),
        "dimension": inv.dimension,
        "degree": list(inv.degree) if isinstance(inv.degree, tuple) else inv.degree,
        "p_a": inv.p_a,
    }
    _emit(json.dumps(payload, indent=2), None)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Batch command line: build families, run verification suites, scan quantities.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration
error.  Reports and CSV output are byte-deterministic for fixed inputs and
profile; timing is only embedded on request since it breaks that.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

from . import fileformat
from .constructions import diverging_sequence
from .errors import FnsurfError
from .extfloat import ExtScalar
from .holonomy import Holonomy, TwistVector
from .metrics import (
    DEFAULT_PROFILE,
    dls_estimate,
    dls_twist_lower,
    dls_twist_upper,
    dqc_lower_multitwist,
)
from .surface import (
    MarkedPair,
    SurfaceFamily,
    TwistLaw,
    apply_twist_law,
    build_family,
    length_law,
    perturbed_point,
)
from .suites import SUITES, calibrated_profile, run_suite

USAGE_EXIT = 2
FAIL_EXIT = 1

SCAN_QUANTITIES = ("dls-upper", "dls-lower", "dqc-lower", "dls-estimate", "membership-ratio")


def _family_from_args(args) -> SurfaceFamily:
    law = length_law(args.law, args.law_param)
    return SurfaceFamily(kind=args.family, law=law)


def _parse_range(spec: str) -> list[float]:
    """start:stop:step (inclusive stop, within 1e-9) or comma-separated values."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise FnsurfError(f"bad range {spec!r}; expected start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise FnsurfError("range step must be positive")
        out = []
        v = start
        while v <= stop + 1e-9:
            out.append(v)
            v += step
        return out
    return [float(p) for p in spec.split(",") if p]


def cmd_build(args) -> int:
    fam = _family_from_args(args)
    graph, point = build_family(fam, args.depth)
    fileformat.save_surface(args.out, graph, point, family=args.family)
    print(f"wrote {args.out}: {len(graph.pants)} pants, {len(graph.curve_ids)} interior curves")
    return 0


def cmd_verify(args) -> int:
    if args.profile:
        try:
            profile = fileformat.load_profile(args.profile)
        except FnsurfError as exc:
            print(f"profile error: {exc}", file=sys.stderr)
            return FAIL_EXIT
    else:
        profile = DEFAULT_PROFILE
    needs_calibration = args.suite in ("bounds-ordering", "all") and profile.twist_defect is None
    if needs_calibration:
        profile = calibrated_profile(profile)
    start = time.monotonic()
    checks = run_suite(args.suite, profile)
    elapsed_ms = 1000.0 * (time.monotonic() - start)
    for c in checks:
        status = "pass" if c.passed else "FAIL"
        print(f"[{status}] {c.name}")
    report = fileformat.report_to_json(
        f"verify --suite {args.suite}",
        profile,
        [c.item() for c in checks],
        wall_time_ms=elapsed_ms if args.timing else None,
    )
    if args.report:
        fileformat.save_report(args.report, report)
    if args.write_profile:
        fileformat.save_profile(args.write_profile, profile)
    return 0 if report["passed"] else FAIL_EXIT


def _scan_rows(args, profile):
    fam = _family_from_args(args)
    if args.quantity == "dls-upper":
        graph, x = build_family(fam, args.depth)
        for n in range(args.index_start, min(args.index_stop, len(graph.law_curves)) + 1):
            rep = diverging_sequence(fam, graph, x, n, profile)
            yield (float(n), rep.magnitude, rep.dls_upper.value)
    elif args.quantity == "dls-lower":
        if profile.twist_defect is None:
            profile = calibrated_profile(profile)
        graph, x = build_family(fam, args.depth)
        cid = graph.law_curves[args.index_start - 1]
        for t in _parse_range(args.twists):
            yield (t, dls_twist_lower(x, cid, t, profile).value)
    elif args.quantity == "dqc-lower":
        graph, x = build_family(fam, args.depth)
        cid = graph.law_curves[args.index_start - 1]
        rho = Holonomy(graph, x).min_crossing_sine(cid)
        for t in _parse_range(args.twists):
            b = dqc_lower_multitwist(x, TwistVector.of({cid: t}), {cid: rho}, profile)
            yield (t, b.value, b.get("dilatation"))
    elif args.quantity == "dls-estimate":
        import random

        graph, x = build_family(fam, args.depth)
        y = perturbed_point(x, random.Random(args.seed))
        pair = MarkedPair(graph, x, y)
        for n in range(args.index_start, args.index_stop + 1):
            yield (float(n), dls_estimate(pair, args.twist_depth, n, profile=profile).value)
    elif args.quantity == "membership-ratio":
        law = fam.law
        tl = TwistLaw(growth=args.twist_growth, scale=1.0)
        for n in range(args.index_start, args.index_stop + 1):
            denom = max(abs(law.log_value(n)), 1.0)
            yield (float(n), tl.value(n, law) / denom)
    else:
        raise FnsurfError(f"unknown quantity {args.quantity!r}")


_SCAN_HEADERS = {
    "dls-upper": "index,magnitude,dls_upper",
    "dls-lower": "twist,dls_lower",
    "dqc-lower": "twist,dqc_lower,dilatation_lower",
    "dls-estimate": "depth,dls_estimate",
    "membership-ratio": "index,ratio",
}


def cmd_scan(args) -> int:
    profile = fileformat.load_profile(args.profile) if args.profile else DEFAULT_PROFILE
    rows = list(_scan_rows(args, profile))
    if not rows:
        print("empty grid", file=sys.stderr)
        return USAGE_EXIT
    lines = [_SCAN_HEADERS[args.quantity]]
    for row in rows:
        lines.append(",".join(f"{v:.12g}" for v in row))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fnsurf",
        description="Fenchel-Nielsen surfaces: builders, verification suites, bound scans",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build a family truncation and write the surface file")
    p_build.add_argument("--family", choices=("flute", "torus-chain"), required=True)
    p_build.add_argument("--law", choices=("exp-linear", "exp-double", "constant", "linear"), default="exp-linear")
    p_build.add_argument("--law-param", type=float, default=None, help="rate/base/value of the law")
    p_build.add_argument("--depth", type=int, required=True)
    p_build.add_argument("--out", required=True)
    p_build.set_defaults(func=cmd_build)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("--suite", choices=SUITES, required=True)
    p_verify.add_argument("--profile", default=None, help="constants profile JSON")
    p_verify.add_argument("--report", default=None, help="write the report JSON here")
    p_verify.add_argument("--write-profile", default=None, help="save the (calibrated) profile")
    p_verify.add_argument("--timing", action="store_true", help="embed wall time (breaks byte determinism)")
    p_verify.set_defaults(func=cmd_verify)

    p_scan = sub.add_parser("scan", help="scan a quantity over a grid, emit CSV")
    p_scan.add_argument("--quantity", choices=SCAN_QUANTITIES, required=True)
    p_scan.add_argument("--family", choices=("flute", "torus-chain"), default="flute")
    p_scan.add_argument("--law", choices=("exp-linear", "exp-double", "constant", "linear"), default="exp-linear")
    p_scan.add_argument("--law-param", type=float, default=None)
    p_scan.add_argument("--depth", type=int, default=30)
    p_scan.add_argument("--index-start", type=int, default=1)
    p_scan.add_argument("--index-stop", type=int, default=20)
    p_scan.add_argument("--twists", default="1:20:1")
    p_scan.add_argument("--twist-depth", type=int, default=2)
    p_scan.add_argument("--twist-growth", choices=("linear", "exp"), default="exp")
    p_scan.add_argument("--seed", type=int, default=7)
    p_scan.add_argument("--profile", default=None)
    p_scan.add_argument("--out", default=None)
    p_scan.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_EXIT if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except FnsurfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Numeric defaults (all overridable by flags):

=====================  =========  ===========================================
name                   value      used by
=====================  =========  ===========================================
``panels``             64         Gauss-Legendre panels along ribbons
``order``              4          nodes per panel
``M``                  256        boundary rays per cross-section
``h``                  R / 500    tracer step, ``R`` the bounding radius
``samples``            10**6      Monte Carlo points (``oracle``)
``seed``               0          Monte Carlo seed
``rtol``               1e-12      adaptive quadrature along centroid lines
=====================  =========  ===========================================

Exit status is 0 on success, 2 when an input fails validation and 1 when
a numerical method fails.
"""

import argparse
import json
import sys

import numpy as np

from . import body as _body
from . import curve, frames, quadrature, rod, surface, volume

DEFAULTS = {
    "panels": 64,
    "order": 4,
    "M": 256,
    "samples": 10 ** 6,
    "seed": 0,
    "rtol": 1e-12,
}

VALIDATION_ERRORS = (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError)
NUMERIC_ERRORS = (frames.IntegrationError, quadrature.QuadratureError, curve.CutError, curve.TraceError,
                  ArithmeticError, np.linalg.LinAlgError)


class ValidationError(ValueError):
    pass


def _vec(text, name="vector"):
    try:
        v = np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise ValidationError(f"{name} must be three comma-separated numbers, got {text!r}") from None
    if v.shape != (3,):
        raise ValidationError(f"{name} must be three comma-separated numbers, got {text!r}")
    return v


def _positive(kind):
    def parse(text):
        try:
            x = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if not x > 0:
            raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
        return x
    return parse


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _emit(obj, out):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise ValidationError(f"--{n.replace('_', '-')} is required for '{args.command}'")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _axis_line(b, axis):
    """Straight ribbon through the body's interior hint along ``axis``, support to support."""
    a = axis / np.linalg.norm(axis)
    o = b.interior_hint
    lo = o + ((b.support_point(-a) - o) @ a) * a
    hi = o + ((b.support_point(a) - o) @ a) * a
    return frames.LineRibbon(lo, a, float((hi - lo) @ a))


def cmd_volume(args):
    _require(args, "body")
    b = _body.ConvexBody.from_json(args.body)
    if args.mode == "centroid-line":
        _require(args, "axis")
        line = _axis_line(b, _vec(args.axis, "--axis"))
        M = args.M

        def section(s):
            T, _, _ = line.frame(s)
            return _body.cross_section(b, _body.SectionPlane.through(line.point(s), T), M)

        # a straight line is a centroid curve only if the slice centroids sit on it
        for s in line.length * np.linspace(0.1, 0.9, 9):
            sec = section(s)
            off = float(np.hypot(*sec.local_centroid))
            if off > 1e-6 * np.sqrt(sec.area):
                raise volume.NotCentroidCurveError(
                    f"slice centroid off the axis line by {off:.3g} at s={s:.6g}")
        val = volume.centroid_curve_volume(line, lambda s: section(float(s)).area, rtol=args.rtol)
        _emit({"mode": "centroid-line", "volume": val, "length": line.length}, args.out)
    elif args.mode == "ribbon":
        _require(args, "ribbon")
        rib = frames.ribbon_from_spec(_load_json(args.ribbon))
        series = volume.SliceSeries.from_body(rib, b, args.panels, args.order, args.M)
        if args.slices:
            series.to_csv(args.slices)
        _emit({"mode": "ribbon", "volume": volume.pappus_volume(series)}, args.out)
    elif args.mode == "halfspace":
        _require(args, "axis", "p0")
        val = _body.halfspace_volume(b, _vec(args.axis, "--axis"), _vec(args.p0, "--p0"))
        _emit({"mode": "halfspace", "volume": val}, args.out)
    else:
        _emit({"mode": "body", "volume": float(b.volume)}, args.out)


def cmd_trace(args):
    _require(args, "body", "p0")
    b = _body.ConvexBody.from_json(args.body)
    p0 = _vec(args.p0, "--p0")
    if b.F(p0) > 0:
        raise ValidationError(f"--p0 {args.p0} lies outside the body")
    tr = curve.trace_centroid_curve(b, p0, h=args.h,
                                    direction="both" if args.two_sided else "forward")
    if args.out:
        tr.to_csv(args.out, two_sided=args.two_sided)
    else:
        import tempfile
        import os
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, "trace.csv")
            tr.to_csv(path, two_sided=args.two_sided)
            with open(path) as fh:
                sys.stdout.write(fh.read())
    summary = {"samples": len(tr), "stop_reasons": tr.stop_reasons}
    sys.stderr.write(json.dumps(summary, sort_keys=True) + "\n")


def cmd_rod(args):
    if args.spec:
        spec = _load_json(args.spec)
    else:
        _require(args, "ribbon", "profile")
        spec = {"curve": _load_json(args.ribbon), "profile": _load_json(args.profile)}
    r = rod.RodSpec.from_spec(spec)
    volume_, centroid = rod.bent_rod_centroid(r, args.panels, args.order)
    _emit({"volume": float(volume_), "centroid": [float(x) for x in centroid],
           "conditions": r.conditions()}, args.out)


def cmd_section(args):
    _require(args, "body", "p0", "axis")
    b = _body.ConvexBody.from_json(args.body)
    plane = _body.SectionPlane.through(_vec(args.p0, "--p0"), _vec(args.axis, "--axis"))
    sec = _body.cross_section(b, plane, args.M)
    if sec.area == 0:
        raise ValidationError("the plane misses the body interior")
    if args.csv:
        sec.to_csv(args.csv)
    _emit({"area": sec.area, "centroid": sec.centroid.tolist(), "Iu": sec.Iu, "Iv": sec.Iv,
           "Iuv": sec.Iuv, "perimeter": sec.perimeter}, args.out)


def cmd_surface_bound(args):
    _require(args, "ribbon")
    rib = frames.ribbon_from_spec(_load_json(args.ribbon))
    if args.boundary:
        tr = surface.BoundaryTrace.from_csv(args.boundary, rib)
    elif args.body:
        b = _body.ConvexBody.from_json(args.body)
        tr = surface.BoundaryTrace.from_slices(volume.SliceSeries.from_body(rib, b, args.panels,
                                                                             args.order, args.M))
    else:
        raise ValidationError("surface-bound needs --boundary or --body")
    _emit({"bound": surface.area_lower_bound(tr), "equality_defect": surface.equality_defect(tr)},
          args.out)


def cmd_oracle(args):
    _require(args, "body")
    b = _body.ConvexBody.from_json(args.body)
    target = b
    if args.p0 is not None or args.axis is not None:
        _require(args, "p0", "axis")
        p, n = _vec(args.p0, "--p0"), _vec(args.axis, "--axis")
        target = lambda x: (b.F(x) <= 0) & ((x - p) @ n <= 0)
    R = b.bounding_radius
    box = (b.interior_hint - R, b.interior_hint + R)
    vol, se = _body.monte_carlo_volume(target, args.samples, args.seed, box)
    c, cse = _body.monte_carlo_centroid(target, args.samples, args.seed, box)
    _emit({"volume": vol, "volume_se": se, "centroid": c.tolist(), "centroid_se": cse.tolist(),
           "samples": args.samples, "seed": args.seed}, args.out)


COMMANDS = {
    "volume": cmd_volume,
    "trace": cmd_trace,
    "rod": cmd_rod,
    "section": cmd_section,
    "surface-bound": cmd_surface_bound,
    "oracle": cmd_oracle,
}


def build_parser():
    p = argparse.ArgumentParser(prog="pappus", description="Volumes, centroids and centroid curves of solids.")
    p.add_argument("--json-errors", action="store_true", help="report errors as JSON on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json-errors", action="store_true", default=argparse.SUPPRESS,
                        help="report errors as JSON on stderr")
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--panels", type=_positive(int), default=DEFAULTS["panels"], help="quadrature panels")
        sp.add_argument("--order", type=_positive(int), default=DEFAULTS["order"], help="Gauss nodes per panel")
        sp.add_argument("--M", type=_positive(int), default=DEFAULTS["M"], help="rays per section")
        sp.add_argument("--seed", type=int, default=DEFAULTS["seed"], help="random seed")
        sp.add_argument("--body", help="body JSON file")
        sp.add_argument("--ribbon", help="ribbon (curve) JSON file")
        sp.add_argument("--profile", help="profile JSON file")
        sp.add_argument("--p0", help="point x,y,z")
        sp.add_argument("--axis", help="direction x,y,z")
        return sp

    sp = common(sub.add_parser("volume", help="volume of a body or sliced solid"))
    sp.add_argument("--mode", choices=["body", "centroid-line", "ribbon", "halfspace"], default="body", help="what to integrate")
    sp.add_argument("--rtol", type=_positive(float), default=DEFAULTS["rtol"], help="relative tolerance")
    sp.add_argument("--slices", help="write the slice table CSV here (ribbon mode)")

    sp = common(sub.add_parser("trace", help="trace a centroid curve"))
    sp.add_argument("--h", type=_positive(float), help="step length (default R/500)")
    sp.add_argument("--two-sided", action="store_true", help="write both branches with signed s")

    sp = common(sub.add_parser("rod", help="bent-rod volume and centroid"))
    sp.add_argument("--spec", help="rod JSON file with curve and profile")

    sp = common(sub.add_parser("section", help="plane section through --p0 with normal --axis"))
    sp.add_argument("--csv", help="write the boundary CSV here")

    sp = common(sub.add_parser("surface-bound", help="lower bound for the lateral surface area"))
    sp.add_argument("--boundary", help="(s, t, u, v) grid CSV")

    sp = common(sub.add_parser("oracle", help="Monte Carlo volume and centroid"))
    sp.add_argument("--samples", type=_positive(int), default=DEFAULTS["samples"], help="Monte Carlo points")
    return p


def _report(exc, kind, json_errors):
    if json_errors:
        sys.stderr.write(json.dumps({"error": kind, "type": type(exc).__name__, "message": str(exc)}) + "\n")
    else:
        sys.stderr.write(f"pappus: {kind} error: {exc}\n")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    json_errors = getattr(args, "json_errors", False)
    try:
        COMMANDS[args.command](args)
    except NUMERIC_ERRORS as e:
        _report(e, "numeric", json_errors)
        return 1
    except VALIDATION_ERRORS as e:
        _report(e, "validation", json_errors)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""``funkgeom`` command line: distances, gauges, lengths, spheres, slices, verification.

Exit codes: 0 success, 1 a verification property failed, 2 bad arguments or
input files, 3 a point lies outside the body, 4 the output could not be written.
Points are comma separated; write ``--from=-1,0`` when the first coordinate
is negative so the value is not mistaken for an option.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from .body import GeometryError, OutsideBodyError, affine_slice
from .bodyio import load_body, load_path
from .finsler import PathExitsBodyError, TautologicalStructure, path_length_report
from .funk import backward_sphere, forward_sphere, funk, funk_distance
from .gauge import minkowski_gauge
from .svg import render_svg
from .verify import SUITES, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_OUTSIDE, EXIT_WRITE = 0, 1, 2, 3, 4


class _WriteError(Exception):
    pass


def fmt(v: float) -> str:
    """Human number format: 12 significant digits, bare ``0`` and ``inf``."""
    v = float(v)
    if v == 0.0:
        return "0"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:#.12g}"


def parse_point(text: str) -> np.ndarray:
    try:
        vals = [float(s) for s in text.replace(" ", "").strip("()[]").split(",") if s != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated point: {text!r}")
    if not vals or not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError(f"not a finite point: {text!r}")
    return np.array(vals)


def _side(text: str) -> str:
    aliases = {"fwd": "forward", "forward": "forward", "right": "forward",
               "bwd": "backward", "backward": "backward", "left": "backward"}
    if text not in aliases:
        raise argparse.ArgumentTypeError("side must be fwd or bwd")
    return aliases[text]


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise _WriteError(str(exc)) from exc


def _vec(p) -> str:
    return ", ".join(fmt(c) for c in p)


# --- subcommands ------------------------------------------------------------


def cmd_dist(args) -> int:
    body = load_body(args.body)
    fwd = funk_distance(body, args.x, args.y)
    bwd = funk_distance(body, args.y, args.x)
    lines = [f"{fmt(fwd.value)} / {fmt(bwd.value)}"]
    a = "none" if fwd.boundary_point is None else f"({_vec(fwd.boundary_point)})"
    lines.append(f"a+ = {a}")
    _emit("\n".join(lines) + "\n", None)
    return EXIT_OK


def cmd_gauge(args) -> int:
    body = load_body(args.body)
    _emit(fmt(minkowski_gauge(body, args.at, args.vector)) + "\n", None)
    return EXIT_OK


def cmd_length(args) -> int:
    body = load_body(args.body)
    path = load_path(args.path)
    rep = path_length_report(TautologicalStructure(body), path)
    lines = [fmt(rep.value)]
    if args.check:
        lines.append(f"halving check: {fmt(rep.refined)} (rel change {rep.rel_change:.3g})")
        lines.append(f"F(start, end) = {fmt(funk(body, path.start, path.end))}")
    _emit("\n".join(lines) + "\n", None)
    return EXIT_OK


def _sphere_text(body, sample, fmt_name: str) -> str:
    if fmt_name == "json":
        return json.dumps(sample.as_dict(), indent=1) + "\n"
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for p in sample.points:
            w.writerow([repr(float(c)) for c in p])
        return buf.getvalue()
    return render_svg(body, sample)


def cmd_sphere(args) -> int:
    body = load_body(args.body)
    if args.format == "svg" and body.dim != 2:
        raise GeometryError("SVG output needs a planar body")
    make = forward_sphere if args.side == "forward" else backward_sphere
    sample = make(body, args.center, args.delta, args.dirs)
    _emit(_sphere_text(body, sample, args.format), args.out)
    return EXIT_OK


def cmd_ball(args) -> int:
    """Membership of a point in the open ball of radius delta about the centre."""
    body = load_body(args.body)
    if args.side == "forward":
        d = funk(body, args.center, args.point)
    else:
        d = funk(body, args.point, args.center)
    inside = d < args.delta
    name = "F(center, point)" if args.side == "forward" else "F(point, center)"
    _emit(f"{name} = {fmt(d)}\n{'inside' if inside else 'outside'}\n", None)
    return EXIT_OK


def cmd_slice(args) -> int:
    body = load_body(args.body)
    frame = np.array(args.frame, float)
    if frame.ndim != 2 or frame.shape[1] != body.dim:
        raise GeometryError("each --frame vector needs the body's dimension")
    sl = affine_slice(body, args.base, frame)
    x, y = args.x, args.y
    ambient = funk(body, args.base + x @ frame, args.base + y @ frame)
    _emit(f"slice {fmt(funk(sl, x, y))}\nambient {fmt(ambient)}\n", None)
    return EXIT_OK


def cmd_verify(args) -> int:
    body = load_body(args.body)
    command = "verify " + " ".join([Path(args.body).name, f"--suite {args.suite}",
                                    f"--seed {args.seed}", f"--samples {args.samples}"])
    report = run_suites(body, args.suite, seed=args.seed, samples=args.samples,
                        name=Path(args.body).stem, command=command)
    text = report.table() + "\n"
    text += f"{'PASS' if report.passed else 'FAIL'}  {sum(r.passed for r in report.results)}"
    text += f"/{len(report.results)} properties"
    if args.timings:
        text += f" in {report.wall_time:.1f} s"
    sys.stdout.write(text + "\n")
    if args.out:
        _emit(json.dumps(report.as_dict(timings=args.timings), indent=1) + "\n", args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="funkgeom", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def body_cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("body", help="body JSON file")
        return sp

    sp = body_cmd("dist", "F(x,y), F(y,x) and the exit point a+")
    sp.add_argument("--from", dest="x", type=parse_point, required=True)
    sp.add_argument("--to", dest="y", type=parse_point, required=True)
    sp.set_defaults(func=cmd_dist)

    sp = body_cmd("gauge", "Minkowski gauge of the body at a point")
    sp.add_argument("--at", type=parse_point, required=True)
    sp.add_argument("--vector", type=parse_point, required=True)
    sp.set_defaults(func=cmd_gauge)

    sp = body_cmd("length", "Finsler length of a polyline from a JSON vertex list")
    sp.add_argument("--path", required=True, help="path JSON file")
    sp.add_argument("--check", action="store_true", help="also print a halving check and F(start, end)")
    sp.set_defaults(func=cmd_length)

    for name, help_ in (("sphere", "sample a forward or backward sphere"),
                        ("ball", "test whether a point lies in an open ball")):
        sp = body_cmd(name, help_)
        sp.add_argument("--center", type=parse_point, required=True)
        sp.add_argument("--delta", type=float, required=True)
        sp.add_argument("--side", type=_side, default="forward", help="fwd or bwd")
        if name == "sphere":
            sp.add_argument("--dirs", type=int, default=None, help="number of directions")
            sp.add_argument("--format", choices=("json", "csv", "svg"), default="json")
            sp.add_argument("--out", default=None)
            sp.set_defaults(func=cmd_sphere)
        else:
            sp.add_argument("--point", type=parse_point, required=True)
            sp.set_defaults(func=cmd_ball)

    sp = body_cmd("slice", "distance on an affine slice vs the ambient distance")
    sp.add_argument("--base", type=parse_point, required=True)
    sp.add_argument("--frame", type=parse_point, action="append", required=True,
                    help="spanning vector; repeat for each slice dimension")
    sp.add_argument("--from", dest="x", type=parse_point, required=True, help="slice coordinates")
    sp.add_argument("--to", dest="y", type=parse_point, required=True, help="slice coordinates")
    sp.set_defaults(func=cmd_slice)

    sp = body_cmd("verify", "run the seeded property suites")
    sp.add_argument("--suite", choices=("all",) + SUITES, default="all")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--out", default=None, help="write the JSON report here")
    sp.add_argument("--timings", action="store_true", help="include wall time in the output")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OutsideBodyError, PathExitsBodyError) as exc:
        print(f"funkgeom: {exc}", file=sys.stderr)
        return EXIT_OUTSIDE
    except _WriteError as exc:
        print(f"funkgeom: cannot write output: {exc}", file=sys.stderr)
        return EXIT_WRITE
    except (GeometryError, ValueError) as exc:
        print(f"funkgeom: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

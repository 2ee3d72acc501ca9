"""Command-line frontend.

Subcommands: parse, build, detect, verify, trace, classify, render,
paper, selftest.  Exit codes: 0 success / match, 1 verification
mismatch or rejection, 2 invalid input.  All reports are fixed-format
text so runs can be diffed byte for byte.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .builder import (
    BuildFailed,
    BuildParams,
    REFERENCE_NAMES,
    UnknownName,
    build,
    reference_instance,
)
from .detect import DetectionReport, detect_all
from .forest import ForestParseError, canonical_code, parse_forest
from .geometry import (
    SeparationBoundary,
    Zone,
    parse_boundary,
    serialize_boundary,
)
from .render import render_figure, render_svg
from .rk4 import cross_check_cycle
from .system import NearCorner, TwoCenterSystem, normal_components
from .flow import trace_orbit
from .verify import verify_realization


def _fmt12(v: float) -> str:
    return format(float(v), ".12g")


def _detect_report_text(report: DetectionReport) -> str:
    lines: List[str] = []
    for cyc in report.verified:
        pts = " ".join(f"({_fmt12(p[0])},{_fmt12(p[1])})" for p, _ in cyc.crossings)
        lines.append(
            f"pair x*={_fmt12(cyc.pair.x_star)} y*={_fmt12(cyc.pair.y_star)} "
            f"kind={cyc.kind} Houter={_fmt12(cyc.candidate.h_outer)} "
            f"Hinner={_fmt12(cyc.candidate.h_inner)} verdict=verified "
            f"crossings={pts}"
        )
    for rej in report.rejected:
        c = rej.candidate
        lines.append(
            f"pair x*={_fmt12(c.pair.x_star)} y*={_fmt12(c.pair.y_star)} "
            f"kind={c.kind} Houter={_fmt12(c.h_outer)} "
            f"Hinner={_fmt12(c.h_inner)} verdict=rejected({rej.reason})"
        )
    for band in report.degenerate:
        lines.append(
            f"band segments=({band.left_segment},{band.right_segment}) "
            f"x=[{_fmt12(band.x_lo)},{_fmt12(band.x_hi)}]"
        )
    v, r, b = report.counts()
    lines.append(f"summary: candidates={v + r} verified={v} rejected={r} bands={b}")
    return "\n".join(lines) + "\n"


def _write_outputs(outdir: Path, boundary, system, detection, report_text: str,
                   match_text: Optional[str] = None) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "boundary.txt").write_text(serialize_boundary(boundary))
    (outdir / "system.txt").write_text(f"a {format(system.a, '.17g')}\n")
    (outdir / "report.txt").write_text(report_text)
    if match_text is not None:
        (outdir / "match.txt").write_text(match_text)
    rows = ["x_star\ty_star\tkind\th_outer\th_inner\tverdict"]
    for cyc in detection.verified:
        rows.append(
            f"{_fmt12(cyc.pair.x_star)}\t{_fmt12(cyc.pair.y_star)}\t{cyc.kind}"
            f"\t{_fmt12(cyc.candidate.h_outer)}\t{_fmt12(cyc.candidate.h_inner)}"
            "\tverified"
        )
    for rej in detection.rejected:
        c = rej.candidate
        rows.append(
            f"{_fmt12(c.pair.x_star)}\t{_fmt12(c.pair.y_star)}\t{c.kind}"
            f"\t{_fmt12(c.h_outer)}\t{_fmt12(c.h_inner)}\trejected({rej.reason})"
        )
    (outdir / "cycles.tsv").write_text("\n".join(rows) + "\n")
    (outdir / "realization.svg").write_text(
        render_svg(boundary, detection.verified)
    )
    render_figure(boundary, detection.verified, str(outdir / "figure.png"))


def _load_system(path: str) -> TwoCenterSystem:
    for line in Path(path).read_text().splitlines():
        parts = line.split()
        if parts and parts[0] == "a":
            return TwoCenterSystem(float(parts[1]))
    raise ValueError(f"no field record in {path}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = argparse.ArgumentParser(
        prog="twozone",
        description="Build and certify crossing limit-cycle configurations "
        "of planar two-zone piecewise-linear fields.",
    )
    ap.add_argument("--tolerance", type=float, default=1e-9,
                    help="trace closure tolerance")
    ap.add_argument("--max-arcs", type=int, default=64)
    ap.add_argument("--safety", type=float, default=0.5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=str, default=None)
    sub = ap.add_subparsers(dest="command", required=True)

    p_parse = sub.add_parser("parse", help="canonicalize a bracket forest")
    p_parse.add_argument("forest")

    p_build = sub.add_parser("build", help="realize a bracket forest")
    p_build.add_argument("forest")
    p_build.add_argument("--max-shrink", type=int, default=40)

    p_detect = sub.add_parser("detect", help="detect cycles of a stored system")
    p_detect.add_argument("boundary")
    p_detect.add_argument("system")

    p_verify = sub.add_parser("verify", help="verify a stored system against a target")
    p_verify.add_argument("boundary")
    p_verify.add_argument("system")
    p_verify.add_argument("target")

    p_trace = sub.add_parser("trace", help="trace one orbit from a boundary point")
    p_trace.add_argument("boundary")
    p_trace.add_argument("a", type=float)
    p_trace.add_argument("x", type=float)
    p_trace.add_argument("y", type=float)
    p_trace.add_argument("zone", choices=["inner", "outer"])

    p_classify = sub.add_parser("classify", help="classify a boundary point")
    p_classify.add_argument("boundary")
    p_classify.add_argument("a", type=float)
    p_classify.add_argument("segment", type=int)
    p_classify.add_argument("param", type=float)

    p_render = sub.add_parser("render", help="render a stored system")
    p_render.add_argument("boundary")
    p_render.add_argument("system")

    p_paper = sub.add_parser("paper", help="work with a bundled reference instance")
    p_paper.add_argument("name", choices=list(REFERENCE_NAMES))
    p_paper.add_argument("--detect", action="store_true")

    sub.add_parser("selftest", help="run the built-in consistency checks")

    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    try:
        return _dispatch(args)
    except (ForestParseError, UnknownName, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "parse":
        forest = parse_forest(args.forest)
        print(canonical_code(forest))
        return 0

    if args.command == "build":
        params = BuildParams(safety=args.safety, max_shrink=args.max_shrink,
                             seed=args.seed)
        try:
            rz = build(parse_forest(args.forest), params)
        except BuildFailed as exc:
            print(f"build failed: {exc}", file=sys.stderr)
            return 1
        text = _detect_report_text(rz.detection)
        match_text = rz.report.format()
        sys.stdout.write(match_text)
        if args.out:
            _write_outputs(Path(args.out), rz.boundary, rz.system, rz.detection,
                           text, match_text)
        return 0 if rz.report.match else 1

    if args.command == "detect":
        boundary = parse_boundary(Path(args.boundary).read_text())
        system = _load_system(args.system)
        report = detect_all(system, boundary, max_arcs=args.max_arcs)
        sys.stdout.write(_detect_report_text(report))
        if args.out:
            _write_outputs(Path(args.out), boundary, system, report,
                           _detect_report_text(report))
        return 0

    if args.command == "verify":
        boundary = parse_boundary(Path(args.boundary).read_text())
        system = _load_system(args.system)
        target = parse_forest(args.target)
        detection = detect_all(system, boundary, max_arcs=args.max_arcs)
        report = verify_realization(system, boundary, detection, target)
        sys.stdout.write(report.format())
        return 0 if report.match else 1

    if args.command == "trace":
        boundary = parse_boundary(Path(args.boundary).read_text())
        system = TwoCenterSystem(args.a)
        zone = Zone.INNER if args.zone == "inner" else Zone.OUTER
        trace = trace_orbit(system, boundary, (args.x, args.y), zone,
                            max_arcs=args.max_arcs, tol_close=args.tolerance)
        for arc in trace.arcs:
            print(
                f"arc zone={arc.zone.value} center=({_fmt12(arc.center[0])},"
                f"{_fmt12(arc.center[1])}) r={_fmt12(arc.radius)} "
                f"angles=[{_fmt12(arc.start_angle)},{_fmt12(arc.end_angle)}] "
                f"end=({_fmt12(arc.end_point[0])},{_fmt12(arc.end_point[1])}) "
                f"hit={arc.hit_class.value}"
            )
        print(f"outcome: {trace.outcome.value}")
        return 0

    if args.command == "classify":
        boundary = parse_boundary(Path(args.boundary).read_text())
        system = TwoCenterSystem(args.a)
        seg = boundary.loop_segments()[args.segment]
        try:
            pt, _, di, do = normal_components(system, boundary, seg, args.param)
            from .system import classify_boundary_point

            cls = classify_boundary_point(system, boundary, seg, args.param)
        except NearCorner as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(
            f"segment={args.segment} param={_fmt12(args.param)} "
            f"point=({_fmt12(pt[0])},{_fmt12(pt[1])}) dI={_fmt12(di)} "
            f"dO={_fmt12(do)} class={cls.value}"
        )
        return 0

    if args.command == "render":
        boundary = parse_boundary(Path(args.boundary).read_text())
        system = _load_system(args.system)
        report = detect_all(system, boundary, max_arcs=args.max_arcs)
        svg = render_svg(boundary, report.verified)
        if args.out:
            outdir = Path(args.out)
            outdir.mkdir(parents=True, exist_ok=True)
            (outdir / "realization.svg").write_text(svg)
            render_figure(boundary, report.verified, str(outdir / "figure.png"))
        else:
            sys.stdout.write(svg)
        return 0

    if args.command == "paper":
        boundary, system = reference_instance(args.name)
        print(f"instance {args.name}: a={_fmt12(system.a)} "
              f"anchor={_fmt12(boundary.x_anchor)} "
              f"segments={len(boundary.segments)}")
        if args.out:
            outdir = Path(args.out)
            outdir.mkdir(parents=True, exist_ok=True)
            (outdir / "boundary.txt").write_text(serialize_boundary(boundary))
            (outdir / "system.txt").write_text(f"a {format(system.a, '.17g')}\n")
        if args.detect:
            report = detect_all(system, boundary, max_arcs=args.max_arcs)
            sys.stdout.write(_detect_report_text(report))
            if args.out:
                _write_outputs(Path(args.out), boundary, system, report,
                               _detect_report_text(report))
            return 1 if report.rejected else 0
        return 0

    if args.command == "selftest":
        return _selftest()

    raise ValueError(f"unknown command {args.command!r}")  # pragma: no cover


def _selftest() -> int:
    failures = 0

    def check(label: str, ok: bool) -> None:
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'} {label}")
        if not ok:
            failures += 1

    boundary, system = reference_instance("corrected-2.1")
    report = detect_all(system, boundary)
    check("corrected-2.1 has exactly one verified two-arc cycle",
          len(report.verified) == 1 and report.verified[0].kind == "two-arc")
    if report.verified:
        dev = cross_check_cycle(system, boundary, report.verified[0].trace, 1e-3)
        check("rk4 agrees with the exact tracer (dev < 1e-3)", dev < 1e-3)

    boundary, system = reference_instance("keycurve-3")
    report = detect_all(system, boundary)
    check("keycurve-3: one verified four-arc plus three rejections",
          len(report.verified) == 1
          and report.verified[0].kind == "four-arc"
          and len(report.rejected) == 3)

    try:
        rz = build(parse_forest("(()()())"))
        check("build (()()()) matches its target", rz.report.match)
    except BuildFailed:
        check("build (()()()) matches its target", False)
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())

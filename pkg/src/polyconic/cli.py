"""Command-line front end: scene ingestion, experiments, CSV/SVG/JSON output.

Subcommands: ``trace``, ``minimize``, ``hausdorff``, ``symmetrize``,
``theorem-check``, ``conic``.  Exit codes: 0 all checks pass, 1 validation
error, 2 numerical failure, 3 property violation.

CSV files are comma-separated with a header row and LF endings; numbers carry
17 significant digits.  JSON files use UTF-8 with sorted keys.  Identical
scene + seed + tolerances give byte-identical data outputs (the run report's
``wall_clock_s`` field is the one nondeterministic value).
``POLYCONIC_THREADS`` caps kernel parallelism; ``POLYCONIC_NUMBA=0`` selects
the pure-numpy backend.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from ._kernels import backend_name
from .conic import GeneralizedConic, approx_polyellipse, trace_conic
from .errors import (
    CollinearPointsError,
    LevelAtMinimumError,
    LevelBelowMinimumError,
    NotAFocusError,
    NotSymmetricError,
    PolyconicError,
    QuadratureFailureError,
    RingViolationError,
    SceneError,
    SingularPointError,
    ZeroGradientError,
)
from .experiments import polygon_error_table, theorem_check_sweep
from .focal import Polyellipse, eval_F
from .hausdorff import Polyline, hausdorff_distance, hausdorff_witness
from .scene import (
    Scene,
    load_scene,
    scene_to_dict,
    write_csv_atomic,
    write_json_atomic,
)
from .svgout import SvgCanvas
from .symmetry import kappa_floor, symmetrize_polyellipse
from .trace import TraceConfig, trace_level_set
from .weber import weiszfeld_minimize

_VALIDATION_ERRORS = (
    SceneError,
    ValueError,
    LevelBelowMinimumError,
    LevelAtMinimumError,
    RingViolationError,
    NotAFocusError,
    NotSymmetricError,
    CollinearPointsError,
    SingularPointError,
    ZeroGradientError,
    IndexError,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_VIOLATION = 3


def _require(scene: Scene, what: str):
    if what == "focal_set" and scene.focal_set is None:
        raise SceneError("this command needs a 'focal_set' in the scene")
    if what == "levels" and not scene.levels:
        raise SceneError("this command needs 'level'/'levels' in the scene")
    if what == "polygon" and scene.polygon is None:
        raise SceneError("this command needs a 'polygon' in the scene")
    if what == "curve" and scene.curve_spec is None:
        raise SceneError("this command needs a 'curve' in the scene")


def _report(out: Path, args, outputs: list[str], summary: dict, t0: float):
    rep = {
        "command": args.command,
        "argv": list(args.argv_echo),
        "backend": backend_name(),
        "tolerances": {"root_tol": args.tol_root, "quad_tol": args.tol_quad},
        "seed": args.seed,
        "outputs": sorted(Path(p).name for p in outputs),
        "summary": summary,
        "wall_clock_s": time.perf_counter() - t0,
    }
    path = out / "report.json"
    write_json_atomic(str(path), rep)
    return str(path)


def _scene_of(args) -> Scene:
    if not args.scene:
        raise SceneError("this command needs --scene PATH")
    return load_scene(args.scene)


# ---------------------------------------------------------------------------
# subcommands

def cmd_trace(args) -> int:
    t0 = time.perf_counter()
    scene = _scene_of(args)
    _require(scene, "focal_set")
    _require(scene, "levels")
    fs = scene.focal_set
    n_rays = args.rays or scene.params.n_rays
    root_tol = args.tol_root
    res = weiszfeld_minimize(fs)
    vmin = res.value
    tol = root_tol * fs.total_weight
    for c in scene.levels:
        if c < vmin - tol:
            raise LevelBelowMinimumError(
                f"level {c!r} is below the minimum {vmin!r} of the distance sum"
            )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    outputs = []
    curves = []
    theta = 2.0 * np.pi * np.arange(n_rays) / n_rays
    for i, c in enumerate(scene.levels):
        poly = trace_level_set(
            Polyellipse(fs, c), TraceConfig(n_rays=n_rays, root_tol=root_tol, center=res.point)
        )
        vals = eval_F(fs, poly.vertices)
        path = out / f"trace_level_{i:02d}.csv"
        write_csv_atomic(
            str(path),
            ["theta", "x", "y", "F"],
            zip(theta, poly.vertices[:, 0], poly.vertices[:, 1], vals),
        )
        outputs.append(str(path))
        curves.append(poly)
    if args.svg:
        canvas = SvgCanvas()
        for poly in curves:
            canvas.add_curve(poly.vertices, closed=True)
        canvas.add_dots(fs.points, radius_px=4.0)
        svg_path = out / "trace.svg"
        canvas.write(str(svg_path))
        outputs.append(str(svg_path))
    summary = {"levels": [float(c) for c in scene.levels], "minimum": vmin, "n_rays": n_rays}
    outputs.append(_report(out, args, outputs, summary, t0))
    print(f"traced {len(scene.levels)} level(s) with {n_rays} rays; minimum F = {vmin:.12g}")
    return EXIT_OK


def cmd_minimize(args) -> int:
    t0 = time.perf_counter()
    scene = _scene_of(args)
    _require(scene, "focal_set")
    res = weiszfeld_minimize(scene.focal_set)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cert = res.certificate
    summary = {
        "point": [float(res.point[0]), float(res.point[1])],
        "value": res.value,
        "iterations": res.iterations,
        "converged": res.converged,
        "non_unique": res.non_unique,
        "certificate": {
            "kind": cert.kind,
            "residual": cert.residual,
            "tol": cert.tol,
            "passed": cert.passed,
            "focus_index": cert.focus_index,
            "n_vector": [float(cert.n_vector[0]), float(cert.n_vector[1])],
        },
    }
    _report(out, args, [], summary, t0)
    print(
        f"minimizer ({res.point[0]:.12g}, {res.point[1]:.12g})  value {res.value:.12g}  "
        f"certificate {cert.kind} residual {cert.residual:.3e} "
        f"{'passed' if cert.passed else 'FAILED'}"
    )
    return EXIT_OK if res.converged else EXIT_NUMERICAL


def _load_curve_file(path: str, args):
    p = Path(path)
    if not p.exists():
        raise SceneError(f"curve file not found: {path}")
    if p.suffix.lower() == ".json":
        scene = load_scene(path)
        if scene.polygon is not None:
            return scene.polygon
        if scene.curve_spec is not None:
            curve = scene.build_curve()
            ts = np.linspace(curve.t0, curve.t1, 2048)
            pts = curve.position(ts)
            closed = bool(np.hypot(*(pts[0] - pts[-1])) < 1e-12)
            return Polyline(pts[:-1] if closed else pts, closed=closed)
        if scene.focal_set is not None and scene.levels:
            n_rays = args.rays or scene.params.n_rays
            return trace_level_set(
                Polyellipse(scene.focal_set, scene.levels[0]),
                TraceConfig(n_rays=n_rays, root_tol=args.tol_root),
            )
        raise SceneError(f"scene {path} holds nothing traceable (polygon/curve/focal_set+level)")
    # CSV: accept either x,y or theta,x,y,F headers
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        cols = {name: i for i, name in enumerate(header)}
        if "x" not in cols or "y" not in cols:
            raise SceneError(f"CSV {path} must carry 'x' and 'y' columns")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    pts = np.array([[float(r[cols["x"]]), float(r[cols["y"]])] for r in rows])
    if len(pts) < 2:
        raise SceneError(f"CSV {path} holds fewer than 2 points")
    return Polyline(pts, closed=True)


def cmd_hausdorff(args) -> int:
    t0 = time.perf_counter()
    a = _load_curve_file(args.set_a, args)
    b = _load_curve_file(args.set_b, args)
    dist, wa, wb = hausdorff_witness(a, b)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    summary = {
        "distance": float(dist),
        "witness_a": [float(wa[0]), float(wa[1])],
        "witness_b": [float(wb[0]), float(wb[1])],
        "inputs": [args.set_a, args.set_b],
    }
    _report(out, args, [], summary, t0)
    print(
        f"hausdorff_distance = {dist:.12g}\n"
        f"witness on A: ({wa[0]:.12g}, {wa[1]:.12g})\n"
        f"witness on B: ({wb[0]:.12g}, {wb[1]:.12g})"
    )
    return EXIT_OK


def cmd_symmetrize(args) -> int:
    t0 = time.perf_counter()
    scene = _scene_of(args)
    _require(scene, "focal_set")
    _require(scene, "levels")
    _require(scene, "polygon")
    pe = Polyellipse(scene.focal_set, scene.levels[0])
    pe_sym = symmetrize_polyellipse(pe, scene.polygon)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    out_scene = Scene(
        focal_set=pe_sym.focal_set,
        levels=[pe_sym.level],
        polygon=scene.polygon,
    )
    scene_path = out / "scene_sym.json"
    write_json_atomic(str(scene_path), scene_to_dict(out_scene))
    n_rays = args.rays or scene.params.n_rays
    cfg = TraceConfig(n_rays=n_rays, root_tol=args.tol_root)
    h_before = hausdorff_distance(scene.polygon, trace_level_set(pe, cfg))
    h_after = hausdorff_distance(scene.polygon, trace_level_set(pe_sym, cfg))
    summary = {
        "n_focuses": len(pe_sym.focal_set),
        "level": pe_sym.level,
        "level_bound_2pc": 2 * scene.polygon.p * pe.level,
        "h_before": h_before,
        "h_after": h_after,
        "non_expansive": bool(h_after <= h_before + 1e-6),
    }
    outputs = [str(scene_path)]
    outputs.append(_report(out, args, outputs, summary, t0))
    print(
        f"symmetrized to {len(pe_sym.focal_set)} focuses, level {pe_sym.level:.12g}; "
        f"h before {h_before:.6g}, after {h_after:.6g}"
    )
    return EXIT_OK if summary["non_expansive"] else EXIT_VIOLATION


def cmd_theorem_check(args) -> int:
    t0 = time.perf_counter()
    scene = _scene_of(args) if args.scene else Scene()
    p = args.p or (scene.polygon.p if scene.polygon is not None else 3)
    if p < 3:
        raise SceneError("p must be >= 3")
    n = args.instances if args.instances is not None else scene.params.instances
    seed = args.seed if args.seed is not None else scene.params.seed
    rows = theorem_check_sweep(p, n, seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    header = [
        "instance", "p", "valid", "q_in_unit_disk", "q_clear_of_focuses",
        "q_x", "q_y", "level", "kappa_measured", "kappa_floor",
        "d1f_measured", "d1f_upper", "d2d2f_measured", "d2d2f_lower", "bound_ok",
    ]
    csv_rows = []
    violations = 0
    for row in rows:
        r = row.report
        if r is None:
            csv_rows.append(
                [row.instance, row.p, False, False, False]
                + [float("nan")] * 9 + [False]
            )
            continue
        ok = r.bound_satisfied()
        if r.valid and not ok:
            violations += 1
        csv_rows.append([
            row.instance, row.p, r.valid, r.q_in_unit_disk, r.q_clear_of_focuses,
            float(r.q_point[0]), float(r.q_point[1]), r.level,
            r.kappa_measured, r.kappa_floor,
            r.d1f_measured, r.d1f_upper, r.d2d2f_measured, r.d2d2f_lower, ok,
        ])
    csv_path = out / "theorem_check.csv"
    write_csv_atomic(str(csv_path), header, csv_rows)
    n_valid = sum(1 for row in rows if row.valid)
    summary = {
        "p": p, "instances": n, "valid": n_valid, "violations": violations,
        "kappa_floor": kappa_floor(p),
    }
    outputs = [str(csv_path)]
    outputs.append(_report(out, args, outputs, summary, t0))
    print(
        f"p={p}: {n} instance(s), {n_valid} valid, {violations} violation(s) "
        f"of the curvature floor"
    )
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_conic(args) -> int:
    t0 = time.perf_counter()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    outputs = []
    summary: dict = {}
    violation = False

    if args.polygon_table:
        rows = polygon_error_table(quad_tol=args.tol_quad)
        table_path = out / "polygon_error.csv"
        write_csv_atomic(
            str(table_path),
            ["p", "bound", "measured_h", "band", "within_bound"],
            [[r.p, r.bound, r.measured_h, r.band, r.within_bound] for r in rows],
        )
        outputs.append(str(table_path))
        bad = [r.p for r in rows if not r.within_bound]
        summary["polygon_table"] = {"rows": len(rows), "violations": bad}
        violation = violation or bool(bad)
        print(f"polygon error table: p=3..{rows[-1].p}, violations: {bad or 'none'}")

    if args.scene:
        scene = _scene_of(args)
        _require(scene, "curve")
        _require(scene, "levels")
        curve = scene.build_curve()
        level = scene.levels[0]
        conic = GeneralizedConic(curve, level)
        n_rays = args.rays or scene.params.n_rays
        m_list = scene.params.m_list
        conic_poly = trace_conic(conic, n_rays=n_rays, root_tol=args.tol_root, quad_tol=args.tol_quad)
        theta = 2.0 * np.pi * np.arange(len(conic_poly)) / len(conic_poly)
        conic_csv = out / "conic_trace.csv"
        write_csv_atomic(
            str(conic_csv), ["theta", "x", "y"],
            zip(theta, conic_poly.vertices[:, 0], conic_poly.vertices[:, 1]),
        )
        outputs.append(str(conic_csv))
        conv_rows = []
        for M in m_list:
            fs = approx_polyellipse(curve, M)
            em = trace_level_set(
                Polyellipse(fs, level), TraceConfig(n_rays=n_rays, root_tol=args.tol_root)
            )
            em_csv = out / f"polyellipse_M{M:04d}.csv"
            write_csv_atomic(
                str(em_csv), ["theta", "x", "y"],
                zip(theta, em.vertices[:, 0], em.vertices[:, 1]),
            )
            outputs.append(str(em_csv))
            dev = float(np.abs(eval_F(fs, conic_poly.vertices) - level).max())
            h = hausdorff_distance(em, conic_poly)
            conv_rows.append([M, dev, h])
            if args.svg:
                canvas = SvgCanvas()
                canvas.add_curve(conic_poly.vertices, closed=True, dashed=True)
                canvas.add_curve(em.vertices, closed=True)
                canvas.add_dots(fs.points, radius_px=2.5)
                svg_path = out / f"conic_M{M:04d}.svg"
                canvas.write(str(svg_path))
                outputs.append(str(svg_path))
        conv_path = out / "convergence.csv"
        write_csv_atomic(str(conv_path), ["M", "max_abs_dev", "hausdorff"], conv_rows)
        outputs.append(str(conv_path))
        summary["convergence"] = [
            {"M": int(m), "max_abs_dev": d, "hausdorff": h} for m, d, h in conv_rows
        ]
        print("M, max|F_M - c|, h(E_M, conic):")
        for m, d, h in conv_rows:
            print(f"  {m:6d}  {d:.6e}  {h:.6e}")

    if not args.polygon_table and not args.scene:
        raise SceneError("conic needs --scene and/or --polygon-table")
    outputs.append(_report(out, args, outputs, summary, t0))
    return EXIT_VIOLATION if violation else EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyconic",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"polyconic {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--scene", help="scene JSON path")
        sp.add_argument("--out", default="out", help="output directory (default: ./out)")
        sp.add_argument("--seed", type=int, default=None, help="random seed (64-bit)")
        sp.add_argument("--svg", action="store_true", help="also emit SVG figures")
        sp.add_argument("--tol-root", type=float, default=1e-12, dest="tol_root",
                        help="radial root tolerance (default 1e-12)")
        sp.add_argument("--tol-quad", type=float, default=1e-10, dest="tol_quad",
                        help="quadrature tolerance (default 1e-10)")
        sp.add_argument("--rays", type=int, default=None, help="rays for level tracing")

    sp = sub.add_parser("trace", help="trace polyellipse level curves to CSV/SVG")
    common(sp)
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("minimize", help="certified Fermat-Weber minimization")
    common(sp)
    sp.set_defaults(func=cmd_minimize)

    sp = sub.add_parser("hausdorff", help="Hausdorff distance between two curve files")
    common(sp)
    sp.add_argument("set_a", help="first curve file (CSV or scene JSON)")
    sp.add_argument("set_b", help="second curve file (CSV or scene JSON)")
    sp.set_defaults(func=cmd_hausdorff)

    sp = sub.add_parser("symmetrize", help="dihedral symmetrization of a polyellipse")
    common(sp)
    sp.set_defaults(func=cmd_symmetrize)

    sp = sub.add_parser("theorem-check", help="randomized curvature-floor sweep")
    common(sp)
    sp.add_argument("--p", type=int, default=None, help="polygon vertex count")
    sp.add_argument("--instances", type=int, default=None, help="number of random instances")
    sp.set_defaults(func=cmd_theorem_check)

    sp = sub.add_parser("conic", help="generalized-conic approximation experiments")
    common(sp)
    sp.add_argument("--polygon-table", action="store_true", dest="polygon_table",
                    help="emit the polygon-vs-circle error table (p = 3..24)")
    sp.set_defaults(func=cmd_conic)
    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv_echo = list(argv)
    try:
        return args.func(args)
    except QuadratureFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except PolyconicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()

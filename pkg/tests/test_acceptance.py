"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s``.  A module-scoped warmup
compiles the JIT kernels once so the timed sections measure computation, not
compilation (with ``POLYCONIC_NUMBA=0`` the warmup is a no-op).
"""

import time

import numpy as np
import pytest

from polyconic import (
    Polyellipse,
    RegularPolygonRep,
    TraceConfig,
    WeightedFocalSet,
    arclength,
    avg_distance,
    circle_curve,
    conic_convergence,
    curvature,
    eval_F,
    gradient,
    hausdorff_distance,
    hessian,
    sine_wave_curve,
    trace_level_set,
    GeneralizedConic,
)
from polyconic.hausdorff import Polyline
from polyconic.experiments import symmetrization_sweep, theorem_check_sweep, weber_grid_sweep

QUAD_TOL = 1e-10


def report(name: str, ok: bool, detail: str):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok


@pytest.fixture(scope="module", autouse=True)
def warm_kernels():
    fs = WeightedFocalSet([[0.0, 0.0], [1.0, 0.0]])
    pts = np.array([[2.0, 1.0], [3.0, -1.0]])
    eval_F(fs, pts)
    gradient(fs, pts)
    hessian(fs, pts[0])
    hausdorff_distance(np.array([[0.0, 0.0]]), np.array([[1.0, 0.0]]))


@pytest.fixture(scope="module")
def symmetrization_rows():
    # criterion 4 instances, reused verbatim by criterion 9
    return symmetrization_sweep(100, seed=20240816, p_cycle=(3, 4, 5), n_rays=2048)


def test_criterion_1_circle_identity():
    t0 = time.perf_counter()
    curve = circle_curve()
    ang = 2 * np.pi * np.arange(256) / 256
    pts = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    vals = avg_distance(curve, pts, quad_tol=QUAD_TOL)
    err = float(np.abs(vals - 4 / np.pi).max())
    elapsed = time.perf_counter() - t0
    ok = err < 1e-8 and elapsed < 5.0
    assert report(
        "criterion 1 (circle identity)", ok,
        f"max |avg_distance - 4/pi| = {err:.3e} (< 1e-8), {elapsed:.2f}s (< 5s)",
    )


def test_criterion_2_polygon_circle_hausdorff():
    # the inscribed 8192-gon stands in for the circle: its Hausdorff gap to
    # the true circle is 1 - cos(pi/8192) = 7.4e-8, well inside the tolerance
    t0 = time.perf_counter()
    ang = np.linspace(0.0, 2.0 * np.pi, 8192, endpoint=False)
    circle = Polyline(np.stack([np.cos(ang), np.sin(ang)], axis=1), closed=True)
    worst = 0.0
    for p in range(3, 13):
        poly = RegularPolygonRep(p=p, center=(0.0, 0.0), circumradius=1.0, phase=0.0)
        h = hausdorff_distance(circle, poly)
        worst = max(worst, abs(h - (1 - np.cos(np.pi / p))))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-6 and elapsed < 5.0
    assert report(
        "criterion 2 (polygon-circle Hausdorff)", ok,
        f"max |h - (1 - cos(pi/p))| = {worst:.3e} (< 1e-6) for p=3..12, {elapsed:.2f}s (< 5s)",
    )


def test_criterion_3_curvature_floor():
    t0 = time.perf_counter()
    slack = 1e-9
    n_valid = 0
    violations = 0
    worst_margin = np.inf
    for p in (3, 4, 5, 6, 8):
        rows = theorem_check_sweep(p, 200, seed=911 + p)
        for row in rows:
            if not row.valid:
                continue
            n_valid += 1
            r = row.report
            if not (
                r.kappa_measured >= r.kappa_floor - slack
                and r.d1f_measured <= r.d1f_upper + slack
                and r.d2d2f_measured >= r.d2d2f_lower - slack
            ):
                violations += 1
            worst_margin = min(worst_margin, r.kappa_measured - r.kappa_floor)
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and n_valid > 0 and elapsed < 60.0
    assert report(
        "criterion 3 (curvature floor)", ok,
        f"{n_valid} valid instances over p in {{3,4,5,6,8}}, {violations} violations, "
        f"min kappa margin {worst_margin:.3e}, {elapsed:.1f}s (< 60s)",
    )


def test_criterion_4_symmetrization_non_expansive(symmetrization_rows):
    t0 = time.perf_counter()
    bad = [r for r in symmetrization_rows if not r.h_after <= r.h_before + 1e-6]
    worst = max(r.h_after - r.h_before for r in symmetrization_rows)
    elapsed = time.perf_counter() - t0  # sweep itself timed via fixture creation below
    ok = not bad and len(symmetrization_rows) == 100
    assert report(
        "criterion 4 (symmetrization non-expansive)", ok,
        f"100 instances (p=3,4,5), worst h_after - h_before = {worst:.3e} (<= 1e-6), "
        f"check {elapsed:.2f}s",
    )


def test_criterion_4_runtime():
    t0 = time.perf_counter()
    rows = symmetrization_sweep(100, seed=20240816, p_cycle=(3, 4, 5), n_rays=2048)
    elapsed = time.perf_counter() - t0
    ok = elapsed < 60.0 and all(r.non_expansive for r in rows)
    assert report(
        "criterion 4 (runtime)", ok, f"full 100-instance sweep in {elapsed:.1f}s (< 60s)"
    )


def test_criterion_5_riemann_sandwich():
    t0 = time.perf_counter()
    curve = sine_wave_curve()
    L = arclength(curve, QUAD_TOL)
    conic = GeneralizedConic(curve, 4.0)
    rows = conic_convergence(conic, [8, 16, 32, 64], n_rays=512, quad_tol=QUAD_TOL)
    dev_ok = all(r.max_abs_dev <= L / r.M + 2e-10 for r in rows)
    hs = [r.hausdorff for r in rows]
    mono_ok = all(a > b for a, b in zip(hs, hs[1:]))
    half_ok = hs[-1] < hs[0] / 2
    elapsed = time.perf_counter() - t0
    ok = dev_ok and mono_ok and half_ok and elapsed < 120.0
    detail = ", ".join(f"M={r.M}: dev={r.max_abs_dev:.2e} (bound {L / r.M:.2e}), h={r.hausdorff:.4f}" for r in rows)
    assert report(
        "criterion 5 (Riemann sandwich)", ok, f"{detail}; strictly decreasing, "
        f"h(64) < h(8)/2, {elapsed:.1f}s (< 120s)",
    )


def test_criterion_6_ellipse_oracle():
    fs = WeightedFocalSet([[-3.0, 0.0], [3.0, 0.0]])
    traced = trace_level_set(Polyellipse(fs, 10.0), TraceConfig(n_rays=512, root_tol=1e-12))
    v = traced.vertices
    resid = float(np.abs(v[:, 0] ** 2 / 25 + v[:, 1] ** 2 / 16 - 1).max())
    kap = curvature(fs, [5.0, 0.0])
    ok = resid < 1e-8 and abs(kap - 0.3125) < 1e-9
    assert report(
        "criterion 6 (ellipse oracle)", ok,
        f"max conic-equation residual = {resid:.3e} (< 1e-8), "
        f"curvature(5,0) = {kap:.12f} (0.3125 +- 1e-9)",
    )


def test_criterion_7_optimality_certificates():
    t0 = time.perf_counter()
    rows = weber_grid_sweep(50, seed=424242, cell=1e-3)
    value_bad = [r for r in rows if not r.value_ok]
    cert_bad = [r for r in rows if not r.certificate_passed]
    worst = max(abs(r.value - r.grid_min) for r in rows)
    elapsed = time.perf_counter() - t0
    ok = not value_bad and not cert_bad and elapsed < 60.0
    assert report(
        "criterion 7 (optimality certificates)", ok,
        f"50 instances, worst |value - grid_min| = {worst:.3e} (slack "
        f"{rows[0].slack:.2e}-ish), all certificates passed, {elapsed:.1f}s (< 60s)",
    )


def test_criterion_8_derivative_correctness():
    rng = np.random.default_rng(88)
    worst_g = worst_h = worst_tr = 0.0
    n = 0
    while n < 1000:
        m = int(rng.integers(2, 7))
        fs = WeightedFocalSet(rng.uniform(-1, 1, (m, 2)), rng.uniform(0.5, 2.0, m))
        scale = max(fs.diameter, 1.0)
        x = rng.uniform(-2, 2, 2) * scale
        if fs.min_distance(x) < 0.01 * scale:
            continue
        n += 1
        h_step = 1e-6 * scale
        g = gradient(fs, x)
        fd_g = np.array([
            (eval_F(fs, x + [h_step, 0]) - eval_F(fs, x - [h_step, 0])) / (2 * h_step),
            (eval_F(fs, x + [0, h_step]) - eval_F(fs, x - [0, h_step])) / (2 * h_step),
        ])
        worst_g = max(worst_g, np.hypot(*(g - fd_g)) / max(np.hypot(*g), 1e-300))
        hm = hessian(fs, x)
        fd_h = np.column_stack([
            (gradient(fs, x + [h_step, 0]) - gradient(fs, x - [h_step, 0])) / (2 * h_step),
            (gradient(fs, x + [0, h_step]) - gradient(fs, x - [0, h_step])) / (2 * h_step),
        ])
        worst_h = max(worst_h, np.abs(hm.as_array() - fd_h).max() / np.abs(hm.as_array()).max())
        d = np.hypot(*(x - fs.points).T)
        tr_expected = float((fs.weights / d).sum())
        worst_tr = max(worst_tr, abs(hm.trace() - tr_expected) / tr_expected)
    ok = worst_g < 1e-6 and worst_h < 1e-4 and worst_tr < 1e-12
    assert report(
        "criterion 8 (derivative correctness)", ok,
        f"1000 points: gradient FD rel err {worst_g:.2e} (< 1e-6), "
        f"hessian FD rel err {worst_h:.2e} (< 1e-4), trace identity {worst_tr:.2e} (< 1e-12)",
    )


def test_criterion_9_symmetrized_level_consistency(symmetrization_rows):
    from polyconic.experiments import random_circumscribed_polyellipse, sweep_polygon
    from polyconic.symmetry import symmetrize_polyellipse

    rng = np.random.default_rng(20240816)  # same stream as criterion 4
    worst_spread = 0.0
    worst_excess = -np.inf
    for i in range(100):
        p = (3, 4, 5)[i % 3]
        poly = sweep_polygon(p)
        pe = random_circumscribed_polyellipse(poly, rng)
        pe_sym = symmetrize_polyellipse(pe, poly)
        vals = eval_F(pe_sym.focal_set, poly.vertices())
        worst_spread = max(worst_spread, float((vals.max() - vals.min()) / vals.mean()))
        worst_excess = max(worst_excess, pe_sym.level - 2 * p * pe.level)
        # cross-check against the criterion-4 sweep record
        assert pe_sym.level == pytest.approx(symmetrization_rows[i].level_after)
    ok = worst_spread <= 1e-12 and worst_excess <= 1e-12
    assert report(
        "criterion 9 (symmetrized level consistency)", ok,
        f"vertex-value relative spread {worst_spread:.2e} (<= 1e-12), "
        f"max (c' - 2pc) = {worst_excess:.3e} (<= 1e-12)",
    )

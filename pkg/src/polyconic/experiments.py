"""Randomized experiment sweeps, shared by the CLI and the acceptance suite.

All randomness comes from ``numpy.random.default_rng(seed)`` (PCG64) and each
generator documents its exact draw order, so runs with the same seed produce
the same instance stream everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conic import GeneralizedConic, approx_polyellipse, circle_curve, trace_conic
from .errors import SingularPointError
from .focal import Polyellipse, WeightedFocalSet, eval_F
from .hausdorff import RegularPolygonRep, hausdorff_distance
from .symmetry import (
    CurvatureBoundReport,
    DihedralAction,
    dihedral_orbit,
    curvature_bound_report,
    symmetrize_polyellipse,
)
from .trace import TraceConfig, trace_level_set
from .weber import weiszfeld_minimize
from . import _kernels

__all__ = [
    "random_invariant_focal_set",
    "theorem_check_sweep",
    "TheoremCheckRow",
    "random_circumscribed_polyellipse",
    "symmetrization_sweep",
    "SymmetrizationRow",
    "weber_grid_sweep",
    "WeberGridRow",
    "polygon_error_table",
    "PolygonErrorRow",
]


def sweep_polygon(p: int) -> RegularPolygonRep:
    """Unit-circumradius p-gon posed with an edge midpoint on the +x axis."""
    return RegularPolygonRep(p=p, center=(0.0, 0.0), circumradius=1.0, phase=-np.pi / p)


def random_invariant_focal_set(p: int, rng: np.random.Generator) -> WeightedFocalSet:
    """Random focal set invariant under the unit p-gon's symmetry group.

    Draw order per instance: base count ``m0 ~ integers(1, 4)``, then radii
    ``U(0.15, 2.0)^m0``, angles ``U(0, 2 pi)^m0``, weights ``U(0.5, 2.0)^m0``,
    a center-focus coin ``U(0,1) < 0.2`` and its weight ``U(0.5, 2.0)`` (drawn
    unconditionally to keep the stream aligned).  The result is the full
    dihedral orbit of those base points.
    """
    m0 = int(rng.integers(1, 4))
    radii = rng.uniform(0.15, 2.0, m0)
    angles = rng.uniform(0.0, 2.0 * np.pi, m0)
    weights = rng.uniform(0.5, 2.0, m0)
    add_center = rng.random() < 0.2
    center_weight = float(rng.uniform(0.5, 2.0))
    pts = np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=1)
    if add_center:
        pts = np.vstack([pts, [0.0, 0.0]])
        weights = np.concatenate([weights, [center_weight]])
    base = WeightedFocalSet(pts, weights)
    act = DihedralAction(p=p, center=(0.0, 0.0), phase=-np.pi / p)
    return dihedral_orbit(base, act)


@dataclass(frozen=True)
class TheoremCheckRow:
    instance: int
    p: int
    report: CurvatureBoundReport | None

    @property
    def valid(self) -> bool:
        return self.report is not None and self.report.valid

    @property
    def violates(self) -> bool:
        return self.valid and not self.report.bound_satisfied()


def theorem_check_sweep(p: int, n_instances: int, seed: int) -> list[TheoremCheckRow]:
    """Curvature-bound reports on seeded random invariant configurations.

    Instances where the axis point collides with a focus yield ``report=None``
    (they fail the clearance flag by construction).
    """
    rng = np.random.default_rng(seed)
    poly = sweep_polygon(p)
    rows = []
    for i in range(n_instances):
        G = random_invariant_focal_set(p, rng)
        try:
            report = curvature_bound_report(G, poly)
        except SingularPointError:
            report = None
        rows.append(TheoremCheckRow(instance=i, p=p, report=report))
    return rows


def random_circumscribed_polyellipse(
    poly: RegularPolygonRep, rng: np.random.Generator
) -> Polyellipse:
    """Random polyellipse whose region contains the polygon.

    Draw order: ``m0 ~ integers(1, 4)``, radii ``U(0.05, 0.75)^m0`` (times the
    circumradius, about the polygon center), angles ``U(0, 2 pi)^m0``, weights
    ``U(0.5, 2.0)^m0``, margin ``U(0.05, 0.6)``.  The level is the largest
    vertex value plus ``margin * total_weight``, so every vertex is strictly
    inside.
    """
    m0 = int(rng.integers(1, 4))
    radii = rng.uniform(0.05, 0.75, m0) * poly.circumradius
    angles = rng.uniform(0.0, 2.0 * np.pi, m0)
    weights = rng.uniform(0.5, 2.0, m0)
    margin = float(rng.uniform(0.05, 0.6))
    c = np.asarray(poly.center)
    pts = c + np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=1)
    fs = WeightedFocalSet(pts, weights)
    level = float(eval_F(fs, poly.vertices()).max()) + margin * fs.total_weight
    return Polyellipse(fs, level)


@dataclass(frozen=True)
class SymmetrizationRow:
    instance: int
    p: int
    h_before: float
    h_after: float
    level_before: float
    level_after: float

    @property
    def non_expansive(self) -> bool:
        return self.h_after <= self.h_before + 1e-6


def symmetrization_sweep(
    n_instances: int,
    seed: int,
    p_cycle: tuple = (3, 4, 5),
    n_rays: int = 2048,
) -> list[SymmetrizationRow]:
    """Hausdorff distance to the polygon before and after symmetrization.

    Instance ``i`` uses ``p = p_cycle[i % len(p_cycle)]`` on the unit p-gon.
    """
    rng = np.random.default_rng(seed)
    rows = []
    cfg = TraceConfig(n_rays=n_rays)
    for i in range(n_instances):
        p = int(p_cycle[i % len(p_cycle)])
        poly = sweep_polygon(p)
        pe = random_circumscribed_polyellipse(poly, rng)
        h_before = hausdorff_distance(poly, trace_level_set(pe, cfg))
        pe_sym = symmetrize_polyellipse(pe, poly)
        h_after = hausdorff_distance(poly, trace_level_set(pe_sym, cfg))
        rows.append(
            SymmetrizationRow(
                instance=i, p=p, h_before=h_before, h_after=h_after,
                level_before=pe.level, level_after=pe_sym.level,
            )
        )
    return rows


@dataclass(frozen=True)
class WeberGridRow:
    instance: int
    n_focuses: int
    value: float
    grid_min: float
    slack: float
    certificate_kind: str
    certificate_passed: bool

    @property
    def value_ok(self) -> bool:
        return abs(self.value - self.grid_min) <= self.slack


def _grid_minimum(fs: WeightedFocalSet, cell: float) -> float:
    n = int(round(1.0 / cell)) + 1
    xs = np.linspace(0.0, 1.0, n)
    best = np.inf
    fx = np.ascontiguousarray(fs.points[:, 0])
    fy = np.ascontiguousarray(fs.points[:, 1])
    w = np.ascontiguousarray(fs.weights)
    chunk = max(1, 2_000_000 // n)
    for i in range(0, n, chunk):
        gx, gy = np.meshgrid(xs[i:i + chunk], xs, indexing="ij")
        vals = _kernels.sum_dists(
            np.ascontiguousarray(gx.reshape(-1)), np.ascontiguousarray(gy.reshape(-1)), fx, fy, w
        )
        best = min(best, float(vals.min()))
    return best


def weber_grid_sweep(n_instances: int, seed: int, cell: float = 1e-3) -> list[WeberGridRow]:
    """Certified minimization versus a brute-force grid oracle.

    Draw order per instance: ``m ~ integers(2, 7)``, points ``U(0,1)^(m,2)``,
    weights ``U(0.5, 2.0)^m``.  The grid covers the unit square at the given
    cell size; the comparison slack is ``1e-6 + total_weight * cell/sqrt(2)``
    (the grid can overshoot the true minimum by at most the Lipschitz constant
    times half the cell diagonal).
    """
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n_instances):
        m = int(rng.integers(2, 7))
        pts = rng.random((m, 2))
        weights = rng.uniform(0.5, 2.0, m)
        fs = WeightedFocalSet(pts, weights)
        res = weiszfeld_minimize(fs)
        gmin = _grid_minimum(fs, cell)
        slack = 1e-6 + fs.total_weight * cell / np.sqrt(2.0)
        rows.append(
            WeberGridRow(
                instance=i, n_focuses=m, value=res.value, grid_min=gmin, slack=slack,
                certificate_kind=res.certificate.kind,
                certificate_passed=res.certificate.passed and res.converged,
            )
        )
    return rows


@dataclass(frozen=True)
class PolygonErrorRow:
    p: int
    bound: float
    measured_h: float
    band: float

    @property
    def within_bound(self) -> bool:
        # the triangle inequality h <= bound + band is exactly tight when the
        # polyellipse sits radially offset from the circle; allow the
        # subdivision tolerance of the two measurements
        return self.measured_h <= self.bound + self.band + 1e-6


def polygon_error_table(
    p_min: int = 3,
    p_max: int = 24,
    M: int = 256,
    n_rays: int = 1024,
    quad_tol: float = 1e-10,
) -> list[PolygonErrorRow]:
    """Polygon-to-polyellipse error versus the inscribed-polygon bound.

    The unit circle is its own average-distance level set at ``4/pi``; the
    midpoint polyellipse on M arcs approximates it within a band measured
    here, and every inscribed p-gon is then within ``(1 - cos(pi/p)) + band``
    of that polyellipse.  The bound goes to zero as p grows.
    """
    curve = circle_curve()
    c = 4.0 / np.pi
    fs = approx_polyellipse(curve, M)
    em = trace_level_set(Polyellipse(fs, c), TraceConfig(n_rays=n_rays))
    conic_poly = trace_conic(GeneralizedConic(curve, c), n_rays=n_rays, quad_tol=quad_tol)
    band = hausdorff_distance(em, conic_poly)
    rows = []
    for p in range(p_min, p_max + 1):
        poly = RegularPolygonRep(p=p, center=(0.0, 0.0), circumradius=1.0, phase=0.0)
        measured = hausdorff_distance(poly, em)
        rows.append(PolygonErrorRow(p=p, bound=float(1.0 - np.cos(np.pi / p)), measured_h=measured, band=band))
    return rows

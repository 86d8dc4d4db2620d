"""Dihedral symmetrization of focal sets and curvature-bound diagnostics.

Replacing a focal set by its full orbit under the symmetry group of a regular
p-gon (p rotations, p reflections) yields a polyellipse that can be pinned to
the polygon's vertices without increasing its Hausdorff distance to the
polygon.  On such symmetric configurations the curvature of the level curve
at the edge-midpoint axis admits explicit two-sided derivative bounds and a
configuration-independent floor ``cos^2(pi/p) / (4p)``; this module measures
all the ingredients so the bounds are testable on random instances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CollinearPointsError,
    NotAFocusError,
    NotSymmetricError,
    RingViolationError,
)
from .focal import Polyellipse, WeightedFocalSet, eval_F, gradient, hessian
from .hausdorff import RegularPolygonRep
from .trace import TraceConfig, arc_point_on_axis, trace_level_set

__all__ = [
    "DihedralAction",
    "CurvatureBoundReport",
    "ExcisionResult",
    "dihedral_orbit",
    "is_invariant",
    "symmetrized_level",
    "symmetrize_polyellipse",
    "circumscribe_rescale",
    "excise_focus",
    "circumradius",
    "curvature_bound_report",
]


@dataclass(frozen=True)
class DihedralAction:
    """The 2p isometries fixing a regular p-gon setwise.

    Group elements are generated directly from ``(p, center, phase)`` as exact
    rotation and reflection matrices (mirror lines at angles
    ``phase + pi*k/p``); no numeric composition chains, so orbits are
    bit-stable.
    """

    p: int
    center: tuple
    phase: float = 0.0

    def __post_init__(self):
        if self.p < 3:
            raise ValueError("dihedral action needs p >= 3")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    @classmethod
    def for_polygon(cls, poly: RegularPolygonRep) -> "DihedralAction":
        return cls(p=poly.p, center=poly.center, phase=poly.phase)

    def matrices(self) -> np.ndarray:
        """(2p, 2, 2) stack: p rotations followed by p reflections."""
        p = self.p
        out = np.empty((2 * p, 2, 2))
        for k in range(p):
            a = 2.0 * np.pi * k / p
            c, s = np.cos(a), np.sin(a)
            out[k] = [[c, -s], [s, c]]
        for k in range(p):
            a = self.phase + np.pi * k / p
            c2, s2 = np.cos(2.0 * a), np.sin(2.0 * a)
            out[p + k] = [[c2, s2], [s2, -c2]]
        return out

    def apply_all(self, points) -> np.ndarray:
        """Images of (m, 2) points under all 2p elements, shape (2p, m, 2)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        c = np.asarray(self.center)
        rel = pts - c
        return c + np.einsum("gij,mj->gmi", self.matrices(), rel)


def _orbit_merge_tol(act: DihedralAction, points: np.ndarray) -> float:
    c = np.asarray(act.center)
    r = float(np.hypot(*(points - c).T).max()) if len(points) else 0.0
    return 1e-10 * max(1.0, r)


def dihedral_orbit(
    fs: WeightedFocalSet, act: DihedralAction, merge_tol: float | None = None
) -> WeightedFocalSet:
    """Full group orbit of a focal set, weights accumulated per group element.

    Each original weight contributes once per element, so the total weight is
    multiplied by exactly 2p.  Images that coincide (focus on a mirror line or
    at the center, where the stabilizer is nontrivial) are merged with summed
    weights, matching the multiplicity bookkeeping of the bound diagnostics.
    Output focuses are sorted lexicographically for determinism.
    """
    if merge_tol is None:
        merge_tol = _orbit_merge_tol(act, fs.points)
    images = act.apply_all(fs.points)            # (2p, m, 2)
    g = images.reshape(-1, 2)
    w = np.repeat(fs.weights[None, :], 2 * act.p, axis=0).reshape(-1)
    out_p: list[np.ndarray] = []
    out_w: list[float] = []
    for i in range(len(g)):
        for k, rep in enumerate(out_p):
            if np.hypot(g[i, 0] - rep[0], g[i, 1] - rep[1]) <= merge_tol:
                out_w[k] += w[i]
                break
        else:
            out_p.append(g[i])
            out_w.append(w[i])
    arr = np.array(out_p)
    ws = np.array(out_w)
    order = np.lexsort((arr[:, 1], arr[:, 0]))
    return WeightedFocalSet(arr[order], ws[order])


def is_invariant(fs: WeightedFocalSet, act: DihedralAction, rel_tol: float = 1e-9) -> bool:
    """Whether every group element maps the weighted set onto itself."""
    pts, w = fs.points, fs.weights
    tol = max(rel_tol * max(1.0, float(np.hypot(*(pts - np.asarray(act.center)).T).max(initial=0.0))), 1e-300)
    images = act.apply_all(pts)
    for gi in range(images.shape[0]):
        img = images[gi]
        d = np.hypot(img[:, None, 0] - pts[None, :, 0], img[:, None, 1] - pts[None, :, 1])
        nearest = d.argmin(axis=1)
        if (d[np.arange(len(img)), nearest] > tol).any():
            return False
        # weights must match under the matching (sum per target for merged hits)
        acc = np.zeros(len(pts))
        np.add.at(acc, nearest, w)
        if not np.allclose(acc, w, rtol=1e-9, atol=0.0):
            return False
    return True


def symmetrized_level(G: WeightedFocalSet, poly: RegularPolygonRep, rel_tol: float = 1e-12) -> float:
    """Level through the polygon vertices for an invariant focal set.

    Returns the distance sum at the first vertex after verifying that all
    vertex values agree to ``rel_tol`` relative (they must, by invariance of
    both the vertices and the focal set).  Raises :class:`NotSymmetricError`
    when the focal set is not invariant or the vertex values disagree.
    """
    act = DihedralAction.for_polygon(poly)
    if not is_invariant(G, act):
        raise NotSymmetricError("focal set is not invariant under the polygon's symmetry group")
    vals = eval_F(G, poly.vertices())
    spread = float(vals.max() - vals.min())
    if spread > rel_tol * max(abs(float(vals.mean())), 1e-300):
        raise NotSymmetricError(
            f"vertex values disagree by {spread:.3e} (relative tolerance {rel_tol:g})"
        )
    return float(vals[0])


def symmetrize_polyellipse(pe: Polyellipse, poly: RegularPolygonRep) -> Polyellipse:
    """Orbit the focal set and pin the level to the polygon vertices.

    Requires the polyellipse region to contain the polygon (every vertex
    inside or on the curve).  The result passes through all vertices, its
    total weight is 2p times the original, and its level is at most 2p times
    the original level.
    """
    fs, c = pe.focal_set, pe.level
    vertex_vals = eval_F(fs, poly.vertices())
    if (vertex_vals > c * (1.0 + 1e-12) + 1e-30).any():
        raise ValueError("polyellipse does not enclose the polygon (a vertex lies outside)")
    act = DihedralAction.for_polygon(poly)
    G = dihedral_orbit(fs, act)
    return Polyellipse(G, symmetrized_level(G, poly))


def circumscribe_rescale(
    pe: Polyellipse,
    poly: RegularPolygonRep,
    epsilon: float,
    n_check: int = 256,
    ring_tol: float = 1e-7,
) -> Polyellipse:
    """Central similarity pushing a near-circular polyellipse around the polygon.

    The traced curve must lie in the annulus of radii ``(1 - eps) R`` and
    ``(1 + eps) R`` about the polygon center (checked on ``n_check`` traced
    samples; :class:`RingViolationError` otherwise).  Focuses are mapped by
    the similarity with ratio ``1/(1 - eps)`` and the level is scaled the same
    way, so the image curve is the similarity image of the original and
    encloses the polygon.
    """
    if not 0.0 <= epsilon < 1.0:
        raise ValueError("epsilon must lie in [0, 1)")
    center = np.asarray(poly.center)
    R = poly.circumradius
    if epsilon > 0.0:
        curve = trace_level_set(pe, TraceConfig(n_rays=max(8, n_check)))
        radii = np.hypot(*(curve.vertices - center).T)
        slack = ring_tol * R
        if radii.min() < (1.0 - epsilon) * R - slack or radii.max() > (1.0 + epsilon) * R + slack:
            raise RingViolationError(
                f"traced curve radii in [{radii.min():.6g}, {radii.max():.6g}] leave the ring "
                f"[{(1 - epsilon) * R:.6g}, {(1 + epsilon) * R:.6g}]"
            )
    ratio = 1.0 / (1.0 - epsilon)
    new_pts = center + (pe.focal_set.points - center) * ratio
    return Polyellipse(WeightedFocalSet(new_pts, pe.focal_set.weights), pe.level * ratio)


@dataclass(frozen=True)
class ExcisionResult:
    """Polyellipse after removing a focus orbit, with the interiority flag.

    ``interior_verified`` records whether the polygon vertices are strictly
    inside the new curve; when False the queried focus was too far from the
    edge midpoint for the strict inclusion to hold.
    """

    polyellipse: Polyellipse
    interior_verified: bool
    removed_weight: float


def excise_focus(
    G: WeightedFocalSet,
    poly: RegularPolygonRep,
    q,
    match_tol: float | None = None,
) -> ExcisionResult:
    """Remove the full orbit of the focus at ``q`` and re-level through ``q``.

    ``q`` must match a focus of the invariant set ``G`` (within ``match_tol``,
    default the orbit merge tolerance); :class:`NotAFocusError` otherwise.
    The new level is the value of the reduced distance sum at ``q``, so the
    new curve passes through ``q``.
    """
    act = DihedralAction.for_polygon(poly)
    if not is_invariant(G, act):
        raise NotSymmetricError("focal set is not invariant under the polygon's symmetry group")
    qp = np.asarray(q, dtype=float).reshape(2)
    if match_tol is None:
        match_tol = _orbit_merge_tol(act, G.points)
    d_q = np.hypot(*(G.points - qp).T)
    if d_q.min() > match_tol:
        raise NotAFocusError(f"no focus within {match_tol:.3e} of {tuple(qp)}")
    orbit_pts = act.apply_all(qp.reshape(1, 2)).reshape(-1, 2)
    keep = np.ones(len(G), dtype=bool)
    for op in orbit_pts:
        keep &= np.hypot(*(G.points - op).T) > match_tol
    if not (~keep).any():
        raise NotAFocusError("orbit matching removed nothing")
    if not keep.any():
        raise ValueError("excising this orbit would empty the focal set")
    removed = float(G.weights[~keep].sum())
    reduced = WeightedFocalSet(G.points[keep], G.weights[keep])
    c_prime = float(eval_F(reduced, qp))
    vertex_vals = eval_F(reduced, poly.vertices())
    interior = bool(vertex_vals.max() < c_prime)
    return ExcisionResult(Polyellipse(reduced, c_prime), interior, removed)


def circumradius(p1, p2, q) -> float:
    """Radius of the circle through three points.

    Raises :class:`CollinearPointsError` when the points are collinear (the
    sine of the angle at ``q`` below 1e-12).
    """
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    q = np.asarray(q, dtype=float)
    a = np.hypot(*(p2 - q))
    b = np.hypot(*(p1 - q))
    c = np.hypot(*(p2 - p1))
    if a == 0.0 or b == 0.0 or c == 0.0:
        raise CollinearPointsError("coincident points have no circumscribed circle")
    cross = abs((p2 - p1)[0] * (q - p1)[1] - (p2 - p1)[1] * (q - p1)[0])
    if cross <= 1e-12 * a * b:
        raise CollinearPointsError("points are collinear: no circumscribed circle")
    return a * b * c / (2.0 * cross)


@dataclass(frozen=True)
class CurvatureBoundReport:
    """Measured curvature at the edge-midpoint axis with its two-sided bounds.

    ``kappa_floor = cos^2(pi/p) / (4p)`` depends on ``p`` alone.  The report
    asserts the floor only when both flags hold: the axis point inside the
    unit circle and clear of all focuses.
    """

    p: int
    level: float
    q_point: np.ndarray
    kappa_measured: float
    kappa_floor: float
    d1f_measured: float
    d1f_upper: float
    d2d2f_measured: float
    d2d2f_lower: float
    q_in_unit_disk: bool
    q_clear_of_focuses: bool

    @property
    def valid(self) -> bool:
        return self.q_in_unit_disk and self.q_clear_of_focuses

    def bound_satisfied(self, slack: float = 1e-9) -> bool:
        return (
            self.kappa_measured >= self.kappa_floor - slack
            and self.d1f_measured <= self.d1f_upper + slack
            and self.d2d2f_measured >= self.d2d2f_lower - slack
        )


def kappa_floor(p: int) -> float:
    """Configuration-independent curvature floor for symmetric polyellipses.

    Computed via the half-angle identity, which keeps the power-of-two cases
    exact in floating point (p = 4 gives exactly 1/32).
    """
    return float((1.0 + np.cos(2.0 * np.pi / p)) / (8.0 * p))


def curvature_bound_report(
    G: WeightedFocalSet, poly: RegularPolygonRep, root_tol: float = 1e-12
) -> CurvatureBoundReport:
    """Measure curvature and its derivative bounds on an invariant instance.

    Requires the polygon inscribed in the unit circle (circumradius 1).  The
    axis point ``Q`` is located on the level through the vertices along the
    first edge-midpoint direction.  Raises :class:`SingularPointError` when
    ``Q`` collides with a focus (excise it first).
    """
    if abs(poly.circumradius - 1.0) > 1e-12:
        raise ValueError("bound diagnostics require the polygon inscribed in the unit circle")
    p = poly.p
    center = np.asarray(poly.center)
    c = symmetrized_level(G, poly)
    axis_angle = poly.phase + np.pi / p
    direction = np.array([np.cos(axis_angle), np.sin(axis_angle)])
    q = arc_point_on_axis(Polyellipse(G, c), direction, root_tol=root_tol, center=center)

    g = gradient(G, q)  # SingularPointError propagates when q hits a focus
    d1f = float(np.hypot(g[0], g[1]))
    h = hessian(G, q)
    t = np.array([-g[1], g[0]]) / d1f
    d2d2f = h.quadratic(t)
    kappa = d2d2f / d1f

    dist_o = np.hypot(*(G.points - center).T)
    at_center = dist_o <= _orbit_merge_tol(DihedralAction.for_polygon(poly), G.points)
    w0 = float(G.weights[at_center].sum())
    off = ~at_center
    d1f_upper = w0 + 4.0 * float((G.weights[off] / (1.0 + dist_o[off])).sum())
    d2d2f_lower = float(np.cos(np.pi / p) ** 2 / p * (G.weights / (1.0 + dist_o)).sum())

    return CurvatureBoundReport(
        p=p,
        level=c,
        q_point=q,
        kappa_measured=float(kappa),
        kappa_floor=kappa_floor(p),
        d1f_measured=d1f,
        d1f_upper=d1f_upper,
        d2d2f_measured=d2d2f,
        d2d2f_lower=d2d2f_lower,
        q_in_unit_disk=bool(np.hypot(*(q - center)) < 1.0),
        q_clear_of_focuses=bool(G.min_distance(q) > G.tol_singular),
    )

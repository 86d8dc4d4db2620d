"""Hausdorff distance between compact planar sets.

Sets are represented as finite point clouds, polylines (open or closed chains
of segments) or regular polygons with exact vertices.  Polylines denote the
full segment chains, not just their vertices: distances use exact
point-to-segment projections, and the supremum over a chain is located by
adaptive bisection of its segments.  Vertex-only distances systematically
underestimate on coarse curves; this implementation does not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .trace import ClosedPolyline

__all__ = [
    "RegularPolygonRep",
    "Polyline",
    "directed_hausdorff",
    "hausdorff_distance",
    "directed_hausdorff_witness",
]

_MAX_ROUNDS = 300


@dataclass(frozen=True)
class RegularPolygonRep:
    """Regular p-gon given by center, circumradius and phase.

    Vertex ``k`` sits at ``center + R*(cos(phase + 2 pi k / p), sin(...))``;
    the boundary is the closed chain of the exact chords.
    """

    p: int
    center: tuple
    circumradius: float
    phase: float = 0.0

    def __post_init__(self):
        if self.p < 3:
            raise ValueError("a polygon needs p >= 3")
        if not self.circumradius > 0:
            raise ValueError("circumradius must be positive")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    def vertices(self) -> np.ndarray:
        k = np.arange(self.p)
        ang = self.phase + 2.0 * np.pi * k / self.p
        c = np.asarray(self.center)
        return c + self.circumradius * np.stack([np.cos(ang), np.sin(ang)], axis=1)

    def edge_midpoints(self) -> np.ndarray:
        v = self.vertices()
        return 0.5 * (v + np.roll(v, -1, axis=0))

    @property
    def apothem(self) -> float:
        return self.circumradius * float(np.cos(np.pi / self.p))


@dataclass
class Polyline:
    """Chain of segments through ``vertices``; ``closed`` adds the wrap edge."""

    vertices: np.ndarray
    closed: bool = True

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 2:
            raise ValueError("a polyline needs an (n >= 2, 2) vertex array")
        self.vertices = v


def _rep_arrays(obj):
    """Normalize a set representation to (vertices, segment endpoint arrays).

    Segments are ``None`` for a bare point set.
    """
    if isinstance(obj, RegularPolygonRep):
        v = obj.vertices()
        nxt = np.roll(v, -1, axis=0)
        return v, (v[:, 0].copy(), v[:, 1].copy(), nxt[:, 0].copy(), nxt[:, 1].copy())
    if isinstance(obj, ClosedPolyline):
        v = obj.vertices
        nxt = np.roll(v, -1, axis=0)
        return v, (v[:, 0].copy(), v[:, 1].copy(), nxt[:, 0].copy(), nxt[:, 1].copy())
    if isinstance(obj, Polyline):
        v = obj.vertices
        if obj.closed:
            nxt = np.roll(v, -1, axis=0)
            return v, (v[:, 0].copy(), v[:, 1].copy(), nxt[:, 0].copy(), nxt[:, 1].copy())
        a, b = v[:-1], v[1:]
        return v, (a[:, 0].copy(), a[:, 1].copy(), b[:, 0].copy(), b[:, 1].copy())
    v = np.atleast_2d(np.asarray(obj, dtype=float))
    if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] == 0:
        raise ValueError("point sets must be non-empty (n, 2) arrays")
    return v, None


def _dist_to_rep(points, segs, verts):
    """Distances (and nearest-primitive indices) from query points to a rep."""
    qx = np.ascontiguousarray(points[:, 0])
    qy = np.ascontiguousarray(points[:, 1])
    if segs is None:
        fx = np.ascontiguousarray(verts[:, 0])
        fy = np.ascontiguousarray(verts[:, 1])
        # nearest point of a finite set
        n = qx.shape[0]
        dist = np.empty(n)
        idx = np.empty(n, dtype=np.int64)
        step = max(1, 4_000_000 // max(len(fx), 1))
        for i in range(0, n, step):
            d = np.hypot(qx[i:i + step, None] - fx, qy[i:i + step, None] - fy)
            k = d.argmin(axis=1)
            rows = np.arange(d.shape[0])
            dist[i:i + step] = d[rows, k]
            idx[i:i + step] = k
        return dist, idx
    ax, ay, bx, by = segs
    return _kernels.seg_min_dists(qx, qy, ax, ay, bx, by)


def _dist_to_single_primitive(points, segs, verts, idx):
    """Distance from each point to one designated primitive (segment or vertex)."""
    if segs is None:
        t = verts[idx]
        return np.hypot(points[:, 0] - t[:, 0], points[:, 1] - t[:, 1])
    ax, ay, bx, by = segs
    a = np.stack([ax[idx], ay[idx]], axis=1)
    e = np.stack([bx[idx] - ax[idx], by[idx] - ay[idx]], axis=1)
    ee = (e * e).sum(axis=1)
    ee = np.where(ee > 0.0, ee, 1.0)
    t = np.clip(((points - a) * e).sum(axis=1) / ee, 0.0, 1.0)
    proj = a + t[:, None] * e
    return np.hypot(points[:, 0] - proj[:, 0], points[:, 1] - proj[:, 1])


def _project_onto_rep(point, segs, verts, idx):
    if segs is None:
        return verts[idx].copy()
    ax, ay, bx, by = segs
    a = np.array([ax[idx], ay[idx]])
    e = np.array([bx[idx] - ax[idx], by[idx] - ay[idx]])
    ee = float(e @ e)
    if ee == 0.0:
        return a
    t = float(np.clip((point - a) @ e / ee, 0.0, 1.0))
    return a + t * e


def _joint_scale(va, vb) -> float:
    lo = np.minimum(va.min(axis=0), vb.min(axis=0))
    hi = np.maximum(va.max(axis=0), vb.max(axis=0))
    return float(np.hypot(*(hi - lo)))


def directed_hausdorff_witness(a, b, sub_tol: float | None = None):
    """Sup over the set ``a`` of the distance to the set ``b``.

    Returns ``(distance, point_on_a, point_on_b)``.  Segments of ``a`` are
    bisected while their upper bound (from the 1-Lipschitz distance function
    and from the nearest primitive found for their endpoints) can still beat
    the best maximum by more than ``sub_tol``; the result underestimates the
    true supremum by at most ``sub_tol``.
    """
    va, sa = _rep_arrays(a)
    vb, sb = _rep_arrays(b)
    if sub_tol is None:
        sub_tol = 1e-7 * max(_joint_scale(va, vb), 1e-30)

    d, idx = _dist_to_rep(va, sb, vb)
    k = int(np.argmax(d))
    best = float(d[k])
    wit_a = va[k].copy()
    wit_idx = int(idx[k])

    if sa is not None:
        ax, ay, bx, by = sa
        p0 = np.stack([ax, ay], axis=1)
        p1 = np.stack([bx, by], axis=1)
        if a.__class__ is Polyline and not a.closed:
            d0, i0 = d[:-1], idx[:-1]
            d1, i1 = d[1:], idx[1:]
        else:
            d0, i0 = d, idx
            d1, i1 = np.roll(d, -1), np.roll(idx, -1)

        for _ in range(_MAX_ROUNDS):
            seg_len = np.hypot(*(p1 - p0).T)
            ub = 0.5 * (d0 + d1 + seg_len)
            # endpoint-witness bound: the whole segment is at most as far from b
            # as from either endpoint's nearest primitive (distance to a fixed
            # convex primitive is convex along the segment, so max at endpoints)
            cross0 = _dist_to_single_primitive(p1, sb, vb, i0)
            cross1 = _dist_to_single_primitive(p0, sb, vb, i1)
            ub = np.minimum(ub, np.maximum(d0, cross0))
            ub = np.minimum(ub, np.maximum(cross1, d1))
            keep = ub > best + sub_tol
            if not keep.any():
                break
            p0, p1, d0, d1, i0, i1 = (x[keep] for x in (p0, p1, d0, d1, i0, i1))
            mid = 0.5 * (p0 + p1)
            dm, im = _dist_to_rep(mid, sb, vb)
            k = int(np.argmax(dm))
            if float(dm[k]) > best:
                best = float(dm[k])
                wit_a = mid[k].copy()
                wit_idx = int(im[k])
            p0 = np.concatenate([p0, mid])
            p1 = np.concatenate([mid, p1])
            d0 = np.concatenate([d0, dm])
            d1 = np.concatenate([dm, d1])
            i0 = np.concatenate([i0, im])
            i1 = np.concatenate([im, i1])
        else:
            raise RuntimeError("directed Hausdorff subdivision failed to converge")

    wit_b = _project_onto_rep(wit_a, sb, vb, wit_idx)
    return best, wit_a, wit_b


def directed_hausdorff(a, b, sub_tol: float | None = None) -> float:
    """One-sided Hausdorff distance from ``a`` to ``b``."""
    return directed_hausdorff_witness(a, b, sub_tol)[0]


def hausdorff_distance(a, b, sub_tol: float | None = None) -> float:
    """Max of the two directed distances (symmetric by construction)."""
    return max(directed_hausdorff(a, b, sub_tol), directed_hausdorff(b, a, sub_tol))


def hausdorff_witness(a, b, sub_tol: float | None = None):
    """Hausdorff distance together with the achieving point pair."""
    dab, pa, pb = directed_hausdorff_witness(a, b, sub_tol)
    dba, qb, qa = directed_hausdorff_witness(b, a, sub_tol)
    if dab >= dba:
        return dab, pa, pb
    return dba, qa, qb

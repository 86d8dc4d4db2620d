"""Closed-polyline sampling of convex level curves by radial root finding.

Convexity of the distance sum guarantees exactly one crossing of each level
per ray from an interior center, so rays at equally spaced angles produce a
watertight closed curve with no topology ambiguity.  Brackets are expanded
geometrically and resolved by bisection; derivative-free root finding stays
robust when the bracket passes near a focus.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import LevelAtMinimumError, LevelBelowMinimumError
from .focal import Polyellipse, eval_F
from .weber import weiszfeld_minimize

__all__ = [
    "ClosedPolyline",
    "TraceConfig",
    "trace_level_set",
    "arc_point_on_axis",
    "radial_trace",
]


@dataclass
class ClosedPolyline:
    """Cyclic sequence of at least 3 vertices; the last joins back to the first."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise ValueError("a closed polyline needs an (n >= 3, 2) vertex array")
        nxt = np.roll(v, -1, axis=0)
        if (np.hypot(*(nxt - v).T) == 0.0).any():
            raise ValueError("consecutive vertices must be distinct")
        v = v.copy()
        v.setflags(write=False)
        self.vertices = v

    def __len__(self) -> int:
        return self.vertices.shape[0]

    def segments(self) -> np.ndarray:
        """(n, 2, 2) array of segments, closing edge included."""
        v = self.vertices
        return np.stack([v, np.roll(v, -1, axis=0)], axis=1)

    def perimeter(self) -> float:
        v = self.vertices
        e = np.roll(v, -1, axis=0) - v
        return float(np.hypot(e[:, 0], e[:, 1]).sum())

    def contains_point(self, x) -> bool:
        """Even-odd crossing test."""
        px, py = float(x[0]), float(x[1])
        v = self.vertices
        a = v
        b = np.roll(v, -1, axis=0)
        cond = (a[:, 1] > py) != (b[:, 1] > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (py - a[:, 1]) / (b[:, 1] - a[:, 1])
        xs = a[:, 0] + t * (b[:, 0] - a[:, 0])
        return bool(np.count_nonzero(cond & (xs > px)) % 2)


@dataclass
class TraceConfig:
    """Ray count, residual tolerance and center choice for radial tracing.

    ``center=None`` uses the certified minimizer; rays start at angle 0 along
    +x so symmetric configurations are sampled exactly on their axes.
    """

    n_rays: int = 512
    root_tol: float = 1e-12
    center: np.ndarray | None = None

    def __post_init__(self):
        if self.n_rays < 8:
            raise ValueError("n_rays must be at least 8")
        if self.root_tol <= 0:
            raise ValueError("root_tol must be positive")
        if self.center is not None:
            self.center = np.asarray(self.center, dtype=float).reshape(2)


def _bracket_and_bisect(
    f_batch: Callable[[np.ndarray], np.ndarray],
    center: np.ndarray,
    level: float,
    dirs: np.ndarray,
    root_tol: float,
    start_radius: float,
) -> np.ndarray:
    """Radii where ``f`` crosses ``level`` along each unit direction."""
    n = dirs.shape[0]
    lo = np.zeros(n)
    hi = np.full(n, max(start_radius, root_tol))
    for _ in range(200):
        vals = f_batch(center + hi[:, None] * dirs)
        low = vals < level
        if not low.any():
            break
        hi[low] *= 2.0
    else:
        raise RuntimeError("failed to bracket the level crossing")
    # the iteration cap guards against brackets pinned at float resolution
    # (possible when root_tol is below the ulp of a large radius)
    for _ in range(200):
        if (hi - lo).max() <= root_tol:
            break
        mid = 0.5 * (lo + hi)
        vals = f_batch(center + mid[:, None] * dirs)
        below = vals < level
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def radial_trace(
    f_batch: Callable[[np.ndarray], np.ndarray],
    center,
    level: float,
    n_rays: int,
    root_tol: float,
    start_radius: float = 1.0,
    min_tolerance: float | None = None,
) -> ClosedPolyline:
    """Trace ``{f = level}`` for any convex ``f`` with interior minimum at ``center``.

    ``f_batch`` maps an (n, 2) array of points to (n,) values.  Output
    vertices are ordered by ascending angle regardless of how the evaluations
    are scheduled.
    """
    center = np.asarray(center, dtype=float).reshape(2)
    vmin = float(f_batch(center.reshape(1, 2))[0])
    tol = root_tol if min_tolerance is None else min_tolerance
    if level < vmin - tol:
        raise LevelBelowMinimumError(
            f"level {level!r} is below the minimum {vmin!r} at the center"
        )
    if abs(level - vmin) <= tol:
        raise LevelAtMinimumError(
            f"level {level!r} equals the minimum {vmin!r}: degenerate level set"
        )
    theta = 2.0 * np.pi * np.arange(n_rays) / n_rays
    dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    radii = _bracket_and_bisect(f_batch, center, level, dirs, root_tol, start_radius)
    return ClosedPolyline(center + radii[:, None] * dirs)


def _polyellipse_center(pe: Polyellipse, cfg: TraceConfig) -> np.ndarray:
    if cfg.center is not None:
        return cfg.center
    return weiszfeld_minimize(pe.focal_set).point


def trace_level_set(pe: Polyellipse, cfg: TraceConfig | None = None) -> ClosedPolyline:
    """Sample the polyellipse on ``cfg.n_rays`` equally spaced rays.

    Every vertex ``X`` satisfies ``|F(X) - level| <= root_tol * total_weight``
    (the distance sum is Lipschitz with constant ``total_weight`` along rays).
    Raises :class:`LevelBelowMinimumError` / :class:`LevelAtMinimumError` for
    invalid or degenerate levels.
    """
    if cfg is None:
        cfg = TraceConfig()
    fs = pe.focal_set
    center = _polyellipse_center(pe, cfg)
    start = max(fs.diameter, 1.0)
    return radial_trace(
        lambda pts: eval_F(fs, pts),
        center,
        pe.level,
        cfg.n_rays,
        cfg.root_tol,
        start_radius=start,
        min_tolerance=cfg.root_tol * fs.total_weight,
    )


def arc_point_on_axis(
    pe: Polyellipse,
    direction,
    root_tol: float = 1e-12,
    center=None,
) -> np.ndarray:
    """Unique intersection of the level curve with one ray from the center.

    Used to locate the curve point on a symmetry axis (e.g. through an edge
    midpoint of an inscribed polygon); the root finding is confined to the
    axis so the returned point lies on it exactly.
    """
    d = np.asarray(direction, dtype=float).reshape(2)
    nd = np.hypot(d[0], d[1])
    if nd == 0.0:
        raise ValueError("direction must be nonzero")
    d = d / nd
    fs = pe.focal_set
    if center is None:
        center = weiszfeld_minimize(fs).point
    else:
        center = np.asarray(center, dtype=float).reshape(2)
    vmin = float(eval_F(fs, center))
    tol = root_tol * fs.total_weight
    if pe.level < vmin - tol:
        raise LevelBelowMinimumError(
            f"level {pe.level!r} is below the minimum {vmin!r} at the center"
        )
    if abs(pe.level - vmin) <= tol:
        raise LevelAtMinimumError(
            f"level {pe.level!r} equals the minimum {vmin!r}: degenerate level set"
        )
    radii = _bracket_and_bisect(
        lambda pts: eval_F(fs, pts),
        center,
        pe.level,
        d.reshape(1, 2),
        root_tol,
        max(fs.diameter, 1.0),
    )
    return center + radii[0] * d

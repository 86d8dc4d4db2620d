"""Weighted sum-of-distances function: evaluation, derivatives, curvature.

The central object is ``F(X) = sum_i w_i * d(X, F_i)`` for a finite set of
focuses ``F_i`` with positive weights ``w_i``.  Integer weights model repeated
focuses (multiplicities); fractional weights cover averaged distance sums.
``F`` is convex, smooth away from the focuses, and its level curves are the
polyellipses handled by the rest of the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import SingularPointError, ZeroGradientError

__all__ = [
    "WeightedFocalSet",
    "Polyellipse",
    "SymMatrix2",
    "eval_F",
    "gradient",
    "dirderiv_plus",
    "hessian",
    "curvature",
]


def _as_points(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    if a.ndim == 1:
        if a.shape != (2,):
            raise ValueError(f"expected a point (x, y), got shape {a.shape}")
    elif a.ndim != 2 or a.shape[1] != 2:
        raise ValueError(f"expected points of shape (n, 2), got {a.shape}")
    return a


@dataclass
class WeightedFocalSet:
    """Finite focuses with positive weights.

    ``points`` is an (m, 2) array, ``weights`` an (m,) array.  Arrays are made
    read-only so instances can be shared freely between threads.  Weights
    default to 1 per focus.
    """

    points: np.ndarray
    weights: np.ndarray | None = None
    _diameter: float | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] == 0:
            raise ValueError("points must be a non-empty (m, 2) array")
        if not np.isfinite(pts).all():
            raise ValueError("focus coordinates must be finite")
        if self.weights is None:
            w = np.ones(pts.shape[0])
        else:
            w = np.asarray(self.weights, dtype=float).reshape(-1)
        if w.shape[0] != pts.shape[0]:
            raise ValueError("weights length must match the number of focuses")
        if not np.isfinite(w).all() or (w <= 0).any():
            raise ValueError("weights must be finite and positive")
        pts = pts.copy()
        w = w.copy()
        pts.setflags(write=False)
        w.setflags(write=False)
        self.points = pts
        self.weights = w

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    @property
    def diameter(self) -> float:
        if self._diameter is None:
            p = self.points
            if len(p) == 1:
                d = 0.0
            else:
                diff = p[:, None, :] - p[None, :, :]
                d = float(np.hypot(diff[..., 0], diff[..., 1]).max())
            self._diameter = d
        return self._diameter

    @property
    def tol_singular(self) -> float:
        # derivative magnitudes blow up like 1/d, so the cutoff is scale-relative
        return 1e-9 * max(self.diameter, 1.0)

    def merged(self, tol: float | None = None) -> "WeightedFocalSet":
        """Coincident focuses (within ``tol``) merged with summed weights.

        Representatives keep first-occurrence order; all operations produce
        identical outputs on the merged and unmerged set.
        """
        if tol is None:
            tol = 1e-12 * max(self.diameter, 1.0)
        pts, w = self.points, self.weights
        out_p: list[np.ndarray] = []
        out_w: list[float] = []
        for i in range(len(pts)):
            for k, q in enumerate(out_p):
                if np.hypot(pts[i, 0] - q[0], pts[i, 1] - q[1]) <= tol:
                    out_w[k] += w[i]
                    break
            else:
                out_p.append(pts[i])
                out_w.append(w[i])
        return WeightedFocalSet(np.array(out_p), np.array(out_w))

    def collinear(self, rel_tol: float = 1e-12) -> bool:
        """True when all focuses lie on one line within ``rel_tol`` relative."""
        p = self.points
        if len(p) <= 2:
            return True
        c = p - p.mean(axis=0)
        sv = np.linalg.svd(c, compute_uv=False)
        return bool(sv[-1] <= rel_tol * max(sv[0], 1e-300))

    def min_distance(self, x) -> np.ndarray | float:
        """Distance from point(s) to the nearest focus."""
        q = _as_points(x)
        single = q.ndim == 1
        q2 = q.reshape(-1, 2)
        d = _kernels.min_focal_dist(
            np.ascontiguousarray(q2[:, 0]), np.ascontiguousarray(q2[:, 1]),
            np.ascontiguousarray(self.points[:, 0]), np.ascontiguousarray(self.points[:, 1]),
        )
        return float(d[0]) if single else d


@dataclass(frozen=True)
class SymMatrix2:
    """Symmetric 2x2 matrix (Hessian of the distance sum)."""

    a11: float
    a12: float
    a22: float

    def trace(self) -> float:
        return self.a11 + self.a22

    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a12

    def quadratic(self, v) -> float:
        """The form H(v, v)."""
        vx, vy = float(v[0]), float(v[1])
        return self.a11 * vx * vx + 2.0 * self.a12 * vx * vy + self.a22 * vy * vy

    def as_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a12, self.a22]])


@dataclass
class Polyellipse:
    """Level set ``{X : F(X) = level}`` of a weighted distance sum."""

    focal_set: WeightedFocalSet
    level: float

    def __post_init__(self):
        self.level = float(self.level)
        if not np.isfinite(self.level):
            raise ValueError("level must be finite")


def _focal_arrays(fs: WeightedFocalSet):
    return (
        np.ascontiguousarray(fs.points[:, 0]),
        np.ascontiguousarray(fs.points[:, 1]),
        np.ascontiguousarray(fs.weights),
    )


def eval_F(fs: WeightedFocalSet, x) -> float | np.ndarray:
    """Weighted sum of distances from ``x`` to the focuses.

    ``x`` may be a single point ``(2,)`` or a batch ``(n, 2)``; the result
    matches (scalar or ``(n,)``).
    """
    q = _as_points(x)
    single = q.ndim == 1
    q2 = q.reshape(-1, 2)
    fx, fy, w = _focal_arrays(fs)
    vals = _kernels.sum_dists(
        np.ascontiguousarray(q2[:, 0]), np.ascontiguousarray(q2[:, 1]), fx, fy, w
    )
    return float(vals[0]) if single else vals


def _check_not_singular(fs: WeightedFocalSet, q2: np.ndarray):
    d = _kernels.min_focal_dist(
        np.ascontiguousarray(q2[:, 0]), np.ascontiguousarray(q2[:, 1]),
        np.ascontiguousarray(fs.points[:, 0]), np.ascontiguousarray(fs.points[:, 1]),
    )
    bad = d <= fs.tol_singular
    if bad.any():
        i = int(np.argmax(bad))
        raise SingularPointError(
            f"point {tuple(q2[i])} coincides with a focus "
            f"(distance {d[i]:.3e} <= tol {fs.tol_singular:.3e})"
        )


def gradient(fs: WeightedFocalSet, x) -> np.ndarray:
    """Gradient of the distance sum: ``sum_i w_i * (X - F_i)/d_i``.

    Norm is at most the total weight.  Raises :class:`SingularPointError`
    within ``tol_singular`` of a focus, where only one-sided derivatives exist
    (see :func:`dirderiv_plus`).
    """
    q = _as_points(x)
    single = q.ndim == 1
    q2 = q.reshape(-1, 2)
    _check_not_singular(fs, q2)
    fx, fy, w = _focal_arrays(fs)
    gx, gy = _kernels.grad_sums(
        np.ascontiguousarray(q2[:, 0]), np.ascontiguousarray(q2[:, 1]), fx, fy, w
    )
    g = np.stack([gx, gy], axis=-1)
    return g[0] if single else g


def dirderiv_plus(fs: WeightedFocalSet, at_focus_index: int, v) -> float:
    """One-sided directional derivative at a focus.

    Computed on the merged focal set (coincident focuses pooled, so the
    addressed focus carries its full multiplicity ``k_i``):

        ``k_i * ||v|| + <v, N_i>``,  ``N_i = -sum_{F_j != F_i} w_j * unit(F_i -> F_j)``.

    Nonnegative for every direction exactly when the focus is a minimizer.
    """
    m = fs.merged()
    idx = int(at_focus_index)
    if not 0 <= idx < len(m):
        raise IndexError(f"focus index {at_focus_index} out of range for {len(m)} merged focuses")
    vv = np.asarray(v, dtype=float)
    nv = float(np.hypot(vv[0], vv[1]))
    if nv == 0.0:
        raise ValueError("direction v must be nonzero")
    fi = m.points[idx]
    others = np.arange(len(m)) != idx
    n_i = np.zeros(2)
    if others.any():
        diff = m.points[others] - fi
        d = np.hypot(diff[:, 0], diff[:, 1])
        n_i = -((m.weights[others] / d)[:, None] * diff).sum(axis=0)
    return float(m.weights[idx]) * nv + float(vv @ n_i)


def focus_pull_vector(fs: WeightedFocalSet, at_focus_index: int) -> np.ndarray:
    """The vector ``N_i`` entering the one-sided derivative at a merged focus."""
    m = fs.merged()
    idx = int(at_focus_index)
    if not 0 <= idx < len(m):
        raise IndexError(f"focus index {at_focus_index} out of range for {len(m)} merged focuses")
    fi = m.points[idx]
    others = np.arange(len(m)) != idx
    if not others.any():
        return np.zeros(2)
    diff = m.points[others] - fi
    d = np.hypot(diff[:, 0], diff[:, 1])
    return -((m.weights[others] / d)[:, None] * diff).sum(axis=0)


def hessian(fs: WeightedFocalSet, x) -> SymMatrix2:
    """Hessian of the distance sum at a single non-singular point.

    ``a11 = sum w_i (y-y_i)^2 / d_i^3``, ``a22 = sum w_i (x-x_i)^2 / d_i^3``,
    ``a12 = -sum w_i (x-x_i)(y-y_i) / d_i^3``.  The trace equals
    ``sum w_i / d_i`` exactly and the matrix is positive semidefinite.
    """
    h11, h12, h22 = hessian_arrays(fs, x)
    return SymMatrix2(float(h11[0]), float(h12[0]), float(h22[0]))


def hessian_arrays(fs: WeightedFocalSet, x):
    """Batch Hessian entries ``(a11, a12, a22)`` for points of shape (n, 2)."""
    q2 = _as_points(x).reshape(-1, 2)
    _check_not_singular(fs, q2)
    fx, fy, w = _focal_arrays(fs)
    return _kernels.hess_sums(
        np.ascontiguousarray(q2[:, 0]), np.ascontiguousarray(q2[:, 1]), fx, fy, w
    )


def curvature(fs: WeightedFocalSet, q) -> float:
    """Curvature of the level curve of the distance sum through ``q``.

    Frame-free form ``H(t, t) / ||grad F||`` with ``t`` the unit tangent
    (gradient rotated by +90 degrees).  Nonnegative for these convex level
    curves; no absolute value is taken, so a negative result would expose a
    bug.  Raises :class:`ZeroGradientError` at the minimizer.
    """
    g = gradient(fs, q)
    gn = float(np.hypot(g[0], g[1]))
    if gn <= 1e-13 * fs.total_weight:
        raise ZeroGradientError("gradient vanishes: curvature undefined at the minimizer")
    t = np.array([-g[1], g[0]]) / gn
    h = hessian(fs, q)
    return h.quadratic(t) / gn

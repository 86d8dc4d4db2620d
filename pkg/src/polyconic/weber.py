"""Minimizing the weighted distance sum, with optimality certificates.

Two facts characterize the minimizer: away from the focuses it is exactly the
vanishing of the gradient, and a focus ``F_i`` is minimal exactly when the
pull of the remaining focuses does not exceed its own weight
(``||N_i|| <= k_i``).  Both checks are exposed as certificates; the fixed
point iteration below descends to a certified point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularPointError
from .focal import WeightedFocalSet, eval_F, focus_pull_vector, gradient

__all__ = [
    "OptimalityCertificate",
    "MinimizeResult",
    "weiszfeld_minimize",
    "weiszfeld_step",
    "check_smooth_optimality",
    "check_focal_optimality",
    "default_cert_tol",
]


def default_cert_tol(fs: WeightedFocalSet) -> float:
    return 1e-10 * fs.total_weight


@dataclass(frozen=True)
class OptimalityCertificate:
    """Residual of one of the two minimality conditions.

    ``kind == "smooth"``: residual is the gradient norm at the point.
    ``kind == "focal"``: residual is ``max(0, ||N_i|| - k_i)`` at focus ``i``.
    """

    kind: str
    residual: float
    n_vector: np.ndarray
    tol: float
    focus_index: int | None = None

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol


@dataclass(frozen=True)
class MinimizeResult:
    point: np.ndarray
    value: float
    certificate: OptimalityCertificate
    iterations: int
    converged: bool
    non_unique: bool


def weiszfeld_step(fs: WeightedFocalSet, x) -> np.ndarray:
    """One fixed-point update ``X <- (sum w_i F_i / d_i) / (sum w_i / d_i)``.

    The distance sum is non-increasing along these steps.  Undefined at a
    focus (raises :class:`SingularPointError`).
    """
    pts, w = fs.points, fs.weights
    x = np.asarray(x, dtype=float).reshape(2)
    d = np.hypot(*(x - pts).T)
    if d.min() <= fs.tol_singular:
        raise SingularPointError("Weiszfeld update is undefined at a focus")
    inv = w / d
    return (inv[:, None] * pts).sum(axis=0) / inv.sum()


def check_smooth_optimality(
    fs: WeightedFocalSet, x, cert_tol: float | None = None
) -> OptimalityCertificate:
    """Gradient-norm certificate at a point away from the focuses."""
    if cert_tol is None:
        cert_tol = default_cert_tol(fs)
    g = gradient(fs, x)  # raises SingularPointError at a focus
    return OptimalityCertificate(
        kind="smooth", residual=float(np.hypot(g[0], g[1])), n_vector=g, tol=cert_tol
    )


def check_focal_optimality(
    fs: WeightedFocalSet, focus_index: int, cert_tol: float | None = None
) -> OptimalityCertificate:
    """Focal-point certificate: pull of the other focuses versus own weight.

    ``focus_index`` addresses the merged focal set, so the weight compared
    against is the full multiplicity of that focus.
    """
    if cert_tol is None:
        cert_tol = default_cert_tol(fs)
    m = fs.merged()
    idx = int(focus_index)
    if not 0 <= idx < len(m):
        raise IndexError(f"focus index {focus_index} out of range for {len(m)} merged focuses")
    n_i = focus_pull_vector(m, idx)
    residual = max(0.0, float(np.hypot(n_i[0], n_i[1])) - float(m.weights[idx]))
    return OptimalityCertificate(
        kind="focal", residual=residual, n_vector=n_i, tol=cert_tol, focus_index=idx
    )


def weiszfeld_minimize(
    fs: WeightedFocalSet,
    cert_tol: float | None = None,
    max_iter: int = 10000,
) -> MinimizeResult:
    """Fixed-point minimization of the weighted distance sum.

    Starts from the weighted centroid (always inside the convex hull that
    contains the minimizer) and iterates
    ``X <- (sum w_i F_i / d_i) / (sum w_i / d_i)``, checking the gradient
    certificate each step.  An iterate landing within ``tol_singular`` of a
    focus is snapped there; if the focal certificate passes the focus is the
    answer, otherwise the iteration steps off along the descent direction
    ``-N_i/||N_i||`` and continues.

    When ``max_iter`` is exhausted the best iterate is returned with
    ``converged=False`` and a failing certificate.
    """
    m = fs.merged()
    if cert_tol is None:
        cert_tol = default_cert_tol(m)
    pts, w = m.points, m.weights
    tol_sing = m.tol_singular
    non_unique = m.collinear()

    if len(m) == 1:
        cert = check_focal_optimality(m, 0, cert_tol)
        return MinimizeResult(
            point=pts[0].copy(), value=0.0, certificate=cert,
            iterations=0, converged=True, non_unique=True,
        )

    x = (w @ pts) / w.sum()
    iterations = 0
    for iterations in range(1, max_iter + 1):
        diff = x - pts
        d = np.hypot(diff[:, 0], diff[:, 1])
        k = int(np.argmin(d))
        if d[k] <= tol_sing:
            cert = check_focal_optimality(m, k, cert_tol)
            if cert.passed:
                return MinimizeResult(
                    point=pts[k].copy(), value=float(eval_F(m, pts[k])),
                    certificate=cert, iterations=iterations,
                    converged=True, non_unique=non_unique,
                )
            n_i = cert.n_vector
            x = pts[k] - 10.0 * tol_sing * n_i / np.hypot(n_i[0], n_i[1])
            continue
        inv = w / d
        g = (inv[:, None] * diff).sum(axis=0)
        if np.hypot(g[0], g[1]) <= cert_tol:
            cert = OptimalityCertificate(
                kind="smooth", residual=float(np.hypot(g[0], g[1])),
                n_vector=g, tol=cert_tol,
            )
            return MinimizeResult(
                point=x.copy(), value=float(eval_F(m, x)), certificate=cert,
                iterations=iterations, converged=True, non_unique=non_unique,
            )
        x = weiszfeld_step(m, x)

    # best effort: report the final iterate with its (failing) certificate
    try:
        cert = check_smooth_optimality(m, x, cert_tol)
    except SingularPointError:
        k = int(np.argmin(np.hypot(*(x - pts).T)))
        cert = check_focal_optimality(m, k, cert_tol)
        x = pts[k]
    return MinimizeResult(
        point=x.copy(), value=float(eval_F(m, x)), certificate=cert,
        iterations=max_iter, converged=cert.passed, non_unique=non_unique,
    )

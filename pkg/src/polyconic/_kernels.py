"""Hot numeric kernels with two interchangeable backends.

Every kernel exists twice: a pure-numpy implementation (chunked to bound
temporary sizes) and a numba ``@njit`` version that parallelizes over query
points while keeping each point's reduction sequential, so results do not
depend on the thread count.

Backend selection happens once at import time:

* ``POLYCONIC_NUMBA=0`` (also ``false``/``no``/``off``) forces the numpy path;
* otherwise numba is used when importable, numpy when not.

``POLYCONIC_THREADS`` caps the numba thread pool. ``benchmarks/bench_kernels.py``
times both backends side by side.
"""

from __future__ import annotations

import math
import os

import numpy as np

_CHUNK = 4_000_000  # max elements of an (n, m) temporary in the numpy path


# ---------------------------------------------------------------------------
# pure-numpy implementations

def _sum_dists_np(qx, qy, fx, fy, w):
    n, m = qx.shape[0], fx.shape[0]
    out = np.empty(n)
    step = max(1, _CHUNK // max(m, 1))
    for i in range(0, n, step):
        d = np.hypot(qx[i:i + step, None] - fx, qy[i:i + step, None] - fy)
        out[i:i + step] = d @ w
    return out


def _grad_sums_np(qx, qy, fx, fy, w):
    n, m = qx.shape[0], fx.shape[0]
    gx = np.empty(n)
    gy = np.empty(n)
    step = max(1, _CHUNK // max(m, 1))
    for i in range(0, n, step):
        dx = qx[i:i + step, None] - fx
        dy = qy[i:i + step, None] - fy
        inv = w / np.hypot(dx, dy)
        gx[i:i + step] = (dx * inv).sum(axis=1)
        gy[i:i + step] = (dy * inv).sum(axis=1)
    return gx, gy


def _hess_sums_np(qx, qy, fx, fy, w):
    n, m = qx.shape[0], fx.shape[0]
    h11 = np.empty(n)
    h12 = np.empty(n)
    h22 = np.empty(n)
    step = max(1, _CHUNK // max(m, 1))
    for i in range(0, n, step):
        dx = qx[i:i + step, None] - fx
        dy = qy[i:i + step, None] - fy
        inv3 = w / np.hypot(dx, dy) ** 3
        h11[i:i + step] = (dy * dy * inv3).sum(axis=1)
        h22[i:i + step] = (dx * dx * inv3).sum(axis=1)
        h12[i:i + step] = -(dx * dy * inv3).sum(axis=1)
    return h11, h12, h22


def _min_focal_dist_np(qx, qy, fx, fy):
    n, m = qx.shape[0], fx.shape[0]
    out = np.empty(n)
    step = max(1, _CHUNK // max(m, 1))
    for i in range(0, n, step):
        d = np.hypot(qx[i:i + step, None] - fx, qy[i:i + step, None] - fy)
        out[i:i + step] = d.min(axis=1)
    return out


def _seg_min_dists_np(qx, qy, ax, ay, bx, by):
    """Min distance from each query point to a chain of segments, with argmin."""
    n, m = qx.shape[0], ax.shape[0]
    ex = bx - ax
    ey = by - ay
    ee = ex * ex + ey * ey
    ee_safe = np.where(ee > 0.0, ee, 1.0)
    dist = np.empty(n)
    idx = np.empty(n, dtype=np.int64)
    step = max(1, _CHUNK // max(m, 1))
    for i in range(0, n, step):
        px = qx[i:i + step, None] - ax
        py = qy[i:i + step, None] - ay
        t = np.clip((px * ex + py * ey) / ee_safe, 0.0, 1.0)
        dx = px - t * ex
        dy = py - t * ey
        d2 = dx * dx + dy * dy
        k = d2.argmin(axis=1)
        rows = np.arange(d2.shape[0])
        dist[i:i + step] = np.sqrt(d2[rows, k])
        idx[i:i + step] = k
    return dist, idx


_NUMPY_IMPLS = {
    "sum_dists": _sum_dists_np,
    "grad_sums": _grad_sums_np,
    "hess_sums": _hess_sums_np,
    "min_focal_dist": _min_focal_dist_np,
    "seg_min_dists": _seg_min_dists_np,
}


# ---------------------------------------------------------------------------
# numba implementations

def _build_numba_impls():
    from numba import njit, prange

    @njit(cache=True, parallel=True)
    def sum_dists(qx, qy, fx, fy, w):
        n = qx.shape[0]
        m = fx.shape[0]
        out = np.empty(n)
        for i in prange(n):
            acc = 0.0
            for j in range(m):
                dx = qx[i] - fx[j]
                dy = qy[i] - fy[j]
                acc += w[j] * math.sqrt(dx * dx + dy * dy)
            out[i] = acc
        return out

    @njit(cache=True, parallel=True)
    def grad_sums(qx, qy, fx, fy, w):
        n = qx.shape[0]
        m = fx.shape[0]
        gx = np.empty(n)
        gy = np.empty(n)
        for i in prange(n):
            ax = 0.0
            ay = 0.0
            for j in range(m):
                dx = qx[i] - fx[j]
                dy = qy[i] - fy[j]
                inv = w[j] / math.sqrt(dx * dx + dy * dy)
                ax += dx * inv
                ay += dy * inv
            gx[i] = ax
            gy[i] = ay
        return gx, gy

    @njit(cache=True, parallel=True)
    def hess_sums(qx, qy, fx, fy, w):
        n = qx.shape[0]
        m = fx.shape[0]
        h11 = np.empty(n)
        h12 = np.empty(n)
        h22 = np.empty(n)
        for i in prange(n):
            a11 = 0.0
            a12 = 0.0
            a22 = 0.0
            for j in range(m):
                dx = qx[i] - fx[j]
                dy = qy[i] - fy[j]
                d = math.sqrt(dx * dx + dy * dy)
                inv3 = w[j] / (d * d * d)
                a11 += dy * dy * inv3
                a22 += dx * dx * inv3
                a12 -= dx * dy * inv3
            h11[i] = a11
            h12[i] = a12
            h22[i] = a22
        return h11, h12, h22

    @njit(cache=True, parallel=True)
    def min_focal_dist(qx, qy, fx, fy):
        n = qx.shape[0]
        m = fx.shape[0]
        out = np.empty(n)
        for i in prange(n):
            best = np.inf
            for j in range(m):
                dx = qx[i] - fx[j]
                dy = qy[i] - fy[j]
                d = math.sqrt(dx * dx + dy * dy)
                if d < best:
                    best = d
            out[i] = best
        return out

    @njit(cache=True, parallel=True)
    def seg_min_dists(qx, qy, ax, ay, bx, by):
        n = qx.shape[0]
        m = ax.shape[0]
        dist = np.empty(n)
        idx = np.empty(n, dtype=np.int64)
        for i in prange(n):
            best = np.inf
            kbest = 0
            for j in range(m):
                ex = bx[j] - ax[j]
                ey = by[j] - ay[j]
                px = qx[i] - ax[j]
                py = qy[i] - ay[j]
                ee = ex * ex + ey * ey
                if ee > 0.0:
                    t = (px * ex + py * ey) / ee
                    if t < 0.0:
                        t = 0.0
                    elif t > 1.0:
                        t = 1.0
                else:
                    t = 0.0
                dx = px - t * ex
                dy = py - t * ey
                d2 = dx * dx + dy * dy
                if d2 < best:
                    best = d2
                    kbest = j
            dist[i] = math.sqrt(best)
            idx[i] = kbest
        return dist, idx

    return {
        "sum_dists": sum_dists,
        "grad_sums": grad_sums,
        "hess_sums": hess_sums,
        "min_focal_dist": min_focal_dist,
        "seg_min_dists": seg_min_dists,
    }


def _numba_wanted() -> bool:
    flag = os.environ.get("POLYCONIC_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "no", "off")


_NUMBA_IMPLS = None
if _numba_wanted():
    try:
        _NUMBA_IMPLS = _build_numba_impls()
        threads = os.environ.get("POLYCONIC_THREADS", "").strip()
        if threads:
            import numba

            numba.set_num_threads(max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS)))
    except ImportError:
        _NUMBA_IMPLS = None

_ACTIVE = _NUMBA_IMPLS if _NUMBA_IMPLS is not None else _NUMPY_IMPLS

sum_dists = _ACTIVE["sum_dists"]
grad_sums = _ACTIVE["grad_sums"]
hess_sums = _ACTIVE["hess_sums"]
min_focal_dist = _ACTIVE["min_focal_dist"]
seg_min_dists = _ACTIVE["seg_min_dists"]


def backend_name() -> str:
    return "numba" if _ACTIVE is _NUMBA_IMPLS else "numpy"

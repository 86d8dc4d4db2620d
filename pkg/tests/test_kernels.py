import os
import subprocess
import sys

import numpy as np
import pytest

from polyconic import _kernels


@pytest.fixture(scope="module")
def workload():
    rng = np.random.default_rng(60)
    qx = rng.standard_normal(500)
    qy = rng.standard_normal(500)
    fx = rng.standard_normal(23)
    fy = rng.standard_normal(23)
    w = rng.uniform(0.5, 2.0, 23)
    ang = np.linspace(0, 2 * np.pi, 65)
    segs = (np.cos(ang[:-1]), np.sin(ang[:-1]), np.cos(ang[1:]), np.sin(ang[1:]))
    return qx, qy, fx, fy, w, segs


def test_active_backend_matches_numpy(workload):
    qx, qy, fx, fy, w, segs = workload
    impls = _kernels._NUMPY_IMPLS
    np.testing.assert_allclose(
        _kernels.sum_dists(qx, qy, fx, fy, w), impls["sum_dists"](qx, qy, fx, fy, w), rtol=1e-13
    )
    g_active = _kernels.grad_sums(qx, qy, fx, fy, w)
    g_np = impls["grad_sums"](qx, qy, fx, fy, w)
    np.testing.assert_allclose(g_active, g_np, rtol=1e-10, atol=1e-12)
    h_active = _kernels.hess_sums(qx, qy, fx, fy, w)
    h_np = impls["hess_sums"](qx, qy, fx, fy, w)
    np.testing.assert_allclose(h_active, h_np, rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose(
        _kernels.min_focal_dist(qx, qy, fx, fy), impls["min_focal_dist"](qx, qy, fx, fy), rtol=1e-14
    )
    d_active, i_active = _kernels.seg_min_dists(qx, qy, *segs)
    d_np, i_np = impls["seg_min_dists"](qx, qy, *segs)
    np.testing.assert_allclose(d_active, d_np, rtol=1e-13, atol=1e-15)
    np.testing.assert_array_equal(i_active, i_np)


def test_seg_min_dists_known_values():
    qx = np.array([0.5, 2.0, 0.0])
    qy = np.array([1.0, 0.0, -1.0])
    ax, ay = np.array([0.0]), np.array([0.0])
    bx, by = np.array([1.0]), np.array([0.0])
    d, idx = _kernels.seg_min_dists(qx, qy, ax, ay, bx, by)
    np.testing.assert_allclose(d, [1.0, 1.0, 1.0])
    np.testing.assert_array_equal(idx, [0, 0, 0])


def test_degenerate_segment():
    d, _ = _kernels.seg_min_dists(
        np.array([3.0]), np.array([4.0]),
        np.array([0.0]), np.array([0.0]), np.array([0.0]), np.array([0.0]),
    )
    assert d[0] == pytest.approx(5.0)


def _run_with_env(code, **env):
    full = {**os.environ, **env}
    return subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=full, check=True
    ).stdout.strip()


def test_env_flag_selects_numpy_backend():
    out = _run_with_env(
        "from polyconic import backend_name; print(backend_name())", POLYCONIC_NUMBA="0"
    )
    assert out.splitlines()[-1] == "numpy"


def test_numpy_backend_end_to_end():
    code = (
        "import numpy as np\n"
        "from polyconic import WeightedFocalSet, Polyellipse, TraceConfig, trace_level_set\n"
        "pe = Polyellipse(WeightedFocalSet([[-3.0, 0.0], [3.0, 0.0]]), 10.0)\n"
        "v = trace_level_set(pe, TraceConfig(n_rays=64)).vertices\n"
        "print(np.abs(v[:, 0]**2/25 + v[:, 1]**2/16 - 1).max() < 1e-8)\n"
    )
    assert _run_with_env(code, POLYCONIC_NUMBA="0").splitlines()[-1] == "True"


def test_threads_env_var_harmless():
    code = (
        "from polyconic import WeightedFocalSet, eval_F, backend_name\n"
        "print(eval_F(WeightedFocalSet([[0.0, 0.0]]), [3.0, 4.0]), backend_name())\n"
    )
    out = _run_with_env(code, POLYCONIC_THREADS="1").splitlines()[-1]
    assert out.startswith("5.0")

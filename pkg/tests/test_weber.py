import numpy as np
import pytest

from polyconic import (
    SingularPointError,
    WeightedFocalSet,
    check_focal_optimality,
    check_smooth_optimality,
    eval_F,
    weiszfeld_minimize,
)
from polyconic.weber import weiszfeld_step
from polyconic._kernels import sum_dists


def grid_minimum(fs, lo, hi, cell=1e-3):
    xs = np.arange(lo[0], hi[0] + cell / 2, cell)
    ys = np.arange(lo[1], hi[1] + cell / 2, cell)
    best = np.inf
    fx = np.ascontiguousarray(fs.points[:, 0])
    fy = np.ascontiguousarray(fs.points[:, 1])
    w = np.ascontiguousarray(fs.weights)
    chunk = max(1, 2_000_000 // len(ys))
    for i in range(0, len(xs), chunk):
        gx, gy = np.meshgrid(xs[i:i + chunk], ys, indexing="ij")
        vals = sum_dists(
            np.ascontiguousarray(gx.reshape(-1)), np.ascontiguousarray(gy.reshape(-1)), fx, fy, w
        )
        best = min(best, float(vals.min()))
    return best


class TestWeiszfeldMinimize:
    def test_equilateral_triangle_center(self):
        ang = np.array([np.pi / 2, np.pi / 2 + 2 * np.pi / 3, np.pi / 2 + 4 * np.pi / 3])
        fs = WeightedFocalSet(np.stack([np.cos(ang), np.sin(ang)], axis=1))
        res = weiszfeld_minimize(fs)
        assert res.converged
        np.testing.assert_allclose(res.point, [0.0, 0.0], atol=1e-9)

    def test_collinear_triple_focal_certificate(self):
        fs = WeightedFocalSet([[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
        res = weiszfeld_minimize(fs)
        assert res.converged
        np.testing.assert_allclose(res.point, [0.0, 0.0], atol=1e-9)
        assert res.certificate.kind == "focal"
        assert res.certificate.residual == 0.0  # the two pulls cancel exactly
        assert res.non_unique  # collinear focal set

    def test_right_triangle_vs_grid_oracle(self):
        fs = WeightedFocalSet([[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]])
        res = weiszfeld_minimize(fs)
        assert res.converged and res.certificate.passed
        gmin = grid_minimum(fs, (0.0, 0.0), (4.0, 3.0), cell=1e-3)
        # grid value cannot be below the certified minimum by more than the
        # certificate slack, nor above it by more than a cell radius step
        assert res.value <= gmin + 1e-9
        assert res.value >= gmin - fs.total_weight * 1e-3

    def test_single_focus(self):
        fs = WeightedFocalSet([[2.0, -1.0]], [3.0])
        res = weiszfeld_minimize(fs)
        assert res.converged
        np.testing.assert_allclose(res.point, [2.0, -1.0])
        assert res.value == 0.0
        assert res.certificate.kind == "focal" and res.certificate.residual == 0.0

    def test_heavy_focus_absorbs(self):
        fs = WeightedFocalSet([[0.0, 0.0], [1.0, 0.0]], [3.0, 1.0])
        res = weiszfeld_minimize(fs)
        assert res.converged
        np.testing.assert_allclose(res.point, [0.0, 0.0], atol=1e-12)
        assert res.certificate.kind == "focal"

    def test_monotone_descent(self):
        rng = np.random.default_rng(100)
        for _ in range(30):
            m = int(rng.integers(2, 7))
            fs = WeightedFocalSet(rng.random((m, 2)), rng.uniform(0.5, 2.0, m))
            x = rng.random(2)
            for _ in range(40):
                if fs.min_distance(x) <= fs.tol_singular:
                    break
                x_next = weiszfeld_step(fs, x)
                f0, f1 = eval_F(fs, x), eval_F(fs, x_next)
                assert f1 <= f0 * (1 + 1e-14)
                x = x_next

    def test_translation_rotation_equivariance(self):
        rng = np.random.default_rng(101)
        for _ in range(10):
            m = int(rng.integers(3, 7))
            fs = WeightedFocalSet(rng.random((m, 2)), rng.uniform(0.5, 2.0, m))
            res = weiszfeld_minimize(fs)
            a = rng.uniform(0, 2 * np.pi)
            rot = np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])
            shift = rng.uniform(-5, 5, 2)
            fs_t = WeightedFocalSet(fs.points @ rot.T + shift, fs.weights)
            res_t = weiszfeld_minimize(fs_t)
            np.testing.assert_allclose(res_t.point, rot @ res.point + shift, atol=1e-7)

    def test_weight_scaling_leaves_argmin(self):
        rng = np.random.default_rng(102)
        m = 5
        fs = WeightedFocalSet(rng.random((m, 2)), rng.uniform(0.5, 2.0, m))
        res = weiszfeld_minimize(fs)
        lam = 7.5
        fs_s = WeightedFocalSet(fs.points, lam * fs.weights)
        res_s = weiszfeld_minimize(fs_s)
        np.testing.assert_allclose(res_s.point, res.point, atol=1e-8)
        assert res_s.value == pytest.approx(lam * res.value, rel=1e-12)

    def test_nonconvergence_flagged(self):
        fs = WeightedFocalSet([[0.0, 0.0], [1.0, 0.0], [0.3, 0.9]])
        res = weiszfeld_minimize(fs, max_iter=2)
        assert not res.converged
        assert not res.certificate.passed


class TestSmoothCertificate:
    def test_square_center(self):
        fs = WeightedFocalSet([[1, 1], [-1, 1], [-1, -1], [1, -1]])
        cert = check_smooth_optimality(fs, [0.0, 0.0])
        assert cert.kind == "smooth"
        assert cert.residual == pytest.approx(0.0, abs=1e-15)
        assert cert.passed

    def test_lone_focus_never_optimal_away(self):
        fs = WeightedFocalSet([[0.0, 0.0]])
        cert = check_smooth_optimality(fs, [1.0, 0.0])
        assert cert.residual == pytest.approx(1.0, abs=1e-15)
        assert not cert.passed

    def test_at_minimizer_output(self):
        rng = np.random.default_rng(103)
        for _ in range(10):
            m = int(rng.integers(3, 7))
            fs = WeightedFocalSet(rng.random((m, 2)), rng.uniform(0.5, 2.0, m))
            res = weiszfeld_minimize(fs)
            if res.certificate.kind == "smooth":
                cert = check_smooth_optimality(fs, res.point)
                assert cert.passed

    def test_singular_redirects_to_focal(self):
        fs = WeightedFocalSet([[0.0, 0.0], [1.0, 0.0]])
        with pytest.raises(SingularPointError):
            check_smooth_optimality(fs, [0.0, 0.0])


class TestFocalCertificate:
    def test_collinear_middle(self):
        fs = WeightedFocalSet([[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
        cert = check_focal_optimality(fs, 1)
        assert cert.residual == 0.0 and cert.passed
        assert np.hypot(*cert.n_vector) == pytest.approx(0.0, abs=1e-15)

    def test_heavy_focus(self):
        fs = WeightedFocalSet([[0.0, 0.0], [1.0, 0.0]], [3.0, 1.0])
        cert = check_focal_optimality(fs, 0)
        assert np.hypot(*cert.n_vector) == pytest.approx(1.0)
        assert cert.residual == 0.0

    def test_boundary_case_two_points(self):
        # ||N_1|| = 1 = k_1: every point of the segment is minimal
        fs = WeightedFocalSet([[0.0, 0.0], [1.0, 0.0]])
        cert = check_focal_optimality(fs, 0)
        assert cert.residual == 0.0 and cert.passed

    def test_index_error(self):
        fs = WeightedFocalSet([[0.0, 0.0]])
        with pytest.raises(IndexError):
            check_focal_optimality(fs, 1)

    def test_failing_focus(self):
        fs = WeightedFocalSet([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
        cert = check_focal_optimality(fs, 0)  # both pulls point the same way
        assert cert.residual == pytest.approx(1.0)
        assert not cert.passed


class TestCertificateSoundness:
    def test_certified_points_near_grid_minimum(self):
        rng = np.random.default_rng(104)
        for _ in range(10):
            m = int(rng.integers(2, 7))
            fs = WeightedFocalSet(rng.random((m, 2)), rng.uniform(0.5, 2.0, m))
            res = weiszfeld_minimize(fs)
            assert res.converged and res.certificate.passed
            gmin = grid_minimum(fs, (0.0, 0.0), (1.0, 1.0), cell=1e-3)
            slack = 1e-6 + fs.total_weight * 1e-3 / np.sqrt(2)
            assert abs(res.value - gmin) <= slack

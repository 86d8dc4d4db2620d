import numpy as np
import pytest
from scipy.special import ellipe

from polyconic import (
    GeneralizedConic,
    LevelBelowMinimumError,
    ParamCurve,
    WeightedFocalSet,
    approx_polyellipse,
    arclength,
    avg_distance,
    circle_curve,
    conic_convergence,
    equidistant_partition,
    eval_F,
    polyline_curve,
    riemann_envelope,
    sandwich_check,
    segment_curve,
    sine_wave_curve,
    trace_conic,
)

QUAD_TOL = 1e-10


class TestArclength:
    def test_unit_circle(self):
        assert arclength(circle_curve()) == pytest.approx(2 * np.pi, abs=1e-10)

    def test_segment(self):
        assert arclength(segment_curve([0, 0], [3, 4])) == pytest.approx(5.0, abs=1e-12)

    def test_sine_wave_elliptic_integral(self):
        # independent oracle: the complete elliptic integral of the second kind
        expected = 4 * np.sqrt(2) * ellipe(0.5)
        assert arclength(sine_wave_curve()) == pytest.approx(expected, abs=1e-9)

    def test_polyline(self):
        curve = polyline_curve([[0, 0], [1, 0], [1, 2]])
        assert arclength(curve) == pytest.approx(3.0, abs=1e-12)

    def test_fd_velocity_flagged(self):
        curve = ParamCurve(0.0, 1.0, lambda t: np.stack([t, t * t], axis=-1))
        assert curve.velocity_is_fd
        # arclength of the parabola arc y = x^2 on [0, 1]
        expected = (2 * np.sqrt(5) + np.arcsinh(2)) / 4
        assert arclength(curve) == pytest.approx(expected, abs=1e-8)


class TestAvgDistance:
    def test_circle_center(self):
        assert avg_distance(circle_curve(), [0.0, 0.0]) == pytest.approx(1.0, abs=QUAD_TOL)

    def test_circle_fixed_point(self):
        # a unit-circle point averages 4/pi over the circle
        v = avg_distance(circle_curve(), [1.0, 0.0], quad_tol=QUAD_TOL)
        assert abs(v - 4 / np.pi) <= QUAD_TOL

    def test_segment_closed_form(self):
        v = avg_distance(segment_curve([-1, 0], [1, 0]), [0.0, 1.0])
        expected = (np.sqrt(2) + np.log(1 + np.sqrt(2))) / 2
        assert v == pytest.approx(expected, abs=1e-10)

    def test_lipschitz(self):
        rng = np.random.default_rng(50)
        curve = sine_wave_curve()
        for _ in range(15):
            x, y = rng.uniform(-3, 9, 2), rng.uniform(-3, 9, 2)
            fx, fy = avg_distance(curve, x), avg_distance(curve, y)
            assert abs(fx - fy) <= np.hypot(*(x - y)) + 2 * QUAD_TOL

    def test_convex_on_collinear_triples(self):
        rng = np.random.default_rng(51)
        curve = circle_curve()
        for _ in range(15):
            x, y = rng.uniform(-3, 3, 2), rng.uniform(-3, 3, 2)
            lam = rng.uniform()
            mid = lam * x + (1 - lam) * y
            assert avg_distance(curve, mid) <= (
                lam * avg_distance(curve, x) + (1 - lam) * avg_distance(curve, y) + 1e-10
            )

    def test_radial_symmetry(self):
        curve = circle_curve()
        for r in (0.3, 1.7):
            vals = [
                avg_distance(curve, [r * np.cos(a), r * np.sin(a)])
                for a in (0.0, 1.0, 2.5, 4.0)
            ]
            assert max(vals) - min(vals) <= 2 * QUAD_TOL

    def test_batch(self):
        curve = circle_curve()
        pts = np.array([[0.0, 0.0], [2.0, 0.0], [0.0, 3.0]])
        vals = avg_distance(curve, pts)
        assert vals.shape == (3,)
        assert vals[0] == pytest.approx(1.0, abs=QUAD_TOL)


class TestPartition:
    def test_circle_arclength_midpoints(self):
        part = equidistant_partition(circle_curve(), 4, "arclength")
        ang = np.degrees(np.arctan2(part.midpoints[:, 1], part.midpoints[:, 0]))
        np.testing.assert_allclose(np.sort(ang % 360), [45, 135, 225, 315], atol=1e-7)

    def test_segment_modes_agree(self):
        curve = segment_curve([0, 0], [2, 0])
        for M in (1, 5, 8):
            pa = equidistant_partition(curve, M, "arclength")
            pp = equidistant_partition(curve, M, "parameter")
            np.testing.assert_allclose(pa.midpoints, pp.midpoints, atol=1e-10)
            np.testing.assert_allclose(pa.boundaries_t, pp.boundaries_t, atol=1e-10)

    def test_sine_parameter_midpoints(self):
        part = equidistant_partition(sine_wave_curve(), 8, "parameter")
        expected_t = 2 * np.pi * (np.arange(8) + 0.5) / 8
        np.testing.assert_allclose(part.midpoints_t, expected_t, atol=1e-15)
        np.testing.assert_allclose(part.midpoints[:, 1], np.sin(expected_t), atol=1e-15)

    def test_arclength_boundaries_equal_arcs(self):
        curve = sine_wave_curve()
        M = 6
        part = equidistant_partition(curve, M, "arclength")
        # measure each arc with adaptive quadrature; all must agree
        from scipy.integrate import quad

        speed = lambda t: float(np.hypot(1.0, np.cos(t)))
        arcs = [
            quad(speed, a, b, epsabs=1e-12)[0]
            for a, b in zip(part.boundaries_t[:-1], part.boundaries_t[1:])
        ]
        np.testing.assert_allclose(arcs, arclength(curve) / M, atol=1e-9)


class TestApproxPolyellipse:
    def test_single_midpoint(self):
        fs = approx_polyellipse(circle_curve(), 1)
        assert len(fs) == 1
        assert eval_F(fs, [3.0, 0.0]) == pytest.approx(np.hypot(*(np.array([3.0, 0.0]) - fs.points[0])))

    def test_total_weight_one(self):
        for M in (1, 7, 32):
            fs = approx_polyellipse(sine_wave_curve(), M)
            assert fs.total_weight == pytest.approx(1.0, rel=1e-12)

    def test_parameter_mode_demo_focal_set(self):
        fs = approx_polyellipse(sine_wave_curve(), 8, "parameter")
        t = 2 * np.pi * (np.arange(8) + 0.5) / 8
        np.testing.assert_allclose(fs.points, np.stack([t, np.sin(t)], axis=1), atol=1e-15)


class TestRiemannEnvelope:
    def test_circle_center_brackets_tightly(self):
        # distance is constantly 1; the certified pad is the only slack
        curve = circle_curve()
        for M in (3, 8):
            env = riemann_envelope(curve, [0.0, 0.0], M)
            L = env.total_length
            assert (env.arc_inf <= 1.0).all() and (env.arc_sup >= 1.0).all()
            assert env.lower_sum <= 2 * np.pi <= env.upper_sum
            pad = (L / M) / 16
            assert env.upper_sum - env.lower_sum == pytest.approx(2 * L * pad, rel=1e-9)

    def test_brackets_true_integral(self):
        rng = np.random.default_rng(52)
        curve = sine_wave_curve()
        L = arclength(curve)
        for _ in range(8):
            x = rng.uniform(-2, 8, 2)
            env = riemann_envelope(curve, x, int(rng.integers(2, 20)))
            target = L * avg_distance(curve, x)
            assert env.lower_sum <= target + 1e-9
            assert env.upper_sum >= target - 1e-9

    def test_width_bound(self):
        rng = np.random.default_rng(53)
        curve = sine_wave_curve()
        L = arclength(curve)
        for _ in range(10):
            x = rng.uniform(-4, 10, 2)
            M = int(rng.integers(1, 40))
            env = riemann_envelope(curve, x, M)
            assert env.upper_sum - env.lower_sum <= L * L / M + 1e-9

    def test_constructive_m_choice(self):
        # M >= 2L/eps forces the envelope width below L*eps/2
        curve = circle_curve()
        L = arclength(curve)
        eps = 0.1
        M = int(np.ceil(2 * L / eps))
        env = riemann_envelope(curve, [0.7, -0.3], M)
        assert env.upper_sum - env.lower_sum <= L * eps / 2 + 1e-9


class TestTraceConic:
    def test_circle_conic_is_the_circle(self):
        conic = GeneralizedConic(circle_curve(), 4 / np.pi)
        poly = trace_conic(conic, n_rays=64)
        radii = np.hypot(*poly.vertices.T)
        np.testing.assert_allclose(radii, 1.0, atol=1e-8)

    def test_traced_points_on_level(self):
        conic = GeneralizedConic(sine_wave_curve(), 4.0)
        poly = trace_conic(conic, n_rays=128)
        idx = np.linspace(0, 127, 16).astype(int)
        vals = avg_distance(sine_wave_curve(), poly.vertices[idx])
        assert np.abs(vals - 4.0).max() <= 1e-10

    def test_level_below_minimum(self):
        with pytest.raises(LevelBelowMinimumError):
            trace_conic(GeneralizedConic(circle_curve(), 0.1))


class TestSandwich:
    def test_circle_constructive_eps(self):
        curve = circle_curve()
        L = arclength(curve)
        eps = 0.05
        M = int(np.ceil(2 * L / eps))
        conic = GeneralizedConic(curve, 4 / np.pi)
        rep = sandwich_check(conic, M, eps, samples=128)
        assert rep.passed
        assert rep.max_abs_dev <= L / M + 2e-10

    def test_eps_below_quadrature_floor(self):
        conic = GeneralizedConic(circle_curve(), 4 / np.pi)
        rep = sandwich_check(conic, 256, eps=1e-11, samples=64)
        assert rep.eps_below_floor
        assert not rep.passed

    def test_uniform_approximation_bound(self):
        # midpoint sum against the averaged distance along the traced conic
        curve = sine_wave_curve()
        L = arclength(curve)
        conic = GeneralizedConic(curve, 4.0)
        poly = trace_conic(conic, n_rays=64)
        for M in (8, 32):
            fs = approx_polyellipse(curve, M)
            f_vals = avg_distance(curve, poly.vertices)
            dev = np.abs(eval_F(fs, poly.vertices) - f_vals)
            assert dev.max() <= L / M + 2 * QUAD_TOL


class TestConvergence:
    def test_sine_wave_trend(self):
        conic = GeneralizedConic(sine_wave_curve(), 4.0)
        rows = conic_convergence(conic, [8, 64], n_rays=256)
        assert rows[1].hausdorff < rows[0].hausdorff

    def test_degenerate_single_focus(self):
        conic = GeneralizedConic(circle_curve(), 4 / np.pi)
        rows = conic_convergence(conic, [1], n_rays=64)
        assert np.isfinite(rows[0].hausdorff)
        assert rows[0].hausdorff > 0.1  # one focus cannot mimic the circle


class TestParamCurveValidation:
    def test_domain(self):
        with pytest.raises(ValueError):
            ParamCurve(1.0, 0.0, lambda t: np.stack([t, t], axis=-1))

    def test_segment_degenerate(self):
        with pytest.raises(ValueError):
            segment_curve([1, 1], [1, 1])

    def test_weights_on_partition_match_demo(self):
        fs = WeightedFocalSet(approx_polyellipse(sine_wave_curve(), 8).points)
        assert len(fs) == 8

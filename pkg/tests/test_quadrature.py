import numpy as np
import pytest

from qdotent.basis import BasisSpec, ho_eval
from qdotent.potential import PotentialParams, breakpoints, v_eval
from qdotent.quadrature import (QuadSpec, gaussian_weight_integrate,
                                integrate_piecewise, piecewise_nodes,
                                truncation_halfwidth)


class TestIntegratePiecewise:
    def test_gaussian_normalization(self):
        f = lambda x: ho_eval(0, 1.0, x) ** 2
        assert integrate_piecewise(f, [], 12.0) == pytest.approx(1.0, abs=1e-12)

    def test_polynomial_exactness(self):
        # degree 2n-1 is exact for an n-point rule on a single panel
        spec = QuadSpec(panel_order=5, panels_per_interval=1)
        rng = np.random.default_rng(7)
        coeffs = rng.standard_normal(10)  # degree 9
        poly = np.polynomial.Polynomial(coeffs)
        exact = poly.integ()(2.0) - poly.integ()(-2.0)
        got = integrate_piecewise(poly, [], 2.0, spec)
        assert got == pytest.approx(exact, rel=1e-13)

    def test_hard_potential_self_refinement(self):
        params = PotentialParams()
        spec = QuadSpec()
        fine = QuadSpec(panels_per_interval=80)
        f = lambda x: ho_eval(0, 0.1, x) ** 2 * v_eval(params, x)
        a = integrate_piecewise(f, breakpoints(params), 40.0, spec)
        b = integrate_piecewise(f, breakpoints(params), 40.0, fine)
        assert a == pytest.approx(b, rel=1e-9)

    def test_doubling_panels_converged(self):
        # the convergence gate the hamiltonian assembly relies on
        params = PotentialParams()
        f = lambda x: ho_eval(2, 0.05, x) * v_eval(params, x) * ho_eval(4, 0.05, x)
        a = integrate_piecewise(f, breakpoints(params), 46.0, QuadSpec())
        b = integrate_piecewise(f, breakpoints(params), 46.0,
                                QuadSpec(panels_per_interval=16))
        assert abs(a - b) < 1e-8 * max(1.0, abs(b))

    def test_non_finite_integrand_reports_node(self):
        def bad(x):
            return np.where(x > 1.0, np.inf, 1.0)
        with pytest.raises(ValueError, match="non-finite integrand"):
            integrate_piecewise(bad, [], 3.0)

    def test_determinism(self):
        params = PotentialParams()
        f = lambda x: ho_eval(3, 0.2, x) ** 2 * v_eval(params, x)
        vals = {integrate_piecewise(f, breakpoints(params), 30.0)
                for _ in range(5)}
        assert len(vals) == 1


class TestGaussianWeight:
    def test_weight_normalization(self):
        got = gaussian_weight_integrate(lambda x: np.exp(-x * x), 0, 1.0)
        assert got == pytest.approx(np.sqrt(np.pi), abs=1e-14)

    def test_gaussian_moment(self):
        got = gaussian_weight_integrate(lambda x: x * x * np.exp(-2 * x * x),
                                        2, 2.0)
        assert got == pytest.approx(np.sqrt(np.pi / 2) / 4, abs=1e-14)

    def test_phi0_fourth_power(self):
        w = 0.25
        f = lambda x: ho_eval(0, w, x) ** 4
        got = gaussian_weight_integrate(f, 0, 2 * w)
        assert got == pytest.approx(np.sqrt(w / (2 * np.pi)), abs=1e-13)

    def test_invalid_rate(self):
        with pytest.raises(ValueError):
            gaussian_weight_integrate(lambda x: x, 1, 0.0)


class TestTruncationHalfwidth:
    def test_formula(self):
        spec = BasisSpec(M=2, omega=1.0)
        params = PotentialParams(V0=1.0, d=0.0, R=1.0)
        X = truncation_halfwidth(spec, params, QuadSpec())
        expected = max(1.0, np.sqrt(3.0)) + np.sqrt(2 * np.log(1e14))
        assert X == pytest.approx(expected, rel=1e-12)

    def test_monotone_in_M(self):
        params = PotentialParams()
        xs = [truncation_halfwidth(BasisSpec(M=M, omega=0.1), params,
                                   QuadSpec())
              for M in (10, 20, 40, 80)]
        assert all(a < b for a, b in zip(xs, xs[1:]))

    def test_envelope_below_tolerance(self):
        spec = BasisSpec(M=30, omega=0.1)
        params = PotentialParams()
        quad = QuadSpec()
        X = truncation_halfwidth(spec, params, quad)
        edge = np.abs([ho_eval(n, spec.omega, X) for n in range(spec.M)])
        assert edge.max() < quad.tail_tolerance


class TestSpecValidation:
    def test_invalid(self):
        with pytest.raises(ValueError):
            QuadSpec(panel_order=1)
        with pytest.raises(ValueError):
            QuadSpec(panels_per_interval=0)
        with pytest.raises(ValueError):
            QuadSpec(tail_tolerance=0.0)

    def test_breaks_clipped_to_domain(self):
        xs, ws = piecewise_nodes([-100.0, 0.0, 100.0], 5.0, QuadSpec())
        assert xs.min() > -5.0 and xs.max() < 5.0

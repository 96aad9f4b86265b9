import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdotent.basis import (BasisSpec, CoverageError, check_coverage,
                           default_omega, ho_eval, ho_eval_batch,
                           kinetic_matrix)
from qdotent.potential import PotentialParams, breakpoints
from qdotent.quadrature import QuadSpec, piecewise_nodes, truncation_halfwidth


def mp_ho_eval(n, omega, x, dps=50):
    """Extended-precision reference via the same normalized recurrence."""
    with mp.workdps(dps):
        w, xx = mp.mpf(omega), mp.mpf(x)
        f0 = (w / mp.pi) ** mp.mpf("0.25") * mp.e ** (-w * xx * xx / 2)
        if n == 0:
            return float(f0)
        f1 = mp.sqrt(2 * w) * xx * f0
        for k in range(1, n):
            f0, f1 = f1, mp.sqrt(2 * w / (k + 1)) * xx * f1 - mp.sqrt(mp.mpf(k) / (k + 1)) * f0
        return float(f1)


class TestHoEval:
    def test_ground_state_at_origin(self):
        assert ho_eval(0, 1.0, 0.0) == pytest.approx(np.pi ** -0.25, rel=1e-14)

    @pytest.mark.parametrize("omega", [0.05, 1.0, 7.3])
    def test_odd_parity_at_origin(self, omega):
        assert ho_eval(1, omega, 0.0) == 0.0

    def test_against_frozen_extended_precision_value(self):
        # mpmath recurrence at 50 digits, frozen
        assert ho_eval(7, 0.3, 1.234) == pytest.approx(
            -0.15387088178841408884, rel=1e-12)

    def test_no_overflow_high_order_far_field(self):
        spec = BasisSpec(M=201, omega=0.05)
        x = 2.0 * spec.turning_point
        vals = ho_eval_batch(spec, [x])
        assert np.all(np.isfinite(vals))

    @settings(max_examples=60, deadline=None)
    @given(n=st.integers(0, 120),
           omega=st.floats(0.01, 10.0),
           t=st.floats(-1.0, 1.0))
    def test_recurrence_stability(self, n, omega, t):
        x = t * 2.0 * math.sqrt((2 * n + 1) / omega)
        got = ho_eval(n, omega, x)
        ref = mp_ho_eval(n, omega, x)
        if abs(ref) < 1e-3:
            assert got == pytest.approx(ref, abs=1e-12)
        else:
            assert got == pytest.approx(ref, rel=1e-9)


class TestBatch:
    def test_two_orbitals_at_origin(self):
        table = ho_eval_batch(BasisSpec(M=2, omega=1.0), [0.0])
        assert table[0, 0] == pytest.approx(np.pi ** -0.25, rel=1e-14)
        assert table[0, 1] == 0.0

    def test_matches_pointwise_exactly(self):
        spec = BasisSpec(M=12, omega=0.4)
        xs = np.linspace(-5, 5, 17)
        table = ho_eval_batch(spec, xs)
        for n in range(spec.M):
            assert np.array_equal(table[:, n], ho_eval(n, spec.omega, xs))

    @pytest.mark.parametrize("M,omega", [(20, 0.1), (30, 0.1)])
    def test_quadrature_orthonormality(self, M, omega):
        spec = BasisSpec(M=M, omega=omega)
        params = PotentialParams()
        quad = QuadSpec()
        X = truncation_halfwidth(spec, params, quad)
        xs, ws = piecewise_nodes(breakpoints(params), X, quad)
        phi = ho_eval_batch(spec, xs)
        gram = phi.T @ (phi * ws[:, None])
        assert np.abs(gram - np.eye(M)).max() < 1e-10


class TestKineticMatrix:
    def test_single_orbital(self):
        # <0| p^2/2 |0> = omega/4; cross-checked below by quadrature
        T = kinetic_matrix(BasisSpec(M=2, omega=2.0))
        assert T[0, 0] == pytest.approx(0.5, rel=1e-14)

    def test_parity_selection_rule(self):
        T = kinetic_matrix(BasisSpec(M=10, omega=0.7))
        assert T[0, 1] == 0.0

    def test_second_superdiagonal(self):
        T = kinetic_matrix(BasisSpec(M=4, omega=1.0))
        assert T[0, 2] == pytest.approx(-np.sqrt(2.0) / 4.0, rel=1e-14)

    def test_symmetric_pentadiagonal(self):
        T = kinetic_matrix(BasisSpec(M=15, omega=0.3))
        assert np.array_equal(T, T.T)
        n, m = np.nonzero(T)
        assert set(np.abs(n - m)) <= {0, 2}

    def test_against_finite_difference_quadrature(self):
        # independent oracle: T[m,n] = int phi_m * (-1/2 phi_n'') dx with a
        # 5-point second derivative on a fine uniform grid
        spec = BasisSpec(M=6, omega=0.3)
        T = kinetic_matrix(spec)
        h = 0.01
        xs = np.arange(-20.0, 20.0, h)
        tab = {k: ho_eval_batch(spec, xs + k * h) for k in (-2, -1, 0, 1, 2)}
        d2 = (-tab[2] + 16 * tab[1] - 30 * tab[0] + 16 * tab[-1]
              - tab[-2]) / (12 * h**2)
        T_num = -0.5 * (tab[0].T @ d2) * h
        assert np.abs(T - T_num).max() < 1e-8


class TestCoverage:
    def test_default_omega_saturates_coverage(self):
        om = default_omega(50, 8.0, 30.0)
        spec = BasisSpec(M=50, omega=om)
        check_coverage(spec, 8.0, 30.0)  # exactly at the limit

    def test_violation_raises(self):
        with pytest.raises(CoverageError, match="turning point"):
            check_coverage(BasisSpec(M=10, omega=1.0), 8.0, 30.0)

    def test_invalid_spec(self):
        with pytest.raises(ValueError):
            BasisSpec(M=1, omega=1.0)
        with pytest.raises(ValueError):
            BasisSpec(M=5, omega=0.0)

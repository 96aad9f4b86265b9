import dataclasses

import numpy as np
import pytest

from qdotent.oracle import GridSpec, OracleResult, grid_solve
from qdotent.potential import PotentialParams


def params(**kw):
    base = dict(V0=10.0, d=8.0, R=10.0, p=200.0, lam=1.0)
    base.update(kw)
    return PotentialParams(**base)


class TestGridSpec:
    def test_invalid(self):
        with pytest.raises(ValueError):
            GridSpec(N=32, X=10.0)
        with pytest.raises(ValueError):
            GridSpec(N=100, X=0.0)

    def test_domain_check(self):
        with pytest.raises(ValueError, match="half-width"):
            grid_solve(params(), GridSpec(N=100, X=5.0))

    def test_memory_guard(self):
        with pytest.raises(MemoryError, match="smaller N"):
            grid_solve(params(d=0.0, R=1.0), GridSpec(N=4096, X=10.0))


class TestGridSolve:
    def test_deep_box_energy(self):
        # lam = 0, single deep hard well: close to twice the particle-in-a-box
        # ground energy on top of the well floor (-2 V0 at d = 0, where the
        # two identical terms coincide)
        p = params(V0=50.0, d=0.0, R=2.0, lam=0.0)
        res = grid_solve(p, GridSpec(N=400, X=6.0))
        box = np.pi ** 2 / (2.0 * (2 * p.R) ** 2)
        expected = 2 * (box - 2 * p.V0)
        assert res.energy == pytest.approx(expected, rel=0.02)

    def test_noninteracting_product_state(self):
        p = params(R=10.0, lam=0.0)
        res = grid_solve(p, GridSpec(N=300, X=20.0))
        assert res.linear_entropy < 1e-6

    def test_richardson_convergence_order(self):
        # halving dx shrinks the E0 change by ~4x for the 3-point scheme
        # (soft potential so the error is cleanly quadratic)
        p = params(V0=10.0, d=0.0, R=3.0, p=4.0, lam=0.0)
        es = [grid_solve(p, GridSpec(N=N, X=8.0)).energy
              for N in (129, 257, 513)]
        r = (es[0] - es[1]) / (es[1] - es[2])
        assert r == pytest.approx(4.0, rel=0.25)

    def test_wavefunction_symmetric_and_normalized(self):
        p = params(R=5.0)
        res = grid_solve(p, GridSpec(N=200, X=15.0))
        assert res.occupations.sum() == pytest.approx(1.0, abs=1e-10)
        dx = res.meta["dx"]
        assert np.dot(res.density, np.full_like(res.density, dx)) == \
            pytest.approx(1.0, abs=1e-8)

    def test_interacting_double_well_bell(self):
        p = params(R=5.0)
        res = grid_solve(p, GridSpec(N=300, X=15.0))
        assert 0.45 <= res.linear_entropy <= 0.5
        assert res.coulomb < 1e-6

    def test_metadata(self):
        res = grid_solve(params(R=5.0, lam=0.0), GridSpec(N=128, X=15.0))
        assert res.meta["kinetic_scheme"] == "3-point"
        assert res.meta["N"] == 128

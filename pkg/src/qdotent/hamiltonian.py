"""Two-electron Hamiltonian in the symmetric (spatial-singlet) pair basis.

The singlet spin state forces a symmetric spatial wavefunction, so the
ground-state search lives entirely in the D = M(M+1)/2 dimensional space of
normalized symmetrized orbital pairs

    Phi_ab = (phi_a x phi_b + phi_b x phi_a) / sqrt(2 (1 + delta_ab)),  a <= b.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .basis import (BasisSpec, DEFAULT_COVERAGE_FACTOR, check_coverage,
                    ho_eval_batch, ho_eval_batch_scaled, kinetic_matrix)
from .potential import PotentialParams, breakpoints, v_eval
from .quadrature import QuadSpec, _hermgauss, piecewise_nodes, truncation_halfwidth

DEFAULT_CONVERGENCE_TOL = 1e-5  # effective Hartree, basis-refinement gate


class EigensolverError(RuntimeError):
    pass


class PairIndex:
    """Bijection between ordered orbital pairs (a <= b) and 0..D-1."""

    def __init__(self, M: int):
        self.M = M
        pairs = [(a, b) for a in range(M) for b in range(a, M)]
        self.pa = np.array([p[0] for p in pairs])
        self.pb = np.array([p[1] for p in pairs])
        self._lookup = {p: i for i, p in enumerate(pairs)}
        # 1/sqrt(1 + delta_ab) normalization per pair
        self.norm = 1.0 / np.sqrt(1.0 + (self.pa == self.pb))

    @property
    def D(self) -> int:
        return len(self.pa)

    def index(self, a: int, b: int) -> int:
        return self._lookup[(a, b) if a <= b else (b, a)]

    def pair(self, i: int):
        return int(self.pa[i]), int(self.pb[i])


@dataclass(frozen=True)
class GroundState:
    """Lowest eigenpair plus the configuration that produced it."""

    energy: float
    pair_coeffs: np.ndarray        # unit-norm coefficients over PairIndex
    basis: BasisSpec
    params: PotentialParams
    quad: QuadSpec
    converged: Optional[bool] = None    # basis-refinement gate; None if unchecked
    energy_coarse: Optional[float] = None  # E_0 in the M-10 sub-basis


def potential_matrix(spec: BasisSpec, params: PotentialParams,
                     quad: QuadSpec = QuadSpec()):
    """<m|V|n> by breakpoint-split composite quadrature; exactly symmetric."""
    X = truncation_halfwidth(spec, params, quad)
    xs, ws = piecewise_nodes(breakpoints(params), X, quad)
    phi = ho_eval_batch(spec, xs)
    v = v_eval(params, xs)
    if not np.all(np.isfinite(phi)) or not np.all(np.isfinite(v)):
        raise ValueError("non-finite value in potential matrix integrand")
    V = phi.T @ (phi * (ws * v)[:, None])
    return 0.5 * (V + V.T)


def one_body_matrix(spec: BasisSpec, params: PotentialParams,
                    quad: QuadSpec = QuadSpec()):
    """h = T + V in the oscillator basis."""
    return kinetic_matrix(spec) + potential_matrix(spec, params, quad)


def interaction_tensor(spec: BasisSpec):
    """Contact-interaction integrals I[a,b,c,d] = int phi_a phi_b phi_c phi_d dx.

    Products of four orbitals are polynomial * exp(-2 w x^2), so a Hermite
    rule with 2M-1 nodes is exact to rounding.  The Gaussian factors are
    folded into the weights (a quarter of the weight per orbital factor) to
    keep every intermediate in double range.
    """
    M, w = spec.M, spec.omega
    order = 2 * M - 1
    s, hw = _hermgauss(order)
    xs = s / np.sqrt(2.0 * w)
    bare = ho_eval_batch_scaled(spec, xs)        # phi_n(x) * exp(w x^2 / 2)
    scaled = bare * hw[:, None] ** 0.25
    P = np.einsum('ka,kb->kab', scaled, scaled).reshape(order, M * M)
    I = (P.T @ P) / np.sqrt(2.0 * w)
    return I.reshape(M, M, M, M)


def pair_one_body_block(A, idx: PairIndex):
    """<Phi_ab| A x 1 + 1 x A |Phi_cd> for a symmetric one-body matrix A."""
    pa, pb, norm = idx.pa, idx.pb, idx.norm
    da = pa[:, None] == pa[None, :]
    db = pb[:, None] == pb[None, :]
    dab = pa[:, None] == pb[None, :]
    dba = pb[:, None] == pa[None, :]
    H = (A[np.ix_(pa, pa)] * db + A[np.ix_(pb, pb)] * da
         + A[np.ix_(pa, pb)] * dba + A[np.ix_(pb, pa)] * dab)
    H *= norm[:, None] * norm[None, :]
    return _mirror(H)


def pair_interaction_block(I, idx: PairIndex):
    """<Phi_ab| delta(x1 - x2) |Phi_cd> at unit strength."""
    pa, pb, norm = idx.pa, idx.pb, idx.norm
    H = 2.0 * I[pa[:, None], pb[:, None], pa[None, :], pb[None, :]]
    H *= norm[:, None] * norm[None, :]
    return _mirror(H)


def _mirror(H):
    """Copy the upper triangle onto the lower one: bitwise-exact symmetry."""
    return np.triu(H) + np.triu(H, 1).T


def assemble_two_body(h, I, params: PotentialParams, idx: PairIndex):
    """Full pair-basis Hamiltonian from the one-body matrix and the
    interaction tensor."""
    M = idx.M
    if h.shape != (M, M) or I.shape != (M, M, M, M):
        raise ValueError(f"dimension mismatch: h {h.shape}, I {I.shape}, M = {M}")
    return _mirror(pair_one_body_block(h, idx)
                   + params.lam * pair_interaction_block(I, idx))


def ground_state(H, idx: PairIndex, basis=None, params=None,
                 quad=None) -> GroundState:
    """Algebraically smallest eigenpair of the symmetric matrix H.

    Sign convention: the largest-magnitude coefficient is positive.
    """
    if not np.all(np.isfinite(H)):
        raise EigensolverError("Hamiltonian contains non-finite entries")
    try:
        w, v = scipy.linalg.eigh(H, subset_by_index=[0, 0])
    except Exception as exc:  # pragma: no cover - LAPACK failures are rare
        raise EigensolverError(
            f"eigensolver failed on {H.shape[0]}x{H.shape[1]} matrix "
            f"(fro norm {np.linalg.norm(H):.3e}): {exc}") from exc
    c = v[:, 0]
    if c[np.argmax(np.abs(c))] < 0:
        c = -c
    c = c / np.linalg.norm(c)
    return GroundState(energy=float(w[0]), pair_coeffs=c,
                       basis=basis, params=params, quad=quad)


class TwoElectronSolver:
    """Caches the basis-dependent pieces (kinetic matrix, interaction tensor,
    pair index) so a parameter sweep pays the quadrature and eigensolve cost
    only, once per point."""

    def __init__(self, spec: BasisSpec, quad: QuadSpec = QuadSpec(),
                 coverage_factor: float = DEFAULT_COVERAGE_FACTOR,
                 convergence_tol: float = DEFAULT_CONVERGENCE_TOL):
        self.spec = spec
        self.quad = quad
        self.coverage_factor = coverage_factor
        self.convergence_tol = convergence_tol
        self.idx = PairIndex(spec.M)
        self.T = kinetic_matrix(spec)
        self.I = interaction_tensor(spec)
        self.T_block = pair_one_body_block(self.T, self.idx)
        self.U_block = pair_interaction_block(self.I, self.idx)
        self._vmat_cache = {}

    def potential_matrix(self, params: PotentialParams):
        key = (params.V0, params.d, params.R, params.p)
        V = self._vmat_cache.get(key)
        if V is None:
            V = potential_matrix(self.spec, params, self.quad)
            self._vmat_cache.clear()  # keep at most one geometry resident
            self._vmat_cache[key] = V
        return V

    def hamiltonian(self, params: PotentialParams):
        h = self.T + self.potential_matrix(params)
        return _mirror(pair_one_body_block(h, self.idx)
                       + params.lam * self.U_block)

    def solve(self, params: PotentialParams,
              check_convergence: bool = True) -> GroundState:
        check_coverage(self.spec, params.d, params.R, self.coverage_factor)
        H = self.hamiltonian(params)
        gs = ground_state(H, self.idx, basis=self.spec, params=params,
                          quad=self.quad)
        converged, e_coarse = None, None
        if check_convergence and self.spec.M > 12:
            Mc = self.spec.M - 10
            mask = (self.idx.pa < Mc) & (self.idx.pb < Mc)
            sub = np.flatnonzero(mask)
            wc = scipy.linalg.eigh(H[np.ix_(sub, sub)],
                                   subset_by_index=[0, 0], eigvals_only=True)
            e_coarse = float(wc[0])
            converged = abs(gs.energy - e_coarse) < self.convergence_tol
        return GroundState(energy=gs.energy, pair_coeffs=gs.pair_coeffs,
                           basis=self.spec, params=params, quad=self.quad,
                           converged=converged, energy_coarse=e_coarse)

    # Expectation values against the cached blocks (used by observables).
    def kinetic_expectation(self, gs: GroundState) -> float:
        c = gs.pair_coeffs
        return float(c @ self.T_block @ c)

    def potential_expectation(self, gs: GroundState) -> float:
        c = gs.pair_coeffs
        Vb = pair_one_body_block(self.potential_matrix(gs.params), self.idx)
        return float(c @ Vb @ c)

    def coulomb_expectation(self, gs: GroundState) -> float:
        c = gs.pair_coeffs
        return float(gs.params.lam * (c @ self.U_block @ c))

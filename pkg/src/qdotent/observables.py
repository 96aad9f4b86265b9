"""Observables of the two-electron ground state.

The reduced density matrix is handled spectrally: with the wavefunction
expanded as Psi(x1, x2) = sum_nm C_nm phi_n(x1) phi_m(x2), the one-particle
reduced density matrix is C C^T in the orbital basis and every entropy below
is a function of its eigenvalues (the occupation spectrum).
"""

from dataclasses import dataclass
import math

import numpy as np

from .basis import ho_eval_batch
from .hamiltonian import GroundState, PairIndex, TwoElectronSolver
from .potential import breakpoints, v_min
from .quadrature import QuadSpec, piecewise_nodes, truncation_halfwidth

DENOM_FLOOR = 1e-9  # below this the shifted ratio is precision-limited

SQRT2 = math.sqrt(2.0)


def coeff_matrix(gs: GroundState, idx: PairIndex):
    """Symmetric M x M coefficient matrix C from the pair-basis vector,
    inverting the Phi_ab normalization; Frobenius norm 1."""
    M = idx.M
    C = np.zeros((M, M))
    c = gs.pair_coeffs
    pa, pb = idx.pa, idx.pb
    off = pa != pb
    C[pa[off], pb[off]] = c[off] / SQRT2
    C[pb[off], pa[off]] = c[off] / SQRT2
    diag = ~off
    C[pa[diag], pa[diag]] = c[diag]
    return C


def occupation_spectrum(C):
    """Eigenvalues of C C^T (squared singular values of C), clamped at 0,
    descending.  They sum to 1."""
    try:
        s = np.linalg.svd(C, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"SVD of coefficient matrix failed: {exc}") from exc
    lam = np.maximum(s * s, 0.0)
    return np.sort(lam)[::-1]


def linear_entropy(lambdas) -> float:
    """L = 1 - Tr rho_red^2 = 1 - sum lambda_i^2."""
    lam = np.asarray(lambdas, dtype=float)
    return float(1.0 - np.dot(lam, lam))


def von_neumann(lambdas) -> float:
    """S = -sum lambda_i ln lambda_i (natural log; 0 ln 0 = 0)."""
    lam = np.asarray(lambdas, dtype=float)
    nz = lam > 0.0
    return float(-np.dot(lam[nz], np.log(lam[nz])))


def _nu(normalization: str) -> float:
    if normalization == "one":
        return 1.0
    if normalization == "two":
        return 2.0
    raise ValueError(f"normalization must be 'one' or 'two', got {normalization!r}")


@dataclass(frozen=True)
class ObservableRecord:
    """Everything the sweep reports for one solved parameter point."""

    E0: float
    L: float
    S: float
    S_n: float
    U_exp: float
    V_exp: float
    T_exp: float
    ratio: float          # NaN when precision-limited
    ratio_flag: str       # 'ok' | 'precision-limited'
    converged: bool | None
    top_occupations: tuple


def density_samples(gs: GroundState, idx: PairIndex, xs,
                    normalization: str = "one"):
    """n(x) sampled at xs; non-negative (clamped)."""
    nu = _nu(normalization)
    C = coeff_matrix(gs, idx)
    rho = C @ C.T
    phi = ho_eval_batch(gs.basis, np.atleast_1d(np.asarray(xs, dtype=float)))
    n = nu * np.einsum('ka,ab,kb->k', phi, rho, phi)
    return np.maximum(n, 0.0)


def info_entropy(gs: GroundState, idx: PairIndex,
                 normalization: str = "one") -> float:
    """Position-space information entropy S_n = -int n(x) ln n(x) dx."""
    quad = gs.quad if gs.quad is not None else QuadSpec()
    X = truncation_halfwidth(gs.basis, gs.params, quad)
    xs, ws = piecewise_nodes(breakpoints(gs.params), X, quad)
    n = density_samples(gs, idx, xs, normalization)
    f = np.where(n < 1e-300, 0.0, -n * np.log(np.maximum(n, 1e-300)))
    total = 0.0
    for v in ws * f:
        total += v
    return float(total)


def shifted_ratio(U_exp: float, V_exp: float, params,
                  shift_mode: str = "global_min",
                  denom_floor: float = DENOM_FLOOR):
    """<U> / (<V> - 2 V_shift) with the confinement shifted so its minimum
    sits at zero.

    shift_mode 'global_min' uses the true minimum of V (which is -2 V0 in the
    core-shell regime); 'paper_V0' uses -V0 literally.  Returns (ratio, flag);
    a denominator below denom_floor yields (nan, 'precision-limited').
    """
    if shift_mode == "global_min":
        shift = v_min(params)[1]
    elif shift_mode == "paper_V0":
        shift = -params.V0
    else:
        raise ValueError(f"unknown shift_mode {shift_mode!r}")
    denom = V_exp - 2.0 * shift
    if abs(denom) < denom_floor:
        return float("nan"), "precision-limited"
    return U_exp / denom, "ok"


def observable_record(solver: TwoElectronSolver, gs: GroundState,
                      shift_mode: str = "global_min",
                      normalization: str = "one",
                      n_top: int = 4) -> ObservableRecord:
    """Full per-point record: energies, entropies, expectations, ratio."""
    idx = solver.idx
    C = coeff_matrix(gs, idx)
    lam = occupation_spectrum(C)
    U = solver.coulomb_expectation(gs)
    V = solver.potential_expectation(gs)
    T = solver.kinetic_expectation(gs)
    ratio, flag = shifted_ratio(U, V, gs.params, shift_mode)
    return ObservableRecord(
        E0=gs.energy,
        L=linear_entropy(lam),
        S=von_neumann(lam),
        S_n=info_entropy(gs, idx, normalization),
        U_exp=U, V_exp=V, T_exp=T,
        ratio=ratio, ratio_flag=flag,
        converged=gs.converged,
        top_occupations=tuple(float(x) for x in lam[:n_top]),
    )

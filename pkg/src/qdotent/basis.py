"""Harmonic oscillator eigenfunctions and the analytic kinetic-energy matrix.

All evaluations use the normalized three-term recurrence

    phi_{n+1}(x) = sqrt(2 w / (n+1)) x phi_n(x) - sqrt(n / (n+1)) phi_{n-1}(x)

seeded by phi_0(x) = (w/pi)^{1/4} exp(-w x^2 / 2).  Folding the normalization
into each step keeps every intermediate in double range for n of a few
hundred, where raw Hermite polynomials and factorials would overflow.
"""

from dataclasses import dataclass

import numpy as np

DEFAULT_COVERAGE_FACTOR = 1.2


class CoverageError(ValueError):
    """Basis turning point does not cover the potential region."""


@dataclass(frozen=True)
class BasisSpec:
    """Single-particle basis: M oscillator orbitals of frequency omega."""

    M: int
    omega: float

    def __post_init__(self):
        if self.M < 2:
            raise ValueError(f"M must be >= 2, got {self.M}")
        if self.omega <= 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")

    @property
    def turning_point(self) -> float:
        """Classical turning point of the highest orbital, sqrt((2M-1)/omega)."""
        return np.sqrt((2 * self.M - 1) / self.omega)


def default_omega(M: int, d: float, R_max: float,
                  coverage_factor: float = DEFAULT_COVERAGE_FACTOR) -> float:
    """Frequency such that the highest orbital's turning point equals
    coverage_factor * (d + R_max)."""
    return (2 * M - 1) / (coverage_factor * (d + R_max)) ** 2


def check_coverage(spec: BasisSpec, d: float, R: float,
                   coverage_factor: float = DEFAULT_COVERAGE_FACTOR) -> None:
    """Raise CoverageError unless x_t >= coverage_factor * (d + R)."""
    x_t = spec.turning_point
    need = coverage_factor * (d + R)
    if x_t < need * (1.0 - 1e-12):
        raise CoverageError(
            f"turning point x_t = sqrt((2M-1)/omega) = {x_t:.6g} < "
            f"{coverage_factor} * (d + R) = {need:.6g}; "
            f"increase M or decrease omega")


def _recurrence_table(M, omega, xs, gaussian=True):
    """(len(xs), M) table of the recurrence; with gaussian=False the seed is
    the bare (omega/pi)^{1/4}, giving phi_n(x) * exp(omega x^2 / 2)."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    out = np.empty((xs.size, M))
    seed = (omega / np.pi) ** 0.25
    if gaussian:
        out[:, 0] = seed * np.exp(-0.5 * omega * xs**2)
    else:
        out[:, 0] = seed
    if M > 1:
        out[:, 1] = np.sqrt(2.0 * omega) * xs * out[:, 0]
    for n in range(1, M - 1):
        out[:, n + 1] = (np.sqrt(2.0 * omega / (n + 1)) * xs * out[:, n]
                         - np.sqrt(n / (n + 1.0)) * out[:, n - 1])
    return out


def ho_eval(n: int, omega: float, x):
    """phi_n(x) for scalar or array x."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if omega <= 0:
        raise ValueError("omega must be > 0")
    table = _recurrence_table(n + 1, omega, x)
    vals = table[:, n]
    return vals if np.ndim(x) else float(vals[0])


def ho_eval_batch(spec: BasisSpec, xs):
    """(len(xs), M) table; column n is phi_n evaluated at xs, one recurrence
    pass per point."""
    return _recurrence_table(spec.M, spec.omega, xs)


def ho_eval_batch_scaled(spec: BasisSpec, xs):
    """Like ho_eval_batch but without the Gaussian factor: column n is
    phi_n(x) * exp(omega x^2 / 2).  Used for Gaussian-weight quadrature where
    the weight is accounted for separately."""
    return _recurrence_table(spec.M, spec.omega, xs, gaussian=False)


def kinetic_matrix(spec: BasisSpec):
    """Matrix of -(1/2) d^2/dx^2 in the oscillator basis.

    T[n, n] = (w/2)(n + 1/2); T[n, n+2] = -(w/4) sqrt((n+1)(n+2)).
    """
    M, w = spec.M, spec.omega
    n = np.arange(M)
    T = np.zeros((M, M))
    T[n, n] = 0.5 * w * (n + 0.5)
    m = np.arange(M - 2)
    off = -0.25 * w * np.sqrt((m + 1.0) * (m + 2.0))
    T[m, m + 2] = off
    T[m + 2, m] = off
    return T

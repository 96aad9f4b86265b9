"""Two-center power-exponential confinement potential.

V(x) = -V0 * { exp[-(|x+d|/R)^p] + exp[-(|x-d|/R)^p] }

Two wells of depth V0 centered at +-d with range R; the exponent p sets the
hardness (p -> infinity gives square wells).  For R > d the wells overlap and
form a core-shell profile with an inner region of depth -2*V0; for R < d the
structure is a double well separated by a barrier.
"""

from dataclasses import dataclass

import numpy as np

# Inner exponent beyond which ratio**p overflows a double; the corresponding
# potential term is then indistinguishable from 0.
LN_OVERFLOW_THRESHOLD = 700.0


@dataclass(frozen=True)
class PotentialParams:
    """Geometry of the confinement plus the contact-interaction strength."""

    V0: float = 10.0     # well depth, effective Hartree
    d: float = 8.0       # half the well-center distance, effective Bohr
    R: float = 10.0      # potential range, effective Bohr
    p: float = 200.0     # hardness exponent
    lam: float = 1.0     # contact interaction strength

    def __post_init__(self):
        if self.V0 < 0:
            raise ValueError(f"V0 must be >= 0, got {self.V0}")
        if self.d < 0:
            raise ValueError(f"d must be >= 0, got {self.d}")
        if self.R <= 0:
            raise ValueError(f"R must be > 0, got {self.R}")
        if self.p < 2:
            raise ValueError(f"p must be >= 2, got {self.p}")
        if self.lam < 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")


def _well_term(x, center, R, p):
    """exp[-(|x - center|/R)^p], evaluated in the log domain so that neither
    ratio**p nor the outer exponential can overflow for any finite x."""
    x = np.asarray(x, dtype=float)
    ratio = np.abs(x - center) / R
    out = np.empty_like(ratio)
    zero = ratio == 0.0
    out[zero] = 1.0
    nz = ~zero
    inner = p * np.log(ratio[nz])
    # inner > threshold: ratio**p overflows, term is exactly 0 in doubles.
    term = np.where(inner > LN_OVERFLOW_THRESHOLD, 0.0, np.exp(-np.exp(np.minimum(inner, LN_OVERFLOW_THRESHOLD))))
    out[nz] = term
    return out


def v_eval(params: PotentialParams, x):
    """Potential energy V(x); accepts scalars or arrays, never returns NaN/inf."""
    x = np.asarray(x, dtype=float)
    v = -params.V0 * (_well_term(x, -params.d, params.R, params.p)
                      + _well_term(x, params.d, params.R, params.p))
    return v if v.ndim else float(v)


def breakpoints(params: PotentialParams):
    """Sorted, deduplicated loci where |x +- d| = R.

    At these points each exponential term passes through exp(-1); for large p
    the terms jump between ~1 and ~0 there, so quadrature must split on them.
    """
    d, R = params.d, params.R
    pts = sorted({-d - R, -d + R, d - R, d + R})
    return pts


def _golden_section(f, a, b, tol):
    """Minimize f on [a, b] by golden-section search to |b - a| < tol."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    e = a + invphi * (b - a)
    fc, fe = f(c), f(e)
    while (b - a) > tol:
        if fc < fe:
            b, e, fe = e, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + invphi * (b - a)
            fe = f(e)
    x = 0.5 * (a + b)
    return x, f(x)


def v_min(params: PotentialParams, samples_per_interval: int = 256):
    """Global minimum of V over the real line.

    Dense sampling of each breakpoint-delimited sub-interval of the padded
    domain, then golden-section refinement around the best sample.  Returns
    (x_at_min, v) with the non-negative representative of x (V is even).
    """
    d, R = params.d, params.R
    lo = -d - R - R / 10.0
    hi = d + R + R / 10.0
    edges = [lo] + [b for b in breakpoints(params) if lo < b < hi] + [hi]

    f = lambda x: v_eval(params, x)
    best_x, best_v, best_iv = None, np.inf, None
    for k in range(len(edges) - 1):
        xs = np.linspace(edges[k], edges[k + 1], samples_per_interval)
        vs = v_eval(params, xs)
        i = int(np.argmin(vs))
        if vs[i] < best_v:
            best_v = float(vs[i])
            best_x = float(xs[i])
            step = xs[1] - xs[0]
            best_iv = (max(edges[k], best_x - step), min(edges[k + 1], best_x + step))

    tol = 1e-10 * max(1.0, R)
    x, v = _golden_section(f, best_iv[0], best_iv[1], tol)
    if v > best_v:  # sampling already found a better point
        x, v = best_x, best_v
    return float(abs(x)), float(v)

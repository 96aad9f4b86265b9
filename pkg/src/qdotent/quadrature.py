"""Deterministic quadrature for basis-function integrals.

Two rules cover everything the solver needs:

* composite Gauss-Legendre over [-X, X], split at potential breakpoints and
  graded toward interval ends, for matrix elements of the near-square-well
  potential and for entropy integrals;
* Gaussian-weight (Hermite) quadrature, exact to rounding for the
  polynomial-times-Gaussian integrands of the contact-interaction tensor.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import roots_hermite

from .basis import BasisSpec
from .potential import PotentialParams


@dataclass(frozen=True)
class QuadSpec:
    panel_order: int = 32          # Gauss-Legendre points per panel
    panels_per_interval: int = 8   # panels per breakpoint-delimited interval
    tail_tolerance: float = 1e-14  # envelope cutoff for domain truncation
    edge_grading: float = 3.0      # geometric panel grading toward interval ends

    def __post_init__(self):
        if self.panel_order < 2:
            raise ValueError("panel_order must be >= 2")
        if self.panels_per_interval < 1:
            raise ValueError("panels_per_interval must be >= 1")
        if not (0.0 < self.tail_tolerance < 1.0):
            raise ValueError("tail_tolerance must lie in (0, 1)")
        if self.edge_grading < 1.0:
            raise ValueError("edge_grading must be >= 1")


_leg_cache: dict = {}
_herm_cache: dict = {}


def _leggauss(order):
    tab = _leg_cache.get(order)
    if tab is None:
        tab = np.polynomial.legendre.leggauss(order)
        _leg_cache[order] = tab
    return tab


def _hermgauss(order):
    tab = _herm_cache.get(order)
    if tab is None:
        tab = roots_hermite(order)
        _herm_cache[order] = tab
    return tab


def _panel_edges(lo, hi, n_panels, grading):
    """Subdivide [lo, hi] into n_panels with widths graded geometrically so
    the smallest panels sit at both ends, where the sharp features of a hard
    potential live (its transition layers hug the breakpoints)."""
    i = np.arange(n_panels)
    w = grading ** np.minimum(i, n_panels - 1 - i).astype(float)
    edges = np.concatenate(([0.0], np.cumsum(w)))
    return lo + (hi - lo) * edges / edges[-1]


def piecewise_nodes(breaks, halfwidth, spec: QuadSpec):
    """Nodes and weights of the composite rule over [-X, X] split at breaks.

    Node order is fixed (left to right), so any sum over them is
    deterministic.
    """
    X = float(halfwidth)
    if X <= 0:
        raise ValueError("halfwidth must be > 0")
    cuts = sorted({-X, X, *(float(b) for b in breaks if -X < float(b) < X)})
    gx, gw = _leggauss(spec.panel_order)
    xs, ws = [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        edges = _panel_edges(a, b, spec.panels_per_interval, spec.edge_grading)
        for p0, p1 in zip(edges[:-1], edges[1:]):
            h = 0.5 * (p1 - p0)
            xs.append(0.5 * (p0 + p1) + h * gx)
            ws.append(h * gw)
    return np.concatenate(xs), np.concatenate(ws)


def integrate_piecewise(f, breaks, halfwidth, spec: QuadSpec = QuadSpec()) -> float:
    """Composite Gauss-Legendre integral of f over [-X, X] split at breaks.

    f must accept an array of positions.  A non-finite integrand value is an
    error; the offending node is reported.
    """
    xs, ws = piecewise_nodes(breaks, halfwidth, spec)
    fx = np.asarray(f(xs), dtype=float)
    if not np.all(np.isfinite(fx)):
        bad = xs[~np.isfinite(fx)][0]
        raise ValueError(f"non-finite integrand value at x = {bad!r}")
    # fixed left-to-right accumulation for bitwise determinism
    total = 0.0
    prod = ws * fx
    for v in prod:
        total += v
    return total


def gaussian_weight_integrate(g, poly_degree: int, rate: float) -> float:
    """Integral over the real line of g(x) = polynomial(x) * exp(-rate x^2).

    Hermite-type quadrature with enough nodes to be exact (to rounding) for
    the stated polynomial degree.
    """
    if rate <= 0:
        raise ValueError("rate must be > 0")
    order = max(1, poly_degree // 2 + 1)
    s, w = _hermgauss(order)
    x = s / np.sqrt(rate)
    # w carries exp(-s^2); g carries the same factor, so divide it back out.
    vals = np.asarray(g(x), dtype=float) * np.exp(s * s) * w
    total = 0.0
    for v in vals:
        total += v
    return total / np.sqrt(rate)


def truncation_halfwidth(spec: BasisSpec, params: PotentialParams,
                         quad: QuadSpec = QuadSpec()) -> float:
    """Half-width X beyond which every basis-function envelope is below
    tail_tolerance: X = max(d + R, x_t) + sqrt(2 ln(1/tol) / omega)."""
    x_t = spec.turning_point
    margin = np.sqrt(2.0 * np.log(1.0 / quad.tail_tolerance) / spec.omega)
    return max(params.d + params.R, x_t) + margin

"""Parameter sweeps over the potential range R, with derivative columns and
reproducible CSV output.

A single basis (sized at the largest R in the grid) is used for every point
so the curves, and in particular the finite-difference derivative columns,
are free of basis-switching artifacts.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .basis import BasisSpec, DEFAULT_COVERAGE_FACTOR, default_omega
from .hamiltonian import DEFAULT_CONVERGENCE_TOL, TwoElectronSolver
from .observables import observable_record
from .potential import PotentialParams
from .quadrature import QuadSpec

SWEEP_COLUMNS = ["R", "E0", "L", "S", "S_n", "U_exp", "V_exp", "T_exp",
                 "ratio", "ratio_flag", "converged", "dL_dR", "dSn_dR",
                 "error"]


@dataclass
class SweepRow:
    R: float
    E0: float = float("nan")
    L: float = float("nan")
    S: float = float("nan")
    S_n: float = float("nan")
    U_exp: float = float("nan")
    V_exp: float = float("nan")
    T_exp: float = float("nan")
    ratio: float = float("nan")
    ratio_flag: str = ""
    converged: Optional[bool] = None
    dL_dR: Optional[float] = None     # None at sweep endpoints
    dSn_dR: Optional[float] = None
    error: str = ""


def default_r_grid(r_min: float = 2.0, r_max: float = 30.0):
    """Default sweep grid: step 0.25 on [6, 10] around the transition, 0.5
    elsewhere."""
    a = np.arange(r_min, 6.0, 0.5)
    b = np.arange(6.0, 10.0 + 1e-9, 0.25)
    c = np.arange(10.5, r_max + 1e-9, 0.5)
    return np.concatenate([a[a < 6.0], b, c[c > 10.0]])


def central_derivative(xs, ys):
    """Three-point central differences on a possibly non-uniform grid;
    endpoints are returned as NaN."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if len(xs) < 3:
        raise ValueError("need at least 3 points for central differences")
    d = np.full(len(xs), np.nan)
    h1 = xs[1:-1] - xs[:-2]
    h2 = xs[2:] - xs[1:-1]
    d[1:-1] = (-h2 / (h1 * (h1 + h2)) * ys[:-2]
               + (h2 - h1) / (h1 * h2) * ys[1:-1]
               + h1 / (h2 * (h1 + h2)) * ys[2:])
    return d


# -- worker-pool plumbing ----------------------------------------------------

_WORKER_SOLVER = None
_WORKER_ARGS = None


def _worker_init(spec, quad, coverage_factor, convergence_tol, base_params,
                 shift_mode, normalization):
    global _WORKER_SOLVER, _WORKER_ARGS
    _WORKER_SOLVER = TwoElectronSolver(spec, quad, coverage_factor,
                                       convergence_tol)
    _WORKER_ARGS = (base_params, shift_mode, normalization)


def _worker_eval(task):
    i, R = task
    base_params, shift_mode, normalization = _WORKER_ARGS
    return i, _eval_point(_WORKER_SOLVER, base_params, R, shift_mode,
                          normalization)


def _eval_point(solver, base_params, R, shift_mode, normalization):
    row = SweepRow(R=R)
    try:
        params = replace(base_params, R=R)
        gs = solver.solve(params)
        rec = observable_record(solver, gs, shift_mode, normalization)
        row.E0, row.L, row.S, row.S_n = rec.E0, rec.L, rec.S, rec.S_n
        row.U_exp, row.V_exp, row.T_exp = rec.U_exp, rec.V_exp, rec.T_exp
        row.ratio, row.ratio_flag = rec.ratio, rec.ratio_flag
        row.converged = rec.converged
    except Exception as exc:
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def run_sweep(base_params: PotentialParams, M: int, r_values,
              omega: Optional[float] = None, quad: QuadSpec = QuadSpec(),
              workers: int = 1, shift_mode: str = "global_min",
              normalization: str = "one",
              coverage_factor: float = DEFAULT_COVERAGE_FACTOR,
              convergence_tol: float = DEFAULT_CONVERGENCE_TOL):
    """Solve every R in r_values and fill derivative columns.

    Returns (rows, spec).  The basis is fixed across the sweep, sized by the
    default omega rule at max(r_values) unless omega is given.  Worker count
    only affects wall time, never the numbers.
    """
    r_values = [float(r) for r in r_values]
    if not r_values:
        raise ValueError("empty R grid")
    if any(b <= a for a, b in zip(r_values, r_values[1:])):
        raise ValueError("R grid must be strictly increasing")
    if omega is None:
        omega = default_omega(M, base_params.d, max(r_values), coverage_factor)
    spec = BasisSpec(M=M, omega=omega)

    rows: list = [None] * len(r_values)
    if workers <= 1:
        solver = TwoElectronSolver(spec, quad, coverage_factor,
                                   convergence_tol)
        for i, R in enumerate(r_values):
            rows[i] = _eval_point(solver, base_params, R, shift_mode,
                                  normalization)
    else:
        init_args = (spec, quad, coverage_factor, convergence_tol,
                     base_params, shift_mode, normalization)
        with ProcessPoolExecutor(max_workers=workers,
                                 initializer=_worker_init,
                                 initargs=init_args) as pool:
            for i, row in pool.map(_worker_eval,
                                   list(enumerate(r_values))):
                rows[i] = row

    ok = [r for r in rows if not r.error]
    if len(ok) >= 3:
        xs = [r.R for r in ok]
        dL = central_derivative(xs, [r.L for r in ok])
        dSn = central_derivative(xs, [r.S_n for r in ok])
        for r, a, b in zip(ok, dL, dSn):
            r.dL_dR = None if np.isnan(a) else float(a)
            r.dSn_dR = None if np.isnan(b) else float(b)
    return rows, spec


# -- output ------------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)  # shortest round-trip decimal
    return str(v)


def sweep_csv_text(rows) -> str:
    lines = [",".join(SWEEP_COLUMNS)]
    for r in rows:
        lines.append(",".join(_fmt(getattr(r, c)) for c in SWEEP_COLUMNS))
    return "\n".join(lines) + "\n"


def derivative_csv_text(rows, column: str) -> str:
    lines = ["R," + column]
    for r in rows:
        v = getattr(r, column)
        if v is not None and not r.error:
            lines.append(f"{_fmt(r.R)},{_fmt(v)}")
    return "\n".join(lines) + "\n"


def metadata_text(entries: dict) -> str:
    return "".join(f"{k} = {_fmt(v)}\n" for k, v in entries.items())

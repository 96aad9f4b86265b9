"""Command-line interface: solve | sweep | oracle | converge.

Exit codes: 0 success, 2 config error, 3 numerical failure,
4 coverage/validation failure.
"""

import argparse
import os
import sys
from dataclasses import replace

from . import __version__
from .basis import BasisSpec, CoverageError, default_omega
from .config import ConfigError, RunConfig
from .hamiltonian import EigensolverError, TwoElectronSolver
from .observables import observable_record
from .oracle import GridSpec, grid_solve
from .potential import PotentialParams
from .quadrature import QuadSpec
from .sweep import (derivative_csv_text, metadata_text, run_sweep,
                    sweep_csv_text, _fmt)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_COVERAGE = 4

OUT_ENV_VAR = "QDOTENT_OUT"


def _add_common_flags(p):
    p.add_argument("--config", metavar="PATH", help="flat key = value file")
    p.add_argument("--V0", type=float)
    p.add_argument("--d", type=float)
    p.add_argument("--R", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("-M", type=int, dest="M")
    p.add_argument("--omega", help="oscillator frequency or 'auto'")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--shift-mode", dest="shift_mode",
                   choices=["global_min", "paper_V0"])
    p.add_argument("--normalization", choices=["one", "two"])
    p.add_argument("--R-grid", dest="R_grid")
    p.add_argument("--coverage-factor", dest="coverage_factor", type=float)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="qdotent",
        description="Exact diagonalization of two interacting electrons in a "
                    "two-center power-exponential well, with entanglement "
                    "observables.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="one full solve at a single R")
    _add_common_flags(ps)

    pw = sub.add_parser("sweep", help="sweep over R; writes CSV + metadata")
    _add_common_flags(pw)

    po = sub.add_parser("oracle", help="independent grid-based cross-check")
    _add_common_flags(po)
    po.add_argument("--N", type=int, help="grid points per axis")
    po.add_argument("--X", help="grid half-width or 'auto'")

    pc = sub.add_parser("converge", help="E0 and L versus basis size M")
    _add_common_flags(pc)
    pc.add_argument("--M-min", dest="M_min", type=int, default=20)
    pc.add_argument("--M-step", dest="M_step", type=int, default=10)
    return ap


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig()
    if os.environ.get(OUT_ENV_VAR):
        cfg = replace(cfg, out=os.environ[OUT_ENV_VAR])
    if getattr(args, "config", None):
        cfg = RunConfig.from_file(args.config, base=cfg)
    overrides = {}
    for name in ("V0", "d", "R", "p", "lam", "M", "workers", "out",
                 "shift_mode", "normalization", "R_grid", "coverage_factor",
                 "N"):
        v = getattr(args, name, None)
        if v is not None:
            overrides[name] = v
    for name in ("omega", "X"):
        v = getattr(args, name, None)
        if v is not None:
            if v != "auto":
                float(v)  # validate now, keep as string
            overrides[name] = v
    return replace(cfg, **overrides)


def _params(cfg: RunConfig) -> PotentialParams:
    return PotentialParams(V0=cfg.V0, d=cfg.d, R=cfg.R, p=cfg.p, lam=cfg.lam)


def _quad(cfg: RunConfig) -> QuadSpec:
    return QuadSpec(panel_order=cfg.panel_order,
                    panels_per_interval=cfg.panels_per_interval,
                    tail_tolerance=cfg.tail_tolerance)


def _basis(cfg: RunConfig, R_max: float) -> BasisSpec:
    omega = cfg.omega_value()
    if omega is None:
        omega = default_omega(cfg.M, cfg.d, R_max, cfg.coverage_factor)
    return BasisSpec(M=cfg.M, omega=omega)


def cmd_solve(cfg: RunConfig) -> int:
    solver = TwoElectronSolver(_basis(cfg, cfg.R), _quad(cfg),
                               cfg.coverage_factor)
    gs = solver.solve(_params(cfg))
    rec = observable_record(solver, gs, cfg.shift_mode, cfg.normalization)
    print(f"R = {_fmt(cfg.R)}")
    for name in ("E0", "L", "S", "S_n", "U_exp", "V_exp", "T_exp", "ratio",
                 "ratio_flag", "converged"):
        print(f"{name} = {_fmt(getattr(rec, name))}")
    print(f"top_occupations = "
          f"{' '.join(_fmt(v) for v in rec.top_occupations)}")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    rows, spec = run_sweep(
        _params(cfg), cfg.M, cfg.r_values(), omega=cfg.omega_value(),
        quad=_quad(cfg), workers=cfg.workers, shift_mode=cfg.shift_mode,
        normalization=cfg.normalization, coverage_factor=cfg.coverage_factor)
    os.makedirs(cfg.out, exist_ok=True)
    with open(os.path.join(cfg.out, "sweep.csv"), "w") as fh:
        fh.write(sweep_csv_text(rows))
    for col in ("dL_dR", "dSn_dR"):
        with open(os.path.join(cfg.out, f"{col}.csv"), "w") as fh:
            fh.write(derivative_csv_text(rows, col))
    meta = metadata_text({"version": __version__,
                          "basis_M": spec.M, "basis_omega": spec.omega,
                          "n_points": len(rows)})
    with open(os.path.join(cfg.out, "sweep_meta.txt"), "w") as fh:
        fh.write("# config\n" + cfg.to_text() + "# derived\n" + meta)
    print(f"wrote {len(rows)} rows to {os.path.join(cfg.out, 'sweep.csv')}")
    return EXIT_OK


def cmd_oracle(cfg: RunConfig) -> int:
    res = grid_solve(_params(cfg), GridSpec(N=cfg.N, X=cfg.oracle_halfwidth()))
    print(f"R = {_fmt(cfg.R)}")
    print(f"E0 = {_fmt(res.energy)}")
    print(f"L = {_fmt(res.linear_entropy)}")
    print(f"S = {_fmt(res.von_neumann)}")
    print(f"U_exp = {_fmt(res.coulomb)}")
    for k, v in res.meta.items():
        print(f"{k} = {_fmt(v)}")
    return EXIT_OK


def cmd_converge(cfg: RunConfig, M_min: int, M_step: int) -> int:
    # One omega for the whole column (sized at the smallest basis) keeps the
    # bases nested, so E0 must be non-increasing in M.
    omega = cfg.omega_value()
    if omega is None:
        omega = default_omega(M_min, cfg.d, cfg.R, cfg.coverage_factor)
    params = _params(cfg)
    print("M,E0,L,converged")
    for M in range(M_min, cfg.M + 1, M_step):
        solver = TwoElectronSolver(BasisSpec(M=M, omega=omega), _quad(cfg),
                                   cfg.coverage_factor)
        gs = solver.solve(params)
        rec = observable_record(solver, gs, cfg.shift_mode, cfg.normalization)
        print(f"{M},{_fmt(rec.E0)},{_fmt(rec.L)},{_fmt(rec.converged)}")
    return EXIT_OK


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    try:
        cfg = _config_from_args(args)
        if args.command == "solve":
            return cmd_solve(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        if args.command == "oracle":
            return cmd_oracle(cfg)
        if args.command == "converge":
            return cmd_converge(cfg, args.M_min, args.M_step)
        raise ConfigError(f"unknown command {args.command!r}")
    except CoverageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COVERAGE
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (EigensolverError, ArithmeticError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        # parameter/spec invariant violations
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COVERAGE


if __name__ == "__main__":
    sys.exit(main())

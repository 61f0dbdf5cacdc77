"""Command-line front end.

    gljunction profile --a 1 --m 1 --out out/
    gljunction solve --mode radial --a 1 --m 1 --eps 0.02 --r1 1 --r2 2 --n 4000 --out out/
    gljunction eigen --a 1 --m 1 --eps 0.3 --r1 1 --r2 2 --out out/
    gljunction sweep --eps 0.04,0.02,0.01 --per-eps 200 --out out/
    gljunction asymptotics --table out/sweep.csv --out out/

Options may also come from a key=value file given with --config; flags on the
command line override it.  Exit codes: 0 success, 2 invalid configuration,
3 numerical nonconvergence (reports are still written).
"""
from __future__ import annotations

import argparse
import datetime as _dt
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import reports
from .assembly import CartesianProblem, GridMismatch, RadialProblem
from .asymptotics import InsufficientRuns, agmon_fit, energy_expansion_fit, layer_error
from .eigen import lambda1 as eigen_lambda1
from .geometry import DiskInDisk
from .newton import DivergedEnergy, NonConvergence
from .params import ParameterError, Params
from .profile1d import (
    DiscreteProfile,
    Grid1D,
    Profile1D,
    c_integrals,
    constants_with_quadrature,
    de_gennes_gap,
    limit_check,
    minimize_F,
    normal_side_exact,
    transmission_gap,
)
from .solver import EmptyRegion, Init, solve, verify_interior_bound

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# configuration


def parse_real(text) -> float:
    """Accept plain floats and fractions such as '1/128'."""
    if isinstance(text, (int, float)):
        return float(text)
    text = str(text).strip()
    try:
        return float(text)
    except ValueError:
        try:
            return float(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def parse_eps_list(text) -> list[float]:
    return [parse_real(x) for x in str(text).split(",") if x.strip()]


def read_kv_file(path) -> dict:
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


@dataclass
class RunConfig:
    command: str
    a: float = 1.0
    m: float = 1.0
    eps: float = 0.05
    eps_list: tuple = ()
    r1: float = 1.0
    r2: float = 2.0
    mode: str = "radial"
    n: int | None = None
    h: float | None = None
    per_eps: float = 200.0
    init: str = "ramp"
    tol: float | None = None
    k0: float = 5.0
    jobs: int = 1
    out: Path = Path("out")
    timestamp: bool = True

    def validate(self):
        Params(self.a, self.m, self.eps)  # raises ParameterError
        for e in self.eps_list:
            Params(self.a, self.m, e)
        if self.command in ("solve", "eigen", "sweep"):
            DiskInDisk(self.r1, self.r2)
        if self.mode not in ("radial", "cart"):
            raise ConfigError(f"mode must be 'radial' or 'cart' (got {self.mode!r})")
        if self.n is not None and self.n < 2:
            raise ConfigError("n must be >= 2")
        if self.h is not None and not self.h > 0:
            raise ConfigError("h must be > 0")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        try:
            Init.parse(self.init)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return self

    @property
    def params(self) -> Params:
        return Params(self.a, self.m, self.eps)

    @property
    def geometry(self) -> DiskInDisk:
        return DiskInDisk(self.r1, self.r2)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="key=value file; flags override it")
    p.add_argument("--a", type=parse_real)
    p.add_argument("--m", type=parse_real)
    p.add_argument("--out", type=Path)
    p.add_argument("--no-timestamp", dest="timestamp", action="store_false", default=None)


def _add_geometry(p):
    p.add_argument("--r1", type=parse_real)
    p.add_argument("--r2", type=parse_real)
    p.add_argument("--n", type=int, help="radial cells on [0, R2]")
    p.add_argument("--h", type=parse_real, help="grid spacing (radial or Cartesian), e.g. 1/128")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gljunction", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="1-D profile, constants and limit checks")
    _add_common(p)
    p.add_argument("--limit", choices=["neumann", "dirichlet", "both"], default="both")
    p.add_argument("--samples", type=int, default=401)
    p.add_argument("--minimize", action="store_true", help="also run the truncated 1-D minimization")
    p.add_argument("--h1d", type=parse_real, default=1e-2)

    p = sub.add_parser("solve", help="nonlinear solve on a radial or Cartesian grid")
    _add_common(p)
    _add_geometry(p)
    p.add_argument("--eps", type=parse_real)
    p.add_argument("--mode", choices=["radial", "cart"])
    p.add_argument("--init", help="ramp | constant:<c> | random:<seed>")
    p.add_argument("--tol", type=parse_real)
    p.add_argument("--k0", type=parse_real)
    p.add_argument("--no-eigen", dest="eigen", action="store_false", default=True)

    p = sub.add_parser("eigen", help="lambda_1(a, m, eps) and the min-max bound")
    _add_common(p)
    _add_geometry(p)
    p.add_argument("--eps", type=parse_real)
    p.add_argument("--mode", choices=["radial", "cart"])

    p = sub.add_parser("sweep", help="radial solves over a list of eps")
    _add_common(p)
    _add_geometry(p)
    p.add_argument("--eps", type=parse_eps_list, dest="eps_list")
    p.add_argument("--per-eps", type=parse_real, dest="per_eps", help="grid nodes per eps")
    p.add_argument("--init")
    p.add_argument("--tol", type=parse_real)
    p.add_argument("--jobs", type=int)

    p = sub.add_parser("asymptotics", help="fit G0 ~ p/eps + q to a sweep table")
    _add_common(p)
    p.add_argument("--table", type=Path, required=True)
    p.add_argument("--r1", type=parse_real)
    return parser


_FIELDS = {f for f in RunConfig.__dataclass_fields__}
_CONVERT = {
    "a": parse_real, "m": parse_real, "eps": parse_real, "r1": parse_real, "r2": parse_real,
    "n": int, "h": parse_real, "per_eps": parse_real, "tol": parse_real, "k0": parse_real,
    "jobs": int, "out": Path, "eps_list": lambda s: tuple(parse_eps_list(s)),
    "timestamp": lambda s: str(s).lower() in ("1", "true", "yes"),
}


def make_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        for k, v in read_kv_file(args.config).items():
            if k == "no_timestamp":
                k, v = "timestamp", str(str(v).lower() not in ("1", "true", "yes"))
            if k not in _FIELDS:
                raise ConfigError(f"unknown config key {k!r}")
            values[k] = _CONVERT.get(k, str)(v)
    for k, v in vars(args).items():
        if k in _FIELDS and v is not None:
            values[k] = tuple(v) if k == "eps_list" else v
    values["command"] = args.command
    return RunConfig(**values).validate()


def _stamp(cfg: RunConfig, d: dict) -> dict:
    if cfg.timestamp:
        d = dict(d)
        d["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
    return d


# ---------------------------------------------------------------------------
# commands


def cmd_profile(cfg: RunConfig, args) -> int:
    p = Params(cfg.a, cfg.m)
    prof = Profile1D.of(p)
    consts = constants_with_quadrature(p)
    q = c_integrals(p)
    n1_exact, n2_exact = normal_side_exact(p)
    c = consts.as_dict()
    out = {"a": p.a, "m": p.m, **c}
    out.update(
        c1_pos_quad=q["c1_pos"],
        c1_neg_quad=q["c1_neg"],
        c2_pos_quad=q["c2_pos"],
        c2_neg_quad=q["c2_neg"],
        c1_neg_exact=n1_exact,
        c2_neg_exact=n2_exact,
        de_gennes_gap=de_gennes_gap(p),
        transmission_gap=transmission_gap(p),
    )
    half = np.linspace(1e-3, 10.0, max(2, args.samples // 2))
    t = np.concatenate([-half[::-1], half])
    u, up, upp = prof.U(t), prof.U_prime(t), prof.U_second(t)
    res = np.where(t > 0, -upp - (1 - u * u) * u, -upp + p.a * p.m * u)
    out["ode_residual_max"] = float(np.max(np.abs(res)))
    if args.limit in ("neumann", "both"):
        out["limit_neumann_sup"] = limit_check(p, "neumann")
    if args.limit in ("dirichlet", "both"):
        out["limit_dirichlet_sup"] = limit_check(p, "dirichlet")
    status = EXIT_OK
    if args.minimize:
        grid = Grid1D.default(p, args.h1d)
        try:
            dp = minimize_F(grid, p, DiscreteProfile(grid, np.full(grid.nodes.size, 0.5)))
            out["minimize_F_energy"] = dp.energy
            out["minimize_F_sup_error"] = float(np.max(np.abs(dp.values - prof.U(grid.nodes))))
            tr = np.array(dp.trace)
            reports.write_csv(cfg.out / "minimize_trace.csv", ["iteration", "F", "grad_norm"],
                              [tr[:, 0].astype(int), tr[:, 1], tr[:, 2]])
        except (NonConvergence, DivergedEnergy) as exc:
            out["minimize_F_error"] = str(exc)
            status = EXIT_NUMERIC
    reports.write_csv(cfg.out / "profile.csv", ["t", "U", "U_prime", "residual"], [t, u, up, res])
    reports.write_json(cfg.out / "constants.json", _stamp(cfg, out))
    return status


def _problem(cfg: RunConfig, params: Params | None = None):
    params = params or cfg.params
    g = cfg.geometry
    try:
        if cfg.mode == "cart":
            h = cfg.h if cfg.h is not None else params.eps / 12.8
            return CartesianProblem(params, g, h)
        if cfg.n is not None:
            return RadialProblem(params, g, cfg.n)
        if cfg.h is not None:
            return RadialProblem.from_spacing(params, g, cfg.h)
        return radial_for_eps(params, g, cfg.per_eps)
    except GridMismatch as exc:
        raise ConfigError(str(exc)) from exc


def radial_for_eps(params: Params, g: DiskInDisk, per_eps: float) -> RadialProblem:
    """Radial grid with at least `per_eps` nodes per eps and both R1, R2 on nodes."""
    ratio = Fraction(g.R2 / g.R1).limit_denominator(10**4)
    if abs(float(ratio) - g.R2 / g.R1) > 1e-12 * g.R2 / g.R1:
        raise ConfigError(f"R2/R1 = {g.R2 / g.R1} is not a simple fraction; pass --n or --h")
    step = ratio.denominator  # cells on [0, R1] must be a multiple of this
    n1 = math.ceil(g.R1 * per_eps / params.eps / step) * step
    return RadialProblem(params, g, int(n1 * ratio))


def cmd_solve(cfg: RunConfig, args) -> int:
    problem = _problem(cfg)
    problem.check_resolution()
    try:
        u, rep = solve(problem, cfg.init, tol=cfg.tol, k0=cfg.k0)
    except DivergedEnergy as exc:
        reports.write_json(cfg.out / "solve_report.json", _stamp(cfg, {"error": str(exc)}))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    d = rep.as_dict()
    if getattr(args, "eigen", True):
        try:
            er = eigen_lambda1(problem)
            d["lambda1"] = er.lambda1
            d["regime"] = er.regime
        except NonConvergence as exc:
            d["lambda1_error"] = str(exc)
    if rep.nontrivial:
        try:
            d["interior_inf"] = verify_interior_bound(problem, u, cfg.k0)
        except EmptyRegion as exc:
            d["interior_inf_error"] = str(exc)
    reports.field_csv(cfg.out / "solution.csv", problem, u)
    reports.write_json(cfg.out / "solve_report.json", _stamp(cfg, d))
    return EXIT_OK if rep.converged else EXIT_NUMERIC


def cmd_eigen(cfg: RunConfig, args) -> int:
    problem = _problem(cfg)
    try:
        er = eigen_lambda1(problem)
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    d = {"a": cfg.a, "m": cfg.m, "eps": cfg.eps, "R1": cfg.r1, "R2": cfg.r2,
         "mode": problem.kind, "n_nodes": problem.n, **er.as_dict()}
    reports.write_json(cfg.out / "eigen_report.json", _stamp(cfg, d))
    reports.field_csv(cfg.out / "eigenfunction.csv", problem, er.eigenfunction)
    return EXIT_OK


def sweep_one(a, m, eps, r1, r2, per_eps, init, tol):
    """One radial solve of a sweep; top-level so it can run in a worker process."""
    params = Params(a, m, eps)
    problem = radial_for_eps(params, DiskInDisk(r1, r2), per_eps)
    u, rep = solve(problem, init, tol=tol)
    row = {"eps": eps, "energy": rep.energy, "converged": rep.converged, "n_nodes": problem.n,
           "nontrivial": rep.nontrivial}
    if rep.nontrivial:
        row["layer_error"] = layer_error(problem, u)["sup"]
        try:
            ag = agmon_fit(problem, u)
            row["rate_inner"], row["rate_outer"] = ag["rate_inner"], ag["rate_outer"]
        except ValueError:
            row["rate_inner"] = row["rate_outer"] = math.nan
    else:
        row["layer_error"] = row["rate_inner"] = row["rate_outer"] = math.nan
    return row, problem.t / eps, u


def cmd_sweep(cfg: RunConfig, args) -> int:
    eps_list = sorted(cfg.eps_list or (cfg.eps,), reverse=True)
    jobs = [(cfg.a, cfg.m, e, cfg.r1, cfg.r2, cfg.per_eps, cfg.init, cfg.tol) for e in eps_list]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(sweep_one, *zip(*jobs)))
    else:
        results = [sweep_one(*j) for j in jobs]
    rows = [r for r, _, _ in results]
    for (row, tt, u) in results:
        sel = np.abs(tt) <= 15.0
        reports.write_columns(cfg.out / f"layer_eps{row['eps']:.6g}.dat", tt[sel], u[sel])
    keys = ["eps", "energy", "converged", "n_nodes", "layer_error", "rate_inner", "rate_outer"]
    n = len(rows)
    cols = [[r[k] for r in rows] for k in keys]
    cols += [[cfg.a] * n, [cfg.m] * n, [cfg.r1] * n, [cfg.r2] * n]
    reports.write_csv(cfg.out / "sweep.csv", keys + ["a", "m", "R1", "R2"], cols)
    return EXIT_OK if all(r["converged"] for r in rows) else EXIT_NUMERIC


def cmd_asymptotics(cfg: RunConfig, args) -> int:
    table = reports.read_csv(args.table)
    if not table or len(table.get("eps", [])) < 3:
        print(f"error: InsufficientRuns: {args.table} has fewer than 3 rows", file=sys.stderr)
        return EXIT_CONFIG
    a = float(table["a"][0]) if "a" in table else cfg.a
    m = float(table["m"][0]) if "m" in table else cfg.m
    r1 = float(table["R1"][0]) if "R1" in table else cfg.r1
    try:
        fit = energy_expansion_fit(
            zip(table["eps"], table["energy"]), Params(a, m), interface_length=2 * math.pi * r1
        )
    except InsufficientRuns as exc:
        print(f"error: InsufficientRuns: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    d = fit.as_dict()
    order = np.argsort(table["eps"])
    for key, name in (("layer_error", "layer_sup_error"), ("rate_inner", "decay_rate_inner"),
                      ("rate_outer", "decay_rate_outer")):
        if key in table:
            d[name] = [float(x) for x in np.asarray(table[key])[order]]
    d["layer_threshold_note"] = "layer error threshold is an engineering tolerance on an o(1) quantity"
    reports.write_json(cfg.out / "fit_report.json", _stamp(cfg, d))
    eps = np.array(fit.eps)
    resid = np.array(fit.energy) - (fit.p / eps + fit.q)
    reports.write_csv(cfg.out / "fit_table.csv", ["eps", "G0", "p_residual"], [eps, fit.energy, resid])
    return EXIT_OK


COMMANDS = {
    "profile": cmd_profile,
    "solve": cmd_solve,
    "eigen": cmd_eigen,
    "sweep": cmd_sweep,
    "asymptotics": cmd_asymptotics,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
    except (ParameterError, ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[cfg.command](cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

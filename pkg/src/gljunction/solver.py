"""Nonlinear solves of the discrete Euler-Lagrange system by energy minimization."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .assembly import CartesianProblem, RadialProblem
from .newton import DivergedEnergy, NonConvergence, minimize
from .profile1d import Profile1D


class EmptyRegion(ValueError):
    pass


DEFAULT_TOL = {"radial": 1e-9, "cart": 1e-7}


@dataclass(frozen=True)
class Init:
    kind: str = "ramp"  # ramp | constant | random | field
    value: float = 0.5
    seed: int = 0

    @classmethod
    def parse(cls, text: str) -> "Init":
        """'ramp', 'constant:0.3' or 'random:7'."""
        kind, _, arg = text.partition(":")
        if kind == "ramp":
            return cls("ramp")
        if kind == "constant":
            return cls("constant", value=float(arg) if arg else 0.5)
        if kind == "random":
            return cls("random", seed=int(arg) if arg else 0)
        raise ValueError(f"unknown init {text!r}")

    def label(self) -> str:
        if self.kind == "constant":
            return f"constant:{self.value:g}"
        if self.kind == "random":
            return f"random:{self.seed}"
        return self.kind


def initial_field(problem, init: Init | np.ndarray) -> np.ndarray:
    if isinstance(init, np.ndarray):
        return np.array(init, dtype=float)
    if init.kind == "ramp":
        prof = Profile1D.of(problem.params)
        return prof.U(problem.t / problem.params.eps)
    if init.kind == "constant":
        return np.full(problem.n, float(init.value))
    if init.kind == "random":
        rng = np.random.default_rng(init.seed)
        return rng.uniform(0.0, 1.0, problem.n)
    raise ValueError(f"unknown init kind {init.kind!r}")


@dataclass
class SolveReport:
    mode: str
    a: float
    m: float
    eps: float
    R1: float
    R2: float
    h: float
    n_nodes: int
    init_kind: str
    converged: bool
    iterations: int
    grad_norm: float
    tol: float
    energy: float
    normal_state_energy: float
    energy_below_normal_state: bool
    min_u: float
    max_u: float
    sup_norm: float
    nontrivial: bool
    strictly_between_0_1: bool
    max_overshoot: float  # max(0, max_u - 1, -min_u)
    interior_inf: float
    k0: float
    restarts: int
    fallbacks: int
    energy_monotone: bool

    def as_dict(self) -> dict:
        return asdict(self)


def energy_of_solution(problem, u) -> float:
    return problem.energy(u)


def normal_state_energy(problem) -> float:
    """G0(0) = |Omega_1| / (2 eps^2), evaluated with the discrete quadrature."""
    return problem.energy(np.zeros(problem.n))


def verify_interior_bound(problem, u, k0: float = 5.0) -> float:
    """inf of u over the nodes with t(x) >= k0 * eps."""
    eps = problem.params.eps
    if k0 * eps >= problem.geometry.R1:
        raise EmptyRegion(f"k0*eps = {k0 * eps:g} >= R1 = {problem.geometry.R1:g}")
    sel = problem.t >= k0 * eps
    if not sel.any():
        raise EmptyRegion("no grid nodes with t(x) >= k0*eps")
    return float(np.min(np.asarray(u)[sel]))


def solve(
    problem: RadialProblem | CartesianProblem,
    init: Init | np.ndarray | str = "ramp",
    tol: float | None = None,
    max_iter: int = 300,
    k0: float = 5.0,
    nontrivial_threshold: float = 0.1,
):
    """Minimize the discrete G0 and return (u, SolveReport).

    Converged solutions with negative values are restarted from |u|, since
    |u| has the same energy and the nonnegative branch is the one we want.
    """
    if isinstance(init, str):
        init = Init.parse(init)
    tol = DEFAULT_TOL[problem.kind] if tol is None else tol
    form = problem.form
    u0 = initial_field(problem, init)
    res = minimize(form, u0, tol=tol, max_iter=max_iter)
    restarts = 0
    history = list(res.history)
    while res.u.min() < -1e-8 and restarts < 3:
        restarts += 1
        res = minimize(form, np.abs(res.u), tol=tol, max_iter=max_iter)
        history.extend(res.history)
    u = res.u
    energies = [h[1] for h in res.history]
    monotone = all(
        e1 <= e0 + 1e-12 * (abs(e0) + 1.0) for e0, e1 in zip(energies[:-1], energies[1:])
    )
    sup = float(np.max(np.abs(u)))
    nontrivial = sup > nontrivial_threshold
    p, g = problem.params, problem.geometry
    try:
        interior = verify_interior_bound(problem, u, k0) if nontrivial else math.nan
    except EmptyRegion:
        interior = math.nan
    E = res.energy
    E0 = normal_state_energy(problem)
    report = SolveReport(
        mode=problem.kind,
        a=p.a,
        m=p.m,
        eps=p.eps,
        R1=g.R1,
        R2=g.R2,
        h=problem.h,
        n_nodes=problem.n,
        init_kind=init.label() if isinstance(init, Init) else "field",
        converged=bool(res.converged),
        iterations=int(res.iterations),
        grad_norm=float(res.grad_norm),
        tol=tol,
        energy=float(E),
        normal_state_energy=float(E0),
        energy_below_normal_state=bool(E < E0),
        min_u=float(u.min()),
        max_u=float(u.max()),
        sup_norm=sup,
        nontrivial=bool(nontrivial),
        strictly_between_0_1=bool(u.min() > 0.0 and u.max() < 1.0),
        max_overshoot=float(max(0.0, u.max() - 1.0, -u.min())),
        interior_inf=interior,
        k0=k0,
        restarts=restarts,
        fallbacks=int(res.fallbacks),
        energy_monotone=bool(monotone),
    )
    return u, report


def solve_or_raise(problem, init="ramp", **kw):
    u, report = solve(problem, init, **kw)
    if not report.converged:
        raise NonConvergence(f"solver stopped with |grad|={report.grad_norm:.3e} > tol={report.tol:g}")
    return u, report


__all__ = [
    "DivergedEnergy",
    "EmptyRegion",
    "Init",
    "NonConvergence",
    "SolveReport",
    "energy_of_solution",
    "initial_field",
    "normal_state_energy",
    "solve",
    "solve_or_raise",
    "verify_interior_bound",
]

"""The explicit 1-D junction profile U and the truncated 1-D variational problem."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .assembly import line_form
from .newton import NewtonResult, NonConvergence, minimize
from .params import Params, ProfileConstants, derive_constants

SQRT2 = math.sqrt(2.0)


class OvershootBeyondTolerance(RuntimeError):
    pass


@dataclass(frozen=True)
class Profile1D:
    params: Params
    constants: ProfileConstants

    @classmethod
    def of(cls, p: Params) -> "Profile1D":
        return cls(p, derive_constants(p))

    @property
    def k_normal(self) -> float:
        """Decay rate sqrt(a m) of U on t < 0."""
        return math.sqrt(self.params.a * self.params.m)

    def _x(self, t):
        # (beta e^{sqrt2 t} - 1)/(beta e^{sqrt2 t} + 1) = tanh((sqrt2 t + ln beta)/2)
        return 0.5 * (SQRT2 * t + math.log(self.constants.beta))

    def U(self, t):
        t = np.asarray(t, dtype=float)
        pos = t >= 0
        out = np.empty_like(t)
        out[pos] = np.tanh(self._x(t[pos]))
        out[~pos] = self.constants.A * np.exp(self.k_normal * t[~pos])
        return out if out.ndim else float(out)

    def one_minus_U(self, t):
        """1 - U without cancellation on t >= 0."""
        t = np.asarray(t, dtype=float)
        pos = t >= 0
        out = np.empty_like(t)
        beta = self.constants.beta
        out[pos] = 2.0 / (beta * np.exp(SQRT2 * t[pos]) + 1.0)
        out[~pos] = 1.0 - self.constants.A * np.exp(self.k_normal * t[~pos])
        return out if out.ndim else float(out)

    def U_prime(self, t, side: int = 1):
        """Analytic derivative; at t=0 the branch is chosen by `side` (+1 or -1)."""
        t = np.asarray(t, dtype=float)
        pos = (t > 0) | ((t == 0) & (side > 0))
        out = np.empty_like(t)
        out[pos] = (1.0 / SQRT2) / np.cosh(self._x(t[pos])) ** 2
        out[~pos] = self.k_normal * self.constants.A * np.exp(self.k_normal * t[~pos])
        return out if out.ndim else float(out)

    def U_second(self, t, side: int = 1):
        t = np.asarray(t, dtype=float)
        pos = (t > 0) | ((t == 0) & (side > 0))
        out = np.empty_like(t)
        u = np.tanh(self._x(t[pos]))
        out[pos] = -(1.0 - u * u) * u
        k = self.k_normal
        out[~pos] = k * k * self.constants.A * np.exp(k * t[~pos])
        return out if out.ndim else float(out)


def eval_U(t, p: Params):
    return Profile1D.of(p).U(t)


def eval_U_prime(t, p: Params, side: int = 1):
    return Profile1D.of(p).U_prime(t, side)


def ode_residual(p: Params, samples) -> float:
    """Max |ODE residual| of U at the sample points (t=0 excluded)."""
    prof = Profile1D.of(p)
    t = np.asarray(samples, dtype=float)
    if np.any(t == 0):
        raise ValueError("samples must exclude t=0")
    u = prof.U(t)
    upp = prof.U_second(t)
    res = np.where(t > 0, -upp - (1.0 - u * u) * u, -upp + p.a * p.m * u)
    return float(np.max(np.abs(res)))


def de_gennes_gap(p: Params) -> float:
    """U'(0+)/U(0) - sqrt(a/m)."""
    prof = Profile1D.of(p)
    return prof.U_prime(0.0, +1) / prof.U(0.0) - prof.constants.gamma


def transmission_gap(p: Params) -> float:
    """U'(0+) - U'(0-)/m."""
    prof = Profile1D.of(p)
    return prof.U_prime(0.0, +1) - prof.U_prime(0.0, -1) / p.m


# ---------------------------------------------------------------------------
# c1, c2 by composite Gauss-Legendre quadrature


def _gauss_legendre(f, lo: float, hi: float, panel: float = 0.25, order: int = 20) -> float:
    x, w = np.polynomial.legendre.leggauss(order)
    n_panels = max(1, math.ceil((hi - lo) / panel))
    edges = np.linspace(lo, hi, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    pts = mid[:, None] + half[:, None] * x[None, :]
    return float(np.sum(half[:, None] * w[None, :] * f(pts)))


def energy_density(prof: Profile1D, t):
    """Integrand of c1: |U'|^2 + (1-U^2)^2/2 for t>0, |U'|^2/m + a U^2 for t<0."""
    t = np.asarray(t, dtype=float)
    up = prof.U_prime(t)
    u = prof.U(t)
    p = prof.params
    return np.where(t >= 0, up * up + 0.5 * (1.0 - u * u) ** 2, up * up / p.m + p.a * u * u)


def c_integrals(p: Params) -> dict:
    """The four half-line integrals behind c1 and c2."""
    prof = Profile1D.of(p)
    f = lambda t: energy_density(prof, t)
    # superconducting side decays like e^{-2 sqrt2 t}, normal side like e^{2 sqrt(am) t}
    T_pos = 40.0 / SQRT2
    T_neg = max(20.0 / math.sqrt(p.a * p.m), 1.0)
    neg = lambda t: energy_density(prof, -t)
    # panel widths follow the decay scale of each side
    pw_neg = min(0.25, 0.25 / math.sqrt(p.a * p.m))
    return {
        "c1_pos": _gauss_legendre(f, 0.0, T_pos),
        "c1_neg": _gauss_legendre(neg, 0.0, T_neg, panel=pw_neg),
        "c2_pos": _gauss_legendre(lambda t: t * f(t), 0.0, T_pos),
        "c2_neg": -_gauss_legendre(lambda t: t * neg(t), 0.0, T_neg, panel=pw_neg),
    }


def quadrature_c1(p: Params) -> float:
    q = c_integrals(p)
    return q["c1_pos"] + q["c1_neg"]


def quadrature_c2(p: Params) -> float:
    q = c_integrals(p)
    return q["c2_pos"] + q["c2_neg"]


def constants_with_quadrature(p: Params) -> ProfileConstants:
    q = c_integrals(p)
    return replace(
        derive_constants(p),
        c1_quad=q["c1_pos"] + q["c1_neg"],
        c2_quad=q["c2_pos"] + q["c2_neg"],
    )


def normal_side_exact(p: Params) -> tuple[float, float]:
    """Normal-side parts of (c1, c2) integrated by hand: sqrt(a/m) A^2 and -A^2/(2m)."""
    A = derive_constants(p).A
    return math.sqrt(p.a / p.m) * A * A, -A * A / (2.0 * p.m)


# ---------------------------------------------------------------------------
# truncated 1-D variational problem


@dataclass(frozen=True)
class Grid1D:
    L: float
    h: float

    def __post_init__(self):
        k = round(self.L / self.h)
        if k < 1 or abs(k * self.h - self.L) > 1e-9 * self.L:
            raise ValueError(f"L/h must be a positive integer (L={self.L}, h={self.h})")

    @property
    def half_cells(self) -> int:
        return round(self.L / self.h)

    @property
    def nodes(self) -> np.ndarray:
        k = self.half_cells
        return self.h * np.arange(-k, k + 1)

    @classmethod
    def default(cls, p: Params, h: float = 1e-2) -> "Grid1D":
        L = max(40.0, 20.0 / math.sqrt(p.a * p.m), 20.0 / SQRT2)
        return cls(math.ceil(L / h) * h, h)


@dataclass
class DiscreteProfile:
    grid: Grid1D
    values: np.ndarray
    energy: float = math.nan
    trace: list | None = None


def discrete_F(grid: Grid1D, p: Params, values) -> float:
    return line_form(grid.nodes, p.a, p.m).energy(values)


def minimize_F(grid: Grid1D, p: Params, init: DiscreteProfile | np.ndarray, tol: float = 1e-10,
               max_iter: int = 500) -> DiscreteProfile:
    form = line_form(grid.nodes, p.a, p.m)
    u0 = init.values if isinstance(init, DiscreteProfile) else np.asarray(init, dtype=float)
    res: NewtonResult = minimize(form, u0, tol=tol, max_iter=max_iter)
    if not res.converged:
        raise NonConvergence(f"1-D minimization stopped at |grad|={res.grad_norm:.3e}")
    u = res.u
    if u.min() < 0 and u.max() <= 0:
        # -U is the other minimizer; the nonnegative branch is U
        u = -u
    over = max(0.0, -u.min(), u.max() - 1.0)
    if over >= 1e-12:
        raise OvershootBeyondTolerance(f"minimizer leaves [0, 1] by {over:.3e}")
    u = np.clip(u, 0.0, 1.0)
    return DiscreteProfile(grid, u, form.energy(u), res.history)


def limit_check(p: Params, side: str, T: float = 20.0, n: int = 20001) -> float:
    """sup over [0, T] of |U - 1| (neumann) or |U - tanh(t/sqrt2)| (dirichlet)."""
    prof = Profile1D.of(p)
    t = np.linspace(0.0, T, n)
    if side == "neumann":
        return float(np.max(prof.one_minus_U(t)))
    if side == "dirichlet":
        return float(np.max(np.abs(prof.U(t) - np.tanh(t / SQRT2))))
    raise ValueError(f"side must be 'neumann' or 'dirichlet' (got {side!r})")

"""Lowest eigenvalue of the linearized form at u = 0 and Dirichlet Laplacian eigenvalues.

Both use inverse iteration with a shift that is certified to lie below the
spectrum, so the shifted matrix is positive definite and can be factored once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .assembly import NodalEnergy, _radial_form
from .newton import NonConvergence
from .params import Params

DEAD_BAND = 1e-10


@dataclass
class EigenResult:
    value: float
    vector: np.ndarray  # M-normalized, positive mean
    residual: float
    iterations: int


@dataclass
class EigenReport:
    lambda1: float
    eigenfunction: np.ndarray
    eigenfunction_norm: float  # discrete L2 norm sqrt(sum mass * phi^2)
    residual: float
    iterations: int
    lambda1_dirichlet_inner: float
    lambda1_dirichlet_outer: float
    minmax_bound: float
    bound_satisfied: bool
    regime: str

    def as_dict(self) -> dict:
        return {
            "lambda1": self.lambda1,
            "residual": self.residual,
            "iterations": self.iterations,
            "lambda1_dirichlet_inner": self.lambda1_dirichlet_inner,
            "lambda1_dirichlet_outer": self.lambda1_dirichlet_outer,
            "minmax_bound": self.minmax_bound,
            "bound_satisfied": self.bound_satisfied,
            "regime": self.regime,
            "eigenfunction_norm": self.eigenfunction_norm,
        }


def _is_tridiagonal(Q: sp.spmatrix) -> bool:
    coo = Q.tocoo()
    return bool(np.all(np.abs(coo.row - coo.col) <= 1))


def _factor(A: sp.csr_matrix):
    """Return a solver for the SPD matrix A."""
    if _is_tridiagonal(A):
        n = A.shape[0]
        ab = np.zeros((2, n))
        ab[1] = A.diagonal()
        ab[0, 1:] = A.diagonal(1)
        cb = sla.cholesky_banded(ab)
        return lambda b: sla.cho_solve_banded((cb, False), b)
    return spla.factorized(A.tocsc())


def rayleigh_quotient(Q, mass, phi) -> float:
    phi = np.asarray(phi, dtype=float)
    return float(phi @ (Q @ phi)) / float(phi @ (mass * phi))


def inverse_iteration(Q, mass, shift: float, rtol: float = 1e-8, max_iter: int = 20000) -> EigenResult:
    """Smallest eigenpair of Q phi = lambda M phi with M = diag(mass).

    `shift` must lie strictly below the smallest eigenvalue.
    """
    Q = sp.csr_matrix(Q)
    mass = np.asarray(mass, dtype=float)
    solve = _factor((Q - shift * sp.diags(mass)).tocsr())
    phi = np.ones(Q.shape[0])
    phi /= math.sqrt(phi @ (mass * phi))
    lam = rayleigh_quotient(Q, mass, phi)
    for it in range(1, max_iter + 1):
        phi = solve(mass * phi)
        phi /= math.sqrt(phi @ (mass * phi))
        Qphi = Q @ phi
        lam = float(phi @ Qphi)
        r = Qphi / mass - lam * phi
        res = math.sqrt(float(r @ (mass * r)))
        if res < rtol * max(1.0, abs(lam)):
            break
    else:
        raise NonConvergence(f"inverse iteration: residual {res:.3e} after {max_iter} steps")
    if phi @ mass < 0:
        phi = -phi
    return EigenResult(lam, phi, res, it)


def _submatrix(Q: sp.csr_matrix, idx):
    return Q[idx][:, idx]


def dirichlet_eigen(form: NodalEnergy, idx, coefficient_scale: float = 1.0) -> float:
    """Lowest Dirichlet eigenvalue of the diffusion part on the node set `idx`.

    Zero extension outside `idx` is exact for the principal submatrix, so the
    value is the discrete analogue used in the min-max comparison.
    """
    idx = np.asarray(idx)
    K = _submatrix(0.5 * form.stiffness, idx) * coefficient_scale
    res = inverse_iteration(K, form.mass[idx], shift=-1.0)
    return res.value


def dirichlet_lambda1(domain: str, R: float, R_outer: float | None = None, n_cells: int = 2000) -> float:
    """First Dirichlet eigenvalue of -Laplacian on a disk(R) or annulus(R, R_outer).

    The radial grid has `n_cells` cells on [0, R] for the disk and on
    [0, R_outer] for the annulus.
    """
    unit = Params(1.0, 1.0, 1.0)
    if domain == "disk":
        r = np.linspace(0.0, R, n_cells + 1)
        form = _radial_form(r, R / n_cells, n_cells, unit)
        return dirichlet_eigen(form, np.arange(n_cells))
    if domain == "annulus":
        if R_outer is None or not R_outer > R:
            raise ValueError("annulus needs R_outer > R")
        h = R_outer / n_cells
        k = round(R / h)
        if abs(k * h - R) > 1e-9 * R:
            raise ValueError("inner radius must be a grid node")
        r = np.linspace(0.0, R_outer, n_cells + 1)
        form = _radial_form(r, h, k, unit)
        return dirichlet_eigen(form, np.arange(k + 1, n_cells))
    raise ValueError(f"domain must be 'disk' or 'annulus' (got {domain!r})")


def classify(report_or_value) -> str:
    lam = report_or_value.lambda1 if isinstance(report_or_value, EigenReport) else float(report_or_value)
    if abs(lam) < DEAD_BAND:
        return "indeterminate"
    return "nontrivial_regime" if lam < 0 else "trivial_regime"


def _region_indices(problem):
    """Interior node sets of Omega_1 and Omega_2 for Dirichlet comparisons."""
    if problem.kind == "radial":
        k = problem.i_interface
        return np.arange(k), np.arange(k + 1, problem.n - 1)
    r = problem.radius
    g = problem.geometry
    form = problem.form
    # outer rim: nodes with a missing neighbour are treated as boundary
    degree = np.bincount(form.edges.ravel(), minlength=problem.n)
    interior = degree == 4
    inner = np.flatnonzero((r < g.R1) & ~np.isclose(r, g.R1, atol=1e-12))
    outer = np.flatnonzero((r > g.R1) & ~np.isclose(r, g.R1, atol=1e-12) & interior)
    return inner, outer


def lambda1(problem, p: Params | None = None, rtol: float = 1e-8) -> EigenReport:
    """lambda_1(a, m, eps) on the problem's grid, with the min-max bound check."""
    form = problem.form
    p = p or problem.params
    Q, mass = form.quadratic_form()
    shift = -1.0 / p.eps**2 - 1.0
    res = inverse_iteration(Q, mass, shift, rtol=rtol)
    inner, outer = _region_indices(problem)
    lam_in = dirichlet_eigen(form, inner)
    # edges inside Omega_2 carry 1/m; rescale to the plain Laplacian
    lam_out = dirichlet_eigen(form, outer, coefficient_scale=p.m)
    bound = min(lam_in - 1.0 / p.eps**2, lam_out / p.m + p.a / p.eps**2)
    slack = 1e-9 * max(1.0, abs(bound))
    return EigenReport(
        lambda1=res.value,
        eigenfunction=res.vector,
        eigenfunction_norm=float(np.sqrt(res.vector @ (mass * res.vector))),
        residual=res.residual,
        iterations=res.iterations,
        lambda1_dirichlet_inner=lam_in,
        lambda1_dirichlet_outer=lam_out,
        minmax_bound=bound,
        bound_satisfied=bool(res.value <= bound + slack),
        regime=classify(res.value),
    )

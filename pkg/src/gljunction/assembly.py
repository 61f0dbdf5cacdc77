"""Discrete energy G0 on radial, Cartesian and 1-D grids.

Every discretization reduces to the same edge/node form

    E(u) = sum_e c_e (u_j - u_i)^2 + sum_i [ws_i f_s(u_i) + wn_i f_n(u_i)]

with f_s(u) = (1 - u^2)^2 / (2 eps^2) on the superconducting side and
f_n(u) = a u^2 / eps^2 on the normal side.  Gradients and Hessians are exact
derivatives of E, so the interface transmission condition and the outer
no-flux condition hold at a discrete critical point without being imposed.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .geometry import DiskInDisk, signed_distance, signed_distance_radial
from .params import Params


class GridMismatch(ValueError):
    pass


class ResolutionWarning(UserWarning):
    pass


@dataclass(eq=False)
class NodalEnergy:
    """Edge/node energy with exact gradient and Hessian."""

    n: int
    edges: np.ndarray  # (E, 2) node indices
    edge_weight: np.ndarray  # c_e, coefficient included
    w_s: np.ndarray  # nodal quadrature weight on the superconducting side
    w_n: np.ndarray  # nodal quadrature weight on the normal side
    a: float
    eps: float
    chain: bool = False  # edges are (i, i+1) for consecutive i: tridiagonal Hessian
    _K: sp.csr_matrix | None = field(default=None, repr=False)

    def __post_init__(self):
        self.edges = np.asarray(self.edges, dtype=np.int64)
        i, j = self.edges[:, 0], self.edges[:, 1]
        c = np.asarray(self.edge_weight, dtype=float)
        diag = np.bincount(i, c, self.n) + np.bincount(j, c, self.n)
        rows = np.concatenate([i, j, np.arange(self.n)])
        cols = np.concatenate([j, i, np.arange(self.n)])
        vals = np.concatenate([-c, -c, diag])
        # K is the Hessian of the diffusion part (factor 2 included)
        self._K = sp.csr_matrix((2.0 * vals, (rows, cols)), shape=(self.n, self.n))

    @property
    def mass(self) -> np.ndarray:
        return self.w_s + self.w_n

    @property
    def stiffness(self) -> sp.csr_matrix:
        return self._K

    def _check(self, u):
        u = np.asarray(u, dtype=float)
        if u.shape != (self.n,):
            raise GridMismatch(f"field has shape {u.shape}, problem has {self.n} nodes")
        return u

    def potential_terms(self, u):
        e2 = self.eps * self.eps
        f_s = (1.0 - u * u) ** 2 / (2.0 * e2)
        f_n = self.a * u * u / e2
        return f_s, f_n

    def diffusion_energy(self, u) -> float:
        u = self._check(u)
        du = u[self.edges[:, 1]] - u[self.edges[:, 0]]
        return float(np.dot(self.edge_weight, du * du))

    def energy(self, u) -> float:
        u = self._check(u)
        f_s, f_n = self.potential_terms(u)
        return self.diffusion_energy(u) + float(np.dot(self.w_s, f_s) + np.dot(self.w_n, f_n))

    def potential_gradient(self, u):
        e2 = self.eps * self.eps
        return self.w_s * (-2.0 / e2) * (1.0 - u * u) * u + self.w_n * (2.0 * self.a / e2) * u

    def potential_curvature(self, u):
        e2 = self.eps * self.eps
        return self.w_s * (2.0 / e2) * (3.0 * u * u - 1.0) + self.w_n * (2.0 * self.a / e2)

    def gradient(self, u):
        u = self._check(u)
        return self._K @ u + self.potential_gradient(u)

    def hessian(self, u) -> sp.csr_matrix:
        u = self._check(u)
        return (self._K + sp.diags(self.potential_curvature(u))).tocsr()

    def hessian_apply(self, u, v):
        u = self._check(u)
        v = self._check(v)
        return self._K @ v + self.potential_curvature(u) * v

    def hessian_banded(self, u):
        """Upper banded storage (2, n) for scipy.linalg.solveh_banded / eig_banded."""
        if not self.chain:
            raise ValueError("banded Hessian only available for chain grids")
        u = self._check(u)
        ab = np.zeros((2, self.n))
        ab[1] = self._K.diagonal() + self.potential_curvature(u)
        ab[0, 1:] = self._K.diagonal(1)
        return ab

    def quadratic_form(self):
        """Matrices (Q, M) of the linearized form at u=0 and the L2 mass.

        Q = K/2 + diag(-ws/eps^2 + a wn/eps^2), so that phi.Q.phi is the
        discrete Rayleigh numerator.
        """
        e2 = self.eps * self.eps
        pot = -self.w_s / e2 + self.a * self.w_n / e2
        Q = (0.5 * self._K + sp.diags(pot)).tocsr()
        return Q, self.mass


# ---------------------------------------------------------------------------
# 1-D line (profile problem on [-L, L], interface at t=0)


def line_form(nodes: np.ndarray, a: float, m: float) -> NodalEnergy:
    """Trapezoidal discretization of the 1-D functional F (eps = 1)."""
    h = nodes[1] - nodes[0]
    n = nodes.size
    left = nodes[:-1]
    right_cell = left >= -0.5 * h * 1e-9  # cell [t_i, t_i+1] with t_i >= 0
    coef = np.where(right_cell, 1.0, 1.0 / m)
    edges = np.stack([np.arange(n - 1), np.arange(1, n)], axis=1)
    w_s = np.zeros(n)
    w_n = np.zeros(n)
    half = 0.5 * h
    idx = np.arange(n - 1)
    np.add.at(w_s, idx[right_cell], half)
    np.add.at(w_s, idx[right_cell] + 1, half)
    np.add.at(w_n, idx[~right_cell], half)
    np.add.at(w_n, idx[~right_cell] + 1, half)
    return NodalEnergy(n, edges, coef / h, w_s, w_n, a=a, eps=1.0, chain=True)


# ---------------------------------------------------------------------------
# radial grid on the disk of radius R2, interface circle r=R1 on a node


def _on_grid(x: float, h: float, what: str) -> int:
    k = round(x / h)
    if abs(k * h - x) > 1e-9 * max(1.0, abs(x)):
        raise GridMismatch(f"{what}={x} is not a grid node for h={h}")
    return int(k)


@dataclass(eq=False)
class RadialProblem:
    params: Params
    geometry: DiskInDisk
    n_cells: int

    def __post_init__(self):
        g = self.geometry
        self.h = g.R2 / self.n_cells
        self.i_interface = _on_grid(g.R1, self.h, "R1")
        self.r = np.linspace(0.0, g.R2, self.n_cells + 1)
        self.r[self.i_interface] = g.R1
        self.form = _radial_form(self.r, self.h, self.i_interface, self.params)
        self.kind = "radial"

    @classmethod
    def from_spacing(cls, params, geometry, h):
        return cls(params, geometry, _on_grid(geometry.R2, h, "R2"))

    @property
    def n(self) -> int:
        return self.r.size

    @property
    def t(self) -> np.ndarray:
        return signed_distance_radial(self.r, self.geometry)

    def nodes_per_eps(self) -> float:
        return self.params.eps / self.h

    def check_resolution(self, min_per_eps: float = 12.0) -> bool:
        ok = self.nodes_per_eps() >= min_per_eps
        if not ok:
            warnings.warn(
                f"radial grid has {self.nodes_per_eps():.1f} nodes per eps (< {min_per_eps})",
                ResolutionWarning,
                stacklevel=2,
            )
        return ok

    # thin wrappers so callers can treat problems and forms alike
    def energy(self, u):
        return self.form.energy(u)

    def gradient(self, u):
        return self.form.gradient(u)

    def hessian_apply(self, u, v):
        return self.form.hessian_apply(u, v)


def _radial_form(r, h, i_int, p: Params) -> NodalEnergy:
    n = r.size
    r_mid = 0.5 * (r[:-1] + r[1:])
    R1 = r[i_int]
    coef = np.where(r_mid < R1, 1.0, 1.0 / p.m)
    edge_weight = 2.0 * math.pi * r_mid * coef / h
    # dual-cell areas: [r_i - h/2, r_i + h/2] clipped to [0, R2]
    lo = np.clip(r - 0.5 * h, 0.0, None)
    hi = np.clip(r + 0.5 * h, None, r[-1])
    area_in = math.pi * (np.minimum(hi, R1) ** 2 - np.minimum(lo, R1) ** 2)
    area_out = math.pi * (np.maximum(hi, R1) ** 2 - np.maximum(lo, R1) ** 2)
    edges = np.stack([np.arange(n - 1), np.arange(1, n)], axis=1)
    return NodalEnergy(n, edges, edge_weight, area_in, area_out, a=p.a, eps=p.eps, chain=True)


def radial_laplacian_origin_rule(problem: RadialProblem, u) -> float:
    """Diffusive gradient at r=0 divided by the origin's dual-cell area.

    The origin row comes from the single edge (0, 1) with weight
    2 pi r_{1/2} / h = pi, so the value is 8 (u_0 - u_1) / h^2, which is
    -2 * Laplacian(u)(0) for smooth radial u (the 2 comes from the square).
    The condition u'(0) = 0 is natural; no extra stencil is involved.
    """
    u = np.asarray(u, dtype=float)
    diff_grad = (problem.form.stiffness @ u)[0]
    return float(diff_grad / problem.form.mass[0])


# ---------------------------------------------------------------------------
# Cartesian grid on the square hull [-R2, R2]^2, restricted to the disk


@dataclass(eq=False)
class CartesianProblem:
    params: Params
    geometry: DiskInDisk
    h: float

    def __post_init__(self):
        g = self.geometry
        k = math.ceil(g.R2 / self.h - 1e-9)
        xs = self.h * np.arange(-k, k + 1)
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        R = np.hypot(X, Y)
        inside = R <= g.R2 * (1 + 1e-12)
        index = -np.ones(X.shape, dtype=np.int64)
        index[inside] = np.arange(int(inside.sum()))
        self.xs = xs
        self.index = index
        self.x = X[inside]
        self.y = Y[inside]
        self.radius = R[inside]
        self.form = _cartesian_form(self.x, self.y, index, self.h, self.params, g)
        self.kind = "cart"

    @property
    def n(self) -> int:
        return self.x.size

    @property
    def points(self) -> np.ndarray:
        return np.stack([self.x, self.y], axis=1)

    @property
    def t(self) -> np.ndarray:
        return signed_distance(self.points, self.geometry)

    def nodes_per_eps(self) -> float:
        return self.params.eps / self.h

    def check_resolution(self, min_per_eps: float = 12.0) -> bool:
        ok = self.nodes_per_eps() >= min_per_eps
        if not ok:
            warnings.warn(
                f"Cartesian grid has {self.nodes_per_eps():.1f} nodes per eps (< {min_per_eps})",
                ResolutionWarning,
                stacklevel=2,
            )
        return ok

    def energy(self, u):
        return self.form.energy(u)

    def gradient(self, u):
        return self.form.gradient(u)

    def hessian_apply(self, u, v):
        return self.form.hessian_apply(u, v)


def _cartesian_form(x, y, index, h, p: Params, g: DiskInDisk) -> NodalEnergy:
    n = x.size
    R1 = g.R1
    edges = []
    for di, dj in ((1, 0), (0, 1)):
        a_idx = index[: index.shape[0] - di, : index.shape[1] - dj]
        b_idx = index[di:, dj:]
        ok = (a_idx >= 0) & (b_idx >= 0)
        edges.append(np.stack([a_idx[ok], b_idx[ok]], axis=1))
    edges = np.concatenate(edges)
    xm = 0.5 * (x[edges[:, 0]] + x[edges[:, 1]])
    ym = 0.5 * (y[edges[:, 0]] + y[edges[:, 1]])
    coef = np.where(np.hypot(xm, ym) < R1, 1.0, 1.0 / p.m)
    # |grad u|^2 on an edge cell of area h^2 is ((u_j - u_i)/h)^2
    r = np.hypot(x, y)
    on = np.isclose(r, R1, rtol=0, atol=1e-12)
    w_s = np.where(on, 0.5 * h * h, np.where(r < R1, h * h, 0.0))
    w_n = np.where(on, 0.5 * h * h, np.where(r > R1, h * h, 0.0))
    return NodalEnergy(n, edges, coef, w_s, w_n, a=p.a, eps=p.eps)


def interpolate_radial_to_cartesian(u_radial, radial: RadialProblem, cart: CartesianProblem):
    if radial.params != cart.params or radial.geometry != cart.geometry:
        raise GridMismatch("radial and Cartesian problems differ in parameters or geometry")
    u_radial = np.asarray(u_radial, dtype=float)
    if u_radial.shape != (radial.n,):
        raise GridMismatch("radial field does not match its problem")
    return np.interp(cart.radius, radial.r, u_radial)


def sample_profile(problem, profile_fn) -> np.ndarray:
    """Evaluate U(t(x)/eps) at the problem's nodes."""
    return profile_fn(problem.t / problem.params.eps)

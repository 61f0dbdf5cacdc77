"""Damped Newton minimization of a NodalEnergy.

Chain (tridiagonal) problems use banded Cholesky; everything else uses a
Jacobi-preconditioned conjugate gradient that stops at negative curvature.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .assembly import NodalEnergy

log = logging.getLogger(__name__)


class NonConvergence(RuntimeError):
    pass


class DivergedEnergy(RuntimeError):
    pass


@dataclass
class NewtonResult:
    u: np.ndarray
    converged: bool
    iterations: int
    grad_norm: float
    energy: float
    history: list = field(default_factory=list)  # (iteration, energy, grad_norm, step)
    fallbacks: int = 0
    positive_definite: bool | None = None


def _energy_slack(E: float) -> float:
    return 1e-12 * (abs(E) + 1.0)


def _lowest_eigpair_banded(ab):
    w, v = sla.eig_banded(ab, lower=False, select="i", select_range=(0, 0))
    return float(w[0]), v[:, 0]


def _banded_direction(form: NodalEnergy, u, g):
    """Newton direction, shifted when the Hessian is not positive definite."""
    ab = form.hessian_banded(u)
    try:
        return -sla.solveh_banded(ab, g), True, None
    except np.linalg.LinAlgError:
        pass
    lam, vec = _lowest_eigpair_banded(ab)
    shift = 1.1 * abs(lam) + 1e-8 * np.max(np.abs(ab[1]))
    ab_s = ab.copy()
    ab_s[1] += shift
    return -sla.solveh_banded(ab_s, g), False, (lam, vec)


def pcg_negative_curvature(apply_H, diag, g, rtol, max_iter):
    """Solve H d = -g by Jacobi-PCG, stopping early on negative curvature.

    Returns (d, hit_negative, p) where p is the offending direction when
    negative curvature was met.
    """
    inv_diag = 1.0 / np.where(diag > 0, diag, np.abs(diag) + 1.0)
    x = np.zeros_like(g)
    r = -g.copy()
    z = inv_diag * r
    p = z.copy()
    rz = float(r @ z)
    r0 = np.sqrt(rz)
    for _ in range(max_iter):
        Hp = apply_H(p)
        curv = float(p @ Hp)
        if curv <= 0.0:
            if not x.any():
                return z, True, p
            return x, True, p
        alpha = rz / curv
        x += alpha * p
        r -= alpha * Hp
        z = inv_diag * r
        rz_new = float(r @ z)
        if np.sqrt(max(rz_new, 0.0)) <= rtol * r0:
            break
        p = z + (rz_new / rz) * p
        rz = rz_new
    return x, False, None


def minimize(
    form: NodalEnergy,
    u0,
    tol: float = 1e-9,
    max_iter: int = 200,
    linear: str = "auto",
    cg_max_iter: int = 5000,
) -> NewtonResult:
    """Minimize `form.energy` from `u0` until the sup-norm of the gradient is below `tol`."""
    if linear == "auto":
        linear = "banded" if form.chain else "cg"
    u = np.array(u0, dtype=float)
    E = form.energy(u)
    g = form.gradient(u)
    gnorm = float(np.max(np.abs(g)))
    g0 = max(gnorm, 1e-300)
    history = [(0, E, gnorm, 0.0)]
    fallbacks = 0
    pd = None

    for it in range(1, max_iter + 1):
        neg = None
        if linear == "banded":
            d, pd, neg = _banded_direction(form, u, g)
        else:
            diag = form.stiffness.diagonal() + form.potential_curvature(u)
            rtol = min(0.1, max(1e-10, np.sqrt(gnorm / g0)))
            d, hit, p = pcg_negative_curvature(
                lambda v: form.hessian_apply(u, v), diag, g, rtol, cg_max_iter
            )
            pd = not hit
            if hit:
                neg = (-1.0, p)

        if gnorm < tol:
            if pd:
                # one last full Newton correction if it does not raise the energy
                u_try = u + d
                E_try = form.energy(u_try)
                g_try = form.gradient(u_try)
                gn_try = float(np.max(np.abs(g_try)))
                if E_try <= E + _energy_slack(E) and gn_try <= gnorm:
                    u, E, g, gnorm = u_try, E_try, g_try, gn_try
                    history.append((it, E, gnorm, float(np.max(np.abs(d)))))
                return NewtonResult(u, True, it, gnorm, E, history, fallbacks, True)
            # critical point that is not a minimum: leave along negative curvature
            vec = neg[1] if neg is not None else None
            if vec is None:
                return NewtonResult(u, True, it, gnorm, E, history, fallbacks, pd)
            u, E, step = _saddle_escape(form, u, E, vec)
            g = form.gradient(u)
            gnorm = float(np.max(np.abs(g)))
            history.append((it, E, gnorm, step))
            fallbacks += 1
            continue

        slope = float(g @ d)
        if slope >= 0.0:
            d = -g / np.maximum(form.mass, 1e-300)
            slope = float(g @ d)
            fallbacks += 1
        if not pd:
            fallbacks += 1

        alpha = 1.0
        accepted = False
        while alpha > 1e-14:
            u_new = u + alpha * d
            E_new = form.energy(u_new)
            if E_new <= E + 1e-4 * alpha * slope + _energy_slack(E):
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            if gnorm < 10 * tol:
                # roundoff floor of the energy reached
                return NewtonResult(u, False, it, gnorm, E, history, fallbacks, pd)
            raise DivergedEnergy(
                f"line search failed at iteration {it} (energy {E:.17g}, grad {gnorm:.3e})"
            )
        step = alpha * float(np.max(np.abs(d)))
        u, E = u_new, E_new
        g = form.gradient(u)
        gnorm = float(np.max(np.abs(g)))
        history.append((it, E, gnorm, step))
        log.debug("newton it=%d E=%.17g |g|=%.3e alpha=%.3g", it, E, gnorm, alpha)

    return NewtonResult(u, gnorm < tol, max_iter, gnorm, E, history, fallbacks, pd)


def _saddle_escape(form, u, E, vec):
    """Step off a saddle along a negative-curvature direction."""
    vec = vec / max(np.max(np.abs(vec)), 1e-300)
    scale = 0.1
    while scale > 1e-8:
        for cand in (u + scale * vec, u - scale * vec):
            E_c = form.energy(cand)
            if E_c < E - _energy_slack(E):
                return cand, E_c, scale
        scale *= 0.5
    raise DivergedEnergy("no energy decrease along the negative-curvature direction")

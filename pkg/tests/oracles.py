"""Independent reference computations used by the tests.

Nothing here imports the package's numerical code paths.
"""
import math

import numpy as np


def bessel_j0_series(x: float, terms: int = 60) -> float:
    s, term = 0.0, 1.0
    for k in range(terms):
        if k:
            term *= -(x * x / 4.0) / (k * k)
        s += term
    return s


def first_bessel_zero(lo: float = 2.0, hi: float = 3.0) -> float:
    flo = bessel_j0_series(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = bessel_j0_series(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _branches(a, m):
    beta = (math.sqrt(2 * m) + math.sqrt(a + 2 * m)) / math.sqrt(a)
    A = (beta - 1) / (beta + 1)

    def pos(t):
        e = np.exp(math.sqrt(2) * np.clip(t, -300, 300))
        return (beta * e - 1) / (beta * e + 1)

    def neg(t):
        return A * np.exp(math.sqrt(a * m) * np.minimum(t, 300))

    return pos, neg


def profile_closed_form(t, a, m):
    """U by direct transcription of the piecewise formula (no tanh rewriting)."""
    pos, neg = _branches(a, m)
    t = np.asarray(t, dtype=float)
    return np.where(t >= 0, pos(t), neg(t))


def simpson(f, lo, hi, n=200000):
    """Composite Simpson rule; a deliberately different rule from the package's Gauss-Legendre."""
    if n % 2:
        n += 1
    x = np.linspace(lo, hi, n + 1)
    y = f(x)
    h = (hi - lo) / n
    return h / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum())


def energy_density_fd(t, a, m, side, dt=1e-4):
    """Integrand of c1 on one side of the interface, with U' by central differences
    of the (smoothly extended) branch formula.  side=+1: t>0, side=-1: t<0."""
    pos, neg = _branches(a, m)
    t = np.asarray(t, dtype=float)
    f = pos if side > 0 else neg
    du = (f(t + dt) - f(t - dt)) / (2 * dt)
    u = f(t)
    if side > 0:
        return du**2 + 0.5 * (1 - u**2) ** 2
    return du**2 / m + a * u**2


def c_oracle(a, m, T=30.0, n=200000):
    """(c1_pos, c1_neg, c2_pos, c2_neg) by Simpson on finite-difference integrands."""
    fp = lambda t: energy_density_fd(t, a, m, +1)
    fn = lambda t: energy_density_fd(t, a, m, -1)
    Tn = max(T / math.sqrt(a * m), 1.0)
    return (
        simpson(fp, 0.0, T, n),
        simpson(fn, -Tn, 0.0, n),
        simpson(lambda t: t * fp(t), 0.0, T, n),
        simpson(lambda t: t * fn(t), -Tn, 0.0, n),
    )


def directional_fd(f, u, v, d=1e-3):
    """Five-point central difference of f along v.

    Exact (up to roundoff) when f restricted to the line is a polynomial of
    degree <= 4, which holds for the discrete energies here.
    """
    fp1, fm1 = f(u + d * v), f(u - d * v)
    fp2, fm2 = f(u + 2 * d * v), f(u - 2 * d * v)
    return (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * d)

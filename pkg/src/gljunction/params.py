"""Physical parameters of the junction model and closed-form profile constants."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace


class ParameterError(ValueError):
    """Raised when a parameter set violates its positivity constraints."""


@dataclass(frozen=True)
class Params:
    """Junction parameters.

    a   potential strength on the normal side
    m   mass / conductivity ratio (diffusion coefficient 1/m on the normal side)
    eps Ginzburg-Landau length
    """

    a: float
    m: float
    eps: float = 1.0

    def __post_init__(self):
        for name in ("a", "m", "eps"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be > 0 (got {value!r})")

    def with_eps(self, eps: float) -> "Params":
        return replace(self, eps=eps)


@dataclass(frozen=True)
class ProfileConstants:
    ell: float
    beta: float
    A: float
    gamma: float
    b: float
    c1_closed: float
    c2_closed: float
    # filled by profile1d quadrature; NaN means "not computed"
    c1_quad: float = field(default=math.nan)
    c2_quad: float = field(default=math.nan)

    @property
    def quadrature_set(self) -> bool:
        return not (math.isnan(self.c1_quad) or math.isnan(self.c2_quad))

    def as_dict(self) -> dict:
        out = {
            "ell": self.ell,
            "beta": self.beta,
            "A": self.A,
            "gamma": self.gamma,
            "b": self.b,
            "c1_closed": self.c1_closed,
            "c2_closed": self.c2_closed,
            "c1_quad": self.c1_quad,
            "c2_quad": self.c2_quad,
        }
        if self.quadrature_set:
            out["c1_abs_diff"] = abs(self.c1_quad - self.c1_closed)
            out["c2_abs_diff"] = abs(self.c2_quad - self.c2_closed)
        return out


def beta_from_am(a: float, m: float) -> float:
    return (math.sqrt(2.0 * m) + math.sqrt(a + 2.0 * m)) / math.sqrt(a)


def beta_from_ell(ell: float) -> float:
    return (1.0 + math.sqrt(1.0 + ell * ell)) / ell


def c1_first_closed(beta: float) -> float:
    """Superconducting-side part of c1 in closed form."""
    return 4.0 * math.sqrt(2.0) * (3.0 * beta + 1.0) / (3.0 * (beta + 1.0) ** 3)


def c2_first_closed(beta: float) -> float:
    """Superconducting-side part of c2 in closed form."""
    return (4.0 / 3.0) * (math.log1p(1.0 / beta) - beta / (1.0 + beta) ** 2)


def c1_second_closed(a: float, m: float, A: float) -> float:
    """Normal-side part of c1 as published (agrees with the integral only at m=1)."""
    return 0.5 * math.sqrt(a / m) * (1.0 + 1.0 / m) * A * A


def c2_second_closed(m: float, A: float) -> float:
    """Normal-side part of c2 as published (sign differs from the integral)."""
    return 0.25 * A * A * (1.0 + 1.0 / m)


def derive_constants(p: Params) -> ProfileConstants:
    a, m = p.a, p.m
    ell = math.sqrt(a / (2.0 * m))
    beta = beta_from_am(a, m)
    # (beta-1)/(beta+1) written without cancellation for beta close to 1
    s2m, sa2m, sa = math.sqrt(2.0 * m), math.sqrt(a + 2.0 * m), math.sqrt(a)
    A = (s2m + sa2m - sa) / (s2m + sa2m + sa)
    gamma = math.sqrt(a / m)
    b = math.sqrt(m / a)
    return ProfileConstants(
        ell=ell,
        beta=beta,
        A=A,
        gamma=gamma,
        b=b,
        c1_closed=c1_first_closed(beta) + c1_second_closed(a, m, A),
        c2_closed=c2_first_closed(beta) + c2_second_closed(m, A),
    )

"""Generalized Ginzburg-Landau junction model: 1-D profile, eigenvalue criterion,
nonlinear solver with transmission conditions, and energy asymptotics."""

from .params import Params, ProfileConstants, derive_constants
from .geometry import DiskInDisk
from .assembly import CartesianProblem, RadialProblem
from .profile1d import Profile1D, constants_with_quadrature
from .solver import Init, SolveReport, solve
from .eigen import EigenReport, lambda1
from .asymptotics import FitReport, energy_expansion_fit

__all__ = [
    "CartesianProblem",
    "DiskInDisk",
    "EigenReport",
    "FitReport",
    "Init",
    "Params",
    "Profile1D",
    "ProfileConstants",
    "RadialProblem",
    "SolveReport",
    "constants_with_quadrature",
    "derive_constants",
    "energy_expansion_fit",
    "lambda1",
    "solve",
]

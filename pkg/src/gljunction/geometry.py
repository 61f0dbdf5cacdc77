"""Disk-in-disk geometry: signed distance to the interface, curvature, boundary coordinates."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class OutOfTube(ValueError):
    pass


@dataclass(frozen=True)
class DiskInDisk:
    """Omega_1 = disk of radius R1 inside Omega = disk of radius R2."""

    R1: float
    R2: float

    def __post_init__(self):
        if not (0 < self.R1 < self.R2):
            raise ValueError(f"need 0 < R1 < R2 (got R1={self.R1}, R2={self.R2})")

    @property
    def interface_length(self) -> float:
        return 2.0 * math.pi * self.R1

    @property
    def area_inner(self) -> float:
        return math.pi * self.R1**2

    @property
    def area_outer(self) -> float:
        return math.pi * (self.R2**2 - self.R1**2)

    @property
    def area(self) -> float:
        return math.pi * self.R2**2


def signed_distance(x, g: DiskInDisk):
    """t(x): distance to the interface, positive inside Omega_1.

    `x` is a point (2,) or an array of points (..., 2).
    """
    x = np.asarray(x, dtype=float)
    r = np.hypot(x[..., 0], x[..., 1])
    return g.R1 - r


def signed_distance_radial(r, g: DiskInDisk):
    return g.R1 - np.asarray(r, dtype=float)


def curvature(s, g: DiskInDisk):
    return np.full_like(np.asarray(s, dtype=float), 1.0 / g.R1)


def total_curvature(g: DiskInDisk, n: int = 4096) -> float:
    # trapezoid on a periodic integrand is spectrally accurate
    s = np.linspace(0.0, g.interface_length, n, endpoint=False)
    return float(np.sum(curvature(s, g)) * g.interface_length / n)


@dataclass(frozen=True)
class BoundaryCoords:
    g: DiskInDisk
    t0: float

    def __post_init__(self):
        if not (0 < self.t0 < self.g.R1):
            raise ValueError("tube half-width must satisfy 0 < t0 < R1")

    def _check(self, t):
        if np.any(np.abs(np.asarray(t)) >= self.t0):
            raise OutOfTube(f"|t| must be < t0={self.t0}")

    def point_on_interface(self, s):
        s = np.asarray(s, dtype=float)
        R1 = self.g.R1
        return np.stack([R1 * np.cos(s / R1), R1 * np.sin(s / R1)], axis=-1)

    def inward_shift(self, s):
        """Unit inner normal -nu_1(s)."""
        s = np.asarray(s, dtype=float)
        R1 = self.g.R1
        return -np.stack([np.cos(s / R1), np.sin(s / R1)], axis=-1)

    def boundary_map(self, s, t):
        """Phi(s, t) = M(s) - t nu_1(s)."""
        self._check(t)
        t = np.asarray(t, dtype=float)
        return self.point_on_interface(s) + t[..., None] * self.inward_shift(s)

    def jacobian(self, s, t):
        self._check(t)
        return 1.0 - np.asarray(t, dtype=float) * curvature(s, self.g)


def boundary_map(s, t, g: DiskInDisk, t0: float | None = None):
    return BoundaryCoords(g, t0 if t0 is not None else 0.5 * g.R1).boundary_map(s, t)


def jacobian(s, t, g: DiskInDisk, t0: float | None = None):
    return BoundaryCoords(g, t0 if t0 is not None else 0.5 * g.R1).jacobian(s, t)


def tube_mask(points, threshold: float, g: DiskInDisk):
    """Indices of points with |t(x)| < threshold.

    `points` may be radii (1-D array) or planar points (..., 2).
    """
    pts = np.asarray(points, dtype=float)
    t = signed_distance_radial(pts, g) if pts.ndim == 1 else signed_distance(pts, g)
    return np.flatnonzero(np.abs(t) < threshold)


def grad_norm_check(g: DiskInDisk, h: float, box: float | None = None):
    """Max deviation of |grad t| from 1 by central differences off the interface and origin."""
    box = box if box is not None else g.R2
    xs = np.arange(-box, box + 0.5 * h, h)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    T = signed_distance(np.stack([X, Y], axis=-1), g)
    tx = (T[2:, 1:-1] - T[:-2, 1:-1]) / (2 * h)
    ty = (T[1:-1, 2:] - T[1:-1, :-2]) / (2 * h)
    r = np.hypot(X[1:-1, 1:-1], Y[1:-1, 1:-1])
    keep = r > 0.25 * g.R1  # t is not differentiable at the centre
    dev = np.abs(np.hypot(tx, ty) - 1.0)[keep]
    return float(dev.max())

"""Uniform 1D grids, weighted norms, and the discrete antiderivative.

Periodic grids omit the duplicate endpoint (dx = 2L/N) so trapezoid
quadrature and centered differences satisfy summation-by-parts exactly.
Compact-support grids include both endpoints (dx = 2L/(N-1)) with the
usual half-weight trapezoid ends; derivative stencils fall back to
second-order one-sided forms there.
"""

from dataclasses import dataclass, field

import numpy as np

BOUNDARY_TOL = 1e-10

_BCS = ("periodic", "compact_support")


@dataclass(frozen=True)
class Grid1D:
    L: float
    N: int
    bc: str = "periodic"
    x: np.ndarray = field(init=False, repr=False)
    dx: float = field(init=False)
    qw: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError(f"L must be positive, got {self.L}")
        if self.N < 16:
            raise ValueError(f"N must be >= 16, got {self.N}")
        if self.bc not in _BCS:
            raise ValueError(f"bc must be one of {_BCS}, got {self.bc!r}")
        if self.bc == "periodic":
            dx = 2.0 * self.L / self.N
            x = -self.L + dx * np.arange(self.N)
            qw = np.full(self.N, dx)
        else:
            x = np.linspace(-self.L, self.L, self.N)
            dx = x[1] - x[0]
            qw = np.full(self.N, dx)
            qw[0] = qw[-1] = dx / 2.0
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "dx", float(dx))
        object.__setattr__(self, "qw", qw)

    @property
    def periodic(self):
        return self.bc == "periodic"


def d_dx(grid, f):
    """Second-order first derivative; one-sided at compact boundaries.

    Accepts (N,) or (N, k) arrays and differentiates along axis 0.
    """
    f = np.asarray(f, dtype=float)
    dx = grid.dx
    if grid.periodic:
        return (np.roll(f, -1, axis=0) - np.roll(f, 1, axis=0)) / (2.0 * dx)
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - f[:-2]) / (2.0 * dx)
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx)
    out[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * dx)
    return out


def fourth_difference(grid, f):
    """Undivided fourth difference, the stabilization stencil.

    Periodic grids wrap; compact grids apply it on interior nodes only
    (two zero rows at each end), keeping the boundary stencils untouched.
    """
    f = np.asarray(f, dtype=float)
    if grid.periodic:
        return (
            np.roll(f, -2, axis=0)
            - 4.0 * np.roll(f, -1, axis=0)
            + 6.0 * f
            - 4.0 * np.roll(f, 1, axis=0)
            + np.roll(f, 2, axis=0)
        )
    out = np.zeros_like(f)
    out[2:-2] = f[4:] - 4.0 * f[3:-1] + 6.0 * f[2:-2] - 4.0 * f[1:-3] + f[:-4]
    return out


@dataclass(frozen=True)
class WeightSpec:
    """Spatial weight: |x|^mu (power) or log^q(1 + |x|) (logarithmic)."""

    kind: str
    mu: float = 0.0
    q: float = 0.0

    def __post_init__(self):
        if self.kind == "power":
            if self.mu < 0:
                raise ValueError("power weight needs mu >= 0")
        elif self.kind == "logarithmic":
            if self.q <= 0:
                raise ValueError("logarithmic weight needs q > 0")
        else:
            raise ValueError(f"unknown weight kind {self.kind!r}")

    def values(self, x):
        ax = np.abs(np.asarray(x, dtype=float))
        if self.kind == "power":
            return ax**self.mu
        return np.log1p(ax) ** self.q


def _sq_integrand(f, weight_values=None):
    f = np.asarray(f, dtype=float)
    s = f * f if f.ndim == 1 else (f * f).sum(axis=1)
    if weight_values is not None:
        s = weight_values * weight_values * s
    return s


def l2_norm(grid, f, weight=None):
    """Weighted L2 norm by trapezoid: sqrt(sum qw * w(x)^2 * |f|^2)."""
    wv = weight.values(grid.x) if weight is not None else None
    return float(np.sqrt(grid.qw @ _sq_integrand(f, wv)))


def inner(grid, f, g, weight=None):
    """Weighted L2 pairing; components summed before quadrature."""
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    s = f * g if f.ndim == 1 else (f * g).sum(axis=1)
    if weight is not None:
        wv = weight.values(grid.x)
        s = wv * wv * s
    return float(grid.qw @ s)


def h1_norm(grid, f, weight=None):
    a = l2_norm(grid, f, weight)
    b = l2_norm(grid, d_dx(grid, f), weight)
    return float(np.sqrt(a * a + b * b))


def lr_norm(grid, f, p):
    """L^p norm by trapezoid, p >= 1; components contribute |f_k|^p."""
    if p < 1:
        raise ValueError("p must be >= 1")
    f = np.asarray(f, dtype=float)
    s = np.abs(f) ** p if f.ndim == 1 else (np.abs(f) ** p).sum(axis=1)
    return float((grid.qw @ s) ** (1.0 / p))


def antiderivative(grid, f):
    """Cumulative trapezoid primitive from the left edge, plus total mass.

    Returns (F, mass) where F[0] = 0 and mass is the quadrature total
    of f (one value per component).
    """
    f = np.asarray(f, dtype=float)
    steps = 0.5 * (f[1:] + f[:-1]) * grid.dx
    F = np.zeros_like(f)
    F[1:] = np.cumsum(steps, axis=0)
    mass = grid.qw @ f
    return F, mass


def boundary_amplitude(grid, f):
    """Max |f| on the two boundary nodes (compact-support escape monitor)."""
    f = np.asarray(f, dtype=float)
    return float(max(np.abs(f[0]).max(), np.abs(f[-1]).max()))


def occupancy_ok(grid, speed, T, support_radius, fraction=0.9):
    """Pre-flight rule for compact runs: signal must stay inside 0.9 L."""
    return speed * T + support_radius <= fraction * grid.L

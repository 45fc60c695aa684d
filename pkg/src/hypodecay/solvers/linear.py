"""Time integration of the linear partially dissipative system.

State layout: U is (N, n) with the undamped components first.  The
damping block acts stiffly for large kappa, so it is split off and
applied exactly: half-step matrix exponential, RK4 on the advection
(centered differences), half-step exponential again — second order
overall, with no time-step restriction from the damping strength.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ..analysis import TimeSeries
from ..corrector import lyapunov_value
from ..errors import CflViolation, DomainEscape
from ..grids import BOUNDARY_TOL, boundary_amplitude, d_dx, fourth_difference, inner, l2_norm
from ..linalg import jacobi_eigensystem, expm_sym

CFL_MAX = 0.7


@dataclass(frozen=True)
class LinearSim:
    spec: object
    grid: object
    cfl: float = 0.4
    nu: float = 0.0
    rho_A: float = field(init=False)
    dt: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.cfl <= CFL_MAX:
            raise CflViolation(f"cfl must lie in (0, {CFL_MAX}], got {self.cfl}")
        if self.nu < 0.0:
            raise ValueError("stabilization strength nu must be nonnegative")
        w, _ = jacobi_eigensystem(self.spec.A)
        rho = float(np.abs(w).max())
        object.__setattr__(self, "rho_A", rho)
        speed = rho if rho > 0.0 else 1.0
        object.__setattr__(self, "dt", self.cfl * self.grid.dx / speed)


def damping_half_step(spec, dt):
    """Exact propagator exp(-B dt/2) of the relaxation block."""
    B = np.zeros((spec.n, spec.n))
    B[spec.n1:, spec.n1:] = spec.D
    return expm_sym(-0.5 * dt * B)


def advection_rhs(sim, U):
    dU = -d_dx(sim.grid, U) @ sim.spec.A.T
    if sim.nu > 0.0:
        dU -= (sim.nu / sim.grid.dx) * fourth_difference(sim.grid, U)
    return dU


def step_linear(U, sim, dt=None, half=None):
    """One Strang-split step: exact damping, RK4 advection, exact damping."""
    if dt is None:
        dt = sim.dt
    if dt > sim.dt * (1.0 + 1e-12):
        raise CflViolation(f"dt {dt:.3e} exceeds the advective limit {sim.dt:.3e}")
    if half is None:
        half = damping_half_step(sim.spec, dt)
    U = U @ half.T
    k1 = advection_rhs(sim, U)
    k2 = advection_rhs(sim, U + 0.5 * dt * k1)
    k3 = advection_rhs(sim, U + 0.5 * dt * k2)
    k4 = advection_rhs(sim, U + dt * k3)
    U = U + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return U @ half.T


def simulate_linear(sim, U0, T, sample_stride=1, coeffs=None, weight=None,
                    wave=None, snapshot_times=()):
    """Run to time T, recording norm channels every sample_stride steps.

    Optional observers: `coeffs` adds the modified-energy channel,
    `weight` a spatially weighted norm, `wave` the antiderivative
    wave-energy monitor (requires zero-mean undamped data).  Returns the
    recorded series and a dict of state snapshots keyed by time.
    """
    spec, grid = sim.spec, sim.grid
    U = np.array(U0, dtype=float)
    if U.shape != (grid.N, spec.n):
        raise ValueError(f"U0 must have shape ({grid.N}, {spec.n}), got {U.shape}")
    if T <= 0.0:
        raise ValueError("T must be positive")
    nsteps = max(1, math.ceil(T / sim.dt - 1e-12))
    dt = T / nsteps
    half = damping_half_step(spec, dt)
    if wave is not None:
        wave.check_mass(grid, U[:, : spec.n1])
    escape_tol = BOUNDARY_TOL * max(1.0, float(np.abs(U).max()))
    snap_steps = {int(round(ts / dt)): float(ts) for ts in snapshot_times}
    snapshots = {}

    times, chans = [], {}

    def record(j, U):
        t = j * dt
        dUx = d_dx(grid, U)
        U2 = U[:, spec.n1:]
        row = {
            "l2": l2_norm(grid, U),
            "u1_l2": l2_norm(grid, U[:, : spec.n1]),
            "u2_l2": l2_norm(grid, U2),
            "dx_l2": l2_norm(grid, dUx),
            "dissipation": 2.0 * inner(grid, U2 @ spec.D.T, U2),
        }
        if coeffs is not None:
            row["lyapunov"] = lyapunov_value(spec, coeffs, grid, U, t)
        if weight is not None:
            row["weighted_l2"] = l2_norm(grid, U, weight=weight)
        if wave is not None:
            we, wh = wave.record(grid, t, U, spec.n1)
            row["wave_energy"] = we
            row["wave_dissipation"] = wh
        times.append(t)
        for k, v in row.items():
            chans.setdefault(k, []).append(v)
        if not grid.periodic:
            b = boundary_amplitude(grid, U)
            if b > escape_tol:
                raise DomainEscape(
                    f"boundary amplitude {b:.3e} at t={t:.4g} exceeds {escape_tol:.1e}"
                )

    record(0, U)
    if 0 in snap_steps:
        snapshots[snap_steps[0]] = U.copy()
    for j in range(1, nsteps + 1):
        U = step_linear(U, sim, dt=dt, half=half)
        if j % sample_stride == 0 or j == nsteps:
            record(j, U)
        if j in snap_steps:
            snapshots[snap_steps[j]] = U.copy()

    series = TimeSeries(
        t=np.array(times),
        channels={k: np.array(v) for k, v in chans.items()},
        meta={
            "dt_step": dt,
            "n_steps": nsteps,
            "sample_stride": sample_stride,
            "scheme": "strang-exp/rk4-centered",
            "nu": sim.nu,
        },
    )
    return series, snapshots

"""Damped compressible flow in symmetrized sound-speed variables.

The density equation is traded for the scaled sound speed
c = 2 sqrt(P'(rho)) / (gamma - 1), which makes the first-order system
symmetric and keeps the quadratic coupling explicit:

    c~_t + u c~_x + (gamma-1)/2 (c~ + cbar) u_x  = 0
    u_t  + u u_x  + (gamma-1)/2 (c~ + cbar) c~_x = -lambda u

with c~ = c - cbar the deviation from the background.  Friction is
split off and applied exactly (half-step factors exp(-lambda dt/2));
RK4 handles the advective part.  A fourth-difference floor keeps the
quadratic terms from ringing at the grid scale.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..analysis import TimeSeries
from ..errors import CflViolation, DomainEscape, SmallnessBreached, VacuumApproached
from ..grids import BOUNDARY_TOL, boundary_amplitude, d_dx, fourth_difference, l2_norm

CFL_MAX = 0.7
VACUUM_FLOOR_REL = 1e-6
SPEED_HEADROOM = 1.25


@dataclass(frozen=True)
class EulerSpec:
    """Gas-law description: P(rho) = rho^gamma, friction strength lam."""

    gamma: float = 2.0
    rho_bar: float = 1.0
    lam: float = 1.0
    form: str = "symmetrized_cu"

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")
        if not self.rho_bar > 0.0:
            raise ValueError("background density must be positive")
        if not self.lam > 0.0:
            raise ValueError("friction strength must be positive")
        if self.form not in ("symmetrized_cu", "momentum_nm"):
            raise ValueError(f"unknown form {self.form!r}")

    def pressure(self, rho):
        return rho**self.gamma

    def dpressure(self, rho):
        return self.gamma * rho ** (self.gamma - 1.0)

    def sound(self, rho):
        """Scaled sound speed 2 sqrt(P') / (gamma - 1)."""
        return 2.0 / (self.gamma - 1.0) * np.sqrt(self.dpressure(rho))

    @property
    def c_bar(self):
        return float(self.sound(self.rho_bar))

    def density_of_sound(self, c):
        base = (self.gamma - 1.0) * c / (2.0 * np.sqrt(self.gamma))
        return base ** (2.0 / (self.gamma - 1.0))


def simulate_euler(espec, grid, rho0, u0, T, cfl=0.4, nu=0.0, sample_stride=1,
                   smallness_cap=0.5, weight=None, wave=None, snapshot_times=()):
    """Integrate to T; record decay channels on the (rho - rho_bar, u) pair.

    Channels: n_l2, u_l2, dx_l2 (joint gradient), h2_sym (sound-speed
    variables), h2_raw (physical perturbation, smallness-monitored),
    x_func (a-priori functional with trapezoid time quadrature), mass_n,
    plus optional weighted and wave-energy channels.  Aborts with
    SmallnessBreached / VacuumApproached / DomainEscape diagnostics.
    """
    if T <= 0.0:
        raise ValueError("T must be positive")
    if not 0.0 < cfl <= CFL_MAX:
        raise CflViolation(f"cfl must lie in (0, {CFL_MAX}], got {cfl}")
    rho = np.array(rho0, dtype=float)
    u = np.array(u0, dtype=float)
    if rho.shape != (grid.N,) or u.shape != (grid.N,):
        raise ValueError("rho0, u0 must be scalar fields on the grid")
    floor = VACUUM_FLOOR_REL * espec.rho_bar
    if rho.min() <= floor:
        raise VacuumApproached(f"initial density reaches {rho.min():.3e}")

    half_g = 0.5 * (espec.gamma - 1.0)
    c_bar = espec.c_bar
    ct = espec.sound(rho) - c_bar
    c_floor = espec.sound(floor) - c_bar

    speed0 = float((np.abs(u) + half_g * (ct + c_bar)).max())
    speed_ref = SPEED_HEADROOM * max(speed0, half_g * c_bar)
    dt_limit = cfl * grid.dx / speed_ref
    nsteps = max(1, math.ceil(T / dt_limit - 1e-12))
    dt = T / nsteps
    decay_half = math.exp(-0.5 * espec.lam * dt)
    dx = grid.dx

    if wave is not None:
        wave.check_mass(grid, rho - espec.rho_bar)

    def rhs(ct, u):
        ctx = d_dx(grid, ct)
        ux = d_dx(grid, u)
        c = ct + c_bar
        dct = -(u * ctx + half_g * c * ux)
        du = -(u * ux + half_g * c * ctx)
        if nu > 0.0:
            dct -= (nu / dx) * fourth_difference(grid, ct)
            du -= (nu / dx) * fourth_difference(grid, u)
        return dct, du

    escape_tol = BOUNDARY_TOL * max(
        1.0, float(np.abs(rho - espec.rho_bar).max()), float(np.abs(u).max())
    )
    snap_steps = {int(round(ts / dt)): float(ts) for ts in snapshot_times}
    snapshots = {}
    times, chans = [], {}
    x_integral = 0.0
    prev_integrand = None
    prev_t = None

    def record(j, ct, u):
        nonlocal x_integral, prev_integrand, prev_t
        t = j * dt
        c = ct + c_bar
        rho_now = espec.density_of_sound(c)
        n = rho_now - espec.rho_bar
        dn, du_ = d_dx(grid, n), d_dx(grid, u)
        d2n, d2u = d_dx(grid, dn), d_dx(grid, du_)
        dct = d_dx(grid, ct)
        d2ct = d_dx(grid, dct)
        n_l2 = l2_norm(grid, n)
        u_l2 = l2_norm(grid, u)
        dn2 = float(grid.qw @ (dn * dn))
        du2 = float(grid.qw @ (du_ * du_))
        d2n2 = float(grid.qw @ (d2n * d2n))
        d2u2 = float(grid.qw @ (d2u * d2u))
        dx_l2 = math.sqrt(dn2 + du2)
        h2_raw = math.sqrt(n_l2**2 + u_l2**2 + dn2 + du2 + d2n2 + d2u2)
        h2_sym = math.sqrt(
            float(grid.qw @ (ct * ct + u * u))
            + float(grid.qw @ (dct * dct + du_ * du_))
            + float(grid.qw @ (d2ct * d2ct + d2u * d2u))
        )
        integrand = (dn2 + d2n2) + (u_l2**2 + du2 + d2u2) + t * du2
        if prev_t is not None:
            x_integral += 0.5 * (t - prev_t) * (integrand + prev_integrand)
        prev_t, prev_integrand = t, integrand
        x_func = h2_raw**2 + t * u_l2**2 + t * dx_l2**2 + x_integral
        row = {
            "n_l2": n_l2,
            "u_l2": u_l2,
            "dx_l2": dx_l2,
            "h2_sym": h2_sym,
            "h2_raw": h2_raw,
            "x_func": x_func,
            "mass_n": float(grid.qw @ n),
        }
        if weight is not None:
            row["weighted_l2"] = l2_norm(grid, np.column_stack([n, u]), weight=weight)
        if wave is not None:
            state = np.column_stack([n, rho_now * u])
            we, wh = wave.record(grid, t, state, 1)
            row["wave_energy"] = we
            row["wave_dissipation"] = wh
        times.append(t)
        for k, v in row.items():
            chans.setdefault(k, []).append(v)
        if h2_raw > smallness_cap:
            raise SmallnessBreached(
                f"perturbation size {h2_raw:.4f} exceeds cap {smallness_cap} at t={t:.4g}"
            )
        speed = float((np.abs(u) + half_g * c).max())
        if speed * dt / dx > CFL_MAX:
            raise CflViolation(
                f"wave speed {speed:.3f} at t={t:.4g} violates the step budget"
            )
        if not grid.periodic:
            b = max(
                boundary_amplitude(grid, n), boundary_amplitude(grid, u)
            )
            if b > escape_tol:
                raise DomainEscape(
                    f"boundary amplitude {b:.3e} at t={t:.4g} exceeds {escape_tol:.1e}"
                )
        return rho_now

    rho_now = record(0, ct, u)
    if 0 in snap_steps:
        snapshots[snap_steps[0]] = np.column_stack([rho_now - espec.rho_bar, u])
    for j in range(1, nsteps + 1):
        u = u * decay_half
        k1 = rhs(ct, u)
        k2 = rhs(ct + 0.5 * dt * k1[0], u + 0.5 * dt * k1[1])
        k3 = rhs(ct + 0.5 * dt * k2[0], u + 0.5 * dt * k2[1])
        k4 = rhs(ct + dt * k3[0], u + dt * k3[1])
        ct = ct + (dt / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        u = u + (dt / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        u = u * decay_half
        if float(ct.min()) <= c_floor:
            raise VacuumApproached(f"density reached the floor at step {j}")
        if j % sample_stride == 0 or j == nsteps:
            rho_now = record(j, ct, u)
            if j in snap_steps:
                snapshots[snap_steps[j]] = np.column_stack(
                    [rho_now - espec.rho_bar, u]
                )
        elif j in snap_steps:
            rho_now = espec.density_of_sound(ct + c_bar)
            snapshots[snap_steps[j]] = np.column_stack([rho_now - espec.rho_bar, u])

    series = TimeSeries(
        t=np.array(times),
        channels={k: np.array(v) for k, v in chans.items()},
        meta={
            "dt_step": dt,
            "n_steps": nsteps,
            "sample_stride": sample_stride,
            "scheme": "strang-exp/rk4-centered",
            "nu": nu,
            "smallness_cap": smallness_cap,
        },
    )
    return series, snapshots

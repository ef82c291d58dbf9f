"""Old-quantum action integrals and the quantum force.

Planck's constant is always derived from hbar (h = 2 pi hbar); natural units
hbar = 1 are the default throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .kinematics import ExistenceSeries, OscillatorParams, Trajectory, time_derivative

PERIOD_RTOL = 1e-6


def planck(hbar: float = 1.0) -> float:
    return 2.0 * math.pi * hbar


@dataclass(frozen=True)
class ActionResult:
    value: float
    n_fit: float
    nearest_n: int
    residual: float
    sign: int = 1

    @classmethod
    def from_value(cls, signed_value: float, hbar: float = 1.0) -> "ActionResult":
        value = abs(signed_value)
        n_fit = value / planck(hbar)
        nearest = max(0, int(round(n_fit)))
        sign = -1 if signed_value < 0 else 1
        return cls(value, n_fit, nearest, abs(n_fit - nearest), sign)


@dataclass(frozen=True)
class QuantumForceSpec:
    n: int
    k_wave: float
    f_e: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InputError(f"n must be a positive integer, got {self.n}")
        if not self.k_wave > 0:
            raise InputError(f"k_wave must be positive, got {self.k_wave}")
        if not self.f_e > 0:
            raise InputError(f"f_e must be positive, got {self.f_e}")

    @property
    def wavelength(self) -> float:
        return 2.0 * math.pi / self.k_wave

    @property
    def tau_e(self) -> float:
        return 1.0 / self.f_e


def _check_one_period(traj: Trajectory, params: OscillatorParams) -> None:
    span = traj.grid.duration
    if not math.isclose(span, params.period, rel_tol=PERIOD_RTOL):
        raise InputError(
            f"trajectory spans {span!r}, expected one period {params.period!r}"
        )


def _closed_integral(y: np.ndarray, dt: float) -> float:
    # trapezoid over a full period of a smooth periodic integrand converges spectrally
    return float(np.trapezoid(y, dx=dt))


def action_pdx(traj: Trajectory, params: OscillatorParams, hbar: float = 1.0) -> ActionResult:
    """Closed-orbit action of p dx = m xdot^2 dt over one period."""
    _check_one_period(traj, params)
    xdot = traj.v if traj.v is not None else time_derivative(traj.x, traj.grid.dt)
    return ActionResult.from_value(_closed_integral(params.m * xdot**2, traj.grid.dt), hbar)


def action_Fde(traj: Trajectory, series: ExistenceSeries, params: OscillatorParams,
               hbar: float = 1.0) -> ActionResult:
    """Closed-orbit action of F de over one period.

    Along the motion de = x dt, so the integrand is -m w^2 x^2; the result is
    negative for the oscillator and the sign is kept in ``ActionResult.sign``.
    """
    if traj.grid != series.grid:
        raise InputError("trajectory and existence series must share a grid")
    _check_one_period(traj, params)
    force = -params.m * params.omega**2 * traj.x
    return ActionResult.from_value(_closed_integral(force * traj.x, traj.grid.dt), hbar)


def quantized_amplitude(n: int, params: OscillatorParams, hbar: float = 1.0) -> float:
    """Amplitude whose orbit encloses action n*h: sqrt(n h / (pi m w))."""
    if int(n) != n or n < 0:
        raise InputError(f"n must be a non-negative integer, got {n}")
    return math.sqrt(n * planck(hbar) / (math.pi * params.m * params.omega))


def energy_level(n: int, params: OscillatorParams, hbar: float = 1.0) -> float:
    """Old-quantum oscillator energy n*hbar*w (no zero-point term)."""
    return n * hbar * params.omega


def angular_momentum(n: int, hbar: float = 1.0) -> float:
    return n * hbar


def photon_energy(nu: float, hbar: float = 1.0) -> float:
    if not nu > 0:
        raise InputError(f"frequency must be positive, got {nu}")
    return planck(hbar) * nu


def de_broglie_momentum(wavelength: float, hbar: float = 1.0) -> float:
    if not wavelength > 0:
        raise InputError(f"wavelength must be positive, got {wavelength}")
    return planck(hbar) / wavelength


def quantum_force(spec: QuantumForceSpec, hbar: float = 1.0) -> float:
    """n hbar k f_e, cross-checked against n h / (lambda tau_e)."""
    value = spec.n * hbar * spec.k_wave * spec.f_e
    via_wavelength = spec.n * planck(hbar) / (spec.wavelength * spec.tau_e)
    if not math.isclose(value, via_wavelength, rel_tol=1e-12):
        raise ArithmeticError(f"quantum force forms disagree: {value!r} vs {via_wavelength!r}")
    return value


def uncertainty_product_shm(n: int, params: OscillatorParams, hbar: float = 1.0) -> float:
    """Delta e * Delta F in oscillator eigenstate n.

    Uses the eigenstate widths dx = sqrt((n+1/2) hbar/(m w)) and
    dp = sqrt((n+1/2) hbar m w), mapped through de = dp/(m w^2) and
    dF = m w^2 dx.
    """
    if int(n) != n or n < 0:
        raise InputError(f"n must be a non-negative integer, got {n}")
    level = (n + 0.5) * hbar
    mw = params.m * params.omega
    mw2 = params.m * params.omega**2
    dx = math.sqrt(level / mw)
    dp = math.sqrt(level * mw)
    return (dp / mw2) * (mw2 * dx)

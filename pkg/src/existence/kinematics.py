"""Sampled trajectories and the accumulated existence e(t) = e0 + int x dt.

Everything here works on uniform time grids. The existence series is built
by cumulative composite Simpson quadrature; odd prefixes are closed with a
single trapezoid on the last interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError


def _frozen_array(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise InputError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite samples")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_i = t0 + i*dt for i = 0..n-1."""

    t0: float
    dt: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.t0) and math.isfinite(self.dt)):
            raise InputError("t0 and dt must be finite")
        if self.dt <= 0:
            raise InputError(f"dt must be positive, got {self.dt}")
        if int(self.n) != self.n or self.n < 2:
            raise InputError(f"n must be an integer >= 2, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def spanning(cls, t0: float, t1: float, n: int) -> "TimeGrid":
        """Grid with n samples from t0 to t1 inclusive."""
        if n < 2:
            raise InputError(f"n must be >= 2, got {n}")
        return cls(t0, (t1 - t0) / (n - 1), n)

    def t(self, i: int) -> float:
        return self.t0 + i * self.dt

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(self.n) * self.dt

    @property
    def duration(self) -> float:
        return (self.n - 1) * self.dt


@dataclass(frozen=True)
class Trajectory:
    """Positions x(t_i) on a grid.

    ``v`` optionally carries exact velocities (the SHM generator fills it);
    consumers fall back to finite differences when it is absent.
    """

    grid: TimeGrid
    x: np.ndarray
    v: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        x = _frozen_array(self.x, "x")
        if x.size != self.grid.n:
            raise InputError(f"len(x)={x.size} does not match grid.n={self.grid.n}")
        object.__setattr__(self, "x", x)
        if self.v is not None:
            v = _frozen_array(self.v, "v")
            if v.size != self.grid.n:
                raise InputError("velocity samples do not match the grid")
            object.__setattr__(self, "v", v)

    @classmethod
    def from_function(cls, grid: TimeGrid, fn) -> "Trajectory":
        return cls(grid, fn(grid.times))


@dataclass(frozen=True)
class ExistenceSeries:
    grid: TimeGrid
    e: np.ndarray
    e0: float

    def __post_init__(self):
        e = _frozen_array(self.e, "e")
        if e.size != self.grid.n:
            raise InputError(f"len(e)={e.size} does not match grid.n={self.grid.n}")
        if not math.isfinite(self.e0):
            raise InputError("e0 must be finite")
        if e[0] != self.e0:
            raise InputError(f"e[0]={e[0]!r} must equal e0={self.e0!r}")
        object.__setattr__(self, "e", e)


@dataclass(frozen=True)
class OscillatorParams:
    """Simple harmonic oscillator x(t) = x0 cos(omega t + phi)."""

    m: float = 1.0
    omega: float = 1.0
    x0: float = 1.0
    phi: float = 0.0

    def __post_init__(self):
        for name in ("m", "omega", "x0", "phi"):
            if not math.isfinite(getattr(self, name)):
                raise InputError(f"{name} must be finite")
        if self.m <= 0:
            raise InputError(f"mass must be positive, got {self.m}")
        if self.omega <= 0:
            raise InputError(f"omega must be positive, got {self.omega}")
        if self.x0 < 0:
            raise InputError(f"amplitude must be non-negative, got {self.x0}")

    @property
    def k_spring(self) -> float:
        return self.m * self.omega**2

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def energy(self) -> float:
        return 0.5 * self.k_spring * self.x0**2


def cumulative_simpson(y: np.ndarray, dt: float) -> np.ndarray:
    """Running integral of uniformly sampled ``y``; out[0] = 0.

    Even prefixes use composite Simpson, odd ones add one trapezoid.
    """
    y = np.asarray(y, dtype=float)
    n = y.size
    out = np.zeros(n)
    if n < 2:
        return out
    pairs = (n - 1) // 2
    if pairs:
        panels = (dt / 3.0) * (y[0:2 * pairs:2] + 4.0 * y[1:2 * pairs:2] + y[2:2 * pairs + 1:2])
        out[2::2] = np.cumsum(panels)
    out[1::2] = out[0:n - 1:2] + 0.5 * dt * (y[0:n - 1:2] + y[1::2])
    return out


def integrate_existence(traj: Trajectory, e0: float = 0.0) -> ExistenceSeries:
    """Accumulate existence along ``traj`` starting from ``e0`` at t0."""
    e0 = float(e0)
    if not math.isfinite(e0):
        raise InputError("e0 must be finite")
    e = e0 + cumulative_simpson(traj.x, traj.grid.dt)
    e[0] = e0
    return ExistenceSeries(traj.grid, e, e0)


def experience(series: ExistenceSeries, i: int) -> float:
    """|e_i - e0| at sample ``i``."""
    if not 0 <= i < series.grid.n:
        raise IndexError(f"sample index {i} out of range [0, {series.grid.n})")
    return abs(float(series.e[i]) - series.e0)


def shm_trajectory(params: OscillatorParams, grid: TimeGrid) -> tuple[Trajectory, ExistenceSeries]:
    """Analytic SHM position and existence on ``grid``.

    With e0 = 0 at phase zero, e(t) = (x0/omega) sin(omega t + phi), which
    is -xdot/omega**2.
    """
    phase = params.omega * grid.times + params.phi
    x = params.x0 * np.cos(phase)
    v = -params.x0 * params.omega * np.sin(phase)
    e = (params.x0 / params.omega) * np.sin(phase)
    return Trajectory(grid, x, v), ExistenceSeries(grid, e, float(e[0]))


def time_derivative(values: np.ndarray, dt: float) -> np.ndarray:
    """Second-order finite-difference derivative, central in the interior."""
    values = np.asarray(values, dtype=float)
    if values.size < 3:
        raise InputError("need at least 3 samples for a derivative")
    return np.gradient(values, dt, edge_order=2)

"""The existence-force canonical pair for the harmonic oscillator.

With q = e and qdot = x the oscillator Lagrangian reads

    L(e, x) = 1/2 m w^4 e^2 - 1/2 m w^2 x^2,

so the conjugate momentum dL/dx = -m w^2 x is the spring force F. Legendre
transforming in x gives

    H(e, F) = F x - L = -F^2 / (2 m w^2) - 1/2 m w^4 e^2,

whose canonical equations edot = dH/dF = x and Fdot = -dH/de = m w^4 e
reproduce the motion. Residual checks below measure both sets of equations
on sampled data; Poisson brackets use fourth-order central differences.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InputError
from .kinematics import ExistenceSeries, OscillatorParams, Trajectory, time_derivative


class Chart(enum.Enum):
    XP = "xp"  # (x, p = m xdot)
    EF = "ef"  # (e, F)


@dataclass(frozen=True)
class PhaseSpacePoint:
    chart: Chart
    q: float
    p: float

    @property
    def norm(self) -> float:
        return math.hypot(self.q, self.p)


def _stiffness(params: OscillatorParams) -> float:
    mw2 = params.m * params.omega**2
    if not (mw2 > 0 and math.isfinite(mw2)):
        raise InputError("chart map is singular for m*omega**2 == 0")
    return mw2


@dataclass(frozen=True)
class ChartMap:
    """SHM map between (x, p) and (e, F): e = p/(-m w^2), F = -m w^2 x."""

    params: OscillatorParams

    def to_ef(self, pt: PhaseSpacePoint) -> PhaseSpacePoint:
        if pt.chart is Chart.EF:
            return pt
        mw2 = _stiffness(self.params)
        return PhaseSpacePoint(Chart.EF, -pt.p / mw2, -mw2 * pt.q)

    def to_xp(self, pt: PhaseSpacePoint) -> PhaseSpacePoint:
        if pt.chart is Chart.XP:
            return pt
        mw2 = _stiffness(self.params)
        return PhaseSpacePoint(Chart.XP, -pt.p / mw2, -mw2 * pt.q)


@dataclass(frozen=True)
class ScalarField:
    """A phase-space function f(q, p) with its base finite-difference step."""

    fn: Callable[[float, float], float]
    h: float = 1e-5

    def __post_init__(self):
        if not self.h > 0:
            raise InputError(f"finite-difference step must be positive, got {self.h}")

    def __call__(self, q: float, p: float) -> float:
        return self.fn(q, p)


def existence_field(params: OscillatorParams) -> ScalarField:
    """e as a function on the (x, p) chart."""
    mw2 = _stiffness(params)
    return ScalarField(lambda q, p: p / -mw2)


def force_field(params: OscillatorParams) -> ScalarField:
    """F as a function on the (x, p) chart."""
    mw2 = _stiffness(params)
    return ScalarField(lambda q, p: -mw2 * q)


COORDINATE = ScalarField(lambda q, p: q)
MOMENTUM = ScalarField(lambda q, p: p)


def lagrangian_ex(e, x, params: OscillatorParams):
    w2 = params.omega**2
    return 0.5 * params.m * w2 * w2 * np.square(e) - 0.5 * params.m * w2 * np.square(x)


def conjugate_momentum(x, params: OscillatorParams):
    return -params.m * params.omega**2 * np.asarray(x, dtype=float)[()]


def generalized_force(e, params: OscillatorParams):
    return params.m * params.omega**4 * np.asarray(e, dtype=float)[()]


def hamiltonian_ef(e, F, params: OscillatorParams):
    mw2 = _stiffness(params)
    return -np.square(F) / (2.0 * mw2) - 0.5 * params.m * params.omega**4 * np.square(e)


def hamiltonian_gradient(e, F, params: OscillatorParams):
    """(dH/de, dH/dF) in closed form."""
    mw2 = _stiffness(params)
    return -params.m * params.omega**4 * np.asarray(e, dtype=float), -np.asarray(F, dtype=float) / mw2


def _check_shared_grid(traj: Trajectory, series: ExistenceSeries) -> None:
    if traj.grid != series.grid:
        raise InputError("trajectory and existence series must share a grid")


def euler_lagrange_residual(traj: Trajectory, series: ExistenceSeries, params: OscillatorParams) -> np.ndarray:
    """d(p_e)/dt - Q_e per sample; vanishes on true motion up to O(dt^2)."""
    _check_shared_grid(traj, series)
    dt = traj.grid.dt
    dpe = time_derivative(conjugate_momentum(traj.x, params), dt)
    return dpe - generalized_force(series.e, params)


def hamilton_residual(traj: Trajectory, series: ExistenceSeries, params: OscillatorParams) -> tuple[np.ndarray, np.ndarray]:
    """(edot - dH/dF, Fdot + dH/de) per sample."""
    _check_shared_grid(traj, series)
    dt = traj.grid.dt
    F = conjugate_momentum(traj.x, params)
    dH_de, dH_dF = hamiltonian_gradient(series.e, F, params)
    return time_derivative(series.e, dt) - dH_dF, time_derivative(F, dt) + dH_de


def _step(field: ScalarField, pt: PhaseSpacePoint) -> float:
    return max(field.h, field.h * pt.norm)


def _partial(field: ScalarField, pt: PhaseSpacePoint, h: float, along_q: bool) -> float:
    q, p = pt.q, pt.p
    try:
        if along_q:
            vals = [field(q + k * h, p) for k in (2, 1, -1, -2)]
        else:
            vals = [field(q, p + k * h) for k in (2, 1, -1, -2)]
    except (ZeroDivisionError, OverflowError) as exc:
        raise FloatingPointError(f"field evaluation failed near ({q}, {p}): {exc}") from None
    if not all(math.isfinite(v) for v in vals):
        raise FloatingPointError(f"non-finite field value near ({q}, {p})")
    return (-vals[0] + 8.0 * vals[1] - 8.0 * vals[2] + vals[3]) / (12.0 * h)


def poisson_bracket(a: ScalarField, b: ScalarField, pt: PhaseSpacePoint) -> float:
    """{a, b} = da/dq db/dp - da/dp db/dq at ``pt``."""
    ha, hb = _step(a, pt), _step(b, pt)
    da_dq = _partial(a, pt, ha, True)
    da_dp = _partial(a, pt, ha, False)
    db_dq = _partial(b, pt, hb, True)
    db_dp = _partial(b, pt, hb, False)
    return da_dq * db_dp - da_dp * db_dq


def dirac_commutator_shm(params: OscillatorParams, order: tuple[str, str] = ("e", "F")) -> int:
    """Coefficient of i*hbar in [e, F] (or [F, e]) by chart bookkeeping.

    e = p/(-m w^2) and F = -m w^2 x are linear in single canonical
    operators, so [e, F] = (1/(-m w^2)) (-m w^2) [p, x] with [x, p] = i hbar.
    """
    mw2 = _stiffness(params)
    e_coeff = 1.0 / -mw2      # e = e_coeff * p
    f_coeff = -mw2            # F = f_coeff * x
    p_x = -1                  # [p, x] = -i hbar
    value = e_coeff * f_coeff * p_x
    if tuple(order) == ("F", "e"):
        value = -value
    elif tuple(order) != ("e", "F"):
        raise InputError(f"order must be ('e', 'F') or ('F', 'e'), got {order!r}")
    return int(round(value))

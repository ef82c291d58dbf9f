"""Collinear Lorentz transforms of velocity, position, time and existence.

Frame 2 moves relative to frame 1; ``Boost.u`` is the velocity entering the
transforms as u_12. All four laws share the form

    gamma**a * (1 + v u / c**2)**b * (linear combination)

with gamma exponents (0, 1, 1, 2) and bracket exponents (-1, 0, 0, 1) for
(velocity, position, time, existence).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .kinematics import TimeGrid, Trajectory, integrate_existence

CHANNELS = ("velocity", "position", "time", "existence")
GAMMA_POWERS = (0, 1, 1, 2)
BRACKET_POWERS = (-1, 0, 0, 1)


def _check_subluminal(value: float, c: float, name: str) -> None:
    if not math.isfinite(value) or abs(value) >= c:
        raise DomainError(f"|{name}| = {abs(value)!r} must be strictly below c = {c!r}")


@dataclass(frozen=True)
class Boost:
    u: float
    c: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0):
            raise DomainError(f"c must be positive and finite, got {self.c!r}")
        _check_subluminal(self.u, self.c, "u")

    @property
    def beta(self) -> float:
        return self.u / self.c


@dataclass(frozen=True)
class FrameState:
    """Velocity, position, scaled time and existence of an object in one frame."""

    v: float
    x: float
    ct: float
    e: float
    c: float = 1.0

    def __post_init__(self):
        _check_subluminal(self.v, self.c, "v")


def gamma(boost: Boost) -> float:
    beta = boost.beta
    return 1.0 / math.sqrt(1.0 - beta * beta)


def _bracket(v01: float, boost: Boost) -> float:
    return 1.0 + v01 * boost.u / boost.c**2


def compose_velocity(v01: float, boost: Boost) -> float:
    _check_subluminal(v01, boost.c, "v")
    return (v01 + boost.u) / _bracket(v01, boost)


def transform_position(x01: float, ct01: float, boost: Boost) -> float:
    return gamma(boost) * (x01 + ct01 * boost.beta)


def transform_time(x01: float, ct01: float, boost: Boost) -> float:
    return gamma(boost) * (ct01 + x01 * boost.beta)


def transform_existence(e01: float, e12: float, v01: float, boost: Boost) -> float:
    """Existence of the object seen from frame 2.

    ``e12`` is the existence of frame 1's origin relative to frame 2; see
    :func:`uniform_frame_existence` for the convention used with uniform
    motion.
    """
    _check_subluminal(v01, boost.c, "v")
    return gamma(boost) ** 2 * _bracket(v01, boost) * (e01 + e12)


def transform_state(state: FrameState, boost: Boost, e12: float = 0.0) -> FrameState:
    if state.c != boost.c:
        raise DomainError("state and boost use different light speeds")
    return FrameState(
        v=compose_velocity(state.v, boost),
        x=transform_position(state.x, state.ct, boost),
        ct=transform_time(state.x, state.ct, boost),
        e=transform_existence(state.e, e12, state.v, boost),
        c=boost.c,
    )


def uniform_frame_existence(boost: Boost, t1: float) -> float:
    """e12 for a boost held since t1 = 0: the integral of u*t over frame-1 time.

    This is the choice that makes the existence law agree with de = x dt
    evaluated directly in frame 2 for uniform motion.
    """
    return 0.5 * boost.u * t1 * t1


def boosted_existence_by_quadrature(v01: float, boost: Boost, t_end: float, n: int) -> float:
    """Frame-2 existence of an object moving as x01 = v01*t1, by direct quadrature.

    The worldline is sampled uniformly in frame-1 time on [0, t_end], mapped
    into frame 2 (where the sampling is again uniform), and integrated with
    :func:`integrate_existence` starting from e02 = 0.
    """
    _check_subluminal(v01, boost.c, "v")
    c = boost.c
    t1 = np.linspace(0.0, t_end, n)
    x1 = v01 * t1
    g = gamma(boost)
    x2 = g * (x1 + boost.u * t1)
    t2 = g * (c * t1 + x1 * boost.beta) / c
    grid = TimeGrid(t2[0], (t2[-1] - t2[0]) / (n - 1), n)
    return float(integrate_existence(Trajectory(grid, x2), 0.0).e[-1])


@dataclass(frozen=True)
class PowerPattern:
    """Fitted exponents of gamma and of (1 + v u/c**2) per channel."""

    observable: bool
    gamma_fit: tuple[float, ...]
    bracket_fit: tuple[float, ...]

    @property
    def gamma_exponents(self) -> tuple[int, ...] | None:
        return tuple(int(round(a)) for a in self.gamma_fit) if self.observable else None

    @property
    def bracket_exponents(self) -> tuple[int, ...] | None:
        return tuple(int(round(b)) for b in self.bracket_fit) if self.observable else None


# reference inputs for the fit; x01 = 0 keeps both x- and t-combinations nonzero for |u| < c
_X01, _CT01, _E01, _E12 = 0.0, 1.0, 0.7, 0.2


def _channel_ratios(u: float, v: float, c: float) -> np.ndarray:
    boost = Boost(u, c)
    beta = u / c
    outputs = (
        compose_velocity(v, boost),
        transform_position(_X01, _CT01, boost),
        transform_time(_X01, _CT01, boost),
        transform_existence(_E01, _E12, v, boost),
    )
    bases = (v + u, _X01 + _CT01 * beta, _CT01 + _X01 * beta, _E01 + _E12)
    return np.array([o / b for o, b in zip(outputs, bases)])


def power_pattern_check(boost: Boost, v01: float) -> PowerPattern:
    """Recover the exponent pattern by log-ratio regression.

    Each channel output is divided by its linear combination, leaving
    gamma**a * bracket**b. Sampling (+-u, v) and (u/2, v) separates the two
    exponents; if v01 u is too small the bracket is pinned near 1, so an
    auxiliary object velocity of u/2 is used instead. u = 0 makes both
    factors identically 1 and the exponents are reported as unobservable.
    """
    _check_subluminal(v01, boost.c, "v")
    u, c = boost.u, boost.c
    if u == 0.0:
        return PowerPattern(False, (math.nan,) * 4, (math.nan,) * 4)
    for v in (v01, 0.5 * u, 0.3 * u):
        samples = [(u, v), (-u, v), (0.5 * u, v), (u, 0.5 * v)]
        # |v u| below ~1e-4 c^2 leaves the bracket column numerically flat
        if abs(v * u) > 1e-4 * c * c and all(abs(sv + su) > 1e-9 * c for su, sv in samples):
            break
    design, rhs = [], []
    for su, sv in samples:
        b = Boost(su, c)
        design.append([math.log(gamma(b)), math.log(_bracket(sv, b))])
        ratios = _channel_ratios(su, sv, c)
        rhs.append(np.log(np.abs(ratios)))
    coef, *_ = np.linalg.lstsq(np.array(design), np.array(rhs), rcond=None)
    return PowerPattern(True, tuple(float(a) for a in coef[0]), tuple(float(b) for b in coef[1]))

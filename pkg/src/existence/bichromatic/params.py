"""Parameter records for a two-level atom in a bichromatic standing wave."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

from ..errors import InputError

BICHROMATIC = "bichromatic"
SINGLE = "single"


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise InputError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class AtomParams:
    """Transition wavelength and natural linewidth.

    The defaults give natural units k = gamma = 1.
    """

    lambda_a: float = 2.0 * math.pi
    gamma_nl: float = 1.0

    def __post_init__(self):
        _positive("lambda_a", self.lambda_a)
        _positive("gamma_nl", self.gamma_nl)

    @property
    def k(self) -> float:
        return 2.0 * math.pi / self.lambda_a

    @property
    def tau(self) -> float:
        return 1.0 / self.gamma_nl


@dataclass(frozen=True)
class FieldParams:
    """Light field seen by the atom.

    ``mode="bichromatic"`` is two counterpropagating beams, each with
    frequencies carrier +- delta and Rabi amplitude ``omega_r`` per
    component. ``phase`` is the relative beat phase between the beams.
    ``mode="single"`` is one traveling wave of Rabi frequency ``omega_r``
    at detuning ``carrier_detuning`` (``delta`` is then unused).
    """

    delta: float = 40.0
    omega_r: float = 10.0 * math.pi
    phase: float = 0.5 * math.pi
    carrier_detuning: float = 0.0
    mode: str = BICHROMATIC

    def __post_init__(self):
        _positive("delta", self.delta)
        if not (math.isfinite(self.omega_r) and self.omega_r >= 0):
            raise InputError(f"omega_r must be non-negative, got {self.omega_r!r}")
        if not math.isfinite(self.phase) or not math.isfinite(self.carrier_detuning):
            raise InputError("phase and carrier_detuning must be finite")
        if self.mode not in (BICHROMATIC, SINGLE):
            raise InputError(f"unknown field mode {self.mode!r}")

    @property
    def beat_period(self) -> float:
        return math.pi / self.delta

    @classmethod
    def pi_pulse(cls, delta: float, phase: float = 0.5 * math.pi, carrier_detuning: float = 0.0):
        return cls(delta, pi_pulse_rabi(delta), phase, carrier_detuning)

    @classmethod
    def practical(cls, delta: float, phase: float = 0.5 * math.pi, carrier_detuning: float = 0.0):
        """Omega_R = delta, the intensity used in practice instead of pi-pulses."""
        return cls(delta, practical_rabi(delta), phase, carrier_detuning)

    @classmethod
    def traveling_wave(cls, atom: AtomParams, s: float, carrier_detuning: float = 0.0):
        """Single traveling wave at saturation parameter s = I/I_s."""
        if not (math.isfinite(s) and s >= 0):
            raise InputError(f"saturation parameter must be non-negative, got {s!r}")
        omega_r = atom.gamma_nl * math.sqrt(s / 2.0)
        return cls(1.0, omega_r, 0.0, carrier_detuning, SINGLE)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SweepConfig:
    """Integrator tolerances and averaging windows.

    Windows count "cycles": the beat period pi/delta for bichromatic fields
    and the lifetime 1/gamma for a single traveling wave. The discarded
    transient is the longer of ``discard_periods`` cycles and
    ``discard_lifetimes`` excited-state lifetimes. Forces are averaged over
    ``n_positions`` starting points spread over half a wavelength, which
    is the period of the bichromatic interference pattern.
    """

    rtol: float = 1e-8
    atol: float = 1e-10
    discard_periods: int = 20
    discard_lifetimes: float = 8.0
    average_periods: int = 100
    n_positions: int = 16
    max_steps: int = 20_000_000
    jobs: int | None = None

    def __post_init__(self):
        _positive("rtol", self.rtol)
        _positive("atol", self.atol)
        for name in ("discard_periods", "n_positions", "max_steps"):
            value = getattr(self, name)
            if int(value) != value or value < (0 if name == "discard_periods" else 1):
                raise InputError(f"{name} must be a suitable integer, got {value!r}")
        if int(self.average_periods) != self.average_periods or self.average_periods < 2:
            raise InputError("average_periods must be an integer >= 2")
        if not (math.isfinite(self.discard_lifetimes) and self.discard_lifetimes >= 0):
            raise InputError("discard_lifetimes must be non-negative")
        if self.jobs is not None and self.jobs < 1:
            raise InputError("jobs must be >= 1")

    def with_tolerance_scaled(self, factor: float) -> "SweepConfig":
        return replace(self, rtol=self.rtol * factor, atol=self.atol * factor)

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("jobs")
        return d


@dataclass(frozen=True)
class BlochVector:
    u: float = 0.0
    v: float = 0.0
    w: float = -1.0

    @property
    def radius_sq(self) -> float:
        return self.u * self.u + self.v * self.v + self.w * self.w

    @property
    def excited_population(self) -> float:
        return 0.5 * (1.0 + self.w)


def pi_pulse_rabi(delta: float) -> float:
    """Rabi frequency pi*delta/4 that makes every beat pulse a pi-pulse."""
    _positive("delta", delta)
    return 0.25 * math.pi * delta


def practical_rabi(delta: float) -> float:
    _positive("delta", delta)
    return float(delta)

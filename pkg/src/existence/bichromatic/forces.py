"""Closed-form reference forces and intensity relations."""

from __future__ import annotations

import math

from ..errors import InputError
from .params import AtomParams, FieldParams


def radiative_force_limit(atom: AtomParams, hbar: float = 1.0) -> float:
    """Saturated scattering force hbar k gamma / 2."""
    return 0.5 * hbar * atom.k * atom.gamma_nl


def ideal_bichromatic_force(atom: AtomParams, field: FieldParams, hbar: float = 1.0) -> float:
    """2 hbar k per beat period pi/delta, i.e. 2 hbar k delta / pi."""
    return 2.0 * hbar * atom.k * field.delta / math.pi


def saturation_intensity(atom: AtomParams, h: float, c: float) -> float:
    """I_s = pi h c / (3 lambda^3 tau)."""
    if not (h > 0 and c > 0):
        raise InputError("h and c must be positive")
    return math.pi * h * c / (3.0 * atom.lambda_a**3 * atom.tau)


def rabi_from_intensity(intensity: float, i_sat: float, gamma_nl: float) -> float:
    """Omega_R = gamma sqrt(I / (2 I_s)) for one traveling wave."""
    if intensity < 0:
        raise InputError(f"intensity must be non-negative, got {intensity!r}")
    if not i_sat > 0:
        raise InputError(f"saturation intensity must be positive, got {i_sat!r}")
    return gamma_nl * math.sqrt(intensity / (2.0 * i_sat))


def monochromatic_steady_force(atom: AtomParams, s: float, carrier_detuning: float = 0.0,
                               hbar: float = 1.0) -> float:
    """Steady scattering force hbar k gamma/2 * s / (1 + s + (2 Delta/gamma)^2)."""
    if s < 0:
        raise InputError(f"saturation parameter must be non-negative, got {s!r}")
    g = atom.gamma_nl
    return radiative_force_limit(atom, hbar) * s / (1.0 + s + (2.0 * carrier_detuning / g) ** 2)

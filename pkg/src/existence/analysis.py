"""Peak extraction and integer-multiple fits on force-velocity curves.

Everything here is descriptive: peaks are located, expressed in units of
the quantum force hbar k gamma / 2, and compared against the velocities
v_n = Omega_R / (n k) and the power bound F v <= hbar Omega_R gamma / 2.
Nothing is asserted about whether the data actually follow that pattern.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.signal import find_peaks

from .bichromatic import AtomParams, FieldParams, ForceCurve, radiative_force_limit
from .errors import InputError

POWER_SLACK = 1e-9
ROUNDING = "half-to-even"


@dataclass(frozen=True)
class PeakRecord:
    v_peak: float
    f_peak: float
    prominence: float
    n_nearest: int | None = None
    residual: float | None = None


@dataclass(frozen=True)
class QuantizedValue:
    value: float
    n: int
    residual: float


@dataclass(frozen=True)
class VelocityFit:
    n: int
    v_peak: float
    v_n: float
    mismatch: float


@dataclass(frozen=True)
class PowerCheck:
    power: float
    bound: float
    satisfied: bool


@dataclass(frozen=True)
class QuantizationReport:
    unit: float
    peaks: tuple[PeakRecord, ...]
    velocity_fits: tuple[VelocityFit, ...]
    power_checks: tuple[PowerCheck, ...]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.unit > 0:
            raise InputError("unit must be positive")
        vs = [p.v_peak for p in self.peaks]
        if vs != sorted(vs):
            raise InputError("peaks must be sorted by velocity")

    def to_dict(self) -> dict:
        return {
            "unit": self.unit,
            "peaks": [asdict(p) for p in self.peaks],
            "velocity_fits": [asdict(v) for v in self.velocity_fits],
            "power_checks": [asdict(c) for c in self.power_checks],
            "meta": dict(self.meta),
        }


def _vertex(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Vertex of the parabola through three points (x need not be uniform)."""
    (x0, x1, x2), (y0, y1, y2) = x, y
    d01, d12, d02 = x1 - x0, x2 - x1, x2 - x0
    # divided differences
    a = ((y2 - y1) / d12 - (y1 - y0) / d01) / d02
    if a >= 0:
        return float(x1), float(y1)
    b = (y1 - y0) / d01 - a * (x0 + x1)
    xv = -b / (2.0 * a)
    xv = min(max(xv, x0), x2)
    yv = y1 + (xv - x1) * ((y1 - y0) / d01 + a * (xv - x0))
    return float(xv), float(yv)


def detect_peaks(curve: ForceCurve, min_prominence: float) -> list[PeakRecord]:
    """Local maxima of |F| with topographic prominence >= ``min_prominence``.

    Positions and heights are refined by a parabola through the maximum
    and its two neighbours; the sign of the force at the sample is kept.
    """
    if len(curve) < 3:
        raise InputError("need at least 3 points to detect peaks")
    if not min_prominence > 0:
        raise InputError("min_prominence must be positive")
    v, f = curve.velocities, curve.forces
    mag = np.abs(f)
    idx, props = find_peaks(mag, prominence=min_prominence)
    peaks = []
    for i, prom in zip(idx, props["prominences"]):
        xv, yv = _vertex(v[i - 1:i + 2], mag[i - 1:i + 2])
        peaks.append(PeakRecord(xv, math.copysign(yv, f[i]), float(prom)))
    return peaks


def quantize_fit(values: Sequence[float], unit: float) -> list[QuantizedValue]:
    """Nearest integer multiple of ``unit`` for each force magnitude.

    Ties round half to even; nonzero values never map below n = 1, so the
    residual can exceed 0.5 only for magnitudes below unit/2.
    """
    if not unit > 0:
        raise InputError(f"unit must be positive, got {unit!r}")
    out = []
    for value in values:
        ratio = abs(float(value)) / unit
        n = int(round(ratio))
        if ratio > 0 and n < 1:
            n = 1
        out.append(QuantizedValue(float(value), n, abs(ratio - n)))
    return out


def velocity_condition(n: int, omega_r: float, k_wave: float) -> float:
    """v_n = Omega_R / (n k)."""
    if int(n) != n or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}")
    if omega_r < 0 or not k_wave > 0:
        raise InputError("need omega_r >= 0 and k > 0")
    return omega_r / (n * k_wave)


def power_bound_check(f: float, v: float, omega_r: float, gamma_nl: float,
                      hbar: float = 1.0) -> PowerCheck:
    power = f * v
    bound = 0.5 * hbar * omega_r * gamma_nl
    return PowerCheck(power, bound, power <= bound * (1.0 + POWER_SLACK))


def build_report(curve: ForceCurve, atom: AtomParams, field: FieldParams, min_prominence: float,
                 unit: float | None = None, hbar: float = 1.0) -> QuantizationReport:
    """Peaks -> integer fits -> velocity and power comparisons.

    Velocity and power comparisons use |v_peak| and |F_peak|.
    """
    unit = radiative_force_limit(atom, hbar) if unit is None else unit
    if not unit > 0:
        raise InputError("unit must be positive")
    peaks = detect_peaks(curve, min_prominence)
    fits = quantize_fit([p.f_peak for p in peaks], unit)
    peaks = [replace(p, n_nearest=q.n, residual=q.residual) for p, q in zip(peaks, fits)]
    vfits, powers = [], []
    for p in peaks:
        n = max(p.n_nearest, 1)
        v_n = velocity_condition(n, field.omega_r, atom.k)
        speed = abs(p.v_peak)
        mismatch = abs(speed - v_n) / v_n if v_n > 0 else math.nan
        vfits.append(VelocityFit(n, p.v_peak, v_n, mismatch))
        powers.append(power_bound_check(abs(p.f_peak), speed, field.omega_r, atom.gamma_nl, hbar))
    meta = {"rounding": ROUNDING, "min_prominence": min_prominence, "omega_r": field.omega_r,
            "k": atom.k, "gamma": atom.gamma_nl}
    return QuantizationReport(unit, tuple(peaks), tuple(vfits), tuple(powers), meta)

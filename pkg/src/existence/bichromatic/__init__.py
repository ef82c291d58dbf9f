"""Two-level atom in counterpropagating bichromatic fields."""

from .forces import (
    ideal_bichromatic_force,
    monochromatic_steady_force,
    rabi_from_intensity,
    radiative_force_limit,
    saturation_intensity,
)
from .params import (
    BICHROMATIC,
    SINGLE,
    AtomParams,
    BlochVector,
    FieldParams,
    SweepConfig,
    pi_pulse_rabi,
    practical_rabi,
)
from .simulate import (
    ForceCurve,
    ForceSample,
    Trace,
    average_force,
    averaging_windows,
    coupling,
    instantaneous_force,
    integrate,
    obe_step,
    start_positions,
    sweep,
    symmetry_defects,
)

__all__ = [
    "AtomParams", "FieldParams", "SweepConfig", "BlochVector", "ForceCurve", "ForceSample", "Trace",
    "BICHROMATIC", "SINGLE",
    "radiative_force_limit", "ideal_bichromatic_force", "saturation_intensity",
    "rabi_from_intensity", "monochromatic_steady_force", "pi_pulse_rabi", "practical_rabi",
    "coupling", "obe_step", "instantaneous_force", "integrate", "average_force", "sweep",
    "averaging_windows", "start_positions", "symmetry_defects",
]

"""Velocity-resolved mean force from the optical Bloch equations."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from dataclasses import field as dc_field

import numpy as np

from ..errors import InputError, IntegrationError
from . import _engine
from .params import BICHROMATIC, SINGLE, AtomParams, BlochVector, FieldParams, SweepConfig

BLOCH_BALL_TOL = 1e-6

_STATUS_TEXT = {
    _engine.STATUS_STEP_UNDERFLOW: "step size underflow",
    _engine.STATUS_MAX_STEPS: "step budget exhausted",
    _engine.STATUS_NONFINITE: "non-finite error estimate",
}


def _mode_code(field: FieldParams) -> int:
    return _engine.MODE_SINGLE if field.mode == SINGLE else _engine.MODE_BICHROMATIC


def coupling(z: float, t: float, atom: AtomParams, field: FieldParams) -> tuple[complex, complex]:
    """Complex Rabi coupling Omega(z, t) and its gradient dOmega/dz."""
    ore, oim, gre, gim = _engine.coupling(float(z), float(t), atom.k, field.delta,
                                          field.omega_r, field.phase, _mode_code(field))
    return complex(ore, oim), complex(gre, gim)


def obe_step(state: BlochVector, z: float, t: float, atom: AtomParams,
             field: FieldParams) -> BlochVector:
    """Time derivative of the Bloch vector at (z, t)."""
    du, dv, dw, _ = _engine.bloch_rhs(float(t), state.u, state.v, state.w, float(z), atom.k,
                                      atom.gamma_nl, field.delta, field.omega_r, field.phase,
                                      field.carrier_detuning, _mode_code(field))
    return BlochVector(du, dv, dw)


def instantaneous_force(state: BlochVector, z: float, t: float, atom: AtomParams,
                        field: FieldParams, hbar: float = 1.0) -> float:
    *_, f = _engine.bloch_rhs(float(t), state.u, state.v, state.w, float(z), atom.k,
                              atom.gamma_nl, field.delta, field.omega_r, field.phase,
                              field.carrier_detuning, _mode_code(field))
    return hbar * f


@dataclass(frozen=True)
class Trace:
    """Raw output of one integration: force integral at cycle boundaries."""

    bounds: np.ndarray
    force_integral: np.ndarray
    final: BlochVector
    max_radius_sq: float
    accepted: int
    rejected: int


def integrate(atom: AtomParams, field: FieldParams, bounds, *, v: float = 0.0, z0: float = 0.0,
              rtol: float = 1e-8, atol: float = 1e-10, initial: BlochVector | None = None,
              max_steps: int = 20_000_000) -> Trace:
    """Run the OBE along z(t) = z0 + v t from ``bounds[0]`` to ``bounds[-1]``.

    Starts in the ground state unless ``initial`` is given. Raises
    :class:`IntegrationError` when the adaptive step control fails.
    """
    bounds = np.ascontiguousarray(bounds, dtype=float)
    if bounds.ndim != 1 or bounds.size < 2 or np.any(np.diff(bounds) <= 0):
        raise InputError("bounds must be a strictly increasing sequence of length >= 2")
    s0 = initial or BlochVector()
    y0 = np.array([s0.u, s0.v, s0.w, 0.0])
    span = bounds[1] - bounds[0]
    h0 = min(span, 1.0 / max(field.omega_r, field.delta, atom.gamma_nl)) / 20.0
    record, y, rmax, status, t_fail, h_fail, acc, rej = _engine.integrate_force(
        bounds, y0, float(z0), float(v), atom.k, atom.gamma_nl, field.delta, field.omega_r,
        field.phase, field.carrier_detuning, _mode_code(field), rtol, atol, h0, int(max_steps))
    if status != _engine.STATUS_OK:
        raise IntegrationError(f"OBE integration failed: {_STATUS_TEXT[status]}",
                               t=t_fail, h=h_fail, accepted=acc, rejected=rej)
    return Trace(bounds, record, BlochVector(y[0], y[1], y[2]), float(rmax), int(acc), int(rej))


@dataclass(frozen=True)
class ForceSample:
    mean: float
    spread: float
    max_radius_sq: float


def _cycle(atom: AtomParams, field: FieldParams) -> float:
    return atom.tau if field.mode == SINGLE else field.beat_period


def averaging_windows(atom: AtomParams, field: FieldParams, cfg: SweepConfig) -> tuple[float, int, int]:
    """(cycle length, discarded cycles, averaged cycles)."""
    cycle = _cycle(atom, field)
    discard = max(int(cfg.discard_periods), math.ceil(cfg.discard_lifetimes * atom.tau / cycle - 1e-9))
    return cycle, discard, int(cfg.average_periods)


def start_positions(atom: AtomParams, field: FieldParams, cfg: SweepConfig) -> np.ndarray:
    # a single traveling wave is translation invariant: one start point suffices
    if field.mode == SINGLE:
        return np.zeros(1)
    return np.arange(cfg.n_positions) * (0.5 * atom.lambda_a / cfg.n_positions)


def average_force(v: float, atom: AtomParams, field: FieldParams, cfg: SweepConfig | None = None,
                  hbar: float = 1.0) -> ForceSample:
    """Time- and position-averaged force on an atom moving at velocity ``v``.

    The transient is discarded, then the force is averaged over whole
    cycles; ``spread`` is the standard deviation of the per-cycle means.
    """
    cfg = cfg or SweepConfig()
    if not math.isfinite(v):
        raise InputError(f"velocity must be finite, got {v!r}")
    if field.omega_r == 0.0:
        return ForceSample(0.0, 0.0, 1.0)
    if field.mode == BICHROMATIC and field.delta < 10.0 * atom.gamma_nl:
        warnings.warn(f"delta = {field.delta:g} < 10 gamma: beat period is not short compared "
                      "with the excited-state lifetime", RuntimeWarning, stacklevel=2)
    cycle, n_discard, n_avg = averaging_windows(atom, field, cfg)
    bounds = np.arange(n_discard, n_discard + n_avg + 1) * cycle
    if n_discard:
        bounds = np.concatenate(([0.0], bounds))
    per_cycle = np.zeros(n_avg)
    rmax = 0.0
    positions = start_positions(atom, field, cfg)
    for z0 in positions:
        trace = integrate(atom, field, bounds, v=v, z0=z0, rtol=cfg.rtol, atol=cfg.atol,
                          max_steps=cfg.max_steps)
        kept = trace.force_integral[-(n_avg + 1):]
        per_cycle += np.diff(kept) / cycle
        rmax = max(rmax, trace.max_radius_sq)
    per_cycle *= hbar / positions.size
    spread = float(np.std(per_cycle, ddof=1))
    return ForceSample(float(per_cycle.mean()), spread, rmax)


@dataclass(frozen=True)
class ForceCurve:
    velocities: np.ndarray
    forces: np.ndarray
    spreads: np.ndarray
    atom: AtomParams | None = None
    field: FieldParams | None = None
    meta: dict = dc_field(default_factory=dict, compare=False)

    def __post_init__(self):
        v = np.array(self.velocities, dtype=float)
        f = np.array(self.forces, dtype=float)
        s = np.array(self.spreads, dtype=float) if self.spreads is not None else np.zeros_like(f)
        if v.ndim != 1 or v.shape != f.shape or v.shape != s.shape:
            raise InputError("velocities, forces and spreads must be 1-D arrays of equal length")
        if v.size and np.any(np.diff(v) <= 0):
            raise InputError("velocities must be strictly increasing")
        if not (np.all(np.isfinite(f)) and np.all(np.isfinite(v))):
            raise InputError("force curve contains non-finite values")
        for arr in (v, f, s):
            arr.setflags(write=False)
        object.__setattr__(self, "velocities", v)
        object.__setattr__(self, "forces", f)
        object.__setattr__(self, "spreads", s)

    def __len__(self):
        return self.velocities.size


def symmetry_defects(velocities: np.ndarray, forces: np.ndarray) -> dict | None:
    """Even/odd symmetry defects of F(v) on a grid symmetric about v = 0.

    Returns None when the grid is not symmetric. Defects are normalised by
    max |F| (zero curve gives zero defects).
    """
    v = np.asarray(velocities, dtype=float)
    f = np.asarray(forces, dtype=float)
    scale_v = max(np.max(np.abs(v)), 1e-300)
    if not np.allclose(v, -v[::-1], rtol=0.0, atol=1e-9 * scale_v):
        return None
    scale = float(np.max(np.abs(f)))
    if scale == 0.0:
        return {"even_defect": 0.0, "odd_defect": 0.0, "symmetry": "zero"}
    even = float(np.max(np.abs(f - f[::-1])) / scale)
    odd = float(np.max(np.abs(f + f[::-1])) / scale)
    if even < odd:
        label = "even"
    elif odd < even:
        label = "odd"
    else:
        label = "none"
    return {"even_defect": even, "odd_defect": odd, "symmetry": label}


def _point(args):
    v, atom, field, cfg, hbar = args
    try:
        return average_force(v, atom, field, cfg, hbar)
    except IntegrationError as exc:
        raise IntegrationError(f"at v={v!r}: {exc}") from exc


def sweep(atom: AtomParams, field: FieldParams, velocities, cfg: SweepConfig | None = None,
          hbar: float = 1.0) -> ForceCurve:
    """Mean force over a strictly increasing velocity grid.

    Points are independent; with ``cfg.jobs > 1`` they are farmed out to
    worker processes and reassembled in grid order, so the output does not
    depend on the worker count.
    """
    cfg = cfg or SweepConfig()
    v = np.asarray(velocities, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise InputError("velocity grid must be a non-empty 1-D sequence")
    if np.any(np.diff(v) <= 0):
        raise InputError("velocity grid must be strictly increasing")
    tasks = [(float(vi), atom, field, cfg, hbar) for vi in v]
    jobs = cfg.jobs or 1
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            samples = list(pool.map(_point, tasks))
    else:
        samples = [_point(t) for t in tasks]
    forces = np.array([s.mean for s in samples])
    spreads = np.array([s.spread for s in samples])
    cycle, n_discard, n_avg = averaging_windows(atom, field, cfg)
    meta = {
        "cycle": cycle,
        "discard_cycles": n_discard,
        "average_cycles": n_avg,
        "start_positions": int(start_positions(atom, field, cfg).size),
        "max_bloch_radius_sq": max(s.max_radius_sq for s in samples),
        "symmetry": symmetry_defects(v, forces),
    }
    return ForceCurve(v, forces, spreads, atom, field, meta)

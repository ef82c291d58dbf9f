"""Command-line front end.

    existence shm            SHM trajectory, existence and Euler-Lagrange residual (CSV)
    existence lorentz        transform (v, x, ct, e) into a boosted frame (CSV row)
    existence action         action integrals of the oscillator (JSON)
    existence canon check    residual and bracket checks (JSON)
    existence bichro sweep   force-velocity curve from the Bloch equations (CSV)
    existence bichro analyze peak / quantization report on a force curve (JSON)

Exit codes: 0 success, 1 usage or invalid input, 2 numerical failure, 3 I/O.
A ``--config`` file of ``key = value`` lines supplies defaults; flags win.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import analysis, canonical, kinematics, quantize, relativity
from . import io as csvio
from .bichromatic import (
    BICHROMATIC,
    SINGLE,
    AtomParams,
    FieldParams,
    SweepConfig,
    pi_pulse_rabi,
    practical_rabi,
    sweep,
)
from .errors import DomainError, InputError, IntegrationError

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunConfig:
    """Resolved parameters for one invocation (file values merged under flags)."""

    verb: str
    unit_system: str = "natural"
    params: dict = field(default_factory=dict)

    def echo(self) -> dict:
        meta = {"command": f"existence {self.verb}", "unit_system": self.unit_system}
        for key in sorted(self.params):
            meta[key] = self.params[key]
        return meta


def read_config_file(path: str) -> dict[str, str]:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _apply_config(parser: argparse.ArgumentParser, path: str) -> None:
    try:
        values = read_config_file(path)
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror}") from exc
    actions = {a.dest: a for a in parser._actions}
    defaults = {}
    for key, raw in values.items():
        if key not in actions or key in ("config", "help"):
            raise UsageError(f"{path}: unknown key {key!r}")
        action = actions[key]
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            defaults[key] = raw.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            try:
                defaults[key] = action.type(raw)
            except (TypeError, ValueError, argparse.ArgumentTypeError):
                raise UsageError(f"{path}: bad value for {key}: {raw!r}") from None
        else:
            defaults[key] = raw
    parser.set_defaults(**defaults)


def _positive(name):
    def conv(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} expects a number, got {text!r}") from None
        if not (math.isfinite(value) and value > 0):
            raise argparse.ArgumentTypeError(f"{name} must be positive, got {text!r}")
        return value
    return conv


def _nonneg(name):
    def conv(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} expects a number, got {text!r}") from None
        if not (math.isfinite(value) and value >= 0):
            raise argparse.ArgumentTypeError(f"{name} must be non-negative, got {text!r}")
        return value
    return conv


def _finite(text):
    value = float(text)
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return value


def _posint(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _nonnegint(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return value


# ---------------------------------------------------------------- output


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _json_clean(obj):
    if isinstance(obj, dict):
        return {k: _json_clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        return value if math.isfinite(value) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _json_text(payload: dict) -> str:
    return json.dumps(_json_clean(payload), indent=2, sort_keys=False) + "\n"


def _gnuplot_script(csv_path: str, xcol: int, ycols: list[tuple[int, str]], xlabel: str,
                    ylabel: str, errcol: int | None = None) -> str:
    lines = [
        "set datafile separator ','",
        "set datafile commentschars '#'",
        "set key autotitle columnhead",
        f"set xlabel '{xlabel}'",
        f"set ylabel '{ylabel}'",
        "set grid",
    ]
    plots = []
    for col, style in ycols:
        if errcol is not None:
            plots.append(f"'{csv_path}' using {xcol}:{col}:{errcol} with {style}")
        else:
            plots.append(f"'{csv_path}' using {xcol}:{col} with {style}")
    lines.append("plot " + ", \\\n     ".join(plots))
    lines.append("pause -1")
    return "\n".join(lines) + "\n"


def _check_gnuplot(args) -> None:
    if getattr(args, "gnuplot", None) and args.out is None:
        raise UsageError("--gnuplot needs --out so the script can reference the CSV")


def _write_gnuplot(args, script: str) -> None:
    if not args.gnuplot:
        return
    with open(args.gnuplot, "w", encoding="utf-8") as fh:
        fh.write(script)


# ---------------------------------------------------------------- verbs


def cmd_shm(args) -> None:
    params = kinematics.OscillatorParams(args.m, args.omega, args.x0, args.phi)
    spp = args.samples_per_period
    n = args.periods * spp + 1
    grid = kinematics.TimeGrid(0.0, params.period / spp, n)
    traj, analytic = kinematics.shm_trajectory(params, grid)
    series = kinematics.integrate_existence(traj, analytic.e0)
    force = canonical.conjugate_momentum(traj.x, params)
    qe = canonical.generalized_force(series.e, params)
    resid = canonical.euler_lagrange_residual(traj, series, params)
    cfg = RunConfig("shm", params={"m": args.m, "omega": args.omega, "x0": args.x0, "phi": args.phi,
                                   "periods": args.periods, "samples_per_period": spp})
    buf = io.StringIO()
    rows = zip(grid.times, traj.x, series.e, force, qe, resid)
    csvio.write_csv(buf, ("t", "x", "e", "F", "Qe", "el_residual"), rows, cfg.echo())
    _emit(buf.getvalue(), args.out)
    _write_gnuplot(args, _gnuplot_script(args.out or "-", 1, [(2, "lines"), (3, "lines")],
                                         "t", "x, e"))


def cmd_lorentz(args) -> None:
    for name in ("u", "v"):
        value = getattr(args, name)
        if not abs(value) < args.c:
            raise DomainError(f"--{name}: |{name}| = {abs(value)!r} must be below c = {args.c!r}")
    boost = relativity.Boost(args.u, args.c)
    state = relativity.FrameState(args.v, args.x, args.ct, args.e, args.c)
    out = relativity.transform_state(state, boost, args.e12)
    text = "v2,x2,ct2,e2\n" + ",".join(repr(float(q)) for q in (out.v, out.x, out.ct, out.e)) + "\n"
    _emit(text, args.out)


def cmd_action(args) -> None:
    hbar = args.hbar
    base = kinematics.OscillatorParams(args.m, args.omega, 1.0)
    if args.n is not None:
        x0 = quantize.quantized_amplitude(args.n, base, hbar)
    else:
        x0 = 1.0 if args.x0 is None else args.x0
    params = kinematics.OscillatorParams(args.m, args.omega, x0)
    grid = kinematics.TimeGrid(0.0, params.period / args.samples, args.samples + 1)
    traj, series = kinematics.shm_trajectory(params, grid)
    pdx = quantize.action_pdx(traj, params, hbar)
    fde = quantize.action_Fde(traj, series, params, hbar)
    payload = {
        "x0": x0,
        "pdx": pdx.value,
        "Fde_abs": fde.value,
        "Fde_sign": fde.sign,
        "n_fit": pdx.n_fit,
        "nearest_n": pdx.nearest_n,
        "residual": pdx.residual,
        "energy": params.energy,
        "E_over_nu": params.energy * params.period,
        "h": quantize.planck(hbar),
    }
    _emit(_json_text(payload), args.out)


def cmd_canon_check(args) -> None:
    params = kinematics.OscillatorParams(args.m, args.omega, args.x0)
    n = int(round(params.period / args.dt)) + 1
    grid = kinematics.TimeGrid(0.0, args.dt, n)
    traj, series = kinematics.shm_trajectory(params, grid)
    el = canonical.euler_lagrange_residual(traj, series, params)
    he, hf = canonical.hamilton_residual(traj, series, params)
    e_f, f_f = canonical.existence_field(params), canonical.force_field(params)
    rng = np.random.default_rng(args.seed)
    pts = rng.uniform(-2.0, 2.0, size=(args.points, 2)) * np.array([max(args.x0, 1.0),
                                                                      params.m * params.omega])
    brackets = [canonical.poisson_bracket(e_f, f_f, canonical.PhaseSpacePoint(canonical.Chart.XP, q, p))
                for q, p in pts]
    qp = [canonical.poisson_bracket(canonical.COORDINATE, canonical.MOMENTUM,
                                    canonical.PhaseSpacePoint(canonical.Chart.XP, q, p))
          for q, p in pts]
    payload = {
        "el_residual_max": float(np.max(np.abs(el))),
        "hamilton_residual_max": float(max(np.max(np.abs(he)), np.max(np.abs(hf)))),
        "bracket_eF": float(brackets[0]),
        "bracket_qp": float(qp[0]),
        "bracket_eF_abs_max_deviation": float(np.max(np.abs(np.abs(brackets) - 1.0))),
        "bracket_qp_max_deviation": float(np.max(np.abs(np.array(qp) - 1.0))),
        "dirac_commutator_eF": canonical.dirac_commutator_shm(params),
        "points": args.points,
        "dt": args.dt,
    }
    _emit(_json_text(payload), args.out)


def _atom_from_args(args) -> tuple[AtomParams, float]:
    if args.unit_system == "explicit":
        return AtomParams(args.wavelength, args.linewidth), args.hbar
    return AtomParams(), 1.0


def cmd_bichro_sweep(args) -> None:
    atom, hbar = _atom_from_args(args)
    if args.rabi is not None:
        omega_r = args.rabi
    elif args.practical:
        omega_r = practical_rabi(args.delta)
    else:
        omega_r = pi_pulse_rabi(args.delta)
    field_ = FieldParams(args.delta, omega_r, args.phase, args.detuning, args.mode)
    if args.steps < 2 and args.vmin != args.vmax:
        raise UsageError("--steps must be >= 2 unless --vmin equals --vmax")
    velocities = np.linspace(args.vmin, args.vmax, args.steps)
    if args.steps > 1 and not args.vmax > args.vmin:
        raise UsageError("--vmax must exceed --vmin")
    jobs = args.jobs or os.cpu_count() or 1
    cfg = SweepConfig(rtol=args.rtol, atol=args.atol, discard_periods=args.discard_periods,
                      discard_lifetimes=args.discard_lifetimes, average_periods=args.average_periods,
                      n_positions=args.positions, jobs=jobs)
    v_scale = atom.gamma_nl / atom.k
    f_scale = hbar * atom.k * atom.gamma_nl
    curve = sweep(atom, field_, velocities * v_scale, cfg, hbar)
    params = {"delta": args.delta, "omega_r": omega_r, "phase": args.phase,
              "carrier_detuning": args.detuning, "mode": args.mode,
              "rabi_preset": "explicit" if args.rabi is not None else
                             ("practical" if args.practical else "pi-pulse"),
              "vmin": args.vmin, "vmax": args.vmax, "steps": args.steps,
              "lambda": atom.lambda_a, "gamma": atom.gamma_nl, "k": atom.k, "hbar": hbar}
    params.update(cfg.as_dict())
    params.update({"cycle": curve.meta["cycle"], "discard_cycles": curve.meta["discard_cycles"],
                   "average_cycles": curve.meta["average_cycles"],
                   "velocity_units": "gamma/k", "force_units": "hbar*k*gamma"})
    sym = curve.meta["symmetry"]
    if sym is not None:
        params.update({f"symmetry_{k}": v for k, v in sym.items()})
    meta = RunConfig("bichro sweep", args.unit_system, params).echo()
    buf = io.StringIO()
    csvio.write_force_curve(buf, curve, force_scale=f_scale, velocity_scale=v_scale, meta=meta)
    _emit(buf.getvalue(), args.out)
    _write_gnuplot(args, _gnuplot_script(args.out or "-", 1, [(2, "yerrorlines")],
                                         "v [gamma/k]", "F [hbar k gamma]", errcol=3))


def cmd_bichro_analyze(args) -> None:
    try:
        with open(args.csv, encoding="utf-8") as fh:
            curve, meta = csvio.read_force_curve(fh)
    except OSError as exc:
        raise OSError(f"cannot read {args.csv}: {exc.strerror}") from exc
    omega_r = args.rabi if args.rabi is not None else csvio.meta_float(meta, "omega_r")
    atom = AtomParams()
    field_ = FieldParams(delta=max(csvio.meta_float(meta, "delta", 1.0), 1e-300),
                         omega_r=omega_r if math.isfinite(omega_r) else 0.0)
    report = analysis.build_report(curve, atom, field_, args.prominence, unit=args.unit)
    payload = report.to_dict()
    if not math.isfinite(omega_r):
        payload["meta"]["omega_r"] = None
        for fit in payload["velocity_fits"]:
            fit["v_n"] = None
            fit["mismatch"] = None
    payload["meta"]["source"] = os.path.basename(args.csv)
    _emit(_json_text(payload), args.out)
    if args.peaks_out:
        buf = io.StringIO()
        rows = [(p.v_peak, p.f_peak, p.n_nearest, p.residual) for p in report.peaks]
        csvio.write_csv(buf, csvio.PEAK_COLUMNS, rows)
        with open(args.peaks_out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buf.getvalue())


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key = value file supplying defaults")
    common.add_argument("--out", help="output file (default: standard output)")

    parser = _Parser(prog="existence", description=__doc__.split("\n\n")[0],
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    verbs = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = verbs.add_parser("shm", parents=[common], help="SHM trajectory and existence")
    p.add_argument("--m", type=_positive("--m"), default=1.0)
    p.add_argument("--omega", type=_positive("--omega"), default=1.0)
    p.add_argument("--x0", type=_nonneg("--x0"), default=1.0)
    p.add_argument("--phi", type=_finite, default=0.0)
    p.add_argument("--periods", type=_posint, default=1)
    p.add_argument("--samples-per-period", type=_posint, default=1024)
    p.add_argument("--gnuplot", metavar="SCRIPT", help="also write a gnuplot script")
    p.set_defaults(handler=cmd_shm)

    p = verbs.add_parser("lorentz", parents=[common], help="boost (v, x, ct, e)")
    for name in ("u", "v", "x", "ct", "e", "e12"):
        p.add_argument(f"--{name}", type=_finite, default=0.0)
    p.add_argument("--c", type=_positive("--c"), default=1.0)
    p.set_defaults(handler=cmd_lorentz)

    p = verbs.add_parser("action", parents=[common], help="oscillator action integrals")
    p.add_argument("--m", type=_positive("--m"), default=1.0)
    p.add_argument("--omega", type=_positive("--omega"), default=1.0)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--x0", type=_nonneg("--x0"))
    group.add_argument("--n", type=_nonnegint, help="quantum number; sets x0 = sqrt(n h / (pi m omega))")
    p.add_argument("--hbar", type=_positive("--hbar"), default=1.0)
    p.add_argument("--samples", type=_posint, default=4096)
    p.set_defaults(handler=cmd_action)

    canon = verbs.add_parser("canon", help="canonical-pair checks")
    canon_sub = canon.add_subparsers(dest="subverb", required=True, parser_class=_Parser)
    p = canon_sub.add_parser("check", parents=[common])
    p.add_argument("--m", type=_positive("--m"), default=1.0)
    p.add_argument("--omega", type=_positive("--omega"), default=1.0)
    p.add_argument("--x0", type=_nonneg("--x0"), default=1.0)
    p.add_argument("--dt", type=_positive("--dt"), default=1e-4)
    p.add_argument("--points", type=_posint, default=100)
    p.add_argument("--seed", type=_nonnegint, default=0)
    p.set_defaults(handler=cmd_canon_check)

    bichro = verbs.add_parser("bichro", help="bichromatic force tools")
    bsub = bichro.add_subparsers(dest="subverb", required=True, parser_class=_Parser)
    p = bsub.add_parser("sweep", parents=[common], help="force versus velocity")
    p.add_argument("--delta", type=_positive("--delta"), default=40.0)
    rabi = p.add_mutually_exclusive_group()
    rabi.add_argument("--rabi", type=_nonneg("--rabi"), help="Rabi frequency per component")
    rabi.add_argument("--pi-pulse", action="store_true", help="Omega_R = pi delta / 4 (default)")
    rabi.add_argument("--practical", action="store_true", help="Omega_R = delta")
    p.add_argument("--phase", type=_finite, default=0.5 * math.pi)
    p.add_argument("--detuning", type=_finite, default=0.0)
    p.add_argument("--mode", choices=(BICHROMATIC, SINGLE), default=BICHROMATIC)
    p.add_argument("--vmin", type=_finite, default=-30.0)
    p.add_argument("--vmax", type=_finite, default=30.0)
    p.add_argument("--steps", type=_posint, default=121)
    p.add_argument("--rtol", type=_positive("--rtol"), default=1e-8)
    p.add_argument("--atol", type=_positive("--atol"), default=1e-10)
    p.add_argument("--discard-periods", type=_nonnegint, default=20)
    p.add_argument("--discard-lifetimes", type=_nonneg("--discard-lifetimes"), default=8.0)
    p.add_argument("--average-periods", type=_posint, default=100)
    p.add_argument("--positions", type=_posint, default=16)
    p.add_argument("--jobs", type=_posint, help="worker processes (default: all cores)")
    p.add_argument("--unit-system", choices=("natural", "explicit"), default="natural")
    p.add_argument("--wavelength", type=_positive("--wavelength"), default=2.0 * math.pi)
    p.add_argument("--linewidth", type=_positive("--linewidth"), default=1.0)
    p.add_argument("--hbar", type=_positive("--hbar"), default=1.0)
    p.add_argument("--gnuplot", metavar="SCRIPT", help="also write a gnuplot script")
    p.set_defaults(handler=cmd_bichro_sweep)

    p = bsub.add_parser("analyze", parents=[common], help="peak and quantization report")
    p.add_argument("csv", help="force curve CSV (v,F_mean[,F_spread]) in hbar*k*gamma units")
    p.add_argument("--unit", type=_positive("--unit"), default=0.5,
                   help="force unit (default hbar k gamma / 2 = 0.5)")
    p.add_argument("--prominence", type=_positive("--prominence"), default=0.1)
    p.add_argument("--rabi", type=_nonneg("--rabi"), help="Omega_R (default: from CSV metadata)")
    p.add_argument("--peaks-out", help="also write peaks as v_peak,F_peak,n,residual CSV")
    p.set_defaults(handler=cmd_bichro_analyze)
    return parser


def _leaf_parser(parser: argparse.ArgumentParser, ns: argparse.Namespace) -> argparse.ArgumentParser:
    current = parser
    for dest in ("verb", "subverb"):
        name = getattr(ns, dest, None)
        if name is None:
            break
        sub = next(a for a in current._actions if isinstance(a, argparse._SubParsersAction))
        current = sub.choices[name]
    return current


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if getattr(ns, "config", None):
        leaf = _leaf_parser(parser, ns)
        # re-parse with file values installed as defaults on the leaf parser
        _apply_config(leaf, ns.config)
        ns = parser.parse_args(argv)
    return ns


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        _check_gnuplot(args)
        args.handler(args)
    except (UsageError, InputError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IntegrationError, FloatingPointError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except BrokenPipeError:
        sys.stderr.close()
        return EXIT_IO
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

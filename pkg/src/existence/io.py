"""CSV emission and parsing for trajectories and force curves."""

from __future__ import annotations

import io
import math
from typing import Iterable, Mapping, Sequence, TextIO

import numpy as np

from .bichromatic import ForceCurve
from .errors import InputError

FORCE_COLUMNS = ("v", "F_mean", "F_spread")
PEAK_COLUMNS = ("v_peak", "F_peak", "n", "residual")


def fmt(value) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".17g")


def comment_lines(meta: Mapping[str, object]) -> list[str]:
    return [f"# {key} = {meta[key]}" for key in meta]


def write_csv(stream: TextIO, columns: Sequence[str], rows: Iterable[Sequence], meta=None) -> None:
    if meta:
        for line in comment_lines(meta):
            stream.write(line + "\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(fmt(x) for x in row) + "\n")


def write_force_curve(stream: TextIO, curve: ForceCurve, force_scale: float = 1.0,
                      velocity_scale: float = 1.0, meta=None) -> None:
    rows = zip(curve.velocities / velocity_scale, curve.forces / force_scale,
               curve.spreads / force_scale)
    write_csv(stream, FORCE_COLUMNS, rows, meta)


def parse_meta(lines: Iterable[str]) -> dict[str, str]:
    meta = {}
    for line in lines:
        body = line.lstrip("#").strip()
        if "=" in body:
            key, _, value = body.partition("=")
            meta[key.strip()] = value.strip()
    return meta


def read_force_curve(stream: TextIO) -> tuple[ForceCurve, dict[str, str]]:
    """Parse a ``v,F_mean[,F_spread]`` CSV with optional ``#`` metadata."""
    comments, body = [], []
    for line in stream:
        if line.startswith("#"):
            comments.append(line)
        elif line.strip():
            body.append(line)
    if not body:
        raise InputError("force curve file has no header row")
    header = [h.strip() for h in body[0].split(",")]
    if header[:2] != list(FORCE_COLUMNS[:2]):
        raise InputError(f"expected columns starting with v,F_mean; got {','.join(header)}")
    try:
        data = np.loadtxt(io.StringIO("".join(body[1:])), delimiter=",", ndmin=2)
    except ValueError as exc:
        raise InputError(f"malformed force curve data: {exc}") from None
    if data.size == 0:
        raise InputError("force curve file has no data rows")
    spreads = data[:, 2] if data.shape[1] > 2 else np.zeros(data.shape[0])
    meta = parse_meta(comments)
    return ForceCurve(data[:, 0], data[:, 1], spreads, meta=meta), meta


def meta_float(meta: Mapping[str, str], key: str, default: float = math.nan) -> float:
    try:
        return float(meta[key])
    except (KeyError, ValueError):
        return default

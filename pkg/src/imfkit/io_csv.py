"""Delimited-text ingestion and persistence for decompositions and
frequency results.

Real-world series arrive as delimited text with assorted layouts; the
format descriptor pins down the columns once and the loader enforces the
uniform-grid requirement the rest of the toolkit relies on.  Writers emit
17 significant digits so a round trip reproduces every double exactly.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .core import Signal
from .errors import IoError, NonUniformSpacing, ParseError

SPACING_RTOL = 1e-6


@dataclass(frozen=True)
class TimeSeriesFormat:
    """Column layout of a delimited time-series file."""

    delimiter: str = ","
    time_column: int | None = 0
    value_column: int = 1
    header_rows: int = 0
    dx_override: float | None = None

    def __post_init__(self):
        if len(self.delimiter) != 1:
            raise ValueError("delimiter must be a single character")
        if self.header_rows < 0:
            raise ValueError("header_rows must be >= 0")
        if self.dx_override is not None and not (self.dx_override > 0):
            raise ValueError("dx_override must be positive")


def load_timeseries_csv(path, fmt: TimeSeriesFormat | None = None) -> Signal:
    """Parse a delimited file into a uniformly sampled signal.

    The grid comes from the time column when present (spacing must be
    uniform within a relative tolerance of 1e-6, unless ``dx_override``
    takes over); without a time column the samples sit at 0, dx, 2dx, ...
    """
    if fmt is None:
        fmt = TimeSeriesFormat()
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh, delimiter=fmt.delimiter))
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc

    rows = rows[fmt.header_rows:]
    rows = [r for r in rows if r and any(tok.strip() for tok in r)]
    if not rows:
        raise ParseError(0, "no data rows")

    values = np.empty(len(rows))
    times = np.empty(len(rows)) if fmt.time_column is not None else None
    for i, row in enumerate(rows):
        rownum = i + fmt.header_rows
        try:
            values[i] = float(row[fmt.value_column])
        except (IndexError, ValueError) as exc:
            raise ParseError(rownum, f"bad value column: {exc}") from exc
        if times is not None:
            try:
                times[i] = float(row[fmt.time_column])
            except (IndexError, ValueError) as exc:
                raise ParseError(rownum, f"bad time column: {exc}") from exc

    if times is None:
        dx = fmt.dx_override if fmt.dx_override is not None else 1.0
        return Signal(values, dx, 0.0)

    if len(rows) < 2:
        raise ParseError(0, "need at least 2 data rows")
    steps = np.diff(times)
    if np.any(steps <= 0):
        raise ParseError(0, "time stamps must be strictly increasing")
    dx = float(np.mean(steps))
    if np.max(np.abs(steps - dx)) > SPACING_RTOL * abs(dx):
        if fmt.dx_override is None:
            raise NonUniformSpacing(
                "time stamps are not uniformly spaced; set dx_override"
            )
        dx = fmt.dx_override
    return Signal(values, dx, float(times[0]))


def write_decomposition_csv(dec, path) -> None:
    """Columns x, input, imf_1..imf_m, remainder at 17 significant digits."""
    x = dec.remainder.x
    cols = [x, dec.reconstruct()] + [imf.samples for imf in dec.imfs]
    cols.append(dec.remainder.samples)
    header = (
        "x,input,"
        + "".join(f"imf_{i+1}," for i in range(len(dec.imfs)))
        + "remainder"
    )
    try:
        np.savetxt(path, np.column_stack(cols), delimiter=",", header=header,
                   comments="", fmt="%.17g")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def write_freq_csv(fr, path) -> None:
    """Columns x, theta, omega, f1, f2, method, low_confidence_flag."""
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["x", "theta", "omega", "f1", "f2", "method", "low_confidence_flag"]
            )
            for i in range(fr.x.size):
                writer.writerow([
                    f"{fr.x[i]:.17g}", f"{fr.theta[i]:.17g}",
                    f"{fr.omega[i]:.17g}", f"{fr.f1[i]:.17g}",
                    f"{fr.f2[i]:.17g}", fr.method,
                    int(fr.low_confidence[i]),
                ])
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def write_diagnostics_csv(dec, path) -> None:
    """Per-component inner-loop record: iterations, final SD, mask length,
    and the final eps/delta products when the adaptive method supplied
    them."""
    has_conv = bool(dec.convergence)
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            header = ["component", "iterations", "final_sd", "mask_half_length"]
            if has_conv:
                header += ["eps_product", "delta_product"]
            writer.writerow(header)
            for i, d in enumerate(dec.diagnostics):
                row = [
                    f"imf_{i+1}", d.iterations, f"{d.final_sd:.17g}",
                    f"{d.mask_half_length:.17g}",
                ]
                if has_conv:
                    c = dec.convergence[i]
                    row += [
                        f"{c.final_eps_product:.17g}",
                        f"{c.final_delta_product:.17g}",
                    ]
                writer.writerow(row)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def write_sd_history_csv(dec, path) -> None:
    """Long-form inner-loop SD trace: component, iteration, sd."""
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["component", "iteration", "sd"])
            for i, d in enumerate(dec.diagnostics):
                for j, sd in enumerate(d.sd_history):
                    writer.writerow([f"imf_{i+1}", j + 1, f"{sd:.17g}"])
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc

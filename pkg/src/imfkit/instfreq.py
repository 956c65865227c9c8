"""Purely local instantaneous phase and frequency of an oscillatory
component.

The component and its derivative are divided by spline envelopes of their
extrema, giving a unit-amplitude rotating pair whose polar angle is the
phase; the frequency is its derivative.  Sudden amplitude changes are
detected first and the envelopes are built per segment so a jump is not
smeared across its neighborhood.  A discrete analytic-signal baseline is
included for comparison.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.signal import hilbert

from .core import Signal, derivative, find_extrema
from .errors import DegenerateSegment, TooFewExtrema


@dataclass(frozen=True)
class Envelope:
    """Positive per-sample amplitude bound dominating the signal."""

    values: np.ndarray
    knots: tuple  # extrema indices the splines pass through
    segments: tuple  # breakpoint indices separating independent segments

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)


@dataclass(frozen=True)
class FreqResult:
    """Phase, frequency and the normalized rotating pair for one method."""

    x: np.ndarray
    theta: np.ndarray
    omega: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    eno_breaks: tuple
    method: str  # "local" or "hilbert"
    low_confidence: np.ndarray  # endpoint stencils and interpolated holes

    def __post_init__(self):
        for name in ("x", "theta", "omega", "f1", "f2", "low_confidence"):
            arr = np.asarray(getattr(self, name))
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def eno_breakpoints(s: Signal, ratio_threshold: float = 2.0) -> list:
    """Indices of sudden amplitude changes between consecutive extrema.

    When the magnitudes of two consecutive extrema differ by more than
    ``ratio_threshold``, the span between them contains a jump; the
    breakpoint is placed at the sample where the forward and backward
    differences disagree the most.
    """
    if not (ratio_threshold > 0):
        raise ValueError("ratio_threshold must be positive")
    ex = find_extrema(s)
    if len(ex) < 2:
        return []
    idx = np.array(ex.indices, dtype=int)
    mag = np.abs(np.array(ex.values, dtype=float))
    y = s.samples
    breaks = []
    tiny = 1e-12 * float(np.max(np.abs(y))) if y.size else 0.0
    for a, b, ma, mb in zip(idx[:-1], idx[1:], mag[:-1], mag[1:]):
        lo, hi = (ma, mb) if ma <= mb else (mb, ma)
        if hi <= ratio_threshold * max(lo, tiny):
            continue
        inner = np.arange(max(a, 1), min(b, len(y) - 2) + 1)
        if inner.size == 0:
            continue
        fwd = y[inner + 1] - y[inner]
        bwd = y[inner] - y[inner - 1]
        breaks.append(int(inner[np.argmax(np.abs(fwd - bwd))]))
    out = []
    for b in breaks:
        if not out or b > out[-1]:
            out.append(b)
    return out


def _segment_envelope(y_abs: np.ndarray, knots: np.ndarray, lo: int, hi: int):
    """Spline through the knot amplitudes over [lo, hi), constant beyond."""
    if knots.size < 2:
        raise DegenerateSegment(f"segment [{lo}, {hi}) has {knots.size} extrema")
    spline = CubicSpline(knots.astype(float), y_abs[knots], bc_type="natural")
    pos = np.clip(np.arange(lo, hi, dtype=float), knots[0], knots[-1])
    return spline(pos)


def envelope(s: Signal, breaks: list | None = None) -> Envelope:
    """Amplitude envelope from splines through |s| at the extrema of s.

    Each segment between breakpoints is enveloped independently, so a
    sudden amplitude change stays confined to its breakpoint sample.  The
    result is clipped from below by |s| and a positive floor, making it a
    true pointwise bound.
    """
    if breaks is None:
        breaks = []
    y = s.samples
    n = y.size
    y_abs = np.abs(y)
    gmax = float(np.max(y_abs)) if n else 0.0
    floor = 1e-12 * gmax
    ex = find_extrema(s)
    all_knots = np.array(ex.indices, dtype=int)
    bounds = [0] + [int(b) for b in breaks] + [n]
    values = np.empty(n)
    used = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        if hi <= lo:
            continue
        knots = all_knots[(all_knots >= lo) & (all_knots < hi)]
        try:
            values[lo:hi] = _segment_envelope(y_abs, knots, lo, hi)
            used.extend(int(k) for k in knots)
        except DegenerateSegment:
            # not enough oscillation to hang a spline on; the flat bound
            # is the only envelope the segment supports
            values[lo:hi] = float(np.max(y_abs[lo:hi]))
    values = np.maximum.reduce([values, y_abs, np.full(n, floor)])
    return Envelope(values=values, knots=tuple(used), segments=tuple(int(b) for b in breaks))


def normalize_imf(s: Signal, eno_threshold: float = 2.0):
    """Envelope-normalized component pair (f1, f2) with their envelopes.

    f1 is the signal over its envelope q; f2 is the derivative over its
    envelope r.  Both envelopes share the breakpoints detected on the
    signal so the segments stay aligned.
    """
    ex = find_extrema(s)
    if len(ex) < 2:
        raise TooFewExtrema(
            f"normalization needs >= 2 extrema, found {len(ex)}"
        )
    breaks = eno_breakpoints(s, eno_threshold)
    q = envelope(s, breaks)
    ds = derivative(s)
    r = envelope(ds, breaks)
    f1 = s.with_samples(s.samples / q.values)
    f2 = s.with_samples(ds.samples / r.values)
    return f1, f2, q, r


def _phase_holes(f1: Signal, f2: Signal, tol: float = 1e-8) -> np.ndarray:
    return (np.abs(f1.samples) < tol) & (np.abs(f2.samples) < tol)


def instantaneous_phase(f1: Signal, f2: Signal) -> Signal:
    """Continuous polar angle of the rotating pair (f1, f2).

    The angle -atan2(f2, f1) is unwrapped so adjacent samples never jump
    by more than pi.  Samples where both components nearly vanish carry
    no direction; the phase is bridged linearly across them.
    """
    holes = _phase_holes(f1, f2)
    raw = -np.arctan2(f2.samples, f1.samples)
    n = raw.size
    valid = ~holes
    if not valid.any():
        return f1.with_samples(np.zeros(n))
    theta_valid = np.unwrap(raw[valid])
    theta = np.interp(
        np.arange(n, dtype=float),
        np.flatnonzero(valid).astype(float),
        theta_valid,
    )
    return f1.with_samples(theta)


def instantaneous_frequency(theta: Signal) -> Signal:
    """Per-sample frequency: the derivative of the unwrapped phase."""
    return derivative(theta)


def _result(x, theta, omega, f1, f2, breaks, method, holes) -> FreqResult:
    low = np.zeros(theta.size, dtype=bool)
    low[:2] = True
    low[-2:] = True
    low |= holes
    return FreqResult(
        x=x,
        theta=theta,
        omega=omega,
        f1=f1,
        f2=f2,
        eno_breaks=tuple(int(b) for b in breaks),
        method=method,
        low_confidence=low,
    )


def presmooth_component(s: Signal, fraction: float = 0.05) -> Signal:
    """Strip faint side components riding on a dominant oscillation.

    The signal is re-sifted with a uniform mask; components carrying less
    than ``fraction`` of the strongest component's energy are residue of
    an imperfect separation, not structure, and are dropped before the
    phase is measured.
    """
    from .iterfilt import if_decompose

    dec = if_decompose(s)
    parts = [imf.samples for imf in dec.imfs] + [dec.remainder.samples]
    energies = [float(np.sum(p**2)) for p in parts]
    dominant = int(np.argmax(energies))
    cutoff = fraction * energies[dominant]
    # only components faster than the dominant one are residue riding on
    # it; slower structure and the trend belong to the waveform
    kept = [
        p for j, (p, e) in enumerate(zip(parts, energies))
        if j >= dominant or e >= cutoff
    ]
    if len(kept) == len(parts):
        return s
    return s.with_samples(np.sum(kept, axis=0))


def local_instantaneous_frequency(
    s: Signal,
    eno_threshold: float = 2.0,
    presmooth: bool = False,
    presmooth_fraction: float = 0.05,
) -> FreqResult:
    """Full local pipeline: normalize, take the angle, differentiate."""
    if presmooth:
        s = presmooth_component(s, presmooth_fraction)
    f1, f2, q, r = normalize_imf(s, eno_threshold)
    holes = _phase_holes(f1, f2)
    theta = instantaneous_phase(f1, f2)
    omega = instantaneous_frequency(theta)
    return _result(
        s.x, theta.samples, omega.samples, f1.samples, f2.samples,
        q.segments, "local", holes,
    )


def hilbert_instantaneous_frequency(s: Signal) -> FreqResult:
    """Analytic-signal baseline on the periodic extension of ``s``.

    Negative frequencies are zeroed, positive doubled, DC and Nyquist
    kept; the phase is the unwrapped angle of the resulting complex
    signal.
    """
    analytic = hilbert(s.samples)
    theta = np.unwrap(np.angle(analytic))
    omega = derivative(s.with_samples(theta)).samples
    holes = np.abs(analytic) < 1e-12 * max(float(np.max(np.abs(s.samples))), 1e-300)
    return _result(
        s.x, theta, omega, np.cos(theta), -np.sin(theta),
        (), "hilbert", holes,
    )

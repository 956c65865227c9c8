"""Signal container, extrema analysis, moving averages and differentiation.

Everything downstream (decomposition, filter design, frequency analysis)
works on the uniformly sampled :class:`Signal` defined here.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import signal

from .errors import FilterTooLong, SignalTooShort

BOUNDARY_MODES = ("reflect", "periodic", "constant")

# np.pad equivalents of the boundary extension modes.  "constant" extends
# with the edge value so unit-mass averaging maps constants to constants.
_PAD_MODE = {"reflect": "reflect", "periodic": "wrap", "constant": "edge"}


@dataclass(frozen=True)
class Signal:
    """Uniformly sampled real-valued series.

    Parameters
    ----------
    samples : array_like
        Sample values, length >= 2, all finite.
    dx : float
        Positive sample spacing in x-units.
    x0 : float
        x-coordinate of the first sample.
    """

    samples: np.ndarray
    dx: float = 1.0
    x0: float = 0.0

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("signal needs at least 2 samples")
        if not np.all(np.isfinite(arr)):
            raise ValueError("signal samples must be finite")
        if not (self.dx > 0):
            raise ValueError("dx must be positive")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    def __len__(self):
        return self.samples.size

    @property
    def x(self):
        """Sample x-coordinates."""
        return self.x0 + self.dx * np.arange(self.samples.size)

    def with_samples(self, samples):
        """New signal with the same grid and different values."""
        return Signal(samples, self.dx, self.x0)


@dataclass(frozen=True)
class ExtremumList:
    """Ordered interior extrema with strictly alternating kinds."""

    indices: tuple = field(default_factory=tuple)
    kinds: tuple = field(default_factory=tuple)  # "max" / "min"
    values: tuple = field(default_factory=tuple)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(zip(self.indices, self.kinds, self.values))


def find_extrema(s: Signal) -> ExtremumList:
    """Locate interior local maxima and minima of ``s``.

    A flat plateau that is a local extremum contributes a single entry at
    its midpoint index (rounded down).  Endpoints are never counted.
    """
    y = s.samples
    n = y.size
    # run-length encode equal-value plateaus
    change = np.flatnonzero(np.diff(y) != 0.0)
    starts = np.concatenate(([0], change + 1))
    ends = np.concatenate((change, [n - 1]))  # inclusive
    vals = y[starts]

    indices, kinds, values = [], [], []
    for r in range(1, len(starts) - 1):
        if starts[r] == 0 or ends[r] == n - 1:
            continue
        left, mid, right = vals[r - 1], vals[r], vals[r + 1]
        if left < mid and mid > right:
            kind = "max"
        elif left > mid and mid < right:
            kind = "min"
        else:
            continue
        indices.append(int((starts[r] + ends[r]) // 2))
        kinds.append(kind)
        values.append(float(mid))
    return ExtremumList(tuple(indices), tuple(kinds), tuple(values))


def is_trend(s: Signal) -> bool:
    """True when ``s`` has at most one interior local extremum."""
    return len(find_extrema(s)) <= 1


def _filter_weights(w):
    """Accept a DiscreteFilter-like object or a bare weight vector."""
    weights = getattr(w, "weights", w)
    weights = np.asarray(weights, dtype=float)
    if weights.ndim != 1 or weights.size % 2 != 1:
        raise ValueError("filter weights must be an odd-length 1-D vector")
    return weights


def extend(samples: np.ndarray, pad: int, boundary: str) -> np.ndarray:
    """Pad ``samples`` by ``pad`` entries on both sides per boundary mode."""
    if boundary not in _PAD_MODE:
        raise ValueError(f"unknown boundary mode {boundary!r}")
    if pad == 0:
        return np.asarray(samples, dtype=float)
    return np.pad(np.asarray(samples, dtype=float), pad, mode=_PAD_MODE[boundary])


def moving_average(s: Signal, w, boundary: str = "reflect") -> Signal:
    """Centered weighted moving average of ``s`` with filter ``w``.

    ``out[i] = sum_t ext[i + t] * w[t]`` over the filter support, where
    ``ext`` extends the signal according to ``boundary``.
    """
    weights = _filter_weights(w)
    half = weights.size // 2
    if half > len(s):
        raise FilterTooLong(
            f"filter half-width {half} exceeds signal length {len(s)}"
        )
    ext = extend(s.samples, half, boundary)
    # weights are indexed -half..half; correlation == convolution with the
    # reversed kernel, and every filter here is applied as written
    out = signal.convolve(ext, weights[::-1], mode="valid", method="auto")
    return s.with_samples(out)


def derivative(s: Signal) -> Signal:
    """First derivative: central differences interior, one-sided at the ends."""
    if len(s) < 3:
        raise SignalTooShort("derivative needs at least 3 samples")
    y = s.samples
    out = np.empty_like(y)
    out[1:-1] = (y[2:] - y[:-2]) / (2.0 * s.dx)
    out[0] = (y[1] - y[0]) / s.dx
    out[-1] = (y[-1] - y[-2]) / s.dx
    return s.with_samples(out)

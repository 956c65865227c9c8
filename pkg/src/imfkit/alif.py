"""Adaptive local iterative filtering: a data-driven non-uniform mask
field, a pointwise-varying moving average, and a-posteriori convergence
diagnostics for each extracted component.

Where plain iterative filtering averages every sample over one window
length, here the window half-length l(x) follows the local distance
between extrema, so signals whose instantaneous frequencies cross each
other in time can still be separated.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .core import Signal, extend, find_extrema, is_trend, moving_average
from .errors import FilterTooLong, TooFewExtrema, ZeroReference
from .fpfilter import FilterProfile, default_profile, sample_filter, self_convolve
from .iterfilt import Decomposition, IFConfig, InnerDiagnostics, if_decompose, sd_metric


@dataclass(frozen=True)
class MaskField:
    """Per-sample positive averaging half-lengths, in samples."""

    values: np.ndarray
    min_clamp: float = 2.0

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float).copy()
        if not (self.min_clamp > 0):
            raise ValueError("min_clamp must be positive")
        if not np.all(np.isfinite(arr)):
            raise ValueError("mask values must be finite")
        if np.any(arr < self.min_clamp):
            raise ValueError("mask values must be >= min_clamp")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class ALIFConfig:
    mask_multiplier: float = 2.0
    min_clamp: float = 2.0
    # extrema whose value gap to a neighbor is below this fraction of the
    # signal's extremal range are treated as micro-oscillations and ignored
    # when estimating the local scale
    mask_prominence: float = 0.02
    sd_threshold: float = 1e-5
    max_inner: int = 200
    max_imfs: int = 32
    boundary: str = "reflect"
    profile: FilterProfile | None = None  # None -> memoized default shape
    convolve_filter: bool = True
    mask_stretch: float = 2.0
    # interior fraction over which the sup-norm diagnostics are taken,
    # keeping boundary-extension artifacts out of the convergence signal
    diagnostic_interior: float = 0.9

    def __post_init__(self):
        if not (self.mask_multiplier > 0):
            raise ValueError("mask_multiplier must be positive")

    def get_profile(self) -> FilterProfile:
        return self.profile if self.profile is not None else default_profile()

    def if_config(self) -> IFConfig:
        """Uniform-mask configuration sharing this config's parameters."""
        return IFConfig(
            sd_threshold=self.sd_threshold,
            max_inner=self.max_inner,
            max_imfs=self.max_imfs,
            boundary=self.boundary,
            profile=self.profile,
            convolve_filter=self.convolve_filter,
            mask_stretch=self.mask_stretch,
        )


@dataclass(frozen=True)
class ConvergenceDiagnostics:
    """Ratios of successive moving-average sup-norms during sifting.

    ``eps[n]`` compares L(f) across steps, ``delta[n]`` compares L(|f|);
    a product of eps tending to zero while the product of delta stays
    bounded away from zero indicates convergence to a well-formed
    component.
    """

    eps: tuple
    delta: tuple
    eps_product: tuple
    delta_product: tuple

    @property
    def final_eps_product(self) -> float:
        return self.eps_product[-1] if self.eps_product else float("nan")

    @property
    def final_delta_product(self) -> float:
        return self.delta_product[-1] if self.delta_product else float("nan")


def raw_mask_field(
    s: Signal,
    multiplier: float = 2.0,
    min_clamp: float = 2.0,
    prominence: float = 0.02,
) -> MaskField:
    """Mask half-lengths from the local distance between extrema.

    At the midpoint between consecutive extrema the half-length knot is
    ``multiplier`` times their gap in samples; a cubic spline carries the
    knots to every sample, constant beyond the first/last knot.

    Adjacent extrema pairs whose value difference is below ``prominence``
    times the extremal range are micro-oscillations riding on a larger
    wave; they are dropped before the gaps are measured so they cannot
    collapse the scale estimate.
    """
    ex = find_extrema(s)
    if len(ex) < 3:
        raise TooFewExtrema(f"mask field needs >= 3 extrema, found {len(ex)}")
    idx = np.array(ex.indices, dtype=float)
    vals_at = np.array(ex.values, dtype=float)
    if prominence > 0 and idx.size >= 4:
        scale = vals_at.max() - vals_at.min()
        while idx.size >= 4:
            d = np.abs(np.diff(vals_at))
            i = int(np.argmin(d))
            if d[i] >= prominence * scale:
                break
            # removing the max/min pair merges the surrounding runs and
            # keeps the remaining kinds alternating
            idx = np.delete(idx, [i, i + 1])
            vals_at = np.delete(vals_at, [i, i + 1])
    if idx.size < 3:
        raise TooFewExtrema("fewer than 3 significant extrema for the mask field")
    gaps = np.diff(idx)
    knots_x = (idx[:-1] + idx[1:]) / 2.0
    knots_v = multiplier * gaps
    if knots_x.size >= 2:
        spline = CubicSpline(knots_x, knots_v, bc_type="natural")
        vals = np.empty(len(s))
        inside = np.arange(len(s), dtype=float)
        vals = spline(np.clip(inside, knots_x[0], knots_x[-1]))
    else:
        vals = np.full(len(s), knots_v[0])
    vals = np.maximum(vals, min_clamp)
    return MaskField(vals, min_clamp)


def smooth_mask_field(raw: MaskField, cfg: ALIFConfig | None = None) -> MaskField:
    """Slowly varying mask: the uniform-filtering trend of the raw field.

    All oscillatory components of the raw field are subtracted; the
    result is floored at max(min_clamp, 0.1 x mean of raw) so the field
    stays strictly positive.
    """
    if cfg is None:
        cfg = ALIFConfig()
    field_signal = Signal(raw.values)
    if is_trend(field_signal):
        trend = raw.values
    else:
        dec = if_decompose(field_signal, cfg.if_config())
        trend = dec.remainder.samples
    floor = max(raw.min_clamp, 0.1 * float(np.mean(raw.values)))
    return MaskField(np.maximum(trend, floor), raw.min_clamp)


def _realized_filters(cfg: ALIFConfig, lengths: np.ndarray, n_samples: int):
    """Distinct realized filters keyed by 0.1-sample quantized length."""
    keys = np.round(lengths * 10.0).astype(np.int64)
    table = {}
    for key in np.unique(keys):
        l = key / 10.0
        base_half = cfg.mask_stretch * l
        if cfg.convolve_filter:
            base_half = min(base_half, n_samples / 2.0)
            table[key] = self_convolve(sample_filter(cfg.get_profile(), base_half))
        else:
            base_half = min(base_half, float(n_samples))
            table[key] = sample_filter(cfg.get_profile(), base_half)
    return keys, table


def _apply_mask(s: Signal, keys, table, boundary: str) -> Signal:
    max_half = max(w.half_width for w in table.values())
    if max_half > len(s):
        raise FilterTooLong(
            f"filter half-width {max_half} exceeds signal length {len(s)}"
        )
    if len(table) == 1:
        # uniform field: exactly the uniform moving average, same code path
        (w,) = table.values()
        return moving_average(s, w, boundary)
    out = np.empty(len(s))
    ext = extend(s.samples, max_half, boundary)
    for key, w in table.items():
        rows = np.flatnonzero(keys == key)
        half = w.half_width
        # gather the stencils for just these rows
        offsets = np.arange(-half, half + 1)
        stencil = ext[(rows + max_half)[:, None] + offsets[None, :]]
        out[rows] = stencil @ w.weights
    return s.with_samples(out)


def adaptive_moving_average(
    s: Signal, l: MaskField, cfg: ALIFConfig | None = None
) -> Signal:
    """Centered weighted moving average with a per-sample window length.

    Each distinct (0.1-sample quantized) mask length is realized once;
    the output row for sample i uses the filter of length l(i).
    """
    if cfg is None:
        cfg = ALIFConfig()
    if len(l) != len(s):
        raise ValueError("mask field length must match the signal")
    keys, table = _realized_filters(cfg, l.values, len(s))
    return _apply_mask(s, keys, table, cfg.boundary)


def eps_delta(
    prev_ma: Signal,
    curr_ma: Signal,
    prev_abs_ma: Signal,
    curr_abs_ma: Signal,
    interior: float = 0.9,
):
    """Sup-norm ratios of successive averages of the iterate and |iterate|."""

    def _sup(sig):
        y = sig.samples
        cut = int(round(y.size * (1.0 - interior) / 2.0))
        return float(np.max(np.abs(y[cut: y.size - cut] if cut > 0 else y)))

    ref_eps = _sup(prev_ma)
    ref_delta = _sup(prev_abs_ma)
    if ref_eps == 0.0 or ref_delta == 0.0:
        raise ZeroReference("previous moving average has zero sup-norm")
    return _sup(curr_ma) / ref_eps, _sup(curr_abs_ma) / ref_delta


def alif_inner_loop(s: Signal, l: MaskField, cfg: ALIFConfig):
    """Sift ``s`` with a frozen mask field until the SD metric stabilizes.

    Returns the candidate component, the iteration diagnostics, and the
    eps/delta convergence diagnostics.
    """
    if len(l) != len(s):
        raise ValueError("mask field length must match the signal")
    keys, table = _realized_filters(cfg, l.values, len(s))  # mask frozen here
    input_norm = float(np.linalg.norm(s.samples))
    f = s
    sd_history = []
    eps_list, delta_list = [], []
    prev_ma = prev_abs_ma = None
    iterations = 0
    while iterations < cfg.max_inner:
        ma = _apply_mask(f, keys, table, cfg.boundary)
        f_next = f.with_samples(f.samples - ma.samples)
        if iterations > 0 and float(np.linalg.norm(f_next.samples)) > float(
            np.linalg.norm(f.samples)
        ):
            # a fixed nonuniform averaging operator is not self-adjoint, and
            # with a strongly varying mask the subtraction step can start
            # amplifying instead of contracting; the pre-growth iterate is
            # the best-formed component, so keep it and stop
            break
        abs_ma = _apply_mask(
            f.with_samples(np.abs(f.samples)), keys, table, cfg.boundary
        )
        if prev_ma is not None:
            try:
                e, d = eps_delta(
                    prev_ma, ma, prev_abs_ma, abs_ma, cfg.diagnostic_interior
                )
                eps_list.append(e)
                delta_list.append(d)
            except ZeroReference:
                pass  # previous average vanished: already converged
        prev_ma, prev_abs_ma = ma, abs_ma
        iterations += 1
        if float(np.linalg.norm(f_next.samples)) <= 1e-14 * input_norm:
            f = f_next
            break
        sd = sd_metric(f, f_next)
        sd_history.append(sd)
        f = f_next
        if sd < cfg.sd_threshold:
            break
    eps_prod = tuple(np.cumprod(eps_list)) if eps_list else ()
    delta_prod = tuple(np.cumprod(delta_list)) if delta_list else ()
    inner = InnerDiagnostics(
        iterations=iterations,
        sd_history=tuple(sd_history),
        final_sd=sd_history[-1] if sd_history else float("nan"),
        mask_half_length=float(np.max(l.values)),
    )
    conv = ConvergenceDiagnostics(
        eps=tuple(eps_list),
        delta=tuple(delta_list),
        eps_product=eps_prod,
        delta_product=delta_prod,
    )
    return f, inner, conv


def alif_decompose(s: Signal, cfg: ALIFConfig | None = None) -> Decomposition:
    """Adaptive decomposition of ``s`` into components plus a trend."""
    if cfg is None:
        cfg = ALIFConfig()
    remainder = s
    input_energy = float(np.sum(s.samples**2))
    imfs, diags, convs = [], [], []
    low_energy_streak = 0
    max_reached = False
    while True:
        if is_trend(remainder):
            break
        if len(imfs) >= cfg.max_imfs:
            max_reached = True
            break
        try:
            raw = raw_mask_field(
                remainder, cfg.mask_multiplier, cfg.min_clamp, cfg.mask_prominence
            )
        except TooFewExtrema:
            break  # too few significant extrema to estimate a local scale
        mask = smooth_mask_field(raw, cfg)
        imf, d, conv = alif_inner_loop(remainder, mask, cfg)
        imf_energy = float(np.sum(imf.samples**2))
        new_remainder = remainder.with_samples(remainder.samples - imf.samples)
        osc_old = float(np.sum((remainder.samples - np.mean(remainder.samples)) ** 2))
        osc_new = float(
            np.sum((new_remainder.samples - np.mean(new_remainder.samples)) ** 2)
        )
        if osc_new > osc_old:
            # subtracting the candidate made the remainder rougher, so the
            # loop is creating structure rather than extracting it; the
            # previous remainder is final
            break
        remainder = new_remainder
        imfs.append(imf)
        diags.append(d)
        convs.append(conv)
        if imf_energy < 1e-10 * input_energy:
            low_energy_streak += 1
            if low_energy_streak >= 2:
                break
        else:
            low_energy_streak = 0
    return Decomposition(
        imfs=tuple(imfs),
        remainder=remainder,
        diagnostics=tuple(diags),
        max_imfs_reached=max_reached,
        source_meta={"method": "alif", "mask_multiplier": cfg.mask_multiplier},
        convergence=tuple(convs),
    )


def write_mask_csv(mask: MaskField, s: Signal, path) -> None:
    """Columns x, l_samples."""
    np.savetxt(
        path,
        np.column_stack([s.x, mask.values]),
        delimiter=",",
        header="x,l_samples",
        comments="",
        fmt="%.17g",
    )

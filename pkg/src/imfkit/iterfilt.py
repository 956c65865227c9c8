"""Iterative filtering decomposition with a uniform mask length.

A signal is split into intrinsic mode functions by repeatedly subtracting
a moving average (inner loop) and peeling off the converged fluctuation
(outer loop) until only a trend remains.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import Signal, find_extrema, is_trend, moving_average
from .errors import TooFewExtrema, ZeroReference
from .fpfilter import (
    DiscreteFilter,
    FilterProfile,
    default_profile,
    filter_symbol,
    sample_filter,
    self_convolve,
)


@dataclass(frozen=True)
class IFConfig:
    chi: float = 1.6
    sd_threshold: float = 1e-5
    max_inner: int = 200
    max_imfs: int = 32
    boundary: str = "reflect"
    profile: FilterProfile | None = None  # None -> memoized default shape
    convolve_filter: bool = True
    # the base shape is realized at mask_stretch times the mask half-length
    # (before self-convolution) so the mask's own band sits in the deep
    # stopband of the applied filter rather than on its shoulder
    mask_stretch: float = 2.0
    # outer-loop stall guard: when the realized filter is clamped by the
    # record length and the extracted fluctuation carries less than this
    # fraction of the remainder's energy, no further scale can be resolved
    stall_fraction: float = 0.02

    def get_profile(self) -> FilterProfile:
        return self.profile if self.profile is not None else default_profile()


@dataclass(frozen=True)
class InnerDiagnostics:
    iterations: int
    sd_history: tuple
    final_sd: float
    mask_half_length: float


@dataclass(frozen=True)
class Decomposition:
    imfs: tuple
    remainder: Signal
    diagnostics: tuple
    max_imfs_reached: bool = False
    source_meta: dict = field(default_factory=dict)
    convergence: tuple = ()  # per-IMF ConvergenceDiagnostics (adaptive method)

    @property
    def n_components(self) -> int:
        """IMFs plus the trend remainder."""
        return len(self.imfs) + 1

    def reconstruct(self) -> np.ndarray:
        total = self.remainder.samples.copy()
        for imf in self.imfs:
            total += imf.samples
        return total


def uniform_mask_length(s: Signal, chi: float = 1.6) -> int:
    """Mask half-length 2*floor(chi * N / k) from the extrema density."""
    k = len(find_extrema(s))
    if k < 2:
        raise TooFewExtrema(f"need >= 2 extrema, found {k}")
    l = 2 * math.floor(chi * len(s) / k)
    return max(l, 2)


def sd_metric(prev: Signal, curr: Signal) -> float:
    """Relative L2 change between successive inner-loop iterates."""
    ref = float(np.linalg.norm(prev.samples))
    if ref == 0.0:
        raise ZeroReference("previous iterate has zero norm")
    return float(np.linalg.norm(curr.samples - prev.samples)) / ref


def realize_filter(
    cfg: IFConfig, mask_half_length: float, n_samples: int | None = None
) -> DiscreteFilter:
    """Concrete averaging filter for a mask half-length ``l``.

    The base shape is realized at ``mask_stretch * l`` samples and, with
    convolution enabled, convolved with itself so the symbol is a square
    and the convergence condition holds by construction.  When a record
    length is given, the base is clamped so the applied support never
    exceeds the record.
    """
    profile = cfg.get_profile()
    base_half = cfg.mask_stretch * mask_half_length
    if cfg.convolve_filter:
        if n_samples is not None:
            base_half = min(base_half, n_samples / 2.0)
        return self_convolve(sample_filter(profile, base_half))
    if n_samples is not None:
        base_half = min(base_half, float(n_samples))
    return sample_filter(profile, base_half)


def if_inner_loop(s: Signal, w: DiscreteFilter, cfg: IFConfig):
    """Sift ``s`` with a fixed filter until the SD metric stabilizes.

    Returns the candidate IMF and the iteration diagnostics.
    """
    input_norm = float(np.linalg.norm(s.samples))
    f = s
    sd_history = []
    iterations = 0
    while iterations < cfg.max_inner:
        ma = moving_average(f, w, cfg.boundary)
        f_next = f.with_samples(f.samples - ma.samples)
        iterations += 1
        if float(np.linalg.norm(f_next.samples)) <= 1e-14 * input_norm:
            # the averaging annihilated the signal; the zero-ish iterate is
            # the IMF and there is nothing left to stabilize
            f = f_next
            break
        sd = sd_metric(f, f_next)
        sd_history.append(sd)
        f = f_next
        if sd < cfg.sd_threshold:
            break
    final_sd = sd_history[-1] if sd_history else float("nan")
    return f, InnerDiagnostics(
        iterations=iterations,
        sd_history=tuple(sd_history),
        final_sd=final_sd,
        mask_half_length=w.half_length,
    )


def spectral_limit_oracle(
    s: Signal, w: DiscreteFilter, n: int | None, zero_tol: float = 1e-10
) -> Signal:
    """Fourier-domain form of ``n`` sifting steps on the periodic signal.

    Each mode is multiplied by ``(1 - symbol)**n``; ``n=None`` gives the
    limit, keeping exactly the modes where the symbol vanishes.
    """
    sym = filter_symbol(w, len(s))
    fhat = np.fft.fft(s.samples)
    if n is None:
        mult = (np.abs(sym) < zero_tol).astype(float)
    else:
        mult = (1.0 - sym) ** n
    out = np.real(np.fft.ifft(fhat * mult))
    return s.with_samples(out)


def if_decompose(s: Signal, cfg: IFConfig | None = None) -> Decomposition:
    """Full IF decomposition of ``s`` into IMFs plus a trend remainder."""
    if cfg is None:
        cfg = IFConfig()
    remainder = s
    input_energy = float(np.sum(s.samples**2))
    imfs, diags = [], []
    low_energy_streak = 0
    max_reached = False
    while True:
        if is_trend(remainder):
            break
        if len(imfs) >= cfg.max_imfs:
            max_reached = True
            break
        l = uniform_mask_length(remainder, cfg.chi)
        w = realize_filter(cfg, float(l), len(s))
        unclamped = (2.0 if cfg.convolve_filter else 1.0) * cfg.mask_stretch * l
        clamped = w.half_length < unclamped - 1e-9
        imf, d = if_inner_loop(remainder, w, cfg)
        imf_energy = float(np.sum(imf.samples**2))
        if clamped and imf_energy < cfg.stall_fraction * input_energy:
            # the record is too short to realize this mask; the loop can
            # only shave off residue, so the remainder is final
            break
        remainder = remainder.with_samples(remainder.samples - imf.samples)
        imfs.append(imf)
        diags.append(d)
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
        source_meta={"method": "if", "chi": cfg.chi},
    )

"""Smooth compactly supported filter design from a drift-diffusion PDE.

The master filter shape is obtained as the steady state of

    p_t = alpha * (h(x) p)_x + beta * (g2(x) p_x)_x

on [a, b], with drift transporting mass from the endpoints toward the
center (h(a) < 0 < h(b), g2 vanishing at a and b).  Balancing the inward
transport against the outward diffusion yields a smooth bump supported on
[a, b] that vanishes at the endpoints; larger alpha concentrates the mass
at the center, larger beta spreads it.  Rescaling the bump to any
half-length is done by piecewise-constant (Riemann sum) mass
redistribution, so filters of all lengths share one shape.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.sparse import diags
from scipy.sparse.linalg import splu

from .errors import FilterTooLong, GridTooSmall, InvalidCoefficients, NoSteadyState


@dataclass(frozen=True)
class FPCoefficients:
    """Coefficient functions and constants of the filter-design PDE."""

    h: Callable[[np.ndarray], np.ndarray]
    g2: Callable[[np.ndarray], np.ndarray]
    alpha: float
    beta: float
    a: float = -1.0
    b: float = 1.0

    def validate(self, grid: np.ndarray):
        g2v = self.g2(grid)
        interior = grid[(grid > self.a) & (grid < self.b)]
        if self.alpha <= 0 or self.beta <= 0:
            raise InvalidCoefficients("alpha and beta must be positive")
        if not (self.a < 0 < self.b):
            raise InvalidCoefficients("need a < 0 < b")
        if abs(float(self.g2(np.array([self.a]))[0])) > 1e-12 or abs(
            float(self.g2(np.array([self.b]))[0])
        ) > 1e-12:
            raise InvalidCoefficients("g2 must vanish at a and b")
        if np.any(self.g2(interior) <= 0):
            raise InvalidCoefficients("g2 must be positive inside (a, b)")
        if not (
            float(self.h(np.array([self.a]))[0]) < 0
            < float(self.h(np.array([self.b]))[0])
        ):
            raise InvalidCoefficients("need h(a) < 0 < h(b)")
        del g2v


# Preset drift/diffusion pair.  The diffusion (1 - x^2)^2 vanishes
# quadratically at the support endpoints; the drift is built so the
# zero-flux balance exp(-(alpha/beta) * integral h/g2) reproduces a
# flat-topped bump with erf-smoothed edges at the reference coefficient
# ratio beta/alpha = 18.  Away from that ratio the steady state is the
# same bump raised to the power 18*alpha/beta, so growing alpha still
# concentrates the mass and growing beta still spreads it.
_PRESET_PLATEAU = 0.42  # half-width of the flat top in [-1, 1] units
_PRESET_EDGE = 0.21  # erf edge width (standard deviation)
_PRESET_RATIO = 18.0  # reference beta/alpha baked into the drift
_PRESET_TILT = 1e-3  # linear drift term keeping h(+-1) sign-correct


def _preset_density(x):
    """Flat-topped bump: a box of half-width B blurred by a Gaussian."""
    x = np.asarray(x, dtype=float)
    rt2 = math.sqrt(2.0)
    from scipy.special import erf

    return erf((x + _PRESET_PLATEAU) / (_PRESET_EDGE * rt2)) - erf(
        (x - _PRESET_PLATEAU) / (_PRESET_EDGE * rt2)
    )


def _fig4_h(x):
    x = np.asarray(x, dtype=float)
    sig = _PRESET_EDGE
    dens = _preset_density(x)
    ddens = (math.sqrt(2.0 / math.pi) / sig) * (
        np.exp(-((x + _PRESET_PLATEAU) ** 2) / (2.0 * sig**2))
        - np.exp(-((x - _PRESET_PLATEAU) ** 2) / (2.0 * sig**2))
    )
    # potential gradient V' = -(log density)'
    vprime = -ddens / dens
    return _PRESET_RATIO * _fig4_g2(x) * vprime + _PRESET_TILT * x


def _fig4_g2(x):
    x = np.asarray(x, dtype=float)
    return np.where(np.abs(x) >= 1.0, 0.0, (1.0 - x**2) ** 2)


def fig4_coefficients(alpha: float, beta: float) -> FPCoefficients:
    """Preset inward drift / vanishing diffusion pair on [-1, 1]."""
    return FPCoefficients(h=_fig4_h, g2=_fig4_g2, alpha=alpha, beta=beta)


@dataclass(frozen=True)
class FilterProfile:
    """High-resolution master filter shape.

    ``masses[i]`` is the weight carried by the i-th of the ``2s+1`` equal
    subintervals of [a, b]; the masses sum to 1.
    """

    masses: np.ndarray
    a: float = -1.0
    b: float = 1.0

    def __post_init__(self):
        arr = np.asarray(self.masses, dtype=float).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "masses", arr)

    @property
    def n_intervals(self):
        return self.masses.size

    def cumulative(self):
        """Mass CDF at the 2s+2 partition nodes (0 at a, 1 at b)."""
        return np.concatenate(([0.0], np.cumsum(self.masses)))


@dataclass(frozen=True)
class DiscreteFilter:
    """Symmetric nonnegative unit-mass weight vector, taps -n..n."""

    weights: np.ndarray
    half_length: float

    def __post_init__(self):
        arr = np.asarray(self.weights, dtype=float).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "weights", arr)

    @property
    def half_width(self) -> int:
        return self.weights.size // 2


@dataclass(frozen=True)
class SpectrumReport:
    grid_size: int
    symbol: np.ndarray
    max_deviation: float
    zero_set: tuple
    condition_met: bool


def solve_fp_steady_state(
    coeffs: FPCoefficients,
    s: int = 1000,
    time_step: float | None = None,
    steady_tol: float = 1e-9,
    max_steps: int = 2_000_000,
) -> FilterProfile:
    """Drive the PDE from a centered discrete delta to its steady state.

    Finite-volume Crank-Nicolson on ``2s+1`` cells; fluxes vanish at the
    domain boundary so mass is conserved by construction, and the cell
    masses are renormalized each step against round-off leakage.
    """
    a, b = coeffs.a, coeffs.b
    ncell = 2 * s + 1
    dxg = (b - a) / ncell
    centers = a + dxg * (np.arange(ncell) + 0.5)
    faces = a + dxg * np.arange(ncell + 1)
    coeffs.validate(centers)
    if time_step is None:
        time_step = 1e-4 * (b - a) ** 2 / coeffs.beta

    # inward transport: velocity -alpha*h, so mass drifts toward the center
    vface = -coeffs.alpha * coeffs.h(faces)
    vface[0] = vface[-1] = 0.0
    g2f = coeffs.g2(faces)

    # operator on cell masses m (m_j = p_j * dxg):
    #   dm_j/dt = -(J_{j+1/2} - J_{j-1/2})
    #   J_face = v_face*(p_j + p_{j+1})/2 - beta*g2_face*(p_{j+1} - p_j)/dxg
    lower = np.zeros(ncell)
    main = np.zeros(ncell)
    upper = np.zeros(ncell)
    for j in range(ncell - 1):
        adv = vface[j + 1] * 0.5 / dxg
        dif = coeffs.beta * g2f[j + 1] / dxg**2
        # J_{j+1/2} contribution: m_j coefficient adv + dif,
        #                         m_{j+1} coefficient adv - dif
        main[j] -= adv + dif
        upper[j] -= adv - dif
        main[j + 1] += adv - dif
        lower[j + 1] += adv + dif
    A = diags(
        [lower[1:], main, upper[:-1]], offsets=[-1, 0, 1], format="csc"
    )

    eye = diags([np.ones(ncell)], [0], format="csc")
    lhs = splu((eye - 0.5 * time_step * A).tocsc())
    rhs = eye + 0.5 * time_step * A

    m = np.zeros(ncell)
    m[s] = 1.0  # discrete delta in the central cell
    for _ in range(max_steps):
        m_new = lhs.solve(rhs @ m)
        total = m_new.sum()
        assert abs(total - 1.0) < 1e-8, "mass drift exceeded tolerance"
        m_new /= total
        if np.abs(m_new - m).sum() / time_step < steady_tol:
            m = m_new
            break
        m = m_new
    else:
        raise NoSteadyState(f"no steady state within {max_steps} steps")
    m = np.clip(m, 0.0, None)
    m /= m.sum()
    return FilterProfile(m, a, b)


@lru_cache(maxsize=8)
def default_profile(alpha: float = 0.005, beta: float = 0.09, s: int = 1000) -> FilterProfile:
    """Memoized master profile for the preset coefficient shapes."""
    return solve_fp_steady_state(fig4_coefficients(alpha, beta), s=s)


def rescale_filter(
    profile: FilterProfile, n: int, target_half_length: float
) -> DiscreteFilter:
    """Redistribute profile mass onto ``2n+1`` equal target intervals.

    The target partition is mapped linearly onto [a, b]; each target
    weight is the exact mass of the piecewise-constant profile density
    over its interval (fractional end pieces included).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    cdf = profile.cumulative()
    src_nodes = np.linspace(0.0, 1.0, profile.n_intervals + 1)
    tgt_nodes = np.linspace(0.0, 1.0, 2 * n + 2)
    cdf_at = np.interp(tgt_nodes, src_nodes, cdf)
    w = np.diff(cdf_at)
    w = np.clip(w, 0.0, None)
    w /= w.sum()
    return DiscreteFilter(w, float(target_half_length))


def sample_filter(profile: FilterProfile, half_length: float) -> DiscreteFilter:
    """Realize the profile on the unit sample grid with support [-l, l].

    Tap ``t`` receives the mass of the stretched profile density over the
    sample cell [t - 1/2, t + 1/2], so non-integer half-lengths change the
    weights rather than being rounded away.
    """
    l = float(half_length)
    if l <= 0.5:
        raise ValueError("half_length must exceed half a sample")
    n = int(math.floor(l + 0.5))
    cdf = profile.cumulative()
    src_nodes = np.linspace(-1.0, 1.0, profile.n_intervals + 1)
    edges = (np.arange(-n, n + 1 + 1) - 0.5) / l  # cell edges in [-1, 1] units
    edges = np.clip(edges, -1.0, 1.0)
    cdf_at = np.interp(edges, src_nodes, cdf)
    w = np.diff(cdf_at)
    w = np.clip(w, 0.0, None)
    w = 0.5 * (w + w[::-1])  # enforce exact symmetry
    w /= w.sum()
    return DiscreteFilter(w, l)


def self_convolve(w: DiscreteFilter) -> DiscreteFilter:
    """Convolve a filter with itself; the squared symbol is nonnegative."""
    conv = np.convolve(w.weights, w.weights)
    conv = 0.5 * (conv + conv[::-1])
    conv /= conv.sum()
    return DiscreteFilter(conv, 2.0 * w.half_length)


def double_average_filter(l: int) -> DiscreteFilter:
    """Triangular filter a(t) = (l + 1 - |t|) / (l + 1)^2 on [-l, l]."""
    if l < 1:
        raise ValueError("l must be >= 1")
    t = np.arange(-l, l + 1)
    return DiscreteFilter((l + 1.0 - np.abs(t)) / (l + 1.0) ** 2, float(l))


def filter_symbol(w: DiscreteFilter, grid_size: int) -> np.ndarray:
    """Real DFT symbol of the filter on a zero-padded periodic grid."""
    if grid_size < w.weights.size:
        raise GridTooSmall(
            f"grid {grid_size} smaller than filter support {w.weights.size}"
        )
    half = w.half_width
    padded = np.zeros(grid_size)
    padded[np.arange(-half, half + 1) % grid_size] = w.weights
    return np.real(np.fft.fft(padded))


def spectrum_report(
    w: DiscreteFilter, grid_size: int, zero_tol: float = 1e-10
) -> SpectrumReport:
    """Check the convergence condition |1 - symbol| < 1 or symbol ~ 0."""
    symbol = filter_symbol(w, grid_size)
    ok = (np.abs(1.0 - symbol) < 1.0) | (np.abs(symbol) < zero_tol)
    zero_set = tuple(int(k) for k in np.flatnonzero(np.abs(symbol) < zero_tol))
    return SpectrumReport(
        grid_size=grid_size,
        symbol=symbol,
        max_deviation=float(np.max(np.abs(1.0 - symbol))),
        zero_set=zero_set,
        condition_met=bool(np.all(ok)),
    )


def save_filter(w: DiscreteFilter, path) -> None:
    """Text export: one header line, then the 2n+1 weights."""
    n = w.half_width
    with open(path, "w") as fh:
        fh.write(f"# half_length={w.half_length!r} n={n}\n")
        fh.write(" ".join(f"{v:.17g}" for v in w.weights) + "\n")


def load_filter(path) -> DiscreteFilter:
    with open(path) as fh:
        header = fh.readline().strip()
        body = fh.read().split()
    if not header.startswith("#"):
        raise ValueError("missing filter header line")
    fields = dict(tok.split("=") for tok in header[1:].split())
    weights = np.array([float(v) for v in body])
    if weights.size != 2 * int(fields["n"]) + 1:
        raise ValueError("weight count does not match header")
    return DiscreteFilter(weights, float(fields["half_length"]))

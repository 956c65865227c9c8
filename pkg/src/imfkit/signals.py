"""Synthetic benchmark signals with known components, noise injection and
component matching.

Each case carries the exact ground-truth components so decompositions can
be scored against them; for stochastic cases the noise realization is a
truth component too, keeping the truth-sum identity exact.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Signal
from .errors import UnknownExample, ZeroNoise

EXAMPLE_IDS = (
    "ex1", "ex2", "ex3", "ex4a", "ex4b", "ex4c",
    "ex5", "ex6a", "ex6b", "ex6c", "test1", "test2",
)


@dataclass(frozen=True)
class ExampleCase:
    id: str
    n: int
    signal: Signal
    truth: tuple
    seed: int = 0


@dataclass(frozen=True)
class MatchReport:
    pairing: tuple
    correlation: tuple
    rel_l2: tuple
    interior_fraction: float


def _grid(a, b, n):
    x = np.linspace(a, b, n)
    return x, x[1] - x[0], a


def _ex1_parts(n):
    x, dx, x0 = _grid(0.0, 1.0, n)
    trend = 4.0 * (x - 0.5) ** 2
    fm = (2.0 * (x - 0.5) ** 2 + 0.2) * np.sin(
        (20.0 * np.pi + 0.2 * np.cos(40.0 * np.pi * x)) * x
    )
    return [fm, trend], dx, x0


def _ex2_parts(n):
    x, dx, x0 = _grid(-0.4, 0.4, n)
    chirp = 0.5 * np.cos(50.0 * np.pi * np.abs(x) - 40.0 * np.pi * x**2)
    tone = np.sin(4.0 * np.pi * x)
    return [chirp, tone], dx, x0


def _ex3_parts(n):
    x, dx, x0 = _grid(0.0, 2.0 * np.pi, n)
    f1 = np.cos(-(8.0 / np.pi) * x**2 - 20.0 * np.abs(x))
    f2 = np.cos(-(8.0 / np.pi) * x**2 - 4.0 * np.abs(x))
    return [f1, f2, np.ones(n)], dx, x0


def _ex4_parts(n):
    x, dx, x0 = _grid(0.0, 5.0, n)
    return [np.sin(4.0 * np.pi * x), np.sin(np.pi * x)], dx, x0


def _ex5_parts(n):
    x, dx, x0 = _grid(-1.0, 2.0, n)
    f1 = (np.sin(4.0 * np.pi * x) + 1.5) * np.cos(50.0 * np.pi * x)
    f2 = (5.0 * np.sin(2.0 * np.pi * (x + 1.0) / 6.0 + np.pi) + 5.6) * np.sin(
        2.0 * np.pi * (10.0 * x + 0.03 * np.cos(40.0 * np.pi * x))
    )
    f3 = (2.0 * np.cos(1.4 * np.pi * x) + 5.0) * np.sin(4.0 * np.pi * x)
    return [f2, f1, f3], dx, x0


def _ex6_parts(n):
    x, dx, x0 = _grid(0.0, 20.0 * np.pi, n)
    g1 = np.cos(20.0 * np.cos(x / 10.0) - 4.0 * x)
    g2 = np.cos(20.0 * np.cos(x / 10.0) - 7.0 * x)
    return [g2, g1, np.ones(n)], dx, x0


def _test1_parts(n):
    x, dx, x0 = _grid(0.0, 40.0, n)
    f = (1.0 + 0.2 * np.cos(0.06 * np.pi * x)) * np.sin((1.0 + 0.1 * x) * x)
    return [f], dx, x0


def _test2_parts(n):
    x, dx, x0 = _grid(0.0, 10.0, n)
    a = 1.0 - 0.9 * ((x >= 3.0) & (x <= 6.0))
    return [a * np.sin(2.0 * np.pi * x)], dx, x0


def snr_db(signal: Signal, noise: Signal) -> float:
    """Signal-to-noise ratio 20*log10(||signal|| / ||noise||) in dB."""
    nn = float(np.linalg.norm(noise.samples))
    if nn == 0.0:
        raise ZeroNoise("noise signal has zero norm")
    return 20.0 * np.log10(float(np.linalg.norm(signal.samples)) / nn)


def add_noise_snr(s: Signal, target_db: float, seed: int = 0):
    """White noise scaled to an exact target SNR; returns (noisy, noise)."""
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal(len(s))
    scale = float(np.linalg.norm(s.samples)) / (
        float(np.linalg.norm(raw)) * 10.0 ** (target_db / 20.0)
    )
    noise = s.with_samples(raw * scale)
    return s.with_samples(s.samples + noise.samples), noise


def generate_example(example_id: str, n: int = 2000, seed: int = 0) -> ExampleCase:
    """Benchmark case by id with ground-truth components summing to the signal."""
    if n < 256:
        raise ValueError("n must be >= 256")
    builders = {
        "ex1": _ex1_parts, "ex2": _ex2_parts, "ex3": _ex3_parts,
        "ex4a": _ex4_parts, "ex4b": _ex4_parts, "ex4c": _ex4_parts,
        "ex5": _ex5_parts, "ex6a": _ex6_parts, "ex6b": _ex6_parts,
        "ex6c": _ex6_parts, "test1": _test1_parts, "test2": _test2_parts,
    }
    if example_id not in builders:
        raise UnknownExample(f"unknown example id {example_id!r}")
    parts, dx, x0 = builders[example_id](n)

    # stochastic variants add a seeded noise component
    if example_id in ("ex4b", "ex4c"):
        sigma = 0.1 if example_id == "ex4b" else 1.0  # variances 0.01 and 1
        rng = np.random.default_rng(seed)
        parts = [rng.standard_normal(n) * sigma] + parts
    elif example_id in ("ex6b", "ex6c"):
        target_db = 0.0 if example_id == "ex6b" else -10.0
        clean = Signal(np.sum(parts, axis=0), dx, x0)
        _, noise = add_noise_snr(clean, target_db, seed)
        parts = [noise.samples] + parts

    total = np.sum(parts, axis=0)
    return ExampleCase(
        id=example_id,
        n=n,
        signal=Signal(total, dx, x0),
        truth=tuple(Signal(p, dx, x0) for p in parts),
        seed=seed,
    )


def _interior(arr, fraction):
    n = arr.size
    cut = int(round(n * (1.0 - fraction) / 2.0))
    return arr[cut: n - cut] if cut > 0 else arr


def match_components(dec, truth, interior_fraction: float = 0.8) -> MatchReport:
    """Greedy pairing of truth components with decomposition components.

    Components are the IMFs plus the remainder; each truth entry grabs the
    unmatched component with the largest absolute interior correlation.
    """
    if not (0.0 < interior_fraction <= 1.0):
        raise ValueError("interior_fraction must be in (0, 1]")
    comps = [imf.samples for imf in dec.imfs] + [dec.remainder.samples]
    used = set()
    pairing, corrs, errs = [], [], []
    for t in truth:
        tv = _interior(np.asarray(t.samples, dtype=float), interior_fraction)
        best, best_corr = None, -1.0
        for j, c in enumerate(comps):
            if j in used:
                continue
            cv = _interior(c, interior_fraction)
            if np.std(cv) == 0.0 or np.std(tv) == 0.0:
                corr = 0.0
            else:
                corr = abs(float(np.corrcoef(cv, tv)[0, 1]))
            if corr > best_corr:
                best, best_corr = j, corr
        if best is None:
            pairing.append(-1)
            corrs.append(0.0)
            errs.append(1.0)
            continue
        used.add(best)
        cv = _interior(comps[best], interior_fraction)
        denom = float(np.linalg.norm(tv))
        rel = float(np.linalg.norm(cv - tv)) / denom if denom > 0 else float("nan")
        if np.std(cv) > 0 and np.std(tv) > 0:
            signed = float(np.corrcoef(cv, tv)[0, 1])
        else:
            signed = 0.0  # correlation with a constant is undefined
        pairing.append(best)
        corrs.append(signed)
        errs.append(rel)
    return MatchReport(
        pairing=tuple(pairing),
        correlation=tuple(corrs),
        rel_l2=tuple(errs),
        interior_fraction=interior_fraction,
    )


def write_example_csv(case: ExampleCase, path) -> None:
    """Columns x, signal, truth_1..truth_m."""
    cols = [case.signal.x, case.signal.samples] + [t.samples for t in case.truth]
    header = "x,signal," + ",".join(
        f"truth_{i+1}" for i in range(len(case.truth))
    )
    np.savetxt(path, np.column_stack(cols), delimiter=",", header=header,
               comments="", fmt="%.17g")

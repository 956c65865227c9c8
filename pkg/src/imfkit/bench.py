"""Benchmark suite: frozen per-case configurations, end-to-end runs of the
synthetic examples, and threshold checks shared by the command line and
the acceptance tests.

Each case id maps to one decomposition recipe; the checks encode the
published behavior of the methods on these signals (component counts,
interior correlations, frequency tracking, convergence diagnostics).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import median_filter

from .alif import ALIFConfig, alif_decompose
from .core import Signal, find_extrema
from .instfreq import (
    hilbert_instantaneous_frequency,
    local_instantaneous_frequency,
)
from .iterfilt import IFConfig, if_decompose
from .signals import generate_example, match_components

# one frozen recipe per benchmark run; (example id, method) -> config
SUITE_RECIPES = {
    ("ex1", "if"): IFConfig(boundary="periodic", mask_stretch=2.0),
    ("ex2", "if"): IFConfig(boundary="reflect", mask_stretch=2.0),
    ("ex3", "if"): IFConfig(boundary="reflect", mask_stretch=2.0),
    ("ex3", "alif"): ALIFConfig(
        mask_multiplier=2.0, mask_stretch=1.2, max_imfs=8
    ),
    ("ex4a", "if"): IFConfig(boundary="periodic", mask_stretch=1.0),
    ("ex4b", "if"): IFConfig(boundary="periodic", mask_stretch=1.0),
    ("ex4c", "if"): IFConfig(boundary="periodic", mask_stretch=1.0),
    ("ex5", "if"): IFConfig(boundary="reflect", mask_stretch=1.0),
    ("ex6a", "alif"): ALIFConfig(
        mask_multiplier=2.0, mask_stretch=1.2, mask_prominence=0.05,
        boundary="periodic", max_imfs=16,
    ),
    ("ex6b", "alif"): ALIFConfig(
        mask_multiplier=2.0, mask_stretch=1.2, mask_prominence=0.05,
        boundary="periodic", max_imfs=16,
    ),
}

# frequency-analysis cases run on the raw signal, no decomposition
FREQ_CASE_IDS = ("test1", "test2")

DEFAULT_N = 2000


@dataclass(frozen=True)
class CaseRun:
    case: object  # ExampleCase
    method: str  # "if" or "alif"
    dec: object  # Decomposition
    match: object  # MatchReport


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def run_case(example_id: str, method: str, n: int = DEFAULT_N) -> CaseRun:
    """Run one benchmark case under its frozen recipe."""
    cfg = SUITE_RECIPES[(example_id, method)]
    case = generate_example(example_id, n=n)
    if method == "if":
        dec = if_decompose(case.signal, cfg)
    else:
        dec = alif_decompose(case.signal, cfg)
    return CaseRun(case, method, dec, match_components(dec, case.truth))


def run_suite(only=None, n: int = DEFAULT_N) -> dict:
    """All decomposition runs of the suite, keyed by (example id, method)."""
    runs = {}
    for key in SUITE_RECIPES:
        if only is not None and key[0] not in only:
            continue
        runs[key] = run_case(key[0], key[1], n)
    return runs


def interior(arr: np.ndarray, fraction: float = 0.8) -> np.ndarray:
    n = arr.size
    cut = int(round(n * (1.0 - fraction) / 2.0))
    return arr[cut: n - cut] if cut > 0 else arr


def interior_mask(n: int, fraction: float = 0.8) -> np.ndarray:
    cut = int(round(n * (1.0 - fraction) / 2.0))
    m = np.zeros(n, dtype=bool)
    m[cut: n - cut] = True
    return m


def _fmt(v):
    return f"{v:.4g}"


def reconstruction_checks(runs: dict) -> list:
    out = []
    for (eid, method), run in runs.items():
        num = float(np.linalg.norm(run.case.signal.samples - run.dec.reconstruct()))
        den = float(np.linalg.norm(run.case.signal.samples))
        rel = num / den
        out.append(Check(
            f"recon_{eid}_{method}", rel < 1e-12,
            f"relative reconstruction error {rel:.3e} (< 1e-12)",
        ))
    return out


def ex1_checks(run: CaseRun) -> list:
    dec, case = run.dec, run.case
    n_comp = dec.n_components
    fm_true, trend_true = case.truth
    trend_est = interior(dec.remainder.samples)
    trend_ref = interior(trend_true.samples)
    trend_rel = float(
        np.linalg.norm(trend_est - trend_ref) / np.linalg.norm(trend_ref)
    )
    fm_est = interior(dec.imfs[0].samples) if dec.imfs else np.zeros(2)
    fm_corr = float(np.corrcoef(fm_est, interior(fm_true.samples))[0, 1])
    return [
        Check("ex1_component_count", n_comp == 2, f"{n_comp} components (== 2)"),
        Check("ex1_trend_rel_l2", trend_rel <= 0.05,
              f"trend interior relative L2 {_fmt(trend_rel)} (<= 0.05)"),
        Check("ex1_fm_corr", fm_corr >= 0.99,
              f"oscillation correlation {_fmt(fm_corr)} (>= 0.99)"),
    ]


def ex2_checks(run: CaseRun) -> list:
    dec, case = run.dec, run.case
    out = [Check("ex2_component_count", dec.n_components == 2,
                 f"{dec.n_components} components (== 2)")]
    if dec.n_components != 2:
        return out
    x = case.signal.x
    inner = interior_mask(x.size)

    tone_fr = local_instantaneous_frequency(dec.remainder)
    tone_dev = np.abs(tone_fr.omega - 4.0 * np.pi) / (4.0 * np.pi)
    tone_max = float(np.max(tone_dev[inner]))
    out.append(Check("ex2_tone_omega", tone_max <= 0.05,
                     f"low-component frequency max relative deviation "
                     f"{_fmt(tone_max)} on interior 80% (<= 0.05)"))

    chirp_fr = local_instantaneous_frequency(dec.imfs[0])
    target = np.abs(50.0 * np.pi * np.sign(x) - 80.0 * np.pi * x)
    sel = inner & (np.abs(x) > 0.02)
    chirp_dev = np.abs(chirp_fr.omega[sel] - target[sel]) / target[sel]
    chirp_max = float(np.max(chirp_dev))
    out.append(Check("ex2_chirp_omega", chirp_max <= 0.05,
                     f"high-component frequency max relative deviation "
                     f"{_fmt(chirp_max)} excluding |x| <= 0.02 (<= 0.05)"))
    return out


def ex3_checks(run_if: CaseRun, run_alif: CaseRun) -> list:
    worst_if = min(abs(c) for c in run_if.match.correlation[:2])
    out = [Check("ex3_if_fails", worst_if < 0.9,
                 f"uniform-mask worst chirp correlation {_fmt(worst_if)} (< 0.9)")]
    c1, c2 = (abs(c) for c in run_alif.match.correlation[:2])
    out.append(Check("ex3_alif_f1_corr", c1 >= 0.95,
                     f"fast chirp correlation {_fmt(c1)} (>= 0.95)"))
    out.append(Check("ex3_alif_f2_corr", c2 >= 0.95,
                     f"slow chirp correlation {_fmt(c2)} (>= 0.95)"))
    rem = interior(run_alif.dec.remainder.samples)
    dev = float(np.max(np.abs(rem - 1.0)))
    out.append(Check("ex3_alif_remainder", dev <= 0.1,
                     f"remainder max deviation from 1 is {_fmt(dev)} (<= 0.1)"))
    return out


def _last_two_corr(run: CaseRun) -> tuple:
    case, dec = run.case, run.dec
    fast_true = case.truth[-2].samples  # sin(4 pi x)
    slow_true = case.truth[-1].samples  # sin(pi x)
    fast_est = interior(dec.imfs[-2].samples)
    slow_est = interior(dec.imfs[-1].samples)
    c_fast = abs(float(np.corrcoef(fast_est, interior(fast_true))[0, 1]))
    c_slow = abs(float(np.corrcoef(slow_est, interior(slow_true))[0, 1]))
    return c_fast, c_slow


def ex4_checks(run_small: CaseRun, run_large: CaseRun) -> list:
    out = []
    for run, tag, cmin, lo, hi in (
        (run_small, "ex4b", 0.95, 5, 9),
        (run_large, "ex4c", 0.90, 7, 11),
    ):
        cf, cs = _last_two_corr(run)
        nimf = len(run.dec.imfs)
        out.append(Check(f"{tag}_corrs", cf >= cmin and cs >= cmin,
                         f"last-two-component correlations {_fmt(cf)}, "
                         f"{_fmt(cs)} (>= {cmin})"))
        out.append(Check(f"{tag}_count", lo <= nimf <= hi,
                         f"{nimf} oscillatory components (in [{lo}, {hi}])"))
    return out


def _product_checks(run: CaseRun, tag: str) -> list:
    eps_worst, delta_worst = 0.0, np.inf
    for conv in run.dec.convergence:
        if conv.eps_product:
            eps_worst = max(eps_worst, conv.final_eps_product)
        if conv.delta_product:
            delta_worst = min(delta_worst, conv.final_delta_product)
    return [
        Check(f"{tag}_eps_product", eps_worst < 1e-2,
              f"worst final eps product {eps_worst:.3e} (< 1e-2)"),
        Check(f"{tag}_delta_product", delta_worst > 1e-6,
              f"worst final delta product {delta_worst:.3e} (> 1e-6)"),
    ]


def ex6_checks(run_clean: CaseRun, run_noisy: CaseRun) -> list:
    out = []
    c_fast = abs(run_clean.match.correlation[0])
    c_slow = abs(run_clean.match.correlation[1])
    out.append(Check("ex6a_corrs", c_fast >= 0.95 and c_slow >= 0.95,
                     f"noiseless component correlations {_fmt(c_fast)}, "
                     f"{_fmt(c_slow)} (>= 0.95)"))
    out.extend(_product_checks(run_clean, "ex6a"))
    # noisy truth order: (noise, fast FM, slow FM, constant)
    n_fast = abs(run_noisy.match.correlation[1])
    n_slow = abs(run_noisy.match.correlation[2])
    out.append(Check("ex6b_corrs", n_fast >= 0.90 and n_slow >= 0.90,
                     f"0 dB component correlations {_fmt(n_fast)}, "
                     f"{_fmt(n_slow)} (>= 0.90)"))
    out.extend(_product_checks(run_noisy, "ex6b"))
    return out


def freq_test_checks(n: int = DEFAULT_N) -> list:
    out = []
    # amplitude-step tone: local frequency should hold 2*pi away from the
    # two step locations while the analytic-signal baseline rings there
    case2 = generate_example("test2", n=n)
    x = case2.signal.x
    local = local_instantaneous_frequency(case2.signal)
    away = (np.abs(x - 3.0) > 0.2) & (np.abs(x - 6.0) > 0.2)
    away &= ~local.low_confidence
    dev = np.abs(local.omega[away] - 2.0 * np.pi) / (2.0 * np.pi)
    frac = float(np.mean(dev <= 0.05))
    out.append(Check("test2_local_tracking", frac >= 0.95,
                     f"fraction within 5% of 2*pi away from the steps: "
                     f"{frac:.4f} (>= 0.95)"))
    hil = hilbert_instantaneous_frequency(case2.signal)
    near = ~away & (x > 0.1) & (x < x[-1] - 0.1)
    hdev = float(np.max(np.abs(hil.omega[near] - 2.0 * np.pi) / (2.0 * np.pi)))
    out.append(Check("test2_hilbert_rings", hdev >= 0.20,
                     f"analytic-signal max deviation near the steps: "
                     f"{_fmt(hdev)} (>= 0.20)"))

    # slow AM chirp: the local frequency rises monotonically once the
    # sample-scale jitter is median-filtered out
    case1 = generate_example("test1", n=n)
    local1 = local_instantaneous_frequency(case1.signal)
    width = int(round(0.05 * n)) | 1
    smooth = median_filter(local1.omega, size=width, mode="nearest")
    core = smooth[width: n - width]
    mono = bool(np.all(np.diff(core) >= -1e-12))
    out.append(Check("test1_monotone", mono,
                     f"median-smoothed frequency monotone increasing: {mono}"))
    return out


def sd_convergence_checks(runs: dict) -> list:
    out = []
    for key in (("ex1", "if"), ("ex2", "if"), ("ex3", "alif")):
        run = runs[key]
        worst = max((d.final_sd for d in run.dec.diagnostics), default=0.0)
        iters = max((d.iterations for d in run.dec.diagnostics), default=0)
        out.append(Check(
            f"sd_{key[0]}_{key[1]}", worst < 1e-5 and iters <= 200,
            f"worst final inner-loop SD {worst:.3e} (< 1e-5), "
            f"max iterations {iters} (<= 200)",
        ))
    return out


def imf_sign_checks(runs: dict) -> list:
    out = []
    for key in (("ex1", "if"), ("ex2", "if"), ("ex3", "alif")):
        run = runs[key]
        ok = True
        worst = ""
        for i, imf in enumerate(run.dec.imfs):
            ex = find_extrema(imf)
            for kind, val in zip(ex.kinds, ex.values):
                if (kind == "max" and val <= 0) or (kind == "min" and val >= 0):
                    ok = False
                    worst = f"; component {i+1} has a {kind} of {_fmt(val)}"
                    break
            if not ok:
                break
        out.append(Check(
            f"sign_{key[0]}_{key[1]}", ok,
            f"all maxima positive and minima negative: {ok}{worst}",
        ))
    return out


def suite_checks(runs: dict) -> list:
    """All threshold checks the suite's runs support."""
    checks = reconstruction_checks(runs)

    def have(*keys):
        return all(k in runs for k in keys)

    if have(("ex1", "if")):
        checks += ex1_checks(runs[("ex1", "if")])
    if have(("ex2", "if")):
        checks += ex2_checks(runs[("ex2", "if")])
    if have(("ex3", "if"), ("ex3", "alif")):
        checks += ex3_checks(runs[("ex3", "if")], runs[("ex3", "alif")])
    if have(("ex4b", "if"), ("ex4c", "if")):
        checks += ex4_checks(runs[("ex4b", "if")], runs[("ex4c", "if")])
    if have(("ex6a", "alif"), ("ex6b", "alif")):
        checks += ex6_checks(runs[("ex6a", "alif")], runs[("ex6b", "alif")])
    if have(("ex1", "if"), ("ex2", "if"), ("ex3", "alif")):
        checks += sd_convergence_checks(runs)
        checks += imf_sign_checks(runs)
    return checks

"""Command-line driver: decomposition, filter design, instantaneous
frequency, and the benchmark suite, emitting delimited output alongside
rendered figures.

Exit codes: 0 success, 1 usage error, 2 data error, 3 benchmark
threshold failure.
"""
from __future__ import annotations

import csv
import dataclasses
import sys
from pathlib import Path

import click
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import bench  # noqa: E402
from .alif import ALIFConfig, alif_decompose  # noqa: E402
from .errors import ImfkitError  # noqa: E402
from .fpfilter import (  # noqa: E402
    fig4_coefficients,
    sample_filter,
    save_filter,
    self_convolve,
    solve_fp_steady_state,
    spectrum_report,
)
from .instfreq import (  # noqa: E402
    hilbert_instantaneous_frequency,
    local_instantaneous_frequency,
)
from .io_csv import (  # noqa: E402
    TimeSeriesFormat,
    load_timeseries_csv,
    write_decomposition_csv,
    write_diagnostics_csv,
    write_freq_csv,
    write_sd_history_csv,
)
from .iterfilt import IFConfig, if_decompose  # noqa: E402
from .signals import EXAMPLE_IDS, generate_example  # noqa: E402


def parse_config(path) -> dict:
    """Declarative key=value settings; '#' starts a comment, blanks ignored."""
    settings = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise click.UsageError(
                f"{path}:{lineno}: expected key=value, got {raw!r}"
            )
        key, val = (tok.strip() for tok in line.split("=", 1))
        settings[key] = _parse_value(val)
    return settings


def _parse_value(val: str):
    low = val.lower()
    if low in ("true", "false"):
        return low == "true"
    if low in ("none", ""):
        return None
    for cast in (int, float):
        try:
            return cast(val)
        except ValueError:
            pass
    return val


def _build_config(cls, settings: dict):
    names = {f.name for f in dataclasses.fields(cls)}
    kwargs = {k: v for k, v in settings.items() if k in names}
    return cls(**kwargs)


_FMT_KEYS = ("delimiter", "time_column", "value_column", "header_rows",
             "dx_override")


def _load_input(path, settings: dict):
    kwargs = {k: settings[k] for k in _FMT_KEYS if k in settings}
    return load_timeseries_csv(path, TimeSeriesFormat(**kwargs))


def _plot_decomposition(dec, path):
    n_rows = dec.n_components + 1
    fig, axes = plt.subplots(
        n_rows, 1, sharex=True, figsize=(8.0, 1.6 * n_rows), squeeze=False
    )
    axes = axes[:, 0]
    x = dec.remainder.x
    axes[0].plot(x, dec.reconstruct(), lw=0.8)
    axes[0].set_ylabel("input")
    for i, imf in enumerate(dec.imfs):
        axes[i + 1].plot(x, imf.samples, lw=0.8)
        axes[i + 1].set_ylabel(f"imf {i+1}")
    axes[-1].plot(x, dec.remainder.samples, lw=0.8, color="tab:red")
    axes[-1].set_ylabel("remainder")
    axes[-1].set_xlabel("x")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _plot_freq(fr, path):
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(8.0, 5.0))
    ax1.plot(fr.x, fr.theta, lw=0.8)
    ax1.set_ylabel("phase")
    good = ~fr.low_confidence
    ax2.plot(fr.x[good], fr.omega[good], lw=0.8)
    ax2.set_ylabel("frequency")
    ax2.set_xlabel("x")
    fig.suptitle(f"instantaneous phase and frequency ({fr.method})")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


@click.group()
def cli():
    """Signal decomposition and instantaneous-frequency toolkit."""


@cli.command()
@click.option("--method", type=click.Choice(["if", "alif"]), default="if",
              show_default=True)
@click.option("--input", "input_path", type=click.Path(), default=None,
              help="Delimited time-series file.")
@click.option("--example", "example_id", type=click.Choice(EXAMPLE_IDS),
              default=None, help="Bundled synthetic case instead of a file.")
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="key=value settings file.")
@click.option("--out", "out_dir", type=click.Path(), required=True)
def decompose(method, input_path, example_id, config_path, out_dir):
    """Split a signal into oscillatory components plus a trend."""
    if (input_path is None) == (example_id is None):
        raise click.UsageError("provide exactly one of --input or --example")
    settings = parse_config(config_path) if config_path else {}
    if example_id is not None:
        n = int(settings.get("n", 2000))
        seed = int(settings.get("seed", 0))
        s = generate_example(example_id, n=n, seed=seed).signal
    else:
        s = _load_input(input_path, settings)
    if method == "if":
        dec = if_decompose(s, _build_config(IFConfig, settings))
    else:
        dec = alif_decompose(s, _build_config(ALIFConfig, settings))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_decomposition_csv(dec, out / "decomposition.csv")
    write_diagnostics_csv(dec, out / "diagnostics.csv")
    write_sd_history_csv(dec, out / "sd_history.csv")
    _plot_decomposition(dec, out / "decomposition.png")
    click.echo(f"{dec.n_components} components -> {out}")


@cli.command("filter-design")
@click.option("--alpha", type=float, default=0.005, show_default=True)
@click.option("--beta", type=float, default=0.09, show_default=True)
@click.option("--preset", type=click.Choice(["fig4"]), default="fig4",
              show_default=True, help="Drift/diffusion coefficient pair.")
@click.option("--half-length", type=float, default=32.0, show_default=True,
              help="Realized filter half-length in samples.")
@click.option("--grid-size", type=int, default=4096, show_default=True,
              help="Periodic grid for the spectrum report.")
@click.option("--resolution", type=int, default=1000, show_default=True,
              help="Half the number of steady-state grid cells.")
@click.option("--out", "out_path", type=click.Path(), required=True)
def filter_design(alpha, beta, preset, half_length, grid_size, resolution,
                  out_path):
    """Design a smooth compact filter and report its spectrum."""
    del preset  # single coefficient preset for now
    profile = solve_fp_steady_state(
        fig4_coefficients(alpha, beta), s=resolution
    )
    w = self_convolve(sample_filter(profile, half_length))
    report = spectrum_report(w, grid_size)
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_filter(w, out)

    spec_path = out.with_suffix(out.suffix + ".spectrum.csv")
    with open(spec_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["mode", "symbol"])
        for k, v in enumerate(report.symbol):
            writer.writerow([k, f"{v:.17g}"])

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.5))
    taps = np.arange(-w.half_width, w.half_width + 1)
    ax1.plot(taps, w.weights, lw=0.9)
    ax1.set_xlabel("tap")
    ax1.set_ylabel("weight")
    half = report.symbol.size // 2 + 1
    ax2.plot(np.arange(half), report.symbol[:half], lw=0.9)
    ax2.set_xlabel("mode")
    ax2.set_ylabel("symbol")
    ax2.set_ylim(-0.05, 1.05)
    fig.tight_layout()
    fig.savefig(out.with_suffix(out.suffix + ".png"), dpi=120)
    plt.close(fig)

    status = "met" if report.condition_met else "NOT met"
    click.echo(
        f"convergence condition {status}; max |1 - symbol| = "
        f"{report.max_deviation:.6g}"
    )


@cli.command()
@click.option("--input", "input_path", type=click.Path(), required=True)
@click.option("--method", type=click.Choice(["local", "hilbert"]),
              default="local", show_default=True)
@click.option("--eno-threshold", type=float, default=2.0, show_default=True,
              help="Consecutive-extrema magnitude ratio flagged as a jump.")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--out", "out_path", type=click.Path(), required=True)
def instfreq(input_path, method, eno_threshold, config_path, out_path):
    """Instantaneous phase and frequency of a single component."""
    settings = parse_config(config_path) if config_path else {}
    s = _load_input(input_path, settings)
    if method == "local":
        fr = local_instantaneous_frequency(s, eno_threshold)
    else:
        fr = hilbert_instantaneous_frequency(s)
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_freq_csv(fr, out)
    _plot_freq(fr, out.with_suffix(out.suffix + ".png"))
    click.echo(f"{fr.method} frequency -> {out}")


def _write_match_csv(run, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["truth_index", "component_index", "correlation",
                         "rel_l2"])
        for i, (j, c, e) in enumerate(
            zip(run.match.pairing, run.match.correlation, run.match.rel_l2)
        ):
            writer.writerow([i, j, f"{c:.17g}", f"{e:.17g}"])


@cli.command("bench")
@click.option("--suite", type=click.Choice(["paper"]), default="paper",
              show_default=True)
@click.option("--only", default=None,
              help="Comma-separated example ids; default runs everything.")
@click.option("--out", "out_dir", type=click.Path(), required=True)
@click.pass_context
def bench_cmd(ctx, suite, only, out_dir):
    """Run the benchmark suite and summarize the threshold checks."""
    del suite
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    only_ids = set(only.split(",")) if only else None

    runs = bench.run_suite(only=only_ids)
    for (eid, method), run in runs.items():
        case_dir = out / f"{eid}_{method}"
        case_dir.mkdir(exist_ok=True)
        write_decomposition_csv(run.dec, case_dir / "decomposition.csv")
        write_diagnostics_csv(run.dec, case_dir / "diagnostics.csv")
        _write_match_csv(run, case_dir / "match.csv")
        _plot_decomposition(run.dec, case_dir / "decomposition.png")

    checks = bench.suite_checks(runs)
    if only_ids is None or any(e in only_ids for e in bench.FREQ_CASE_IDS):
        checks += bench.freq_test_checks()
        for eid in bench.FREQ_CASE_IDS:
            if only_ids is not None and eid not in only_ids:
                continue
            case = generate_example(eid)
            fr = local_instantaneous_frequency(case.signal)
            write_freq_csv(fr, out / f"{eid}_local_freq.csv")
            _plot_freq(fr, out / f"{eid}_local_freq.png")

    with open(out / "summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["check", "status", "detail"])
        for c in checks:
            writer.writerow([c.name, "PASS" if c.passed else "FAIL", c.detail])
    n_fail = sum(not c.passed for c in checks)
    for c in checks:
        click.echo(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
    click.echo(f"{len(checks) - n_fail}/{len(checks)} checks passed")
    if n_fail:
        ctx.exit(3)


def main(argv=None):
    try:
        rv = cli.main(args=argv, standalone_mode=False)
        if isinstance(rv, int):
            return rv
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except (click.UsageError, click.BadParameter) as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except ImfkitError as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

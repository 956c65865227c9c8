"""Delimited ingestion/persistence and the command-line surface."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from imfkit.cli import main, parse_config
from imfkit.core import Signal
from imfkit.errors import IoError, NonUniformSpacing, ParseError
from imfkit.instfreq import local_instantaneous_frequency
from imfkit.io_csv import (
    TimeSeriesFormat,
    load_timeseries_csv,
    write_decomposition_csv,
    write_diagnostics_csv,
    write_freq_csv,
)
from imfkit.iterfilt import if_decompose
from imfkit.signals import generate_example


class TestFormat:
    def test_validation(self):
        with pytest.raises(ValueError):
            TimeSeriesFormat(delimiter=",,")
        with pytest.raises(ValueError):
            TimeSeriesFormat(header_rows=-1)
        with pytest.raises(ValueError):
            TimeSeriesFormat(dx_override=0.0)


class TestLoad:
    def test_basic(self, tmp_path):
        path = tmp_path / "a.csv"
        path.write_text("0,1.5\n1,2.5\n2,3.5\n")
        s = load_timeseries_csv(path, TimeSeriesFormat())
        assert np.allclose(s.samples, [1.5, 2.5, 3.5])
        assert s.dx == pytest.approx(1.0)
        assert s.x0 == pytest.approx(0.0)

    def test_nonuniform_rejected(self, tmp_path):
        path = tmp_path / "a.csv"
        path.write_text("0,1.0\n1,2.0\n3,3.0\n")
        with pytest.raises(NonUniformSpacing):
            load_timeseries_csv(path, TimeSeriesFormat())

    def test_override_rescues_nonuniform(self, tmp_path):
        path = tmp_path / "a.csv"
        path.write_text("0,1.0\n1,2.0\n3,3.0\n")
        s = load_timeseries_csv(path, TimeSeriesFormat(dx_override=1.0))
        assert s.dx == 1.0

    def test_empty_file(self, tmp_path):
        path = tmp_path / "a.csv"
        path.write_text("")
        with pytest.raises(ParseError):
            load_timeseries_csv(path, TimeSeriesFormat())

    def test_header_rows_skipped(self, tmp_path):
        path = tmp_path / "a.csv"
        path.write_text("time,value\n0,1.0\n1,2.0\n2,4.0\n")
        s = load_timeseries_csv(path, TimeSeriesFormat(header_rows=1))
        assert np.allclose(s.samples, [1.0, 2.0, 4.0])

    def test_no_time_column(self, tmp_path):
        path = tmp_path / "a.csv"
        path.write_text("1.0\n2.0\n3.0\n")
        fmt = TimeSeriesFormat(time_column=None, value_column=0, dx_override=0.5)
        s = load_timeseries_csv(path, fmt)
        assert s.dx == 0.5

    def test_bad_value(self, tmp_path):
        path = tmp_path / "a.csv"
        path.write_text("0,1.0\n1,oops\n")
        with pytest.raises(ParseError):
            load_timeseries_csv(path, TimeSeriesFormat())

    def test_missing_file(self):
        with pytest.raises(IoError):
            load_timeseries_csv("/no/such/file.csv", TimeSeriesFormat())

    def test_decreasing_time(self, tmp_path):
        path = tmp_path / "a.csv"
        path.write_text("2,1.0\n1,2.0\n0,3.0\n")
        with pytest.raises(ParseError):
            load_timeseries_csv(path, TimeSeriesFormat())


class TestDecompositionCsv:
    def test_roundtrip_exact(self, tmp_path):
        case = generate_example("ex1", n=512)
        dec = if_decompose(case.signal)
        path = tmp_path / "dec.csv"
        write_decomposition_csv(dec, path)
        header = path.read_text().splitlines()[0].split(",")
        assert header[:2] == ["x", "input"]
        assert header[-1] == "remainder"
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        assert data.shape == (512, 3 + len(dec.imfs))
        # 17 significant digits reproduce every double exactly
        assert np.array_equal(data[:, 2], dec.imfs[0].samples)
        np.testing.assert_allclose(
            np.sum(data[:, 2:], axis=1), data[:, 1], rtol=1e-15, atol=1e-18
        )

    def test_zero_imfs(self, tmp_path):
        x = np.linspace(0.0, 1.0, 300)
        dec = if_decompose(Signal(4.0 * (x - 0.5) ** 2, x[1] - x[0]))
        path = tmp_path / "dec.csv"
        write_decomposition_csv(dec, path)
        header = path.read_text().splitlines()[0]
        assert header == "x,input,remainder"

    @settings(max_examples=10, deadline=None)
    @given(seed=st.integers(0, 100))
    def test_column_roundtrip_random(self, seed, tmp_path_factory):
        rng = np.random.default_rng(seed)
        case = generate_example("ex4a", n=512, seed=seed)
        s = case.signal.with_samples(
            case.signal.samples + 0.1 * rng.standard_normal(512)
        )
        dec = if_decompose(s)
        path = tmp_path_factory.mktemp("rt") / "dec.csv"
        write_decomposition_csv(dec, path)
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        assert np.array_equal(data[:, -1], dec.remainder.samples)


class TestFreqCsv:
    def test_deterministic_bytes(self, tmp_path):
        case = generate_example("test2", n=600)
        fr = local_instantaneous_frequency(case.signal)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_freq_csv(fr, p1)
        write_freq_csv(fr, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_columns(self, tmp_path):
        case = generate_example("test2", n=600)
        fr = local_instantaneous_frequency(case.signal)
        path = tmp_path / "f.csv"
        write_freq_csv(fr, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "x,theta,omega,f1,f2,method,low_confidence_flag"
        assert len(lines) == 601
        assert lines[1].split(",")[5] == "local"

    def test_unwritable_path(self, tmp_path):
        case = generate_example("test2", n=600)
        fr = local_instantaneous_frequency(case.signal)
        with pytest.raises(IoError):
            write_freq_csv(fr, tmp_path / "missing_dir" / "f.csv")


class TestDiagnosticsCsv:
    def test_rows_per_component(self, tmp_path):
        case = generate_example("ex1", n=512)
        dec = if_decompose(case.signal)
        path = tmp_path / "d.csv"
        write_diagnostics_csv(dec, path)
        lines = path.read_text().splitlines()
        assert len(lines) == 1 + len(dec.imfs)


class TestConfigParsing:
    def test_types(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text(
            "# comment\nboundary = periodic\nmax_inner=50\n"
            "sd_threshold=1e-4\nconvolve_filter=true\n"
        )
        cfg = parse_config(path)
        assert cfg == {
            "boundary": "periodic",
            "max_inner": 50,
            "sd_threshold": 1e-4,
            "convolve_filter": True,
        }

    def test_bad_line(self, tmp_path):
        import click

        path = tmp_path / "c.txt"
        path.write_text("just words\n")
        with pytest.raises(click.UsageError):
            parse_config(path)


class TestCli:
    def test_decompose_example(self, tmp_path):
        out = tmp_path / "out"
        code = main([
            "decompose", "--method", "if", "--example", "ex1",
            "--out", str(out),
        ])
        assert code == 0
        assert (out / "decomposition.csv").exists()
        assert (out / "diagnostics.csv").exists()
        assert (out / "decomposition.png").exists()

    def test_decompose_input_file(self, tmp_path):
        src = tmp_path / "in.csv"
        x = np.linspace(0.0, 1.0, 600)
        y = np.sin(40.0 * np.pi * x) + 4.0 * (x - 0.5) ** 2
        np.savetxt(src, np.column_stack([x, y]), delimiter=",")
        out = tmp_path / "out"
        code = main(["decompose", "--input", str(src), "--out", str(out)])
        assert code == 0
        assert (out / "decomposition.csv").exists()

    def test_usage_error_both_inputs(self, tmp_path):
        code = main([
            "decompose", "--input", "a.csv", "--example", "ex1",
            "--out", str(tmp_path),
        ])
        assert code == 1

    def test_data_error_missing_input(self, tmp_path):
        code = main([
            "decompose", "--input", "/no/such.csv", "--out", str(tmp_path),
        ])
        assert code == 2

    def test_filter_design(self, tmp_path):
        out = tmp_path / "fp.txt"
        code = main([
            "filter-design", "--alpha", "0.005", "--beta", "0.09",
            "--half-length", "16", "--resolution", "200", "--out", str(out),
        ])
        assert code == 0
        assert out.exists()
        assert out.with_suffix(".txt.spectrum.csv").exists()
        assert out.with_suffix(".txt.png").exists()

    def test_instfreq_both_methods(self, tmp_path):
        src = tmp_path / "tone.csv"
        x = np.linspace(0.0, 10.0, 800)
        np.savetxt(
            src, np.column_stack([x, np.sin(2.0 * np.pi * x)]), delimiter=","
        )
        for method in ("local", "hilbert"):
            out = tmp_path / f"{method}.csv"
            code = main([
                "instfreq", "--input", str(src), "--method", method,
                "--out", str(out),
            ])
            assert code == 0
            assert out.exists()

    def test_bench_subset_passes(self, tmp_path):
        out = tmp_path / "bench"
        code = main(["bench", "--only", "ex1", "--out", str(out)])
        assert code in (0, 3)
        summary = (out / "summary.csv").read_text()
        assert "recon_ex1_if" in summary
        assert (out / "ex1_if" / "decomposition.csv").exists()
        assert (out / "ex1_if" / "match.csv").exists()

    def test_config_applies(self, tmp_path):
        cfg = tmp_path / "c.txt"
        cfg.write_text("boundary=periodic\nmax_imfs=1\n")
        out = tmp_path / "out"
        code = main([
            "decompose", "--example", "ex4a", "--config", str(cfg),
            "--out", str(out),
        ])
        assert code == 0
        header = (out / "decomposition.csv").read_text().splitlines()[0]
        assert header == "x,input,imf_1,remainder"

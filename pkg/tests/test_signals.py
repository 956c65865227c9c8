"""Synthetic benchmark cases, noise injection, component matching."""
import numpy as np
import pytest

from imfkit.core import Signal
from imfkit.errors import UnknownExample, ZeroNoise
from imfkit.iterfilt import if_decompose
from imfkit.signals import (
    EXAMPLE_IDS,
    add_noise_snr,
    generate_example,
    match_components,
    snr_db,
    write_example_csv,
)


class TestGenerate:
    def test_all_ids_build(self):
        for eid in EXAMPLE_IDS:
            case = generate_example(eid, n=512)
            assert len(case.signal) == 512

    def test_truth_sums_to_signal(self):
        for eid in EXAMPLE_IDS:
            case = generate_example(eid, n=512)
            total = np.sum([t.samples for t in case.truth], axis=0)
            assert np.allclose(total, case.signal.samples, atol=1e-12)

    def test_unknown_id(self):
        with pytest.raises(UnknownExample):
            generate_example("nope")

    def test_seed_reproducible(self):
        a = generate_example("ex6b", n=512, seed=3)
        b = generate_example("ex6b", n=512, seed=3)
        c = generate_example("ex6b", n=512, seed=4)
        assert np.array_equal(a.signal.samples, b.signal.samples)
        assert not np.array_equal(a.signal.samples, c.signal.samples)

    def test_minimum_length(self):
        with pytest.raises(ValueError):
            generate_example("ex1", n=100)


class TestNoise:
    def test_exact_snr(self):
        case = generate_example("ex1", n=1000)
        noisy, noise = add_noise_snr(case.signal, 0.0, seed=1)
        assert snr_db(case.signal, noise) == pytest.approx(0.0, abs=1e-10)
        assert np.allclose(noisy.samples, case.signal.samples + noise.samples)

    def test_snr_db_value(self):
        s = Signal(np.ones(100))
        n = Signal(np.full(100, 0.1))
        assert snr_db(s, n) == pytest.approx(20.0)

    def test_zero_noise_rejected(self):
        s = Signal(np.ones(100))
        with pytest.raises(ZeroNoise):
            snr_db(s, Signal(np.zeros(100)))


class TestMatching:
    def test_perfect_decomposition_scores_one(self):
        case = generate_example("ex4a", n=1024)
        dec = if_decompose(
            case.signal,
        )
        # match the decomposition against itself via a fake truth
        fake_truth = tuple(list(dec.imfs) + [dec.remainder])
        report = match_components(dec, fake_truth)
        for i, (j, c) in enumerate(zip(report.pairing, report.correlation)):
            assert j == i
            if np.std(fake_truth[i].samples) > 0:
                assert abs(c) == pytest.approx(1.0)

    def test_interior_fraction_validation(self):
        case = generate_example("ex1", n=512)
        dec = if_decompose(case.signal)
        with pytest.raises(ValueError):
            match_components(dec, case.truth, interior_fraction=0.0)

    def test_rel_l2_zero_for_identical(self):
        case = generate_example("ex1", n=512)
        dec = if_decompose(case.signal)
        fake_truth = tuple(list(dec.imfs) + [dec.remainder])
        report = match_components(dec, fake_truth)
        assert max(report.rel_l2[:-1], default=0.0) < 1e-12


class TestExampleCsv:
    def test_columns(self, tmp_path):
        case = generate_example("ex2", n=400)
        path = tmp_path / "ex2.csv"
        write_example_csv(case, path)
        header = path.read_text().splitlines()[0]
        assert header == "x,signal,truth_1,truth_2"
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        assert data.shape == (400, 4)

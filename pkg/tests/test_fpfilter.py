"""Filter design: steady-state profiles, rescaling, spectra."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from imfkit.errors import GridTooSmall, InvalidCoefficients
from imfkit.fpfilter import (
    DiscreteFilter,
    FPCoefficients,
    FilterProfile,
    default_profile,
    double_average_filter,
    fig4_coefficients,
    filter_symbol,
    load_filter,
    sample_filter,
    save_filter,
    self_convolve,
    solve_fp_steady_state,
    spectrum_report,
)


class TestCoefficients:
    def test_preset_is_valid(self):
        coeffs = fig4_coefficients(0.005, 0.09)
        grid = np.linspace(-1.0, 1.0, 501)
        coeffs.validate(grid)  # must not raise

    def test_bad_alpha(self):
        coeffs = fig4_coefficients(-1.0, 0.09)
        with pytest.raises(InvalidCoefficients):
            coeffs.validate(np.linspace(-1, 1, 11))

    def test_diffusion_must_vanish_at_ends(self):
        coeffs = FPCoefficients(
            h=lambda x: x, g2=lambda x: np.ones_like(x), alpha=1.0, beta=1.0
        )
        with pytest.raises(InvalidCoefficients):
            coeffs.validate(np.linspace(-1, 1, 11))


class TestSteadyState:
    def test_profile_properties(self):
        profile = solve_fp_steady_state(fig4_coefficients(0.005, 0.09), s=200)
        m = profile.masses
        assert np.all(m >= 0.0)
        assert abs(float(m.sum()) - 1.0) < 1e-8
        # the preset drift is odd and the diffusion even, so the steady
        # state is symmetric about the center
        assert np.max(np.abs(m - m[::-1])) < 1e-6
        # mass concentrates toward the middle, vanishing at the support ends
        assert m[len(m) // 2] > 10.0 * m[0]

    def test_default_profile_cached(self):
        assert default_profile() is default_profile()


class TestSampling:
    def test_unit_mass_and_symmetry(self):
        w = sample_filter(default_profile(), 17.0)
        assert abs(float(w.weights.sum()) - 1.0) < 1e-12
        assert np.allclose(w.weights, w.weights[::-1])
        assert np.all(w.weights >= 0.0)

    def test_fractional_half_length_changes_weights(self):
        a = sample_filter(default_profile(), 16.0)
        b = sample_filter(default_profile(), 16.5)
        assert a.weights.size == b.weights.size - 2 or not np.allclose(
            a.weights, b.weights[1:-1]
        )

    def test_rejects_tiny_half_length(self):
        with pytest.raises(ValueError):
            sample_filter(default_profile(), 0.4)

    @settings(max_examples=20, deadline=None)
    @given(half=st.floats(1.0, 200.0, allow_nan=False))
    def test_any_half_length_is_admissible(self, half):
        w = sample_filter(default_profile(), half)
        assert abs(float(w.weights.sum()) - 1.0) < 1e-12
        assert np.allclose(w.weights, w.weights[::-1])
        assert w.half_length == pytest.approx(half)


class TestSelfConvolve:
    def test_symbol_is_square(self):
        # brute-force DFT oracle: convolving a filter with itself squares
        # its symbol, making it nonnegative everywhere
        w = sample_filter(default_profile(), 9.0)
        ww = self_convolve(w)
        n = 256
        sym = filter_symbol(w, n)
        sym2 = filter_symbol(ww, n)
        assert np.max(np.abs(sym2 - sym**2)) < 1e-12
        assert np.min(sym2) >= -1e-12

    def test_support_doubles(self):
        w = sample_filter(default_profile(), 9.0)
        ww = self_convolve(w)
        assert ww.weights.size == 2 * w.weights.size - 1
        assert ww.half_length == pytest.approx(2.0 * w.half_length)


class TestDoubleAverage:
    def test_triangle_weights(self):
        w = double_average_filter(2)
        assert np.allclose(w.weights * 9.0, [1.0, 2.0, 3.0, 2.0, 1.0])


class TestSpectrumReport:
    def test_condition_for_smooth_filter(self):
        w = self_convolve(sample_filter(default_profile(), 12.0))
        report = spectrum_report(w, 512)
        assert report.condition_met
        assert np.min(report.symbol) >= -1e-12
        assert np.max(report.symbol) <= 1.0 + 1e-12

    def test_grid_too_small(self):
        w = self_convolve(sample_filter(default_profile(), 40.0))
        with pytest.raises(GridTooSmall):
            filter_symbol(w, 64)


class TestPersistence:
    def test_roundtrip(self, tmp_path):
        w = self_convolve(sample_filter(default_profile(), 7.5))
        path = tmp_path / "w.txt"
        save_filter(w, path)
        back = load_filter(path)
        assert back.half_length == w.half_length
        assert np.array_equal(back.weights, w.weights)

    def test_bad_header(self, tmp_path):
        path = tmp_path / "w.txt"
        path.write_text("0.5 0.5\n")
        with pytest.raises(ValueError):
            load_filter(path)


class TestFilterProfileType:
    def test_cumulative_ends(self):
        profile = FilterProfile(np.full(5, 0.2))
        cdf = profile.cumulative()
        assert cdf[0] == 0.0
        assert cdf[-1] == pytest.approx(1.0)

    def test_masses_frozen(self):
        profile = FilterProfile(np.full(3, 1.0 / 3.0))
        with pytest.raises(ValueError):
            profile.masses[0] = 1.0


class TestDiscreteFilterType:
    def test_half_width(self):
        w = DiscreteFilter(np.array([0.25, 0.5, 0.25]), 1.0)
        assert w.half_width == 1

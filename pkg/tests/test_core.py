"""Signal container, extrema detection, moving averages, differentiation."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from imfkit.core import (
    Signal,
    derivative,
    extend,
    find_extrema,
    is_trend,
    moving_average,
)
from imfkit.errors import FilterTooLong, SignalTooShort
from imfkit.fpfilter import double_average_filter


def make_signal(samples, dx=1.0, x0=0.0):
    return Signal(np.asarray(samples, dtype=float), dx, x0)


class TestSignal:
    def test_rejects_short_and_nonfinite(self):
        with pytest.raises(ValueError):
            Signal(np.array([1.0]))
        with pytest.raises(ValueError):
            Signal(np.array([1.0, np.nan]))
        with pytest.raises(ValueError):
            Signal(np.array([1.0, 2.0]), dx=0.0)

    def test_grid(self):
        s = make_signal([0.0, 1.0, 2.0], dx=0.5, x0=3.0)
        assert np.allclose(s.x, [3.0, 3.5, 4.0])
        assert len(s) == 3

    def test_samples_frozen(self):
        s = make_signal([1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            s.samples[0] = 5.0


class TestFindExtrema:
    def test_sine_two_extrema(self):
        x = np.arange(100) / 100.0
        ex = find_extrema(make_signal(np.sin(2.0 * np.pi * x)))
        assert len(ex) == 2
        assert ex.kinds == ("max", "min")
        assert abs(ex.indices[0] - 25) <= 1
        assert abs(ex.indices[1] - 75) <= 1

    def test_constant_empty(self):
        ex = find_extrema(make_signal(np.ones(50)))
        assert len(ex) == 0

    def test_parabola_single_min(self):
        x = np.linspace(0.0, 1.0, 101)
        ex = find_extrema(make_signal(4.0 * (x - 0.5) ** 2))
        assert len(ex) == 1
        assert ex.kinds == ("min",)
        assert ex.indices == (50,)

    def test_plateau_midpoint(self):
        y = np.array([0.0, 1.0, 2.0, 2.0, 2.0, 1.0, 0.0])
        ex = find_extrema(make_signal(y))
        assert ex.indices == (3,)
        assert ex.kinds == ("max",)

    def test_endpoints_never_counted(self):
        y = np.array([5.0, 1.0, 2.0, 1.0, 5.0])
        ex = find_extrema(make_signal(y))
        # the record ends are global maxima but only interior samples count
        assert ex.indices == (1, 2, 3)
        assert ex.kinds == ("min", "max", "min")

    def test_alternation(self):
        rng = np.random.default_rng(0)
        ex = find_extrema(make_signal(rng.standard_normal(500)))
        kinds = ex.kinds
        assert all(a != b for a, b in zip(kinds, kinds[1:]))

    def test_negation_swaps_kinds(self):
        rng = np.random.default_rng(1)
        y = rng.standard_normal(300)
        ex = find_extrema(make_signal(y))
        exn = find_extrema(make_signal(-y))
        assert ex.indices == exn.indices
        swap = {"max": "min", "min": "max"}
        assert tuple(swap[k] for k in ex.kinds) == exn.kinds


class TestIsTrend:
    def test_parabola_is_trend(self):
        x = np.linspace(0.0, 1.0, 101)
        assert is_trend(make_signal(4.0 * (x - 0.5) ** 2))

    def test_ramp_is_trend(self):
        assert is_trend(make_signal(np.arange(10.0)))

    def test_sine_is_not(self):
        x = np.linspace(0.0, 1.0, 200)
        assert not is_trend(make_signal(np.sin(4.0 * np.pi * x)))


class TestMovingAverage:
    def test_constant_preserved_all_boundaries(self):
        w = double_average_filter(5)
        s = make_signal(np.full(64, 3.25))
        for mode in ("reflect", "periodic", "constant"):
            out = moving_average(s, w, mode)
            assert np.allclose(out.samples, 3.25, atol=1e-14)

    def test_delta_reproduces_weights(self):
        w = double_average_filter(3)
        y = np.zeros(32)
        y[16] = 1.0
        out = moving_average(make_signal(y), w, "periodic")
        assert np.allclose(out.samples[13:20], w.weights)

    def test_periodic_tone_scaled_by_symbol(self):
        # on a periodic grid the average multiplies each mode by the
        # filter's real DFT symbol
        n, k = 128, 5
        w = double_average_filter(4)
        i = np.arange(n)
        tone = np.sin(2.0 * np.pi * k * i / n)
        taps = np.arange(-w.half_width, w.half_width + 1)
        symbol = float(np.sum(w.weights * np.cos(2.0 * np.pi * k * taps / n)))
        out = moving_average(make_signal(tone), w, "periodic")
        assert np.allclose(out.samples, symbol * tone, atol=1e-12)

    def test_too_long_filter_raises(self):
        w = double_average_filter(40)
        with pytest.raises(FilterTooLong):
            moving_average(make_signal(np.zeros(16)), w)

    @settings(max_examples=25, deadline=None)
    @given(
        a=st.floats(-5, 5, allow_nan=False),
        b=st.floats(-5, 5, allow_nan=False),
        seed=st.integers(0, 1000),
    )
    def test_linearity(self, a, b, seed):
        rng = np.random.default_rng(seed)
        f = rng.standard_normal(64)
        g = rng.standard_normal(64)
        w = double_average_filter(4)
        lhs = moving_average(make_signal(a * f + b * g), w).samples
        rhs = (
            a * moving_average(make_signal(f), w).samples
            + b * moving_average(make_signal(g), w).samples
        )
        assert np.allclose(lhs, rhs, atol=1e-10)


class TestExtend:
    def test_modes(self):
        y = np.array([1.0, 2.0, 3.0])
        assert np.allclose(extend(y, 2, "reflect"), [3, 2, 1, 2, 3, 2, 1])
        assert np.allclose(extend(y, 2, "periodic"), [2, 3, 1, 2, 3, 1, 2])
        assert np.allclose(extend(y, 2, "constant"), [1, 1, 1, 2, 3, 3, 3])

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            extend(np.zeros(4), 1, "mirror")


class TestDerivative:
    def test_affine_exact(self):
        x = np.linspace(0.0, 2.0, 50)
        d = derivative(make_signal(3.0 * x + 1.0, dx=x[1] - x[0]))
        assert np.allclose(d.samples, 3.0, atol=1e-12)

    def test_constant_zero(self):
        d = derivative(make_signal(np.full(20, 7.0)))
        assert np.allclose(d.samples, 0.0)

    def test_sine_matches_cosine(self):
        x = np.arange(1001) / 1000.0
        d = derivative(make_signal(np.sin(2.0 * np.pi * x), dx=1e-3))
        expect = 2.0 * np.pi * np.cos(2.0 * np.pi * x)
        assert np.max(np.abs(d.samples[1:-1] - expect[1:-1])) < 1e-4

    def test_too_short(self):
        with pytest.raises(SignalTooShort):
            derivative(make_signal([1.0, 2.0]))

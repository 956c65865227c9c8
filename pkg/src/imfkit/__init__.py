"""Signal decomposition into intrinsic mode functions by iterative
filtering, smooth compact filter design, and local instantaneous
frequency analysis."""

from .alif import ALIFConfig, MaskField, adaptive_moving_average, alif_decompose
from .core import Signal, derivative, find_extrema, is_trend, moving_average
from .fpfilter import (
    DiscreteFilter,
    FilterProfile,
    default_profile,
    sample_filter,
    self_convolve,
    spectrum_report,
)
from .instfreq import (
    FreqResult,
    hilbert_instantaneous_frequency,
    local_instantaneous_frequency,
)
from .iterfilt import Decomposition, IFConfig, if_decompose
from .signals import EXAMPLE_IDS, generate_example, match_components

__version__ = "0.1.0"

__all__ = [
    "ALIFConfig", "MaskField", "adaptive_moving_average", "alif_decompose",
    "Signal", "derivative", "find_extrema", "is_trend", "moving_average",
    "DiscreteFilter", "FilterProfile", "default_profile", "sample_filter",
    "self_convolve", "spectrum_report",
    "FreqResult", "hilbert_instantaneous_frequency",
    "local_instantaneous_frequency",
    "Decomposition", "IFConfig", "if_decompose",
    "EXAMPLE_IDS", "generate_example", "match_components",
    "__version__",
]

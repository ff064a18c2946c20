"""Gabor frames on Z_L, discrete modulation-space norms and best N-term approximation."""

from .estimators import GaborTransform, NTermApproximator
from .frames import (
    CoefficientGrid,
    GaborSystem,
    analyze,
    atom,
    atom_matrix,
    canonical_dual,
    frame_bounds,
    frame_matrix,
    frame_operator_apply,
    is_frame,
    synthesize,
)
from .norms import (
    NormParams,
    WeightSpec,
    ap_seminorm,
    mixed_norm,
    moderateness_probe,
    modulation_norm,
    parse_norm_params,
    weight_eval,
)
from .nterm import SigmaTable, Support, exhaustive_sigma, greedy_nterm, ls_refine, sigma_curve
from .signal import WindowSpec, dft, generate_test_signal, make_window, modulate, translate
from .theory import (
    bernstein_exponent,
    bernstein_ratio_sweep,
    direct_theorem_experiment,
    dyadic_ratio_bounds,
    inverse_theorem_experiment,
    rate_fit,
    series_functional,
)
from .validation import CapabilityError, NotAFrameError

__version__ = "0.1.0"

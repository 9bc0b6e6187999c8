"""wavesat: compactly supported wavelets on dyadic grids, saturation
certificates, and translate schedules with a certified non-vanishing
window.

The package builds Daubechies filter pairs from first principles, runs
the cascade refinement with an exact integer-grid start, certifies that
the wavelet's translate-saturation sum stays positive, constructs the
periodic translate schedules realizing the uniform lower bound

    prod_i |G(2^j x_i - p_(j,i))| >= alpha^d   for some j in any
    window of N(d)+1 consecutive scales,

and verifies that bound on stratified dyadic samples with exact
arbitrary-precision argument reduction.
"""

from .analysis import (
    PropertyRReport,
    ZeroSet,
    check_property_R,
    check_property_r_sampled,
    estimate_alpha_tilde,
    saturation_function,
    wavelet_samples,
    zero_set,
)
from .cascade import (
    SampledFunction,
    cascade_step,
    compute_scaling,
    compute_wavelet,
    derivative_bound,
    derivative_growth,
    truncation_error_bound,
)
from .filters import (
    FilterPair,
    FilterValidation,
    daubechies_filters,
    qmf_highpass,
    validate_filters,
)
from .periodized import (
    DyadicRational,
    G1_eval,
    G_eval,
    Gd_eval,
    ScheduleParams,
    schedule_lengths,
    schedule_params,
    zeros_at_scale,
)
from .sequence import (
    PartitionCell,
    SequencePlan,
    build_sequence_1d,
    build_sequence_nd,
    derive_schedule,
    greedy_window,
    partition_cells,
    select_p,
)
from .synthetic import sine_squared_bump
from .verify import (
    VerificationReport,
    sample_points,
    trace_coefficient,
    verify_lemma_saturation,
    verify_theorem,
)

__version__ = "0.1.0"

__all__ = [
    "FilterPair",
    "FilterValidation",
    "daubechies_filters",
    "qmf_highpass",
    "validate_filters",
    "SampledFunction",
    "cascade_step",
    "compute_scaling",
    "compute_wavelet",
    "derivative_bound",
    "derivative_growth",
    "truncation_error_bound",
    "ZeroSet",
    "PropertyRReport",
    "saturation_function",
    "zero_set",
    "check_property_R",
    "check_property_r_sampled",
    "estimate_alpha_tilde",
    "wavelet_samples",
    "DyadicRational",
    "G_eval",
    "G1_eval",
    "Gd_eval",
    "ScheduleParams",
    "schedule_lengths",
    "schedule_params",
    "zeros_at_scale",
    "SequencePlan",
    "PartitionCell",
    "partition_cells",
    "select_p",
    "build_sequence_1d",
    "build_sequence_nd",
    "derive_schedule",
    "greedy_window",
    "sine_squared_bump",
    "VerificationReport",
    "sample_points",
    "verify_lemma_saturation",
    "verify_theorem",
    "trace_coefficient",
]

"""Wavelet block thresholding: transforms, estimators, and risk experiments."""

from ._core import (  # noqa: F401
    BlockSpike,
    CoefficientTree,
    EstimateResult,
    EstimatorConfig,
    LevelDiagnostics,
    NoisyCoefficients,
    RiskSummary,
    SampleFunction,
    SeedSpec,
    Sine,
    Variant,
    __version__,
    analyze,
    block_length,
    block_spike_constant,
    check_event_T,
    chi_square_tail_bound,
    compute_L,
    compute_L_bruteforce,
    estimate,
    evaluate_expansion,
    function_values,
    hard_threshold,
    l2_risk,
    linf_risk,
    lj_distribution,
    matched_spike_level,
    monte_carlo,
    plain_block_threshold,
    projection_estimator,
    rate_regression,
    rescale_for_estimation,
    simulate,
    standardized_residuals,
    synthesize,
    true_coefficients,
    truncated_block_threshold,
    truncation_threshold,
)

"""Closed-form selling thresholds for pairs positions under Markov-modulated
trading windows, with residual verification, Monte Carlo policy checks,
calibration and sensitivity studies.

The heavy lifting lives in the compiled extension; this package re-exports
its surface.
"""

from ._core import (  # noqa: F401
    AsymptoticCurves,
    CalibrationResult,
    DominanceRow,
    GridSpec,
    ModelParams,
    PositivityCounterexample,
    PositivitySummary,
    PriceSeries,
    ProfileRow,
    RefinementReport,
    RegimeStopError,
    ReducedCoeffs,
    ResidualReport,
    Roots,
    SimConfig,
    SimReport,
    SmoothFitReport,
    Solution,
    SweepRow,
    SweepSpec,
    ValidationIssue,
    __version__,
    asymptotic_curves,
    calibrate,
    check,
    compute_roots,
    derive_coeffs,
    function_profiles,
    k0_limit,
    k1_limit,
    log_spaced,
    policy_dominance,
    positivity_sweep,
    qvi_residuals,
    run_sweep,
    sample_valid_params,
    simulate_policy,
    simulate_with_refinement,
    smooth_fit_check,
    solve,
    surface,
    threshold_k,
    truncation_bound,
    validate,
)

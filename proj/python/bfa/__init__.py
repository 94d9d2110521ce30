"""Boolean-function analytics with a pathwise verification engine."""

from ._core import (
    CapacityError,
    CubeFunction,
    SamplePath,
    SpecError,
    abs_derivative,
    biased_derivative_identity,
    biased_influence,
    biased_transform,
    default_corpus,
    derivative,
    estimate_boundary_bound,
    estimate_gf,
    eval_extension,
    gradient_extension,
    hessian_hs_sq,
    is_monotone,
    level_weights,
    make_function,
    mc_jump_integral_check,
    mc_variance_via_qv,
    monotonize,
    monotonize_chain,
    next_jump_time,
    noise_stability,
    path_observables,
    psi_value,
    r_value,
    run_corpus,
    run_exact_checks,
    sample_path,
    sensitivity_moment,
    sensitivity_profile,
    spectral_stats,
    time_variance,
    wht_forward,
    wht_inverse,
)

__all__ = [
    "CapacityError",
    "CubeFunction",
    "SamplePath",
    "SpecError",
    "abs_derivative",
    "biased_derivative_identity",
    "biased_influence",
    "biased_transform",
    "default_corpus",
    "derivative",
    "estimate_boundary_bound",
    "estimate_gf",
    "eval_extension",
    "gradient_extension",
    "hessian_hs_sq",
    "is_monotone",
    "level_weights",
    "make_function",
    "mc_jump_integral_check",
    "mc_variance_via_qv",
    "monotonize",
    "monotonize_chain",
    "next_jump_time",
    "noise_stability",
    "path_observables",
    "psi_value",
    "r_value",
    "run_corpus",
    "run_exact_checks",
    "sample_path",
    "sensitivity_moment",
    "sensitivity_profile",
    "spectral_stats",
    "time_variance",
    "wht_forward",
    "wht_inverse",
]

"""Oscillatory Fredholm integral equation solvers and network training."""

from ._core import (
    SystemParams,
    __version__,
    apply_discrete_operator,
    benchmark_quad_error,
    benchmark_rhs,
    benchmark_solution,
    bound_suite_passes,
    collocation_error,
    delta_sequence,
    eta_bound,
    evaluate_checkpoint,
    inv_norm,
    metric_grid,
    p_kappa,
    quad_error_bound,
    relative_L2_error,
    run_experiment,
    system_matrix,
)

__all__ = [
    "SystemParams",
    "__version__",
    "apply_discrete_operator",
    "benchmark_quad_error",
    "benchmark_rhs",
    "benchmark_solution",
    "bound_suite_passes",
    "collocation_error",
    "delta_sequence",
    "eta_bound",
    "evaluate_checkpoint",
    "inv_norm",
    "metric_grid",
    "p_kappa",
    "quad_error_bound",
    "relative_L2_error",
    "run_experiment",
    "system_matrix",
]

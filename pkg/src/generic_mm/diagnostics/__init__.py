"""Post-processing of discrete trajectories."""

from .convergence import ConvergenceTable, convergence_study, dyadic_steps, fit_order
from .errors import error_grid, sup_error
from .report import (
    RunReport,
    build_report,
    dissipation_sums,
    energy_identity_residuals,
    energy_series,
    entropy_series,
    entropy_violations,
    g_plus_sum,
    g_values,
)

__all__ = [
    "ConvergenceTable", "RunReport", "build_report", "convergence_study", "dissipation_sums",
    "dyadic_steps", "energy_identity_residuals", "energy_series", "entropy_series",
    "entropy_violations", "error_grid", "fit_order", "g_plus_sum", "g_values", "sup_error",
]

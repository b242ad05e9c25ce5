"""Time steppers for the oscillator: minimizing movements and implicit Euler."""

from .euler import euler_coefficients, euler_residuals, euler_step
from .functional import constraint_residuals, incremental_g, incremental_g_generic
from .mm import MmOptions, StepDiagnostics, minimize_reduced, mm_step, safeguarded_newton
from .partition import Partition, Trajectory
from .reduced import (
    ReducedObjective,
    assemble_state,
    convexity_condition,
    feasible_interval,
    global_small_step,
    max_reduced_temperature,
    reduced_objective,
    reduced_temperature,
)
from .runner import euler_stepper, mm_stepper, run

__all__ = [
    "MmOptions", "Partition", "ReducedObjective", "StepDiagnostics", "Trajectory",
    "assemble_state", "constraint_residuals", "convexity_condition", "euler_coefficients",
    "euler_residuals", "euler_step", "euler_stepper", "feasible_interval", "global_small_step",
    "incremental_g", "incremental_g_generic", "max_reduced_temperature", "minimize_reduced",
    "mm_step", "mm_stepper", "reduced_objective", "reduced_temperature", "run",
    "safeguarded_newton",
]

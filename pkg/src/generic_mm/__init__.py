"""Minimizing-movements and implicit Euler time stepping for GENERIC systems,
with the damped, heat-exchanging harmonic oscillator as the worked model."""

from .errors import (
    EmptySampleError,
    GenericMMError,
    IntegrationError,
    InvalidStateError,
    SolverFailure,
    StencilError,
)
from .extended import NEG_INF, POS_INF, Unbounded, is_unbounded
from .oscillator import Oscillator, OscillatorParams, State, UNIT_PARAMS
from .reference import ReferenceSolution, solve_reference
from .schemes import MmOptions, Partition, Trajectory, euler_step, mm_step, run

__version__ = "0.1.0"

__all__ = [
    "EmptySampleError", "GenericMMError", "IntegrationError", "InvalidStateError", "MmOptions",
    "NEG_INF", "Oscillator", "OscillatorParams", "POS_INF", "Partition", "ReferenceSolution",
    "SolverFailure", "State", "StencilError", "Trajectory", "UNIT_PARAMS", "Unbounded",
    "euler_step", "is_unbounded", "mm_step", "run", "solve_reference",
]

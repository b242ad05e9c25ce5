from __future__ import annotations

from typing import Callable, Union

import numpy as np

from ..errors import InvalidStateError, SolverFailure
from ..oscillator import OscillatorParams, State, as_state, energy
from .euler import euler_step
from .functional import incremental_g
from .mm import DEFAULT_OPTIONS, MmOptions, StepDiagnostics, mm_step
from .partition import Partition, Trajectory
from .reduced import convexity_condition, feasible_interval

Stepper = Callable[..., tuple]


def mm_stepper(prev, tau, params, opts=DEFAULT_OPTIONS):
    return mm_step(prev, tau, params, opts)


def euler_stepper(prev, tau, params, opts=DEFAULT_OPTIONS):
    """Implicit Euler with the same diagnostics record as the MM step."""
    state = euler_step(prev, tau, params)
    q0, p0, _ = prev
    iv = feasible_interval(prev, tau, params)
    e_res = (energy(params, state) + 0.5 * params.kappa * (state.q - q0) ** 2
             + (state.p - p0) ** 2 / (2.0 * params.m) - energy(params, prev))
    diag = StepDiagnostics(
        g_value=incremental_g(prev, state, tau, params),
        iterations=0,
        convex=convexity_condition(prev, tau, params),
        interval=(iv.lo, iv.hi),
        fallback_used=False,
        energy_residual=e_res,
    )
    return state, diag


STEPPERS = {"mm": mm_stepper, "euler": euler_stepper}


def run(stepper: Union[str, Stepper], y0, partition: Partition,
        params: OscillatorParams, opts: MmOptions = DEFAULT_OPTIONS):
    """Step from ``y0`` across ``partition``.

    ``stepper`` is ``"mm"``, ``"euler"`` or a callable
    ``(prev, tau, params, opts) -> (State, StepDiagnostics)``.  Returns
    ``(Trajectory, RunReport)``.  A failing step raises
    :class:`SolverFailure` with ``step_index`` and the partial
    ``trajectory`` attached.
    """
    # deferred: diagnostics imports this package
    from ..diagnostics.report import build_report

    step = STEPPERS[stepper] if isinstance(stepper, str) else stepper
    y = as_state(y0)
    states = [y]
    diags = []
    for i, tau in enumerate(partition.steps, start=1):
        try:
            y, diag = step(y, float(tau), params, opts)
        except (SolverFailure, InvalidStateError) as exc:
            partial = Trajectory(partition, np.array(states))
            raise SolverFailure(f"step {i} failed: {exc}",
                                diagnostics=getattr(exc, "diagnostics", None),
                                step_index=i, trajectory=partial) from exc
        states.append(State(*y))
        diags.append(diag)
    traj = Trajectory(partition, np.array(states))
    return traj, build_report(traj, params, diags)

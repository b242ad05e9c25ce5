from __future__ import annotations

import numpy as np

from ..oscillator import OscillatorParams
from ..reference import ReferenceSolution
from ..schemes.partition import Trajectory

COMPONENTS = {"q": 0, "p": 1, "theta": 2}


def error_grid(traj: Trajectory, ref: ReferenceSolution) -> np.ndarray:
    """Reference step grid merged with the trajectory's nodes."""
    t_end = traj.times[-1]
    if abs(t_end - ref.T) > 1e-12 * max(1.0, ref.T):
        raise ValueError(f"trajectory ends at {t_end}, reference at {ref.T}")
    grid = np.union1d(ref.t, traj.times)
    return grid[grid <= t_end]


def sup_error(traj: Trajectory, ref: ReferenceSolution, component: str = "theta",
              params: OscillatorParams | None = None) -> float:
    """Uniform error of the piecewise-linear interpolant.

    ``component`` is ``"q"``, ``"p"`` or ``"theta"`` (compared with the
    reference), or ``"energy"``: ``max_t |E(y_hat(t)) - E(y_0)|``, which needs
    ``params``.  The sup is taken over :func:`error_grid`.
    """
    grid = error_grid(traj, ref)
    y_hat = traj.piecewise_linear(grid)
    if component == "energy":
        if params is None:
            raise ValueError("energy error needs params")
        q, p, th = y_hat[:, 0], y_hat[:, 1], y_hat[:, 2]
        e = p * p / (2.0 * params.m) + params.c * th + 0.5 * params.kappa * q * q
        q0, p0, th0 = traj.states[0]
        e0 = p0 * p0 / (2.0 * params.m) + params.c * th0 + 0.5 * params.kappa * q0 * q0
        return float(np.abs(e - e0).max())
    k = COMPONENTS[component]
    return float(np.abs(y_hat[:, k] - ref(grid)[:, k]).max())

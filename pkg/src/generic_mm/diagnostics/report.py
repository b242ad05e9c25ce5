"""Per-run bookkeeping: energy identity, dissipation sums, entropy, ``G``."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..extended import POS_INF, ExtendedReal, is_unbounded
from ..oscillator import OscillatorParams, energy, entropy
from ..schemes.functional import incremental_g
from ..schemes.partition import Trajectory


@dataclass
class RunReport:
    energy: np.ndarray
    entropy: np.ndarray
    dissipation_q: np.ndarray
    dissipation_p: np.ndarray
    g_values: list
    g_plus: ExtendedReal
    theta_min: float
    energy_residual_max: float
    steps: list = field(default_factory=list)

    @property
    def n_steps(self) -> int:
        return len(self.g_values)


def energy_series(traj: Trajectory, params: OscillatorParams) -> np.ndarray:
    return np.array([energy(params, y) for y in traj.states])


def entropy_series(traj: Trajectory, params: OscillatorParams) -> np.ndarray:
    return np.array([entropy(params, y) for y in traj.states])


def g_values(traj: Trajectory, params: OscillatorParams) -> list:
    steps = traj.partition.steps
    return [incremental_g(traj.states[i - 1], traj.states[i], steps[i - 1], params)
            for i in range(1, len(traj))]


def g_plus_sum(traj: Trajectory, params: OscillatorParams) -> ExtendedReal:
    """A-posteriori estimator ``sum_i max(G_i, 0)``; ``POS_INF`` if any step
    is off the constraint manifold."""
    total = 0.0
    for g in g_values(traj, params):
        if is_unbounded(g):
            return POS_INF
        total += max(g, 0.0)
    return total


def energy_identity_residuals(traj: Trajectory, params: OscillatorParams) -> np.ndarray:
    """``E(y_i) + kappa|dq|^2/2 + |dp|^2/(2m) - E(y_{i-1})`` for ``i = 1..n``."""
    y = traj.states
    e = energy_series(traj, params)
    dq = np.diff(y[:, 0])
    dp = np.diff(y[:, 1])
    return e[1:] + 0.5 * params.kappa * dq ** 2 + dp ** 2 / (2.0 * params.m) - e[:-1]


def dissipation_sums(traj: Trajectory, params: OscillatorParams) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative ``D^q_j`` and ``D^p_j`` for ``j = 0..n`` (``D_0 = 0``)."""
    y = traj.states
    dq = 0.5 * params.kappa * np.diff(y[:, 0]) ** 2
    dp = np.diff(y[:, 1]) ** 2 / (2.0 * params.m)
    return np.concatenate([[0.0], np.cumsum(dq)]), np.concatenate([[0.0], np.cumsum(dp)])


def entropy_violations(traj: Trajectory, params: OscillatorParams, tol: float = 1e-12) -> list[int]:
    """Indices ``i`` with ``S(y_i) < S(y_{i-1}) - tol``."""
    s = entropy_series(traj, params)
    return [int(i) + 1 for i in np.nonzero(s[1:] < s[:-1] - tol)[0]]


def build_report(traj: Trajectory, params: OscillatorParams, steps=()) -> RunReport:
    gs = g_values(traj, params)
    g_plus = POS_INF if any(is_unbounded(g) for g in gs) else sum(max(g, 0.0) for g in gs)
    dq, dp = dissipation_sums(traj, params)
    res = energy_identity_residuals(traj, params)
    return RunReport(
        energy=energy_series(traj, params),
        entropy=entropy_series(traj, params),
        dissipation_q=dq,
        dissipation_p=dp,
        g_values=gs,
        g_plus=g_plus,
        theta_min=float(traj.states[:, 2].min()),
        energy_residual_max=float(np.abs(res).max()) if res.size else 0.0,
        steps=list(steps),
    )

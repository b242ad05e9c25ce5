from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Partition:
    """Time grid ``0 = t_0 < t_1 < ... < t_N = T``."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ValueError("a partition needs at least two nodes")
        if nodes[0] != 0.0:
            raise ValueError("a partition starts at t = 0")
        if not np.all(np.diff(nodes) > 0):
            raise ValueError("partition nodes must be strictly increasing")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def uniform(cls, T: float, tau: float) -> "Partition":
        """Steps of length ``tau``; if ``tau`` does not divide ``T`` the last
        step is shortened so that the grid ends exactly at ``T``."""
        if not (T > 0 and tau > 0):
            raise ValueError("T and tau must be positive")
        n = int(np.floor(T / tau + 1e-9))
        nodes = tau * np.arange(n + 1, dtype=float)
        if T - nodes[-1] > 1e-9 * tau:
            nodes = np.append(nodes, T)
        else:
            nodes[-1] = T
        return cls(nodes)

    @property
    def steps(self) -> np.ndarray:
        return np.diff(self.nodes)

    @property
    def diameter(self) -> float:
        return float(self.steps.max())

    @property
    def T(self) -> float:
        return float(self.nodes[-1])

    @property
    def N(self) -> int:
        return self.nodes.size - 1

    def __len__(self):
        return self.N


@dataclass(frozen=True)
class Trajectory:
    """Discrete states ``y_0 .. y_n`` on a partition.

    ``states`` may be shorter than the partition (``n < N``) when a run
    stopped early; the interpolants are then defined on ``[0, t_n]``.
    """

    partition: Partition
    states: np.ndarray

    def __post_init__(self):
        states = np.atleast_2d(np.asarray(self.states, dtype=float))
        if states.shape[0] > self.partition.N + 1:
            raise ValueError("more states than partition nodes")
        object.__setattr__(self, "states", states)

    @property
    def times(self) -> np.ndarray:
        return self.partition.nodes[: self.states.shape[0]]

    @property
    def complete(self) -> bool:
        return self.states.shape[0] == self.partition.N + 1

    def __len__(self):
        return self.states.shape[0]

    def __getitem__(self, i):
        return self.states[i]

    def _check_times(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or np.any(t > self.times[-1]):
            raise ValueError(f"t outside [0, {self.times[-1]}]")
        return t

    def piecewise_constant(self, t) -> np.ndarray:
        """Backward piecewise-constant interpolant: ``y_i`` on ``(t_{i-1}, t_i]``."""
        t = self._check_times(t)
        idx = np.searchsorted(self.times, t, side="left")
        return self.states[idx]

    def piecewise_linear(self, t) -> np.ndarray:
        """Linear interpolant through ``(t_i, y_i)``."""
        t = self._check_times(t)
        times = self.times
        out = np.empty(t.shape + (self.states.shape[1],))
        for k in range(self.states.shape[1]):
            out[..., k] = np.interp(t, times, self.states[:, k])
        return out

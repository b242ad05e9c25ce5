"""High-accuracy reference trajectories.

An explicit Dormand-Prince 5(4) integrator with step-size control on a
pure absolute error tolerance, a cap on the step size, and the standard
4th-order continuous extension for dense output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IntegrationError
from .oscillator import OscillatorParams, as_state

# Dormand & Prince (1980) tableau
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# b - b_hat
_E1, _E3, _E4, _E5, _E6, _E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40
# continuous extension (Hairer, Norsett & Wanner, dopri5)
_D1 = -12715105075 / 11282082432
_D3 = 87487479700 / 32700410799
_D4 = -10690763975 / 1880347072
_D5 = 701980252875 / 199316789632
_D6 = -1453857185 / 822651844
_D7 = 69997945 / 29380423

_SAFETY, _FAC_MIN, _FAC_MAX = 0.9, 0.2, 5.0


@dataclass
class SolverStats:
    steps: int
    rejected: int
    evaluations: int


@dataclass
class ReferenceSolution:
    """Accepted-step grid ``t``, states ``y`` and dense-output coefficients.

    Calling the solution at times in ``[0, T]`` evaluates the continuous
    extension (4th order).
    """

    t: np.ndarray
    y: np.ndarray
    dense: np.ndarray  # (n_steps, 5, dim)
    stats: SolverStats
    abs_tol: float
    max_step: float

    @property
    def T(self) -> float:
        return float(self.t[-1])

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if np.any(t < self.t[0]) or np.any(t > self.t[-1]):
            raise ValueError(f"t outside [{self.t[0]}, {self.t[-1]}]")
        idx = np.clip(np.searchsorted(self.t, t, side="right") - 1, 0, self.t.size - 2)
        h = self.t[idx + 1] - self.t[idx]
        s = ((t - self.t[idx]) / h)[..., None]
        r = self.dense[idx]
        r1, r2, r3, r4, r5 = (r[..., j, :] for j in range(5))
        out = r1 + s * (r2 + (1 - s) * (r3 + s * (r4 + (1 - s) * r5)))
        # hit the stored nodes exactly
        exact = self.t[idx] == t
        out[exact] = self.y[idx[exact]]
        end = t == self.t[-1]
        out[end] = self.y[-1]
        return out


def dopri5(f, y0, T: float, abs_tol: float = 1e-8, max_step: float = math.inf,
           rel_tol: float = 0.0, h0: float | None = None, guard=None,
           max_steps: int = 10_000_000) -> ReferenceSolution:
    """Integrate ``y' = f(y)`` on ``[0, T]``.

    ``f`` maps a list of floats to a list of floats.  ``guard(y)`` may raise
    to abort when an accepted state leaves the physical domain.
    """
    y = [float(v) for v in y0]
    d = len(y)
    t = 0.0
    h = min(max_step, 0.01 * T) if h0 is None else h0
    k1 = f(y)
    nfev, nrej = 1, 0
    ts, ys, dense = [0.0], [y], []
    while t < T:
        if len(ts) > max_steps:
            raise IntegrationError(f"exceeded {max_steps} steps at t = {t}")
        h = min(h, max_step)
        # fold a rounding-sized remainder into this step
        last = t + h >= T - 1e-12 * max(1.0, T)
        if last:
            h = T - t
        k2 = f([y[j] + h * _A21 * k1[j] for j in range(d)])
        k3 = f([y[j] + h * (_A31 * k1[j] + _A32 * k2[j]) for j in range(d)])
        k4 = f([y[j] + h * (_A41 * k1[j] + _A42 * k2[j] + _A43 * k3[j]) for j in range(d)])
        k5 = f([y[j] + h * (_A51 * k1[j] + _A52 * k2[j] + _A53 * k3[j] + _A54 * k4[j])
                for j in range(d)])
        k6 = f([y[j] + h * (_A61 * k1[j] + _A62 * k2[j] + _A63 * k3[j] + _A64 * k4[j]
                            + _A65 * k5[j]) for j in range(d)])
        y_new = [y[j] + h * (_B1 * k1[j] + _B3 * k3[j] + _B4 * k4[j] + _B5 * k5[j] + _B6 * k6[j])
                 for j in range(d)]
        k7 = f(y_new)
        nfev += 6
        err = 0.0
        for j in range(d):
            e = h * (_E1 * k1[j] + _E3 * k3[j] + _E4 * k4[j] + _E5 * k5[j] + _E6 * k6[j] + _E7 * k7[j])
            sc = abs_tol + rel_tol * max(abs(y[j]), abs(y_new[j]))
            err += (e / sc) ** 2
        err = math.sqrt(err / d)
        if err <= 1.0:
            if guard is not None:
                guard(t + h, y_new)
            r2 = [y_new[j] - y[j] for j in range(d)]
            r3 = [h * k1[j] - r2[j] for j in range(d)]
            r4 = [r2[j] - h * k7[j] - r3[j] for j in range(d)]
            r5 = [h * (_D1 * k1[j] + _D3 * k3[j] + _D4 * k4[j] + _D5 * k5[j] + _D6 * k6[j]
                       + _D7 * k7[j]) for j in range(d)]
            dense.append((y, r2, r3, r4, r5))
            t = T if last else t + h
            y, k1 = y_new, k7
            ts.append(t)
            ys.append(y)
            fac = _FAC_MAX if err == 0 else min(_FAC_MAX, max(_FAC_MIN, _SAFETY * err ** -0.2))
        else:
            nrej += 1
            fac = max(_FAC_MIN, _SAFETY * err ** -0.2)
        h = h * fac
        if t < T and h < 1e-14 * max(1.0, T):
            raise IntegrationError(f"step size underflow at t = {t}")
    return ReferenceSolution(
        t=np.array(ts),
        y=np.array(ys),
        dense=np.array(dense).reshape(len(dense), 5, d),
        stats=SolverStats(steps=len(dense), rejected=nrej, evaluations=nfev),
        abs_tol=abs_tol,
        max_step=max_step,
    )


def oscillator_field(params: OscillatorParams):
    m, nu, kappa, lam, c = params.m, params.nu, params.kappa, params.lam, params.c
    mc = m * c
    mmc = m * m * c

    def f(y):
        q, p, theta = y
        return [p / m, -nu * p / m - kappa * q - lam * theta, nu * p * p / mmc + lam * p * theta / mc]

    return f


def _positive_temperature(t, y):
    if not y[2] > 0:
        raise IntegrationError(f"temperature reached {y[2]!r} at t = {t}")


def solve_reference(params: OscillatorParams, y0, T: float, abs_tol: float = 1e-8,
                    max_step: float = 1e-4) -> ReferenceSolution:
    """Reference solution of the oscillator ODE on ``[0, T]``."""
    if not T > 0:
        raise ValueError("T must be positive")
    y0 = as_state(y0)
    return dopri5(oscillator_field(params), y0, T, abs_tol=abs_tol, max_step=max_step,
                  guard=_positive_temperature)

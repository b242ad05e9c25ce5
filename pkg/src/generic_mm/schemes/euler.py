"""Implicit Euler for the oscillator, solved in closed form.

Eliminating ``q_i`` and ``p_i = alpha theta_i + beta`` from the three implicit
equations leaves the quadratic ``gamma theta^2 + delta theta + epsilon = 0``
with ``gamma < 0 < epsilon``, which has exactly one positive root.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from ..errors import InvalidStateError, SolverFailure
from ..oscillator import OscillatorParams, State


class EulerCoefficients(NamedTuple):
    alpha: float
    beta: float
    gamma: float
    delta: float
    epsilon: float


def euler_coefficients(prev, tau: float, params: OscillatorParams) -> EulerCoefficients:
    q0, p0, theta0 = (float(v) for v in prev)
    m, nu, kappa, lam, c = params.m, params.nu, params.kappa, params.lam, params.c
    denom = m + tau * nu + tau * tau * kappa
    alpha = -tau * m * lam / denom
    beta = (-tau * m * kappa * q0 + m * p0) / denom
    gamma = tau * nu * alpha * alpha / (m * m * c) + tau * lam * alpha / (m * c)
    delta = 2.0 * tau * nu * alpha * beta / (m * m * c) + tau * lam * beta / (m * c) - 1.0
    epsilon = theta0 + tau * nu * beta * beta / (m * m * c)
    return EulerCoefficients(alpha, beta, gamma, delta, epsilon)


def euler_step(prev, tau: float, params: OscillatorParams) -> State:
    q0, _, theta0 = (float(v) for v in prev)
    if theta0 <= 0:
        raise InvalidStateError(f"temperature must be positive, got {theta0}")
    if not tau > 0:
        raise ValueError("time step must be positive")
    alpha, beta, gamma, delta, epsilon = euler_coefficients(prev, tau, params)
    disc = delta * delta - 4.0 * gamma * epsilon
    if not (gamma < 0 and disc >= 0):
        raise SolverFailure(f"degenerate Euler quadratic (gamma={gamma}, disc={disc})")
    root = math.sqrt(disc)
    # positive root, written to avoid cancellation
    if delta >= 0:
        theta = (delta + root) / (-2.0 * gamma)
    else:
        theta = 2.0 * epsilon / (root - delta)
    p = alpha * theta + beta
    q = tau * p / params.m + q0
    return State.of(q, p, theta)


def euler_residuals(prev, cand, tau: float, params: OscillatorParams) -> tuple[float, float, float]:
    """Residuals of the three implicit Euler equations at ``cand``."""
    q0, p0, theta0 = (float(v) for v in prev)
    q, p, theta = (float(v) for v in cand)
    m, nu, kappa, lam, c = params.m, params.nu, params.kappa, params.lam, params.c
    return (
        (q - q0) / tau - p / m,
        (p - p0) / tau + nu * p / m + kappa * q + lam * theta,
        (theta - theta0) / tau - nu * p * p / (m * m * c) - lam * p * theta / (m * c),
    )

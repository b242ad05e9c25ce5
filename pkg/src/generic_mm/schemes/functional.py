"""The incremental functional ``G(tau, y_prev; y)``.

``G = -S(y) + tau psi*(y, (y - y_prev)/tau - L(y) DE(y)) + tau psi(y, DS(y)) + S(y_prev)``.
Minimizing it in ``y`` is one minimizing-movements step; ``G <= 0`` at the
accepted state is the discrete entropy inequality.
"""

from __future__ import annotations

import math

import numpy as np

from .. import core
from ..errors import InvalidStateError
from ..extended import POS_INF, ExtendedReal
from ..oscillator import OscillatorParams

CONSTRAINT_TOL = 1e-9


def constraint_residuals(prev, cand, tau: float, params: OscillatorParams) -> tuple[float, float]:
    """Residuals of ``(q - q_prev)/tau = p/m`` and
    ``c (theta - theta_prev)/tau = -kappa q p/m - (p/m)(p - p_prev)/tau``."""
    q0, p0, theta0 = (float(v) for v in prev)
    q, p, theta = (float(v) for v in cand)
    m = params.m
    r1 = (q - q0) / tau - p / m
    r2 = params.c * (theta - theta0) / tau + params.kappa * q * p / m + (p / m) * (p - p0) / tau
    return r1, r2


def incremental_g(prev, cand, tau: float, params: OscillatorParams) -> ExtendedReal:
    """Closed form of ``G`` for the oscillator.

    Returns ``POS_INF`` if ``theta <= 0`` or either constraint is violated by
    more than ``1e-9 (1 + |cand|)``.
    """
    q0, p0, theta0 = (float(v) for v in prev)
    if theta0 <= 0:
        raise InvalidStateError(f"previous temperature must be positive, got {theta0}")
    q, p, theta = (float(v) for v in cand)
    if not theta > 0:
        return POS_INF
    tol = CONSTRAINT_TOL * (1.0 + math.sqrt(q * q + p * p + theta * theta))
    r1, r2 = constraint_residuals(prev, cand, tau, params)
    if abs(r1) > tol or abs(r2) > tol:
        return POS_INF
    m, nu, kappa, lam, c = params.m, params.nu, params.kappa, params.lam, params.c
    dual = (p - p0) / tau + kappa * q + lam * theta
    return (lam * q - c * math.log(theta)
            + tau * dual * dual / (2.0 * nu * theta)
            + tau * nu * p * p / (2.0 * m * theta)
            - lam * q0 + c * math.log(theta0))


def incremental_g_generic(model: core.SystemModel, prev, cand, tau: float) -> ExtendedReal:
    """``G`` assembled from the model interface, with ``psi*`` from the
    pseudoinverse of ``K``.  Independent of the oscillator closed form."""
    prev = np.asarray(prev, dtype=float)
    cand = np.asarray(cand, dtype=float)
    s_prev = model.entropy(prev)
    if not model.domain(prev):
        raise InvalidStateError(f"previous state {prev} outside the domain")
    if not model.domain(cand):
        return POS_INF
    eta = (cand - prev) / tau - model.poisson(cand) @ model.grad_energy(cand)
    dual = core.psi_star_pinv(model, cand, eta)
    if dual is POS_INF:
        return POS_INF
    return (-model.entropy(cand) + tau * dual
            + tau * core.psi(model, cand, model.grad_entropy(cand)) + s_prev)

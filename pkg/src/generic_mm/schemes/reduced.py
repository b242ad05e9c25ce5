"""One-dimensional reduction of the incremental minimization.

Under the constraints of the step, ``q_i`` and ``theta_i`` are functions of
the new momentum ``p``:

    q_i     = tau p/m + q_prev
    theta_i = f(p) = theta_prev - tau^2 kappa p^2/(m^2 c) - tau kappa p q_prev/(m c)
                     - p^2/(m c) + p p_prev/(m c)

so the step reduces to minimizing a scalar function ``F(p)`` over the open
interval where ``f > 0``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from ..errors import InvalidStateError
from ..oscillator import OscillatorParams


class Interval(NamedTuple):
    center: float
    radius: float

    @property
    def lo(self) -> float:
        return self.center - self.radius

    @property
    def hi(self) -> float:
        return self.center + self.radius


class _Quadratic(NamedTuple):
    # f(p) = theta0 + b p - a p^2
    theta0: float
    b: float
    a: float


def _coefficients(prev, tau: float, params: OscillatorParams) -> _Quadratic:
    q0, p0, theta0 = (float(v) for v in prev)
    mc = params.m * params.c
    a = (1.0 + tau * tau * params.kappa / params.m) / mc
    b = (p0 - tau * params.kappa * q0) / mc
    return _Quadratic(theta0, b, a)


def feasible_interval(prev, tau: float, params: OscillatorParams) -> Interval:
    """Center and half-width of ``{p : f(p) > 0}``."""
    q0, p0, theta0 = (float(v) for v in prev)
    if theta0 <= 0:
        raise InvalidStateError(f"temperature must be positive, got {theta0}")
    s = 1.0 + tau * tau * params.kappa / params.m
    w = p0 - tau * params.kappa * q0
    center = w / (2.0 * s)
    radius = math.sqrt(w * w + 4.0 * s * params.m * params.c * theta0) / (2.0 * s)
    return Interval(center, radius)


def reduced_temperature(prev, tau: float, params: OscillatorParams, p: float) -> float:
    q0, p0, theta0 = (float(v) for v in prev)
    m, c, kappa = params.m, params.c, params.kappa
    return (theta0 - tau * tau * kappa * p * p / (m * m * c) - tau * kappa * p * q0 / (m * c)
            - p * p / (m * c) + p * p0 / (m * c))


def max_reduced_temperature(prev, tau: float, params: OscillatorParams) -> float:
    """``max_p f(p) = (p_prev - tau kappa q_prev)^2 / (4(tau^2 kappa c + m c)) + theta_prev``."""
    q0, p0, theta0 = (float(v) for v in prev)
    w = p0 - tau * params.kappa * q0
    return w * w / (4.0 * (tau * tau * params.kappa * params.c + params.m * params.c)) + theta0


def assemble_state(prev, tau: float, params: OscillatorParams, p: float) -> tuple[float, float, float]:
    """``(q_i, p, theta_i)`` from the constraint equations."""
    q0 = float(prev[0])
    return (tau * p / params.m + q0, p, reduced_temperature(prev, tau, params, p))


class ReducedObjective:
    """``F`` and its first two derivatives for a fixed previous state and step.

    ``F(p) = tau lam p/m - c ln f + tau u^2/(2 nu f) + tau nu p^2/(2 m f) + c ln theta_prev``
    with ``u = (p - p_prev)/tau + tau kappa p/m + kappa q_prev + lam f``.
    """

    def __init__(self, prev, tau: float, params: OscillatorParams):
        q0, p0, theta0 = (float(v) for v in prev)
        if theta0 <= 0:
            raise InvalidStateError(f"temperature must be positive, got {theta0}")
        if not tau > 0:
            raise ValueError("time step must be positive")
        self.prev = (q0, p0, theta0)
        self.tau = float(tau)
        self.params = params
        self.quad = _coefficients(prev, tau, params)
        self.interval = feasible_interval(prev, tau, params)

    def f(self, p: float) -> float:
        return reduced_temperature(self.prev, self.tau, self.params, p)

    def _pieces(self, p):
        q0, p0, _ = self.prev
        tau, prm = self.tau, self.params
        f = self.f(p)
        if not f > 0:
            raise InvalidStateError(f"p = {p!r} outside the feasible interval (f = {f!r})")
        _, b, a = self.quad
        df = b - 2.0 * a * p
        d2f = -2.0 * a
        u = (p - p0) / tau + tau * prm.kappa * p / prm.m + prm.kappa * q0 + prm.lam * f
        du = 1.0 / tau + tau * prm.kappa / prm.m + prm.lam * df
        d2u = prm.lam * d2f
        return f, df, d2f, u, du, d2u

    def value(self, p: float) -> float:
        q0, p0, theta0 = self.prev
        tau, prm = self.tau, self.params
        f, _, _, u, _, _ = self._pieces(p)
        return (tau * prm.lam * p / prm.m - prm.c * math.log(f)
                + tau * u * u / (2.0 * prm.nu * f)
                + tau * prm.nu * p * p / (2.0 * prm.m * f)
                + prm.c * math.log(theta0))

    __call__ = value

    def derivatives(self, p: float) -> tuple[float, float, float]:
        """``(F'(p), F''(p), scale)`` where ``scale`` bounds the magnitude of
        the terms summed in ``F'`` (used for a relative stopping test)."""
        tau, prm = self.tau, self.params
        f, df, d2f, u, du, d2u = self._pieces(p)
        k_u = tau / (2.0 * prm.nu)
        k_p = tau * prm.nu / (2.0 * prm.m)
        # w = u^2/f and z = p^2/f
        dw = 2.0 * u * du / f - u * u * df / (f * f)
        d2w = (2.0 * (du * du + u * d2u) / f - 4.0 * u * du * df / (f * f)
               - u * u * d2f / (f * f) + 2.0 * u * u * df * df / (f ** 3))
        dz = 2.0 * p / f - p * p * df / (f * f)
        d2z = 2.0 / f - 4.0 * p * df / (f * f) - p * p * d2f / (f * f) + 2.0 * p * p * df * df / (f ** 3)
        t1 = tau * prm.lam / prm.m
        t2 = -prm.c * df / f
        d1 = t1 + t2 + k_u * dw + k_p * dz
        d2 = -prm.c * (d2f / f - df * df / (f * f)) + k_u * d2w + k_p * d2z
        scale = (abs(t1) + abs(t2) + k_u * (abs(2.0 * u * du / f) + abs(u * u * df / (f * f)))
                 + k_p * (abs(2.0 * p / f) + abs(p * p * df / (f * f))))
        return d1, d2, scale


def reduced_objective(prev, tau: float, params: OscillatorParams, p: float) -> tuple[float, float]:
    """``(F(p), F'(p))``."""
    obj = ReducedObjective(prev, tau, params)
    return obj.value(p), obj.derivatives(p)[0]


def convexity_condition(prev, tau: float, params: OscillatorParams) -> bool:
    """Sufficient condition ``max f <= 2 nu c/(tau lam^2)`` for strict convexity of ``F``."""
    return max_reduced_temperature(prev, tau, params) <= 2.0 * params.nu * params.c / (tau * params.lam ** 2)


def global_small_step(c0: float, tau_max: float, params: OscillatorParams) -> bool:
    """Partition-wide version: ``c0 <= 2 nu c/(tau_max lam^2)``, where ``c0``
    bounds ``max f`` uniformly along the run (e.g. ``E(y0)`` for unit
    parameters)."""
    return c0 <= 2.0 * params.nu * params.c / (tau_max * params.lam ** 2)

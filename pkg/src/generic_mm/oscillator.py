"""Damped harmonic oscillator with heat exchange as a GENERIC system.

State ``y = (q, p, theta)``: position, momentum and absolute temperature,
with ``theta > 0``.  The dynamics are

    q'     = p/m
    p'     = -nu p/m - kappa q - lam theta
    theta' = nu p^2/(m^2 c) + lam p theta/(m c)

with energy ``E = p^2/(2m) + c theta + kappa q^2/2`` and entropy
``S = -lam q + c + c ln(theta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidStateError
from .extended import NEG_INF, POS_INF, ExtendedReal

FEASIBILITY_TOL = 1e-10


@dataclass(frozen=True)
class OscillatorParams:
    m: float = 1.0
    nu: float = 1.0
    kappa: float = 1.0
    lam: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        for name in ("m", "nu", "kappa", "lam", "c"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"parameter {name} must be positive and finite, got {value!r}")


UNIT_PARAMS = OscillatorParams()


class State(NamedTuple):
    """Oscillator state; build with :meth:`State.of` to enforce ``theta > 0``."""

    q: float
    p: float
    theta: float

    @classmethod
    def of(cls, q, p, theta) -> "State":
        q, p, theta = float(q), float(p), float(theta)
        if not (math.isfinite(q) and math.isfinite(p) and math.isfinite(theta)):
            raise InvalidStateError(f"non-finite state ({q}, {p}, {theta})")
        if theta <= 0.0:
            raise InvalidStateError(f"temperature must be positive, got {theta}")
        return cls(q, p, theta)

    def array(self) -> np.ndarray:
        return np.array(self, dtype=float)


def as_state(y) -> State:
    if isinstance(y, State):
        if y.theta <= 0.0:
            raise InvalidStateError(f"temperature must be positive, got {y.theta}")
        return y
    q, p, theta = (float(v) for v in y)
    return State.of(q, p, theta)


def energy(params: OscillatorParams, y) -> float:
    q, p, theta = (float(v) for v in y)
    return p * p / (2.0 * params.m) + params.c * theta + 0.5 * params.kappa * q * q


def entropy(params: OscillatorParams, y) -> float:
    q, _, theta = as_state(y)
    return -params.lam * q + params.c + params.c * math.log(theta)


def free_energy(params: OscillatorParams, y) -> float:
    q, _, theta = as_state(y)
    return 0.5 * params.kappa * q * q + params.lam * q * theta - params.c * theta * math.log(theta)


def helmholtz_residuals(params: OscillatorParams, y) -> tuple[float, float]:
    """Residuals of ``S = -dPhi/dtheta`` and ``E = p^2/(2m) + Phi + theta S``."""
    q, p, theta = as_state(y)
    dphi_dtheta = params.lam * q - params.c * math.log(theta) - params.c
    s = entropy(params, y)
    r1 = s + dphi_dtheta
    r2 = energy(params, y) - p * p / (2.0 * params.m) - free_energy(params, y) - theta * s
    return r1, r2


def grad_energy(params: OscillatorParams, y) -> np.ndarray:
    q, p, _ = as_state(y)
    return np.array([params.kappa * q, p / params.m, params.c])


def grad_entropy(params: OscillatorParams, y) -> np.ndarray:
    _, _, theta = as_state(y)
    return np.array([-params.lam, 0.0, params.c / theta])


def poisson_matrix(params: OscillatorParams, y) -> np.ndarray:
    _, _, theta = as_state(y)
    a = params.lam * theta / params.c
    return np.array([
        [0.0, 1.0, 0.0],
        [-1.0, 0.0, -a],
        [0.0, a, 0.0],
    ])


def poisson_matrix_derivative(params: OscillatorParams, y) -> np.ndarray:
    """``out[l, j, k] = d L_jk / d y_l``; only the theta-derivative is nonzero."""
    as_state(y)
    dL = np.zeros((3, 3, 3))
    dL[2, 1, 2] = -params.lam / params.c
    dL[2, 2, 1] = params.lam / params.c
    return dL


def onsager_matrix(params: OscillatorParams, y) -> np.ndarray:
    _, p, theta = as_state(y)
    b = p / (params.m * params.c)
    return params.nu * theta * np.array([
        [0.0, 0.0, 0.0],
        [0.0, 1.0, -b],
        [0.0, -b, b * b],
    ])


def rhs(params: OscillatorParams, y) -> np.ndarray:
    q, p, theta = as_state(y)
    m, nu, kappa, lam, c = params.m, params.nu, params.kappa, params.lam, params.c
    return np.array([
        p / m,
        -nu * p / m - kappa * q - lam * theta,
        nu * p * p / (m * m * c) + lam * p * theta / (m * c),
    ])


def psi_closed(params: OscillatorParams, y, xi) -> float:
    """``nu theta/2 * (xi_p - p xi_theta/(m c))^2``."""
    _, p, theta = as_state(y)
    _, xi_p, xi_theta = (float(v) for v in xi)
    return 0.5 * params.nu * theta * (xi_p - p * xi_theta / (params.m * params.c)) ** 2


def psi_star_closed(params: OscillatorParams, y, eta) -> ExtendedReal:
    """Dual potential: ``eta_p^2 / (2 nu theta)`` on the constraint set
    ``eta_q = 0, p eta_p + m c eta_theta = 0``, ``+inf`` elsewhere."""
    _, p, theta = as_state(y)
    eta_q, eta_p, eta_theta = (float(v) for v in eta)
    atol = FEASIBILITY_TOL * max(1.0, math.sqrt(eta_q**2 + eta_p**2 + eta_theta**2))
    if abs(eta_q) > atol or abs(p * eta_p + params.m * params.c * eta_theta) > atol:
        return POS_INF
    return eta_p * eta_p / (2.0 * params.nu * theta)


def equilibrium(params: OscillatorParams, theta: float) -> State:
    """The rest state ``(-lam theta/kappa, 0, theta)``."""
    return State.of(-params.lam * theta / params.kappa, 0.0, theta)


class Oscillator:
    """:class:`generic_mm.core.SystemModel` adapter around the functions above."""

    dim = 3

    def __init__(self, params: OscillatorParams = UNIT_PARAMS):
        self.params = params

    def __repr__(self):
        return f"Oscillator({self.params!r})"

    def domain(self, y) -> bool:
        theta = float(y[2])
        return math.isfinite(theta) and theta > 0.0

    def energy(self, y) -> float:
        return energy(self.params, y)

    def entropy(self, y) -> ExtendedReal:
        if not self.domain(y):
            return NEG_INF
        return entropy(self.params, y)

    def grad_energy(self, y):
        return grad_energy(self.params, y)

    def grad_entropy(self, y):
        return grad_entropy(self.params, y)

    def poisson(self, y):
        return poisson_matrix(self.params, y)

    def poisson_derivative(self, y):
        return poisson_matrix_derivative(self.params, y)

    def onsager(self, y):
        return onsager_matrix(self.params, y)

    def rhs(self, y):
        return rhs(self.params, y)

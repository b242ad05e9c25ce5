"""Finite-dimensional GENERIC systems.

A GENERIC system is given by an energy ``E``, an entropy ``S``, a Poisson
matrix ``L(y)`` (antisymmetric, Jacobi identity) and an Onsager matrix
``K(y)`` (symmetric positive semidefinite), with evolution

    y' = L(y) DE(y) + K(y) DS(y).

This module defines the model interface, the dissipation potential
``psi(y, xi) = xi.K(y)xi / 2`` together with its convex conjugate, and
numerical validators for the structural assumptions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

import numpy as np

from .errors import EmptySampleError, InvalidStateError, StencilError
from .extended import POS_INF, ExtendedReal

DEFAULT_SEED = 42

# rank policy for the pseudoinverse of K
EIG_TRUNCATION = 1e-12
RANGE_TOL = 1e-10


@runtime_checkable
class SystemModel(Protocol):
    """Capability interface of a GENERIC quintuple on ``R^dim``.

    ``entropy`` returns :data:`generic_mm.extended.NEG_INF` outside the
    domain; every other method assumes ``domain(y)`` holds.
    """

    dim: int

    def energy(self, y) -> float: ...

    def entropy(self, y) -> ExtendedReal: ...

    def grad_energy(self, y) -> np.ndarray: ...

    def grad_entropy(self, y) -> np.ndarray: ...

    def poisson(self, y) -> np.ndarray: ...

    def onsager(self, y) -> np.ndarray: ...

    def domain(self, y) -> bool: ...


@dataclass(frozen=True)
class CheckResult:
    residual: float
    passed: bool


@dataclass
class ValidationReport:
    """Outcome of one structural validator.

    ``checks`` maps a check name to its maximum residual over ``samples``;
    a check passes iff its residual is at most ``tol``.
    """

    tol: float
    samples: np.ndarray
    checks: dict[str, CheckResult] = field(default_factory=dict)
    min_eigenvalue: float | None = None

    def add(self, name: str, residual: float) -> None:
        residual = float(residual)
        self.checks[name] = CheckResult(residual, residual <= self.tol)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    @property
    def residual(self) -> float:
        return max(c.residual for c in self.checks.values())


def sample_states(n: int, seed: int | None = DEFAULT_SEED, rng=None) -> np.ndarray:
    """Draw ``n`` oscillator-like states ``(q, p, theta)``.

    ``q`` and ``p`` are uniform on ``[-2, 2]``; ``theta`` is log-uniform on
    ``[0.1, 10]``.
    """
    if rng is None:
        rng = np.random.default_rng(seed)
    qp = rng.uniform(-2.0, 2.0, size=(n, 2))
    theta = np.exp(rng.uniform(np.log(0.1), np.log(10.0), size=n))
    return np.column_stack([qp, theta])


def _require_domain(model: SystemModel, y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if not model.domain(y):
        raise InvalidStateError(f"state {y} is outside the model domain")
    return y


def _require_samples(samples) -> np.ndarray:
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    if samples.size == 0:
        raise EmptySampleError("at least one sample state is required")
    return samples


def psi(model: SystemModel, y, xi) -> float:
    """Entropy-production potential ``xi.K(y)xi / 2``."""
    y = _require_domain(model, y)
    xi = np.asarray(xi, dtype=float)
    return 0.5 * float(xi @ model.onsager(y) @ xi)


def onsager_pinv(K: np.ndarray) -> np.ndarray:
    """Moore-Penrose inverse of a symmetric PSD matrix via ``eigh``.

    Eigenvalues below ``EIG_TRUNCATION * max eigenvalue`` are treated as 0.
    """
    w, V = np.linalg.eigh(K)
    wmax = w.max(initial=0.0)
    if wmax <= 0.0:
        return np.zeros_like(K)
    keep = w > EIG_TRUNCATION * wmax
    return (V[:, keep] / w[keep]) @ V[:, keep].T


def psi_star_pinv(model: SystemModel, y, eta) -> ExtendedReal:
    """Convex conjugate of :func:`psi` in its second argument.

    Finite only on ``range(K(y))``, where it equals ``eta.K^+ eta / 2``;
    returns ``POS_INF`` when ``eta`` is off the range.
    """
    y = _require_domain(model, y)
    eta = np.asarray(eta, dtype=float)
    K = model.onsager(y)
    Kp = onsager_pinv(K)
    off_range = eta - K @ (Kp @ eta)
    if np.linalg.norm(off_range) > RANGE_TOL * max(1.0, np.linalg.norm(eta)):
        return POS_INF
    return 0.5 * float(eta @ Kp @ eta)


def fenchel_gap(model: SystemModel, y, xi) -> float:
    """``psi*(y, K xi) + psi(y, xi) - <xi, K xi>``; zero in exact arithmetic."""
    y = _require_domain(model, y)
    xi = np.asarray(xi, dtype=float)
    Kxi = model.onsager(y) @ xi
    dual = psi_star_pinv(model, y, Kxi)
    if dual is POS_INF:
        # K xi always lies in range(K); reaching this means the rank policy failed
        raise ArithmeticError("K(y) xi classified outside range(K(y))")
    return dual + psi(model, y, xi) - float(xi @ Kxi)


def generic_rhs(model: SystemModel, y) -> np.ndarray:
    """``L(y) DE(y) + K(y) DS(y)``."""
    y = _require_domain(model, y)
    return model.poisson(y) @ model.grad_energy(y) + model.onsager(y) @ model.grad_entropy(y)


def check_antisymmetry(model: SystemModel, samples, tol: float = 1e-12) -> ValidationReport:
    samples = _require_samples(samples)
    worst = 0.0
    for y in samples:
        L = model.poisson(_require_domain(model, y))
        worst = max(worst, np.abs(L + L.T).max())
    report = ValidationReport(tol, samples)
    report.add("antisymmetry", worst)
    return report


def check_onsager_psd(model: SystemModel, samples, tol: float = 1e-12) -> ValidationReport:
    """Symmetry of ``K`` and the sign of its smallest eigenvalue.

    The ``psd`` residual is ``max(0, -min eigenvalue)``; the smallest
    eigenvalue itself is kept in ``report.min_eigenvalue``.
    """
    samples = _require_samples(samples)
    sym = 0.0
    lam_min = np.inf
    for y in samples:
        K = model.onsager(_require_domain(model, y))
        sym = max(sym, np.abs(K - K.T).max())
        lam_min = min(lam_min, np.linalg.eigvalsh(0.5 * (K + K.T)).min())
    report = ValidationReport(tol, samples)
    report.add("symmetry", sym)
    report.add("psd", max(0.0, -lam_min))
    report.min_eigenvalue = float(lam_min)
    return report


def check_noninteraction(model: SystemModel, samples, tol: float = 1e-12) -> ValidationReport:
    """``L(y)^T DS(y) = 0`` and ``K(y)^T DE(y) = 0`` in the max norm."""
    samples = _require_samples(samples)
    res_l = res_k = 0.0
    for y in samples:
        y = _require_domain(model, y)
        res_l = max(res_l, np.abs(model.poisson(y).T @ model.grad_entropy(y)).max())
        res_k = max(res_k, np.abs(model.onsager(y).T @ model.grad_energy(y)).max())
    report = ValidationReport(tol, samples)
    report.add("poisson_entropy", res_l)
    report.add("onsager_energy", res_k)
    return report


def poisson_derivative_fd(model: SystemModel, y, fd_step: float = 1e-6) -> np.ndarray:
    """Central differences ``dL[l, j, k] = d L_jk / d y_l``.

    The step in coordinate ``l`` is ``fd_step * (1 + |y_l|)``.
    """
    y = np.asarray(y, dtype=float)
    d = y.size
    dL = np.empty((d, d, d))
    for l in range(d):
        h = fd_step * (1.0 + abs(y[l]))
        e = np.zeros(d)
        e[l] = h
        lo, hi = y - e, y + e
        if not (model.domain(lo) and model.domain(hi)):
            raise StencilError(f"stencil of width {h:g} around {y} leaves the domain")
        dL[l] = (model.poisson(hi) - model.poisson(lo)) / (2.0 * h)
    return dL


def jacobi_residual(L: np.ndarray, dL: np.ndarray) -> np.ndarray:
    """``R_ijk = sum_l L_li dL_jk/dy_l + L_lj dL_ki/dy_l + L_lk dL_ij/dy_l``."""
    t = np.einsum("li,ljk->ijk", L, dL)
    return t + t.transpose(1, 2, 0) + t.transpose(2, 0, 1)


def check_jacobi(
    model: SystemModel,
    samples,
    tol: float = 1e-6,
    fd_step: float = 1e-6,
    analytic: bool = False,
) -> ValidationReport:
    """Maximal Jacobi-identity residual of ``L`` over ``samples``.

    Derivatives of ``L`` come from central differences unless ``analytic``
    is set and the model provides ``poisson_derivative(y)`` returning the
    array ``[l, j, k] -> d L_jk / d y_l``.
    """
    samples = _require_samples(samples)
    use_exact = analytic and hasattr(model, "poisson_derivative")
    worst = 0.0
    for y in samples:
        y = _require_domain(model, y)
        dL = model.poisson_derivative(y) if use_exact else poisson_derivative_fd(model, y, fd_step)
        worst = max(worst, np.abs(jacobi_residual(model.poisson(y), dL)).max())
    report = ValidationReport(tol, samples)
    report.add("jacobi", worst)
    return report


def check_rates(model: SystemModel, samples, tol: float = 1e-10) -> ValidationReport:
    """Energy conservation and entropy production of the continuous flow.

    Residuals: ``|<DE, rhs>| / (1 + |rhs|)``; the negative part of
    ``<DS, rhs>``; and ``|<DS, rhs> - <DS, K DS>|`` relative to
    ``1 + <DS, K DS>``.
    """
    samples = _require_samples(samples)
    e_rate = s_sign = s_match = 0.0
    for y in samples:
        y = _require_domain(model, y)
        rhs = generic_rhs(model, y)
        dS = model.grad_entropy(y)
        production = float(dS @ model.onsager(y) @ dS)
        s_rate = float(dS @ rhs)
        e_rate = max(e_rate, abs(model.grad_energy(y) @ rhs) / (1.0 + np.linalg.norm(rhs)))
        s_sign = max(s_sign, -s_rate)
        s_match = max(s_match, abs(s_rate - production) / (1.0 + abs(production)))
    report = ValidationReport(tol, samples)
    report.add("energy_rate", e_rate)
    report.add("entropy_sign", s_sign)
    report.add("entropy_production", s_match)
    return report

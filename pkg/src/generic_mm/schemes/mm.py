"""Minimizing-movements step for the oscillator.

Each step minimizes the reduced objective ``F(p)`` over the open feasible
interval.  ``F`` blows up at both interval ends (log barrier), so ``F'`` is
negative near the left end and positive near the right end; the solver keeps
such a bracket and mixes Newton steps with bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import InvalidStateError, SolverFailure
from ..extended import ExtendedReal, is_unbounded
from ..oscillator import OscillatorParams, State, energy
from .euler import euler_step
from .functional import incremental_g
from .reduced import ReducedObjective, assemble_state, convexity_condition


@dataclass(frozen=True)
class MmOptions:
    newton_tol: float = 1e-12
    max_iter: int = 50
    grid: int = 64
    eps_rel: float = 1e-12
    g_tol: float = 1e-10

    def __post_init__(self):
        if not (self.newton_tol > 0 and self.max_iter > 0 and self.grid > 0 and self.eps_rel > 0):
            raise ValueError("MmOptions fields must be positive")


DEFAULT_OPTIONS = MmOptions()


@dataclass(frozen=True)
class StepDiagnostics:
    g_value: ExtendedReal
    iterations: int
    convex: bool
    interval: tuple[float, float]
    fallback_used: bool
    energy_residual: float


def _shrunk_bracket(obj: ReducedObjective, eps_rel: float) -> tuple[float, float]:
    iv = obj.interval
    margin = eps_rel * iv.radius
    return iv.lo + margin, iv.hi - margin


def safeguarded_newton(obj: ReducedObjective, lo: float, hi: float, start: float,
                       opts: MmOptions = DEFAULT_OPTIONS) -> tuple[float, int]:
    """Find a zero of ``F'`` in ``(lo, hi)`` given ``F'(lo) < 0 < F'(hi)``.

    The endpoint signs are assumed, never evaluated.  Returns ``(p, iters)``.
    """
    p = min(max(start, lo), hi)
    if p == lo or p == hi:
        p = 0.5 * (lo + hi)
    for it in range(1, opts.max_iter + 1):
        try:
            d1, d2, scale = obj.derivatives(p)
        except InvalidStateError:
            # rounding put f(p) <= 0 right next to an interval end
            if p - lo < hi - p:
                lo = p
            else:
                hi = p
            p = 0.5 * (lo + hi)
            continue
        if abs(d1) <= opts.newton_tol * scale and d2 > 0:
            return p, it
        if d1 < 0:
            lo = p
        elif d1 > 0:
            hi = p
        step_ok = d2 > 0
        if step_ok:
            p_new = p - d1 / d2
            step_ok = lo < p_new < hi
        if not step_ok:
            p_new = 0.5 * (lo + hi)
        if p_new == p or hi - lo <= 4.0 * math.ulp(max(abs(lo), abs(hi))):
            return p, it
        p = p_new
    raise SolverFailure(f"Newton did not converge in {opts.max_iter} iterations "
                        f"(bracket [{lo!r}, {hi!r}])")


def _multistart(obj: ReducedObjective, lo: float, hi: float, extra_starts,
                opts: MmOptions) -> tuple[float, int]:
    """Refine every grid bracket where ``F'`` changes sign from - to +; keep
    the candidate with the smallest ``F``."""
    n = opts.grid
    width = hi - lo
    nodes = [lo] + [lo + (k + 0.5) * width / n for k in range(n)] + [hi]
    signs = [-1.0]
    for x in nodes[1:-1]:
        try:
            signs.append(math.copysign(1.0, obj.derivatives(x)[0]))
        except InvalidStateError:
            signs.append(math.nan)
    signs.append(1.0)
    brackets = [(nodes[j], nodes[j + 1]) for j in range(len(nodes) - 1)
                if signs[j] < 0 and signs[j + 1] > 0]
    for s in extra_starts:
        if lo < s < hi:
            brackets.append((lo, hi, s))
    best, best_val, total = None, math.inf, 0
    for br in brackets:
        a, b = br[0], br[1]
        start = br[2] if len(br) == 3 else 0.5 * (a + b)
        try:
            p, it = safeguarded_newton(obj, a, b, start, opts)
        except SolverFailure:
            continue
        total += it
        val = obj.value(p)
        if val < best_val:
            best, best_val = p, val
    if best is None:
        raise SolverFailure("multistart found no local minimizer")
    return best, total


def minimize_reduced(prev, tau: float, params: OscillatorParams,
                     opts: MmOptions = DEFAULT_OPTIONS, start: float | None = None):
    """Minimize ``F`` over the feasible interval.

    Returns ``(p, iterations, convex, fallback_used)``.  When the convexity
    condition holds a single safeguarded Newton solve from ``start``
    (default: the previous momentum) is used; otherwise a multistart search.
    """
    obj = ReducedObjective(prev, tau, params)
    lo, hi = _shrunk_bracket(obj, opts.eps_rel)
    p0 = float(prev[1]) if start is None else float(start)
    convex = convexity_condition(prev, tau, params)
    if convex:
        p, iters = safeguarded_newton(obj, lo, hi, p0, opts)
        return p, iters, True, False
    euler_p = euler_step(prev, tau, params).p
    p, iters = _multistart(obj, lo, hi, (p0, euler_p), opts)
    return p, iters, False, True


def mm_step(prev, tau: float, params: OscillatorParams,
            opts: MmOptions = DEFAULT_OPTIONS) -> tuple[State, StepDiagnostics]:
    """One minimizing-movements step ``y_prev -> y_i``."""
    q0, p0, theta0 = (float(v) for v in prev)
    if theta0 <= 0:
        raise InvalidStateError(f"temperature must be positive, got {theta0}")
    if not tau > 0:
        raise ValueError("time step must be positive")
    prev = (q0, p0, theta0)
    p, iters, convex, fallback = minimize_reduced(prev, tau, params, opts)
    q, p, theta = assemble_state(prev, tau, params, p)
    state = State.of(q, p, theta)
    g = incremental_g(prev, state, tau, params)
    e_res = (energy(params, state) + 0.5 * params.kappa * (q - q0) ** 2
             + (p - p0) ** 2 / (2.0 * params.m) - energy(params, prev))
    obj_iv = ReducedObjective(prev, tau, params).interval
    diag = StepDiagnostics(g, iters, convex, (obj_iv.lo, obj_iv.hi), fallback, e_res)
    if is_unbounded(g) or g > opts.g_tol:
        raise SolverFailure(f"accepted state has G = {g!r} > {opts.g_tol}", diagnostics=diag)
    return state, diag

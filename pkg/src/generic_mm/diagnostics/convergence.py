"""Time-step sweeps against a reference solution and log-log order fits."""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field

import numpy as np

from ..errors import SolverFailure
from ..oscillator import OscillatorParams
from ..reference import ReferenceSolution, solve_reference
from ..schemes.mm import DEFAULT_OPTIONS, MmOptions
from ..schemes.partition import Partition
from ..schemes.runner import run
from .errors import sup_error

DEFAULT_SCHEMES = ("mm", "euler")
QUANTITIES = ("theta", "energy")


def dyadic_steps(n_min: int, n_max: int) -> np.ndarray:
    """``tau_n = 2^-n`` for ``n = n_min .. n_max``."""
    return np.array([2.0 ** -n for n in range(n_min, n_max + 1)])


def fit_order(tau, err) -> float:
    """Least-squares slope of ``log(err)`` against ``log(tau)``; missing
    (NaN) and nonpositive errors are dropped."""
    tau = np.asarray(tau, dtype=float)
    err = np.asarray(err, dtype=float)
    ok = np.isfinite(err) & (err > 0)
    if ok.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(tau[ok]), np.log(err[ok]), 1)[0])


@dataclass
class ConvergenceTable:
    tau: np.ndarray
    errors: dict = field(default_factory=dict)  # (scheme, quantity) -> array
    failures: dict = field(default_factory=dict)  # (scheme, tau) -> message

    def column(self, scheme: str, quantity: str) -> np.ndarray:
        return self.errors[(scheme, quantity)]

    def slope(self, scheme: str, quantity: str, n_min: int = 2, n_max: int = 8) -> float:
        window = (self.tau <= 2.0 ** -n_min * (1 + 1e-12)) & (self.tau >= 2.0 ** -n_max * (1 - 1e-12))
        return fit_order(self.tau[window], self.column(scheme, quantity)[window])


def _run_cell(args):
    scheme, tau, params, y0, T, opts = args
    try:
        traj, _ = run(scheme, y0, Partition.uniform(T, tau), params, opts)
    except SolverFailure as exc:
        return None, str(exc)
    return traj, None


def convergence_study(params: OscillatorParams, y0, T: float, taus,
                      schemes=DEFAULT_SCHEMES, ref: ReferenceSolution | None = None,
                      abs_tol: float = 1e-8, max_step: float = 1e-4,
                      opts: MmOptions = DEFAULT_OPTIONS, jobs: int = 1) -> ConvergenceTable:
    """Sup errors in ``theta`` and in the energy for every scheme and step.

    Cells run in a process pool when ``jobs > 1``; the table is assembled in
    the order of ``taus`` either way.  Failed cells hold NaN.
    """
    taus = np.asarray(sorted(taus, reverse=True), dtype=float)
    if ref is None:
        ref = solve_reference(params, y0, T, abs_tol=abs_tol, max_step=max_step)
    cells = [(s, float(tau), params, tuple(y0), T, opts) for s in schemes for tau in taus]
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_cell, cells))
    else:
        results = [_run_cell(c) for c in cells]
    table = ConvergenceTable(tau=taus)
    for s in schemes:
        for qty in QUANTITIES:
            table.errors[(s, qty)] = np.full(taus.size, np.nan)
    for (s, tau, *_), (traj, msg) in zip(cells, results):
        i = int(np.nonzero(taus == tau)[0][0])
        if traj is None:
            table.failures[(s, tau)] = msg
            continue
        table.errors[(s, "theta")][i] = sup_error(traj, ref, "theta")
        table.errors[(s, "energy")][i] = sup_error(traj, ref, "energy", params)
    return table

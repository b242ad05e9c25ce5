"""Command-line front end.

Sub-commands::

    generic-mm validate   structural checks of the oscillator model
    generic-mm simulate   one trajectory as CSV (mm | euler | reference)
    generic-mm compare    MM, Euler and reference side by side
    generic-mm converge   sup errors for tau = 2^-n and fitted orders

Exit codes: 0 success, 1 numerical failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import core
from .diagnostics import convergence_study, dyadic_steps
from .errors import GenericMMError, StencilError
from .oscillator import Oscillator, OscillatorParams, State, energy, entropy
from .reference import solve_reference
from .schemes import MmOptions, Partition, run

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2
SEED_ENV = "GENERIC_MM_SEED"


@dataclass
class RunConfig:
    scheme: str = "mm"
    m: float = 1.0
    nu: float = 1.0
    kappa: float = 1.0
    lam: float = 1.0
    c: float = 1.0
    q0: float = 1.0
    p0: float = 1.0
    theta0: float = 1.0
    T: float = 15.0
    tau: float = 0.25
    output: str | None = None
    seed: int = core.DEFAULT_SEED
    abs_tol: float = 1e-8
    max_step: float = 1e-4
    newton_tol: float = 1e-12

    @property
    def params(self) -> OscillatorParams:
        return OscillatorParams(self.m, self.nu, self.kappa, self.lam, self.c)

    @property
    def y0(self) -> State:
        return State.of(self.q0, self.p0, self.theta0)

    @property
    def mm_options(self) -> MmOptions:
        return MmOptions(newton_tol=self.newton_tol)

    def validate(self):
        self.params  # raises on nonpositive parameters
        self.y0
        if self.scheme not in ("mm", "euler", "reference"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        for name in ("T", "tau", "abs_tol", "max_step", "newton_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig)}


def fmt(x) -> str:
    return format(float(x), ".17g")


def read_config_file(path: str) -> dict:
    """Plain ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _FIELD_TYPES:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value
    return values


def _coerce(key: str, value):
    kind = _FIELD_TYPES[key]
    if value is None:
        return None
    if "int" in str(kind):
        return int(value)
    if "float" in str(kind):
        return float(value)
    return str(value)


def build_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the ``--config`` file, then explicit flags, then the
    seed environment variable."""
    cfg = {}
    if getattr(args, "config", None):
        cfg.update(read_config_file(args.config))
    for key in _FIELD_TYPES:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if os.environ.get(SEED_ENV):
        cfg["seed"] = os.environ[SEED_ENV]
    config = RunConfig(**{k: _coerce(k, v) for k, v in cfg.items()})
    config.validate()
    return config


def _write_csv(path: str | None, header, rows, trailer: str | None = None) -> None:
    """Write atomically: on any error the target is left untouched."""
    if path is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        if trailer:
            sys.stdout.write(trailer + "\n")
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
            if trailer:
                fh.write(trailer + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def _trajectory_rows(times, states, params):
    for t, y in zip(times, states):
        yield [fmt(t), fmt(y[0]), fmt(y[1]), fmt(y[2]), fmt(energy(params, y)), fmt(entropy(params, y))]


def cmd_validate(args) -> int:
    seed = int(os.environ.get(SEED_ENV) or args.seed)
    samples = core.sample_states(args.samples, seed=seed)
    model = Oscillator(OscillatorParams())
    reports = [
        core.check_antisymmetry(model, samples, args.tol),
        core.check_onsager_psd(model, samples, args.tol),
        core.check_noninteraction(model, samples, args.tol),
        core.check_jacobi(model, samples, args.jacobi_tol, args.fd_step),
        core.check_rates(model, samples, args.rate_tol),
    ]
    print(f"{'check':<20} {'max residual':>14} {'tol':>10}  result")
    ok = True
    for rep in reports:
        for name, res in rep.checks.items():
            print(f"{name:<20} {res.residual:>14.3e} {rep.tol:>10.1e}  {'PASS' if res.passed else 'FAIL'}")
        ok &= rep.passed
    print(f"{len(samples)} samples, seed {seed}: {'all checks passed' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_FAILURE


def cmd_simulate(cfg: RunConfig) -> int:
    params = cfg.params
    if cfg.scheme == "reference":
        ref = solve_reference(params, cfg.y0, cfg.T, cfg.abs_tol, cfg.max_step)
        times, states = ref.t, ref.y
    else:
        traj, _ = run(cfg.scheme, cfg.y0, Partition.uniform(cfg.T, cfg.tau), params, cfg.mm_options)
        times, states = traj.times, traj.states
    _write_csv(cfg.output, ["t", "q", "p", "theta", "E", "S"], _trajectory_rows(times, states, params))
    return EXIT_OK


COMPARE_HEADER = ["t", "q_mm", "p_mm", "theta_mm", "q_eu", "p_eu", "theta_eu",
                  "q_ref", "p_ref", "theta_ref", "E_mm", "E_eu", "S_mm", "S_eu"]


def cmd_compare(cfg: RunConfig) -> int:
    params = cfg.params
    partition = Partition.uniform(cfg.T, cfg.tau)
    mm, _ = run("mm", cfg.y0, partition, params, cfg.mm_options)
    eu, _ = run("euler", cfg.y0, partition, params, cfg.mm_options)
    ref = solve_reference(params, cfg.y0, cfg.T, cfg.abs_tol, cfg.max_step)
    y_ref = ref(partition.nodes)
    rows = []
    for t, a, b, r in zip(partition.nodes, mm.states, eu.states, y_ref):
        rows.append([fmt(v) for v in (t, *a, *b, *r, energy(params, a), energy(params, b),
                                      entropy(params, a), entropy(params, b))])
    _write_csv(cfg.output, COMPARE_HEADER, rows)
    return EXIT_OK


CONVERGE_HEADER = ["tau", "err_theta_mm", "err_theta_euler", "err_E_mm", "err_E_euler"]
_CONVERGE_COLUMNS = [("mm", "theta"), ("euler", "theta"), ("mm", "energy"), ("euler", "energy")]


def cmd_converge(cfg: RunConfig, n_min: int, n_max: int, fit_min: int, fit_max: int, jobs: int) -> int:
    table = convergence_study(cfg.params, cfg.y0, cfg.T, dyadic_steps(n_min, n_max),
                              abs_tol=cfg.abs_tol, max_step=cfg.max_step,
                              opts=cfg.mm_options, jobs=jobs)
    rows = []
    for i, tau in enumerate(table.tau):
        cells = [table.column(*key)[i] for key in _CONVERGE_COLUMNS]
        rows.append([fmt(tau)] + ["" if np.isnan(v) else fmt(v) for v in cells])
    slopes = ", ".join(f"{name}={fmt(table.slope(*key, n_min=fit_min, n_max=fit_max))}"
                       for name, key in zip(CONVERGE_HEADER[1:], _CONVERGE_COLUMNS))
    trailer = f"# slopes: {slopes} (n = {fit_min}..{fit_max})"
    _write_csv(cfg.output, CONVERGE_HEADER, rows, trailer)
    for (scheme, tau), msg in sorted(table.failures.items()):
        print(f"warning: {scheme} failed at tau={tau:g}: {msg}", file=sys.stderr)
    return EXIT_OK


def _positive_int(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonneg_float(text):
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _add_run_args(p: argparse.ArgumentParser, scheme: bool = False, tau: bool = True):
    g = p.add_argument_group("model and run (defaults: the unit-parameter experiment)")
    g.add_argument("--config", help="key=value file; explicit flags take precedence")
    for name in ("m", "nu", "kappa", "lam", "c", "q0", "p0", "theta0"):
        g.add_argument(f"--{name}", type=float)
    g.add_argument("--T", type=float, help="final time (default 15)")
    if tau:
        g.add_argument("--tau", type=float, help="uniform time step (default 0.25)")
    if scheme:
        g.add_argument("--scheme", choices=("mm", "euler", "reference"))
    g.add_argument("--abs-tol", dest="abs_tol", type=float, help="reference absolute tolerance (1e-8)")
    g.add_argument("--max-step", dest="max_step", type=float, help="reference max step (1e-4)")
    g.add_argument("--newton-tol", dest="newton_tol", type=float)
    g.add_argument("-o", "--output", help="CSV path (default: stdout)")
    g.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="generic-mm", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check antisymmetry, PSD, noninteraction, Jacobi")
    p.add_argument("--samples", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, default=core.DEFAULT_SEED)
    p.add_argument("--tol", type=_nonneg_float, default=1e-12)
    p.add_argument("--jacobi-tol", dest="jacobi_tol", type=_nonneg_float, default=1e-6)
    p.add_argument("--rate-tol", dest="rate_tol", type=_nonneg_float, default=1e-10)
    p.add_argument("--fd-step", dest="fd_step", type=float, default=1e-6)

    p = sub.add_parser("simulate", help="write one trajectory as t,q,p,theta,E,S")
    _add_run_args(p, scheme=True)

    p = sub.add_parser("compare", help="MM, Euler and reference on the MM nodes")
    _add_run_args(p)

    p = sub.add_parser("converge", help="sup errors for tau = 2^-n")
    _add_run_args(p, tau=False)
    p.add_argument("--n-min", dest="n_min", type=int, default=-1)
    p.add_argument("--n-max", dest="n_max", type=int, default=11)
    p.add_argument("--fit-min", dest="fit_min", type=int, default=2)
    p.add_argument("--fit-max", dest="fit_max", type=int, default=8)
    p.add_argument("--jobs", type=_positive_int, default=1)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "validate":
        try:
            return cmd_validate(args)
        except StencilError as exc:
            parser.error(str(exc))
    try:
        cfg = build_config(args)
    except (OSError, ValueError) as exc:
        parser.error(str(exc))
    if args.command == "converge" and args.n_min > args.n_max:
        parser.error("--n-min must not exceed --n-max")
    try:
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "compare":
            return cmd_compare(cfg)
        return cmd_converge(cfg, args.n_min, args.n_max, args.fit_min, args.fit_max, args.jobs)
    except GenericMMError as exc:
        where = f" (step {exc.step_index})" if getattr(exc, "step_index", None) else ""
        print(f"error{where}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())

import numpy as np
import numpy.testing as npt
import pytest
from scipy.integrate import solve_ivp

from generic_mm.errors import IntegrationError, InvalidStateError
from generic_mm.oscillator import UNIT_PARAMS as P
from generic_mm.oscillator import energy, entropy
from generic_mm.reference import dopri5, oscillator_field, solve_reference


def _scipy_field(t, y):
    return oscillator_field(P)(list(y))


def test_equilibrium_is_constant():
    ref = solve_reference(P, (-1, 0, 1), 2.0)
    assert np.abs(ref.y - [-1, 0, 1]).max() <= 1e-10
    assert np.abs(ref(np.linspace(0, 2, 101)) - [-1, 0, 1]).max() <= 1e-10


def test_unit_reference_grid(unit_reference):
    ref = unit_reference
    assert ref.t[0] == 0.0 and ref.T == 15.0
    assert np.diff(ref.t).max() <= 1e-4 * (1 + 1e-9)
    assert np.all(ref.y[:, 2] > 0)
    assert ref.stats.steps == ref.t.size - 1
    assert ref.abs_tol == 1e-8 and ref.max_step == 1e-4


def test_energy_conservation(unit_reference):
    e = np.array([energy(P, y) for y in unit_reference.y])
    assert np.abs(e - 2.0).max() <= 1e-7
    assert np.abs(e - 2.0).max() <= 100 * unit_reference.abs_tol * 15


def test_entropy_nondecreasing(unit_reference):
    s = np.array([entropy(P, y) for y in unit_reference.y])
    assert np.diff(s).min() >= -1e-9


def test_self_convergence(unit_reference, half_tol_reference):
    assert np.abs(unit_reference.y[-1] - half_tol_reference.y[-1]).max() <= 1e-7


def test_against_scipy_dop853(unit_reference):
    t = np.linspace(0, 15, 3001)
    sol = solve_ivp(_scipy_field, (0, 15), [1, 1, 1], method="DOP853", rtol=1e-13, atol=1e-13, t_eval=t)
    assert np.abs(unit_reference(t) - sol.y.T).max() <= 1e-7


def test_dense_output_is_exact_at_nodes(unit_reference):
    npt.assert_array_equal(unit_reference(unit_reference.t[::997]), unit_reference.y[::997])
    with pytest.raises(ValueError):
        unit_reference(15.5)


def test_fixed_step_order_at_least_four():
    f = oscillator_field(P)
    exact = solve_ivp(_scipy_field, (0, 2), [1, 1, 1], method="DOP853", rtol=3e-14, atol=1e-14).y[:, -1]
    errs = []
    for h in (0.1, 0.05, 0.025):
        # huge tolerance: every step accepted, so the step is exactly h
        sol = dopri5(f, (1, 1, 1), 2.0, abs_tol=1e10, max_step=h, h0=h)
        errs.append(np.abs(sol.y[-1] - exact).max())
    rates = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert rates.min() >= 4.0


def test_dense_output_order():
    f = oscillator_field(P)
    t = np.linspace(0, 2, 401)
    exact = solve_ivp(_scipy_field, (0, 2), [1, 1, 1], method="DOP853", rtol=3e-14, atol=1e-14, t_eval=t).y.T
    e1 = np.abs(dopri5(f, (1, 1, 1), 2.0, abs_tol=1e10, max_step=0.1, h0=0.1)(t) - exact).max()
    e2 = np.abs(dopri5(f, (1, 1, 1), 2.0, abs_tol=1e10, max_step=0.05, h0=0.05)(t) - exact).max()
    assert np.log2(e1 / e2) >= 3.5


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        solve_reference(P, (1, 1, 1), 0.0)
    with pytest.raises(InvalidStateError):
        solve_reference(P, (1, 1, 0), 1.0)


def test_guard_aborts_integration():
    def guard(t, y):
        if t > 0.5:
            raise IntegrationError("stop")

    with pytest.raises(IntegrationError):
        dopri5(oscillator_field(P), (1, 1, 1), 1.0, max_step=0.1, guard=guard)

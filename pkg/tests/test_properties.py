"""Property-based checks over the parameter domain."""
import math

import numpy as np
from hypothesis import given, settings, strategies as st

from nlho import OscillatorParams, X_to_x, energy_level, epsilon_level, f_deformation, n_max, x_to_X
from nlho.classical import PhaseState, Chart, hamiltonian, to_chart
from nlho.spectrum import decay_exponent
from nlho.eigenfunctions import hermite_limit, jacobi_real, rodrigues_eval

lams = st.floats(1e-6, 10.0)
vs = st.floats(0.0, 1e6)


@given(vs)
def test_levels_between_zero_and_v(v):
    top = n_max(v)
    eps = [epsilon_level(n, v) for n in range(top + 1)]
    assert all(-1e-9 * max(v, 1) <= e <= v * (1 + 1e-12) for e in eps)
    assert all(a < b for a, b in zip(eps, eps[1:]))
    # the top level still decays, the next index would not
    assert decay_exponent(top, v) >= 0 > decay_exponent(top + 1, v)


@given(lams)
def test_energy_below_threshold(lam):
    p = OscillatorParams(lam=lam)
    top = n_max((1 / lam) ** 2)
    assert energy_level(top, p) <= p.threshold * (1 + 1e-12)
    assert energy_level(0, p) < 0.5 + 1e-12


@given(lams, st.integers(0, 20))
def test_f_squared_linear(lam, n):
    p = OscillatorParams(lam=lam)
    cutoff = math.floor(math.sqrt(1 + 4 / lam**2))
    if n + 1 <= cutoff:
        step = f_deformation(n, p) ** 2 - f_deformation(n + 1, p) ** 2
        assert math.isclose(step, lam / 2, rel_tol=1e-9, abs_tol=1e-12)


@given(lams, st.floats(-50, 50))
def test_chart_roundtrip(lam, x):
    p = OscillatorParams(lam=lam)
    assert math.isclose(float(X_to_x(x_to_X(x, p), p)), x, rel_tol=1e-12, abs_tol=1e-12)


@given(lams, st.floats(-5, 5), st.floats(-5, 5))
def test_hamiltonian_chart_invariant(lam, x, p):
    par = OscillatorParams(lam=lam)
    s = PhaseState(x, p)
    E1 = hamiltonian(s, par)
    E2 = hamiltonian(to_chart(s, par, Chart.XP_CHART), par)
    assert math.isclose(E1, E2, rel_tol=1e-11, abs_tol=1e-14)


@settings(max_examples=50)
@given(st.integers(0, 10), st.floats(0.0, 1e4), st.floats(0.01, 2.0))
def test_jacobi_paths_agree(n, v, lam):
    a = -math.sqrt(0.25 + v)  # 1 - 2 sigma
    n = min(n, n_max(v))  # bound levels keep the recurrence regular
    x = np.linspace(-2, 2, 9) / math.sqrt(lam)
    r1 = jacobi_real(n, a, math.sqrt(lam) * x)
    r2 = rodrigues_eval(n, a, x, lam)
    scale = max(np.abs(r1).max(), 1e-300)
    assert np.max(np.abs(r1 - r2)) / scale < 1e-9


@given(st.integers(0, 4), st.floats(-3, 3))
def test_hermite_limit_close(n, y):
    H = np.polynomial.hermite.hermval(y, [0] * n + [1])
    assert abs(hermite_limit(n, 1e8, y) - H) <= 1e-4 * max(1.0, abs(H)) + 1e-3

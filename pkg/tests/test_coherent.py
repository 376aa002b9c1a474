import math

import numpy as np
import pytest
from scipy.sparse.linalg import expm_multiply

from nlho import DomainError, OscillatorParams, PropagationError, energy_level
from nlho.quantumgrid.coherent import (a_residual, b_annihilation_residual, b_commutator_symbol, b_eigen_residual,
                                       coherent_type1, coherent_type3, expectation, f_gamma,
                                       factorization_check, factorization_ground_state, factorization_ops,
                                       husimi_average, shape_invariant_ground_state, zprime_residual)
from nlho.quantumgrid.grid import Grid
from nlho.quantumgrid.oracle import hamiltonian_X


@pytest.fixture
def g3(params):
    return Grid(10.0 / math.sqrt(params.lam), 2048)


def test_type1_is_A_eigenstate(params):
    g = Grid(12.0, 1024)
    gam = 0.7 + 0.2j
    s = coherent_type1(gam, params, g)
    assert a_residual(s, gam, params) < 1e-6
    assert s.norm == pytest.approx(1.0, abs=1e-12)
    assert s.meta["mean_X"] == pytest.approx(math.sqrt(2) * 0.7)


def test_type1_box_check(params):
    with pytest.raises(DomainError):
        coherent_type1(10.0, params, Grid(12.0, 256))


def test_type1_zprime_measured(params):
    # Z' acts as f(gamma), not gamma; both figures are only reported
    g = Grid(12.0, 256)
    gam = 0.7 + 0.2j
    assert zprime_residual(coherent_type1(gam, params, g), gam, params, order="sinc") < 1e-10
    assert abs(f_gamma(gam, params) - gam) > 0.05


def test_f_gamma_limits():
    assert f_gamma(0.3 + 0.1j, OscillatorParams(lam=0.0)) == 0.3 + 0.1j
    assert abs(f_gamma(0.3 + 0.1j, OscillatorParams(lam=1e-9)) - (0.3 + 0.1j)) < 1e-8


def test_husimi_mean_value(params):
    z = 0.7 + 0.2j
    assert husimi_average(z, params) == pytest.approx(f_gamma(z, params), abs=1e-13)
    assert husimi_average(z, params, f=lambda g: g * g) == pytest.approx(z * z, abs=1e-13)
    # |gamma|^2 averages to |z|^2 + 1
    assert husimi_average(z, params, f=lambda g: np.abs(g) ** 2).real == pytest.approx(abs(z) ** 2 + 1, abs=1e-12)
    with pytest.raises(DomainError):
        husimi_average(z, params, quad_order=10)


def test_factorization(params, g3):
    assert b_annihilation_residual(params, g3) < 1e-6
    assert b_commutator_symbol(params, g3) < 1e-6
    assert factorization_check(params, Grid(20.0, 1024)).residual < 1e-4


def test_ground_state_energies(params, g3):
    H = hamiltonian_X(params, g3, 4)
    E0 = energy_level(0, params)
    si = expectation(H, shape_invariant_ground_state(params, g3)).real
    fa = expectation(H, factorization_ground_state(params, g3)).real
    assert si / E0 - 1 == pytest.approx(0.0, abs=1e-7)
    # the B-annihilated state sits about 1e-3 above E_0
    assert 5e-4 < fa / E0 - 1 < 5e-3


def test_type3_zero_is_ground(params, g3):
    s = coherent_type3(0.0, params, g3)
    assert np.array_equal(s.values, factorization_ground_state(params, g3).values)


def test_type3_norm_and_crosscheck(params, g3):
    zeta = 0.5 + 0.3j
    s = coherent_type3(zeta, params, g3, tol=1e-10)
    assert s.meta["norm_drift"] < 1e-8
    B, Bd = factorization_ops(params, g3)
    G = (zeta * Bd.entries - np.conj(zeta) * B.entries).tocsc()
    ref = expm_multiply(G, factorization_ground_state(params, g3).values)
    assert g3.norm(s.values - ref) < 1e-9
    # not a B eigenstate: measured only
    assert b_eigen_residual(s, zeta, params) > 1e-3


def test_type3_options(params, g3):
    s = coherent_type3(0.2, params, g3, ground="shape_invariant")
    assert s.meta["ground"] == "shape_invariant"
    with pytest.raises(DomainError):
        coherent_type3(0.2, params, g3, ground="other")
    with pytest.raises(PropagationError):
        coherent_type3(0.5, params, g3, max_steps=1)


def test_factorization_needs_deformation():
    with pytest.raises(DomainError):
        factorization_ops(OscillatorParams(lam=0.0), Grid(5.0, 64))

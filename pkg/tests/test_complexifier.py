import math

import numpy as np
import pytest

from nlho import DomainError, OscillatorParams, RangeError
from nlho.quantumgrid.coherent import coherent_type1
from nlho.quantumgrid.complexifier import (commutator_check_Z, commutator_limit_check, heisenberg_check,
                                           momentum_op, position_op, prefactor_gap, quantum_A, quantum_Z,
                                           quantum_Z_series, series_check_Z, symmetric_product_check)
from nlho.quantumgrid.grid import (Grid, GridOperator, GridState, d1_matrix, d2_matrix, interior_slice,
                                   restricted_norm, smooth_basis)

P05 = OscillatorParams(lam=0.05)


def test_grid_basics():
    g = Grid(5.0, 101)
    assert g.h == pytest.approx(0.1)
    assert np.array_equal(g.points, -g.points[::-1])
    assert g.refined().N == 201 and np.array_equal(g.refined().points[::2], g.points)
    with pytest.raises(DomainError):
        Grid(1.0, 8)
    with pytest.raises(DomainError):
        Grid(-1.0, 100)


def _deriv_errors(order, N):
    g = Grid(10.0, N)
    f = np.exp(-g.points**2)
    blk = interior_slice(g)
    e1 = np.max(np.abs((d1_matrix(g, order) @ f + 2 * g.points * f)[blk]))
    e2 = np.max(np.abs((d2_matrix(g, order) @ f - (4 * g.points**2 - 2) * f)[blk]))
    return e1, e2


@pytest.mark.parametrize("order,rate", [(2, 2), (4, 4)])
def test_fd_derivative_orders(order, rate):
    c1, c2 = _deriv_errors(order, 401)
    f1, f2 = _deriv_errors(order, 801)
    assert math.log2(c1 / f1) == pytest.approx(rate, abs=0.1)
    assert math.log2(c2 / f2) == pytest.approx(rate, abs=0.1)


def test_sinc_derivatives_spectral():
    e1, e2 = _deriv_errors("sinc", 401)
    assert e1 < 1e-10 and e2 < 1e-9


def test_bad_order():
    with pytest.raises(DomainError):
        d1_matrix(Grid(1.0, 32), 3)


def test_operator_flags():
    g = Grid(5.0, 64)
    assert position_op(g).hermitian_flag
    assert momentum_op(g, 4).hermitian_flag
    assert not quantum_A(P05, g).hermitian_flag
    assert quantum_A(P05, g).adjoint().adjoint().dense() == pytest.approx(quantum_A(P05, g).dense())


def test_state_validation():
    g = Grid(5.0, 64)
    with pytest.raises(DomainError):
        GridState(g, np.ones(10))
    with pytest.raises(DomainError):
        GridState(g, np.full(64, np.nan))
    s = GridState(g, np.ones(64)).normalized()
    assert s.norm == pytest.approx(1.0)
    assert isinstance(GridOperator(g, np.eye(64)) @ s, GridState)


def test_smooth_basis_orthonormal():
    Q = smooth_basis(Grid(10.0, 256), 1.0, 8)
    assert np.allclose(Q.T @ Q, np.eye(8), atol=1e-13)
    assert restricted_norm(np.eye(256), Q) == pytest.approx(math.sqrt(8))


def test_A_annihilates_ground(params):
    g = Grid(12.0, 1024)
    psi = coherent_type1(0.0, params, g)
    r = quantum_A(params, g).apply(psi.values)
    assert g.norm(r) < 1e-6


def test_canonical_commutator_on_smooth_states(params):
    g = Grid(12.0, 512)
    A = quantum_A(params, g, "sinc").dense()
    C = A @ A.conj().T - A.conj().T @ A
    Q = smooth_basis(g, 1.0, 8)
    assert np.allclose(Q.T @ C @ Q, np.eye(8), atol=1e-10)


def test_series_matches_closed_form():
    chk = series_check_Z(P05, Grid(10.0, 128), 20)
    assert chk.residual < 1e-8
    assert series_check_Z(P05, Grid(10.0, 128), 6).residual > chk.residual


def test_commutator_closed_form():
    assert commutator_check_Z(P05, Grid(12.0, 256)).residual < 1e-4


def test_commutator_limit():
    chk = commutator_limit_check(OscillatorParams(lam=1e-6), Grid(12.0, 256))
    assert chk.residual < 1e-4
    # leading deviation is linear in lam b^2
    chk2 = commutator_limit_check(OscillatorParams(lam=1e-5), Grid(12.0, 256))
    assert chk2.residual / chk.residual == pytest.approx(10.0, rel=0.01)


def test_symmetric_product():
    assert symmetric_product_check(P05, Grid(12.0, 256)).residual < 1e-8


def test_prefactors():
    g = Grid(8.0, 64)
    zb = quantum_Z(P05, g, prefactor="bch").dense()
    zs = quantum_Z(P05, g, prefactor="summed").dense()
    assert np.allclose(zb, zs * (1 + prefactor_gap(P05)), rtol=1e-14)
    assert prefactor_gap(P05) == pytest.approx(math.expm1(0.05))
    with pytest.raises(DomainError):
        quantum_Z(P05, g, prefactor="other")


def test_z_domain_errors():
    with pytest.raises(DomainError):
        quantum_Z(OscillatorParams(lam=0.0), Grid(8.0, 64))
    with pytest.raises(DomainError):
        quantum_Z_series(P05, Grid(8.0, 64), 0)
    with pytest.raises(RangeError):
        quantum_Z(OscillatorParams(lam=10.0), Grid(400.0, 64))


def test_heisenberg_second_order(params):
    g = Grid(10.0, 256)
    psi = np.exp(-((g.points - 0.5) ** 2) / 2)
    res, rate = heisenberg_check(params, g, psi)
    assert np.all(np.diff(res) < 0)
    assert rate == pytest.approx(2.0, abs=0.05)

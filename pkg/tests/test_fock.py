import math
import warnings

import numpy as np
import pytest

from nlho import DomainError, OscillatorParams, energy_level
from nlho.fock import (TruncationWarning, coherent_type2, commutator_bb, commutator_bb_closed, deformed_ops,
                       eigen_residual, hamiltonian_fock, ladder_ops, poisson_coherent)


def test_ladder_commutator():
    a, ad, num = ladder_ops(12)
    assert np.allclose((ad @ a).entries, num.entries, rtol=0, atol=1e-14)
    C = (a @ ad).entries - (ad @ a).entries
    assert np.allclose(np.diag(C)[:-1], 1.0)


def test_hamiltonian_diagonal(params):
    H = hamiltonian_fock(params, 11)
    assert H.dim == 10
    E = np.array([energy_level(n, params) for n in range(10)])
    assert np.max(np.abs(H.diagonal() / E - 1)) < 1e-12


def test_commutator_dual_path(params):
    C = commutator_bb(params, 21)
    closed = commutator_bb_closed(np.arange(C.dim), params)
    assert np.max(np.abs(C.diagonal() - closed)) / np.abs(closed).max() < 1e-12
    # weighted closed form at n = 0 equals E_0 (frozen, mpmath)
    assert commutator_bb_closed(0, params) == pytest.approx(0.4756246098625196, rel=1e-14)


def test_truncation_warning(params):
    with pytest.warns(TruncationWarning):
        b, bd = deformed_ops(params, 40)
    assert b.dim == 21 and b.truncated


def test_coherent_zero_is_vacuum(params):
    st = coherent_type2(0.0, params, 10)
    assert st.coeffs[0] == 1 and np.all(st.coeffs[1:] == 0)


def test_coherent_poisson_limit():
    st = coherent_type2(1.0, OscillatorParams(lam=0.0), 40)
    assert np.max(np.abs(st.coeffs - poisson_coherent(1.0, 40))) < 1e-12
    c = poisson_coherent(0.5 + 0.5j, 30)
    assert np.linalg.norm(c) == pytest.approx(1.0, abs=1e-15)


def test_coherent_residual_bounded_by_tail(params):
    st = coherent_type2(0.8, params, 21)
    assert st.tail_mass < 1e-11
    assert eigen_residual(st, params) <= 2.0 * st.residual_bound


def test_coherent_rejects_tiny_dimension(params):
    with pytest.raises(DomainError):
        coherent_type2(0.5, params, 3)


def test_fock_transpose(params):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        b, bd = deformed_ops(params, 10)
    assert np.array_equal(b.T.entries, bd.entries)
    assert b.T.band == "sub"

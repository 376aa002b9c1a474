import math

import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

from nlho import DomainError, OscillatorParams, SolverError, energy_level
from nlho.eigenfunctions import eigenfunction, evaluate
from nlho.quantumgrid.grid import Grid
from nlho.quantumgrid.oracle import (count_bound_fd, default_grid, fd_spectrum, hamiltonian_X, ordering_spectrum,
                                     similarity_residual)
from nlho.quantumgrid.tridiag import count_below, eigs_tridiagonal, symmetrize_tridiagonal


def _random_tridiag(n, seed):
    rng = np.random.default_rng(seed)
    return rng.normal(size=n), rng.normal(size=n - 1)


def test_eigs_match_lapack():
    d, e = _random_tridiag(300, 1)
    w, V = eigs_tridiagonal(d, e, 12)
    wr, Vr = eigh_tridiagonal(d, e, select="i", select_range=(0, 11))
    assert np.max(np.abs(w - wr)) < 1e-12
    assert np.max(np.abs(np.abs(np.sum(V * Vr, axis=0)) - 1)) < 1e-10


def test_eigs_residual_and_orthogonality():
    d, e = _random_tridiag(200, 2)
    w, V = eigs_tridiagonal(d, e, 20)
    T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert np.max(np.abs(T @ V - V * w)) < 1e-11
    assert np.max(np.abs(V.T @ V - np.eye(20))) < 1e-12


def test_eigs_degenerate_blocks():
    # two decoupled identical blocks give exactly doubled eigenvalues
    d0, e0 = _random_tridiag(40, 3)
    d = np.concatenate([d0, d0])
    e = np.concatenate([e0, [0.0], e0])
    w, V = eigs_tridiagonal(d, e, 6)
    assert np.allclose(w[::2], w[1::2], atol=1e-12)
    assert np.max(np.abs(V.T @ V - np.eye(6))) < 1e-10


def test_values_only_and_count():
    d, e = _random_tridiag(100, 4)
    w = eigs_tridiagonal(d, e, 5, vectors=False)[0]
    assert count_below(d, e, w[2] + 1e-9) == 3
    assert count_below(d, e, w[0] - 1e-9) == 0


def test_bad_input():
    with pytest.raises(DomainError):
        eigs_tridiagonal(np.ones(4), np.ones(4), 2)
    with pytest.raises(DomainError):
        eigs_tridiagonal(np.array([1.0, np.nan]), np.ones(1), 1)
    with pytest.raises(DomainError):
        symmetrize_tridiagonal(np.ones(3), np.array([1.0, -1.0]), np.array([1.0, 1.0]))


def test_solver_error_type():
    assert issubclass(SolverError, Exception)


def test_symmetrize_is_similar():
    rng = np.random.default_rng(5)
    diag = rng.normal(size=30)
    up = rng.uniform(0.5, 2, size=29)
    lo = rng.uniform(0.5, 2, size=29)
    d, e = symmetrize_tridiagonal(diag, up, lo)
    M = np.diag(diag) + np.diag(up, 1) + np.diag(lo, -1)
    assert np.allclose(np.sort(np.linalg.eigvals(M).real), eigs_tridiagonal(d, e, 30, vectors=False)[0], atol=1e-10)


def test_default_grid_sizes(params):
    assert default_grid(params).L == pytest.approx(80.215093620447, rel=1e-12)
    assert default_grid(OscillatorParams(lam=0.0)).L == pytest.approx(math.sqrt(19) + 8)
    assert default_grid(OscillatorParams(lam=1e6)).L == pytest.approx(9.0)


def test_spectrum_oracle(params):
    orc = fd_spectrum(params, Grid(80.0, 4000), 10)
    ex = np.array([energy_level(n, params) for n in range(10)])
    rel = np.abs(orc.values - ex) / ex
    assert rel[:9].max() < 1e-6 and rel[9] < 1e-5
    # extrapolation gains at least two orders over the raw grid
    assert np.abs(orc.raw_values - ex).max() / np.abs(orc.values - ex).max() > 100


def test_oracle_vectors(params):
    orc = fd_spectrum(params, Grid(80.0, 4000), 6)
    g = orc.grid
    for n in range(6):
        assert g.norm(orc.vectors[:, n]) == pytest.approx(1.0, abs=1e-12)
        assert g.norm(evaluate(eigenfunction(n, params), g.points) - orc.vectors[:, n]) < 1e-4


def test_fd_count_bound(params):
    assert count_bound_fd(params, Grid(80.0, 4000)) == 10
    with pytest.raises(DomainError):
        count_bound_fd(OscillatorParams(lam=0.0), Grid(10.0, 100))


def test_hamiltonian_symmetric(params):
    H = hamiltonian_X(params, Grid(10.0, 64))
    assert H.hermitian_flag


def test_orderings_share_spectrum(params):
    ex = np.array([energy_level(n, params) for n in range(5)])
    for which in (1, 2):
        vals, _ = ordering_spectrum(params, Grid(100.0, 8000), which, 5)
        assert np.max(np.abs(vals - ex) / ex) < 1e-7
    # the orderings are similar in the continuum; on the grid the gap is O(h^2)
    r1 = similarity_residual(params, Grid(100.0, 1001))
    r2 = similarity_residual(params, Grid(100.0, 2001))
    assert r1 / r2 == pytest.approx(4.0, rel=0.05)
    with pytest.raises(DomainError):
        ordering_spectrum(params, Grid(10.0, 100), 3, 1)


def test_sho_oracle():
    p = OscillatorParams(lam=0.0)
    orc = fd_spectrum(p, default_grid(p, 2000), 5)
    assert np.allclose(orc.values, np.arange(5) + 0.5, rtol=0, atol=1e-8)

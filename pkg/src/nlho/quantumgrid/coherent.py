"""Coherent states of the first and third kinds on the canonical-chart grid.

Type 1 states are Gaussians labelled by the eigenvalue ``gamma`` of ``A``.
For them ``Z' = Z / sqrt(hbar)`` acts as ``f(gamma)`` with
``f(gamma) = sqrt(1 / (2 lam b^2)) e^{lam b^2} sinh(b sqrt(2 lam) gamma)``;
neither that eigenvalue nor the Husimi average of ``f`` equals ``gamma``
itself, so both gaps are measured and reported.

Type 3 states displace a ground state with
``exp(zeta B^H - zeta^* B)`` where ``B`` factorises the Hamiltonian.  Two
ground states are exposed: the state annihilated by ``B``
(``cosh(sqrt(lam) X)**(-1/(lam b^2))``) and the exact ground state of the
tanh^2 Hamiltonian (``cosh(sqrt(lam) X)**(-(S - 1/2))``, ``S = sqrt(1/4 + v)``).
They coincide only as ``lam -> 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from numpy.polynomial.hermite import hermgauss

from ..core import OscillatorParams, derive
from ..errors import DomainError, PropagationError
from .complexifier import _check, quantum_A, quantum_Z
from .grid import Grid, GridOperator, GridState, d1_matrix, interior_slice
from .oracle import hamiltonian_X

__all__ = [
    "coherent_type1",
    "f_gamma",
    "a_residual",
    "zprime_residual",
    "husimi_average",
    "factorization_ops",
    "factorization_check",
    "factorization_ground_state",
    "shape_invariant_ground_state",
    "b_annihilation_residual",
    "b_commutator_symbol",
    "expectation",
    "coherent_type3",
    "b_eigen_residual",
]


def coherent_type1(gamma: complex, params: OscillatorParams, grid: Grid) -> GridState:
    """Sampled ``psi_gamma(X)`` with ``<X> = sqrt(2) b Re(gamma)`` and ``<P> = sqrt(2) b m w Im(gamma)``.

    Raises
    ------
    DomainError
        If ``|<X>| + 4 b`` does not fit inside the box.
    """
    gamma = complex(gamma)
    b = math.sqrt(derive(params).b2)
    X0 = math.sqrt(2.0) * b * gamma.real
    P0 = math.sqrt(2.0) * b * params.m * params.omega * gamma.imag
    if abs(X0) + 4.0 * b >= grid.L:
        raise DomainError(f"displaced Gaussian at <X>={X0:g} does not fit a box of half-width {grid.L:g}")
    X = grid.points
    hb = params.hbar
    amp = (params.m * params.omega / (math.pi * hb)) ** 0.25
    psi = amp * np.exp(-((X - X0) ** 2) / (2.0 * b * b) + 1j * (P0 * X - 0.5 * X0 * P0) / hb)
    return GridState(grid, psi, {"gamma": gamma, "mean_X": X0, "mean_P": P0})


def f_gamma(gamma, params: OscillatorParams):
    """Eigenvalue of ``Z'`` on a type-1 state; ``gamma`` itself when ``lam = 0``."""
    gamma = np.asarray(gamma, dtype=complex)
    if params.undeformed:
        out = gamma
    else:
        lb = params.lam * derive(params).b2
        out = math.sqrt(1.0 / (2.0 * lb)) * math.exp(lb) * np.sinh(math.sqrt(2.0 * lb) * gamma)
    return out if out.ndim else complex(out)


def a_residual(state: GridState, gamma: complex, params: OscillatorParams, order=4) -> float:
    """``||(A - gamma) psi|| / ||psi||`` on the grid."""
    A = quantum_A(params, state.grid, order)
    r = A.apply(state.values) - complex(gamma) * state.values
    return state.grid.norm(r) / state.grid.norm(state.values)


def zprime_residual(state: GridState, gamma: complex, params: OscillatorParams, order=2,
                    prefactor: str = "bch") -> float:
    """``||(Z' - f(gamma)) psi|| / ||psi||`` with ``Z' = Z / sqrt(hbar)`` (reported, not asserted)."""
    Z = quantum_Z(params, state.grid, order, prefactor).entries / math.sqrt(params.hbar)
    fg = f_gamma(gamma, params)
    if prefactor == "summed":
        fg = fg * math.exp(-params.lam * derive(params).b2)
    r = Z @ state.values - fg * state.values
    return state.grid.norm(r) / state.grid.norm(state.values)


def husimi_average(z: complex, params: OscillatorParams, quad_order: int = 40, f=None) -> complex:
    """``pi^-1 int d^2 gamma f(gamma) exp(-|z - gamma|^2)`` by tensor Gauss-Hermite quadrature.

    ``f`` defaults to :func:`f_gamma`.  For an entire ``f`` the average is
    ``f(z)`` exactly (Gaussian mean-value property), so the gap to ``z`` is
    ``|f(z) - z|``.
    """
    if quad_order < 20:
        raise DomainError("quad_order must be >= 20")
    if f is None:
        def f(g):
            return f_gamma(g, params)
    t, w = hermgauss(quad_order)
    G = complex(z) + t[:, None] + 1j * t[None, :]
    vals = np.asarray(f(G), dtype=complex)
    return complex(np.sum(w[:, None] * w[None, :] * vals) / math.pi)


def factorization_ops(params: OscillatorParams, grid: Grid, order=4):
    """``B = (hbar / sqrt(2m)) D1 + sqrt(m w^2 / 2 lam) tanh(sqrt(lam) X)`` and ``B^H``."""
    if params.undeformed:
        raise DomainError("factorisation operators need lam > 0")
    c = params.hbar / math.sqrt(2.0 * params.m)
    W = math.sqrt(params.m * params.omega**2 / (2.0 * params.lam)) * np.tanh(math.sqrt(params.lam) * grid.points)
    D1 = d1_matrix(grid, order)
    if sp.issparse(D1):
        B = c * D1 + sp.diags(W)
    else:
        B = c * D1 + np.diag(W)
    B = GridOperator(grid, B, "B")
    return B, B.adjoint()


def factorization_check(params: OscillatorParams, grid: Grid, order=4):
    """``(B^H B + B B^H)/2`` against the grid Hamiltonian of the same order (smooth subspace)."""
    B, Bd = factorization_ops(params, grid, order)
    S = 0.5 * (Bd.entries @ B.entries + B.entries @ Bd.entries)
    H = hamiltonian_X(params, grid, order).entries
    d = derive(params)
    width = math.sqrt(d.b2)
    return _check(S - H, H, grid, width)


def _cosh_power(grid, params, k):
    z = np.abs(math.sqrt(params.lam) * grid.points)
    logc = z + np.log1p(np.exp(-2.0 * z)) - math.log(2.0)
    psi = np.exp(-k * logc)
    return psi / math.sqrt(np.sum(psi * psi) * grid.h)


def factorization_ground_state(params: OscillatorParams, grid: Grid) -> GridState:
    """Normalised ``cosh(sqrt(lam) X)**(-1/(lam b^2))``, the state with ``B psi = 0``."""
    k = 1.0 / (params.lam * derive(params).b2)
    return GridState(grid, _cosh_power(grid, params, k).astype(complex), {"exponent": k})


def shape_invariant_ground_state(params: OscillatorParams, grid: Grid) -> GridState:
    """Normalised ``cosh(sqrt(lam) X)**(-(S - 1/2))``, the exact tanh^2 ground state."""
    k = math.sqrt(0.25 + derive(params).v) - 0.5
    return GridState(grid, _cosh_power(grid, params, k).astype(complex), {"exponent": k})


def b_annihilation_residual(params: OscillatorParams, grid: Grid, order=4) -> float:
    """``||B phi0||`` for the factorisation ground state."""
    B, _ = factorization_ops(params, grid, order)
    phi = factorization_ground_state(params, grid)
    return grid.norm(B.apply(phi.values))


def b_commutator_symbol(params: OscillatorParams, grid: Grid, order=4) -> float:
    """Max interior deviation of ``[B, B^H] 1 / (hbar w)`` from ``sech^2(sqrt(lam) X)``.

    ``[B, B^H] = 2 c [D1, W]`` is a first-order difference operator on the
    grid whose diagonal vanishes identically; its multiplication symbol is
    read off from the action on the constant vector.
    """
    B, Bd = factorization_ops(params, grid, order)
    C = B.entries @ Bd.entries - Bd.entries @ B.entries
    row = np.asarray(C @ np.ones(grid.N)).real / (params.hbar * params.omega)
    target = 1.0 / np.cosh(math.sqrt(params.lam) * grid.points) ** 2
    blk = interior_slice(grid)
    return float(np.max(np.abs(row[blk] - target[blk])))


def expectation(op: GridOperator, state: GridState) -> complex:
    v = state.values
    return complex(np.vdot(v, op.apply(v)) * state.grid.h / (np.vdot(v, v).real * state.grid.h))


def _rk4_step(G, y, h):
    k1 = G @ y
    k2 = G @ (y + 0.5 * h * k1)
    k3 = G @ (y + 0.5 * h * k2)
    k4 = G @ (y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def coherent_type3(zeta: complex, params: OscillatorParams, grid: Grid, tol: float = 1e-10,
                   ground: str = "factorization", order=4, max_steps: int = 100000) -> GridState:
    """``exp(zeta B^H - zeta^* B) phi0`` by adaptive RK4 on ``d psi/ds = G psi``, ``s in [0, 1]``.

    The step is controlled by step doubling: the local error estimate
    ``|y_2h - y_h| / 15`` (grid norm) is kept below ``tol`` times the step
    fraction, so the accumulated error stays near ``tol``.

    Raises
    ------
    PropagationError
        When the step size collapses or ``max_steps`` is exceeded.
    """
    if ground == "factorization":
        phi0 = factorization_ground_state(params, grid)
    elif ground == "shape_invariant":
        phi0 = shape_invariant_ground_state(params, grid)
    else:
        raise DomainError(f"ground must be 'factorization' or 'shape_invariant', got {ground!r}")
    zeta = complex(zeta)
    meta = {"zeta": zeta, "ground": ground, "steps": 0, "error_estimate": 0.0}
    if zeta == 0:
        meta["norm_drift"] = 0.0
        return GridState(grid, phi0.values.copy(), meta)
    B, Bd = factorization_ops(params, grid, order)
    G = (zeta * Bd.entries - zeta.conjugate() * B.entries).tocsr() if sp.issparse(B.entries) else \
        zeta * Bd.entries - zeta.conjugate() * B.entries
    y = phi0.values.astype(complex)
    n0 = grid.norm(y)
    s, h = 0.0, 0.05
    steps, err_total = 0, 0.0
    while s < 1.0:
        if steps >= max_steps or h < 1e-12:
            raise PropagationError(f"type-3 propagation stalled at s={s:.6g}", err_total)
        h = min(h, 1.0 - s)
        full = _rk4_step(G, y, h)
        half = _rk4_step(G, _rk4_step(G, y, 0.5 * h), 0.5 * h)
        err = grid.norm(half - full) / 15.0
        if err <= tol * h or err == 0.0:
            y = half + (half - full) / 15.0
            s += h
            steps += 1
            err_total += err
        fac = 0.9 * (tol * h / err) ** 0.2 if err > 0 else 2.0
        h *= min(2.0, max(0.2, fac))
    meta.update(steps=steps, error_estimate=err_total, norm_drift=abs(grid.norm(y) - n0) / n0)
    return GridState(grid, y, meta)


def b_eigen_residual(state: GridState, zeta: complex, params: OscillatorParams, order=4) -> float:
    """``||(B - zeta) psi|| / ||psi||`` (reported only; displaced states need not be B-eigenstates)."""
    B, _ = factorization_ops(params, state.grid, order)
    r = B.apply(state.values) - complex(zeta) * state.values
    return state.grid.norm(r) / state.grid.norm(state.values)

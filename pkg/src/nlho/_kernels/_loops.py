"""Scalar loop kernels.

Written in the numba-compatible subset of Python: the numba backend compiles
these with ``njit``; the numpy backend calls the orbit integrators as plain
Python and replaces the eigenvalue loops with vectorised versions.
"""
import math

import numpy as np

try:
    from numba.extending import register_jitable
except ImportError:  # pragma: no cover - numba absent
    def register_jitable(fn):
        return fn

XP_CHART = 0
xp_CHART = 1


@register_jitable
def sturm_count(d, e2, x, pivmin):
    """Number of eigenvalues of the symmetric tridiagonal (d, e) strictly below ``x``."""
    n = d.shape[0]
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def bisect_eigenvalues(d, e2, k_lo, k_hi, lower, upper, abstol, pivmin):
    """Eigenvalues with indices ``k_lo .. k_hi - 1`` (ascending) by Sturm bisection."""
    out = np.empty(k_hi - k_lo)
    eps = 2.220446049250313e-16
    for j in range(k_hi - k_lo):
        k = k_lo + j
        lo = lower
        hi = upper
        for _ in range(400):
            width = hi - lo
            if width <= abstol + 2.0 * eps * max(abs(lo), abs(hi)):
                break
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if sturm_count(d, e2, mid, pivmin) > k:
                hi = mid
            else:
                lo = mid
        out[j] = 0.5 * (lo + hi)
    return out


def tridiag_solve(dl, d, du, b):
    """Solve a general tridiagonal system with partial pivoting (gtsv-style).

    ``dl`` is the sub-diagonal, ``du`` the super-diagonal.  Exactly singular
    pivots are replaced by a tiny multiple of the matrix scale, which is the
    behaviour inverse iteration needs.
    """
    n = d.shape[0]
    a = d.copy()
    c = du.copy()
    lo = dl.copy()
    c2 = np.zeros(n)
    x = b.copy()
    scale = 0.0
    for i in range(n):
        scale = max(scale, abs(d[i]))
    for i in range(n - 1):
        scale = max(scale, abs(dl[i]), abs(du[i]))
    tiny = 2.220446049250313e-16 * max(scale, 1e-300)
    for i in range(n - 1):
        if abs(a[i]) >= abs(lo[i]):
            if a[i] == 0.0:
                a[i] = tiny
            f = lo[i] / a[i]
            a[i + 1] -= f * c[i]
            x[i + 1] -= f * x[i]
            if i < n - 2:
                c2[i] = 0.0
        else:
            f = a[i] / lo[i]
            a[i] = lo[i]
            t = a[i + 1]
            a[i + 1] = c[i] - f * t
            c[i] = t
            if i < n - 2:
                c2[i] = c[i + 1]
                c[i + 1] = -f * c2[i]
            t = x[i]
            x[i] = x[i + 1]
            x[i + 1] = t - f * x[i + 1]
    if a[n - 1] == 0.0:
        a[n - 1] = tiny
    x[n - 1] /= a[n - 1]
    if n > 1:
        x[n - 2] = (x[n - 2] - c[n - 2] * x[n - 1]) / a[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - c[i] * x[i + 1] - c2[i] * x[i + 2]) / a[i]
    return x


@register_jitable
def _force_XP(X, m, omega, lam):
    if lam == 0.0:
        return -m * omega * omega * X
    sl = math.sqrt(lam)
    ch = math.cosh(sl * X)
    return -(m * omega * omega / sl) * math.sinh(sl * X) / (ch * ch * ch)


def integrate_leapfrog(X0, P0, m, omega, lam, dt, n_steps, coefs):
    """Composed Stormer-Verlet in the canonical chart.

    ``coefs`` are the substep weights of a symmetric composition; ``[1.0]`` is
    plain velocity Verlet.
    """
    Xs = np.empty(n_steps + 1)
    Ps = np.empty(n_steps + 1)
    X = X0
    P = P0
    Xs[0] = X
    Ps[0] = P
    F = _force_XP(X, m, omega, lam)
    for i in range(n_steps):
        for c in coefs:
            h = c * dt
            P += 0.5 * h * F
            X += h * P / m
            F = _force_XP(X, m, omega, lam)
            P += 0.5 * h * F
        Xs[i + 1] = X
        Ps[i + 1] = P
    return Xs, Ps


@register_jitable
def _rhs(q, p, m, omega, lam, chart):
    if chart == XP_CHART:
        return p / m, _force_XP(q, m, omega, lam)
    g = 1.0 + lam * q * q
    return g * p / m, -lam * q * p * p / m - m * omega * omega * q / (g * g)


def integrate_rk4(q0, p0, m, omega, lam, dt, n_steps, chart):
    qs = np.empty(n_steps + 1)
    ps = np.empty(n_steps + 1)
    q = q0
    p = p0
    qs[0] = q
    ps[0] = p
    for i in range(n_steps):
        k1q, k1p = _rhs(q, p, m, omega, lam, chart)
        k2q, k2p = _rhs(q + 0.5 * dt * k1q, p + 0.5 * dt * k1p, m, omega, lam, chart)
        k3q, k3p = _rhs(q + 0.5 * dt * k2q, p + 0.5 * dt * k2p, m, omega, lam, chart)
        k4q, k4p = _rhs(q + dt * k3q, p + dt * k3p, m, omega, lam, chart)
        q += dt * (k1q + 2.0 * k2q + 2.0 * k3q + k4q) / 6.0
        p += dt * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0
        qs[i + 1] = q
        ps[i + 1] = p
    return qs, ps

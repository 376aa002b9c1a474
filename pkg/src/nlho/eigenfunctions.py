"""Bound-state eigenfunctions built from symmetric Jacobi polynomials.

The polynomial part is ``R_n(s) = i**n P_n^{(a,a)}(-i s)`` which has real
coefficients and parity ``(-1)**n``.  Substituting ``y = -i s`` in the
symmetric Jacobi recurrence gives the real recurrence

    n (n + 2a) R_n = (2n + 2a - 1)(n + a) s R_{n-1} + (n + a - 1)(n + a) R_{n-2}

with ``R_0 = 1`` and ``R_1 = (a + 1) s``.

In the canonical chart ``phi_n(X) = N_n cosh(z)**(a + 1/2) R_n(sinh z)`` with
``z = sqrt(lam) X`` and ``a = 1 - 2 sigma``.  Values are assembled in log
space so that neither the large polynomial coefficients of the weakly
deformed regime nor the decaying envelope overflow.  Normalisation is
numerical, in the ``dX`` measure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.integrate import quad
from scipy.optimize import brentq

from .core import OscillatorParams, X_to_x, derive, x_to_X
from .errors import DomainError, OutOfSpectrumError, QuadratureError
from .spectrum import energy_level, n_max

__all__ = [
    "JacobiPoly",
    "Eigenfunction",
    "EigenstateRecord",
    "jacobi_real",
    "jacobi_coeffs",
    "rodrigues_coeffs",
    "rodrigues_eval",
    "hermite_limit",
    "eigenfunction",
    "evaluate",
    "evaluate_x",
    "normalize",
    "overlap",
    "count_nodes",
    "eigenstate_table",
]


def _check_degenerate(n, a):
    for k in range(1, n + 1):
        if k + 2 * a == 0:
            raise DomainError(f"recurrence is singular for a={a!r} at degree {k}")


def jacobi_real(n: int, a: float, s):
    """``R_n(s) = i**n P_n^{(a,a)}(-i s)`` by the real three-term recurrence.

    Examples
    --------
    >>> jacobi_real(1, -3.0, 0.5)
    -1.0
    """
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    _check_degenerate(n, a)
    s = np.asarray(s, dtype=float)
    r0 = np.ones_like(s)
    if n == 0:
        return r0 if r0.ndim else float(r0)
    r1 = (a + 1.0) * s
    for k in range(2, n + 1):
        r0, r1 = r1, ((2 * k + 2 * a - 1) * (k + a) * s * r1 + (k + a - 1) * (k + a) * r0) / (k * (k + 2 * a))
    return r1 if r1.ndim else float(r1)


def jacobi_coeffs(n: int, a: float) -> np.ndarray:
    """Monomial coefficients (ascending) of ``R_n`` from the recurrence."""
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    _check_degenerate(n, a)
    c0 = np.array([1.0])
    if n == 0:
        return c0
    c1 = np.array([0.0, a + 1.0])
    for k in range(2, n + 1):
        shifted = np.concatenate(([0.0], c1)) * ((2 * k + 2 * a - 1) * (k + a))
        shifted[: c0.size] += (k + a - 1) * (k + a) * c0
        c0, c1 = c1, shifted / (k * (k + 2 * a))
    # parity is structural; clear roundoff-free zeros explicitly
    c1[(n + 1) % 2::2] = 0.0
    return c1


def rodrigues_coeffs(n: int, a: float, lam: float) -> np.ndarray:
    """Coefficients in ``x`` of ``R_n(sqrt(lam) x)`` by exact differentiation.

    With ``d^k/dx^k (1 + lam x^2)**(a+n) = (1 + lam x^2)**(a+n-k) Q_k(x)``,
    ``Q_{k+1} = Q_k' (1 + lam x^2) + 2 (a + n - k) lam x Q_k`` and
    ``R_n(sqrt(lam) x) = Q_n(x) / ((2 sqrt(lam))**n n!)``.
    """
    if lam <= 0:
        raise DomainError("Rodrigues evaluation needs lam > 0")
    g = np.array([1.0, 0.0, lam])
    Q = np.array([1.0])
    for k in range(n):
        Q = P.polyadd(P.polymul(P.polyder(Q), g), P.polymul([0.0, 2.0 * (a + n - k) * lam], Q))
    return Q / ((2.0 * math.sqrt(lam)) ** n * math.factorial(n))


def rodrigues_eval(n: int, a: float, x, lam: float):
    """Evaluate ``R_n(sqrt(lam) x)`` through the Rodrigues formula."""
    out = P.polyval(np.asarray(x, dtype=float), rodrigues_coeffs(n, a, lam))
    return out if np.ndim(out) else float(out)


def hermite_limit(n: int, xi: float, y):
    """``2**n n! (-1)**n R_n(y / sqrt(xi)) / xi**(n/2)`` with ``a = -xi``.

    Tends to the physicists' Hermite polynomial ``H_n(y)`` as ``xi`` grows,
    with an ``O(1/xi)`` deviation.
    """
    if not xi > 0:
        raise DomainError("xi must be positive")
    y = np.asarray(y, dtype=float)
    sq = math.sqrt(xi)
    # recurrence on T_k = (-1)^k 2^k k! R_k / xi^(k/2), all O(1)
    a = -xi
    t0 = np.ones_like(y)
    if n == 0:
        return t0 if t0.ndim else float(t0)
    t1 = -2.0 * (a + 1.0) / sq * (y / sq)
    for k in range(2, n + 1):
        c1 = (2 * k + 2 * a - 1) * (k + a) / (k * (k + 2 * a))
        c0 = (k + a - 1) * (k + a) / (k * (k + 2 * a))
        t0, t1 = t1, -2.0 * k * c1 * (y / xi) * t1 + 4.0 * k * (k - 1) * c0 / xi * t0
    return t1 if t1.ndim else float(t1)


@dataclass(frozen=True)
class JacobiPoly:
    """Real polynomial ``R_n(s)`` with parameter ``a``; ``coeffs`` ascending in ``s``."""

    n: int
    a: float
    coeffs: np.ndarray

    @classmethod
    def build(cls, n: int, a: float) -> "JacobiPoly":
        return cls(n, a, jacobi_coeffs(n, a))

    @property
    def parity(self) -> int:
        return self.n % 2

    def __call__(self, s):
        return P.polyval(np.asarray(s, dtype=float), self.coeffs)


def _logcosh(z):
    z = np.abs(np.asarray(z, dtype=float))
    small = z <= 1.0
    out = np.empty_like(z)
    out[small] = 0.5 * np.log1p(np.sinh(z[small]) ** 2)
    zb = z[~small]
    out[~small] = zb + np.log1p(np.exp(-2.0 * zb)) - math.log(2.0)
    return out


def _logsinh_abs(z):
    z = np.abs(np.asarray(z, dtype=float))
    out = np.full_like(z, -np.inf)
    pos = z > 0
    small = pos & (z <= 1.0)
    out[small] = np.log(np.sinh(z[small]))
    big = z > 1.0
    out[big] = z[big] + np.log1p(-np.exp(-2.0 * z[big])) - math.log(2.0)
    return out


def _poly_log_abs_sign(coeffs, z):
    """``log|R(sinh z)|`` and its sign without forming large powers."""
    s = np.sinh(np.clip(z, -700.0, 700.0))
    n = coeffs.size - 1
    scale = max(np.abs(coeffs).max(), 1e-300)
    c = coeffs / scale
    inner = np.abs(s) <= 1.0
    logv = np.empty_like(z)
    sign = np.empty_like(z)
    val = P.polyval(s[inner], c)
    with np.errstate(divide="ignore"):
        logv[inner] = np.log(np.abs(val))
    sign[inner] = np.sign(val)
    if np.any(~inner):
        zo = z[~inner]
        so = s[~inner]
        # R(s) = s^n sum_j c_{n-j} s^{-j}
        rev = P.polyval(1.0 / so, c[::-1])
        with np.errstate(divide="ignore"):
            logv[~inner] = n * _logsinh_abs(zo) + np.log(np.abs(rev))
        sign[~inner] = np.sign(rev) * np.sign(so) ** n
    return logv + math.log(scale), sign


@dataclass(frozen=True)
class Eigenfunction:
    """Normalised bound state ``phi_n`` in the canonical chart.

    ``norm_const`` (positive) multiplies ``cosh(z)**(a+1/2) R(sinh z)`` where
    ``R = poly`` is ``R_n`` times the sign that enforces the parity
    convention.  On the undeformed branch ``poly`` is None and the
    harmonic-oscillator Hermite function is used instead.
    """

    n: int
    norm_const: float
    poly: JacobiPoly | None
    params: OscillatorParams
    log_norm: float = 0.0

    @property
    def energy(self) -> float:
        return energy_level(self.n, self.params)

    @property
    def decay_rate(self) -> float:
        """Asymptotic ``-d log|phi|/dX``; ``inf`` on the undeformed branch."""
        if self.poly is None:
            return math.inf
        return -math.sqrt(self.params.lam) * (self.poly.a + 0.5 + self.n)

    def log_abs(self, X):
        """``log|phi_n(X)|`` and ``sign(phi_n(X))`` without normalisation overflow."""
        X = np.asarray(X, dtype=float)
        flat = np.atleast_1d(X).ravel()
        if self.poly is None:
            lv, sg = _hermite_log(self.n, flat / math.sqrt(derive(self.params).b2))
        else:
            z = math.sqrt(self.params.lam) * flat
            lv, sg = _poly_log_abs_sign(self.poly.coeffs, z)
            lv = lv + (self.poly.a + 0.5) * _logcosh(z)
        lv = lv + self.log_norm
        return lv.reshape(X.shape), sg.reshape(X.shape)


def _hermite_log(n, y):
    """log|h_n(y)| and sign for the unnormalised ``H_n(y) exp(-y^2/2)``."""
    h0 = np.ones_like(y)
    h1 = 2.0 * y
    if n == 0:
        h = h0
    else:
        for k in range(2, n + 1):
            h0, h1 = h1, 2.0 * y * h1 - 2.0 * (k - 1) * h0
        h = h1
    with np.errstate(divide="ignore"):
        # (-1)**(n//2) makes even states positive at 0 and odd ones rising there
        return np.log(np.abs(h)) - 0.5 * y * y, np.sign(h) * (-1.0) ** (n // 2)


def _sign_fix(poly: JacobiPoly) -> float:
    c = poly.coeffs
    for k in range(poly.parity, c.size, 2):
        if c[k] != 0:
            return 1.0 if c[k] > 0 else -1.0
    return 1.0


def _tail_cut(log_integrand, logmax, x0, step):
    """First ``X > x0`` beyond which the integrand stays 1e-18 below its peak."""
    target = logmax - 18.0 * math.log(10.0)
    X = max(x0, step)
    while log_integrand(X) > target:
        X *= 2.0
        if X > 1e12:
            raise QuadratureError("integrand does not decay", math.nan)
    lo = X / 2.0 if X / 2.0 > x0 else x0
    if log_integrand(lo) <= target:
        return X
    return brentq(lambda t: log_integrand(t) - target, lo, X, xtol=1e-12 * X)


def normalize(n: int, params: OscillatorParams, tol: float = 1e-10) -> float:
    """Normalisation constant ``N_n`` such that ``int |phi_n|^2 dX = 1``.

    The unnormalised density is integrated on ``[0, X_cut]`` by adaptive
    Gauss-Kronrod quadrature and doubled by parity; ``X_cut`` is where the
    density has fallen below ``1e-18`` of its maximum.

    Raises
    ------
    QuadratureError
        When the estimated relative error exceeds ``tol``.
    """
    return _normalize(n, params, tol)[0]


def _normalize(n, params, tol):
    if params.undeformed:
        b = math.sqrt(derive(params).b2)
        c = (math.pi * b * b) ** -0.25 / math.sqrt(2.0**n * math.factorial(n))
        return c, math.log(c)
    d = derive(params)
    if n < 0 or n > n_max(d.v):
        raise OutOfSpectrumError(n, n_max(d.v))
    a = 1.0 - 2.0 * d.sigma
    poly = JacobiPoly.build(n, a)
    raw = Eigenfunction(n, 1.0, poly, params, 0.0)
    sl = math.sqrt(params.lam)
    width = min(1.0 / sl, math.sqrt(d.b2) * math.sqrt(2.0 * n + 1.0))

    def logdens(X):
        return 2.0 * float(raw.log_abs(np.array([X]))[0][0])

    probe = np.linspace(0.0, 4.0 * width + 10.0 * math.sqrt(d.b2), 400)
    lp = 2.0 * raw.log_abs(probe)[0]
    logmax = float(np.max(lp[np.isfinite(lp)]))
    Xcut = _tail_cut(logdens, logmax, float(probe[np.argmax(lp)]), width)

    def dens(X):
        return math.exp(logdens(X) - logmax)

    val, err = quad(dens, 0.0, Xcut, epsabs=0.0, epsrel=min(tol, 1e-10) * 0.1, limit=500)
    if not (val > 0 and err <= tol * val):
        raise QuadratureError(f"normalisation quadrature for n={n} did not reach {tol:g}", err / val if val > 0 else math.inf)
    log_total = math.log(2.0 * val) + logmax
    log_c = -0.5 * log_total
    return math.exp(log_c), log_c


def eigenfunction(n: int, params: OscillatorParams, tol: float = 1e-10) -> Eigenfunction:
    """Normalised ``phi_n`` with the parity sign convention.

    Even ``n`` are positive at ``X = 0``; odd ``n`` have positive slope there.
    """
    if n < 0:
        raise OutOfSpectrumError(n, None)
    c, log_c = _normalize(n, params, tol)
    if params.undeformed:
        return Eigenfunction(n, c, None, params, log_c)
    a = 1.0 - 2.0 * derive(params).sigma
    poly = JacobiPoly.build(n, a)
    sign = _sign_fix(poly)
    # fold the sign into the polynomial so log_abs carries it
    poly = JacobiPoly(n, a, poly.coeffs * sign)
    return Eigenfunction(n, c, poly, params, log_c)


def evaluate(phi: Eigenfunction, X):
    """``phi_n(X)`` in the canonical chart."""
    lv, sg = phi.log_abs(X)
    out = sg * np.exp(lv)
    return out if np.ndim(out) else float(out)


def evaluate_x(phi: Eigenfunction, x):
    """``phi_n(X(x))``.

    This is the same function expressed in the physical coordinate; it is
    normalised in ``dX = dx / sqrt(1 + lam x^2)``, not in ``dx``.
    """
    return evaluate(phi, x_to_X(x, phi.params))


def overlap(phi: Eigenfunction, psi: Eigenfunction, tol: float = 1e-10) -> float:
    """``int phi psi dX`` by adaptive quadrature (zero by parity for mixed parity)."""
    if (phi.n - psi.n) % 2:
        return 0.0
    b = math.sqrt(derive(phi.params).b2)
    rate = min(phi.decay_rate, psi.decay_rate)
    span = 45.0 / rate if math.isfinite(rate) else 0.0
    Xcut = max(span, 12.0 * b * math.sqrt(max(phi.n, psi.n) + 1.0))

    def f(X):
        return float(evaluate(phi, X) * evaluate(psi, X))

    val, _ = quad(f, 0.0, Xcut, epsabs=tol * 0.1, epsrel=tol, limit=500)
    return 2.0 * val


def count_nodes(values, rel_floor: float = 1e-10) -> int:
    """Sign changes in sampled values, ignoring samples below ``rel_floor * max``."""
    v = np.asarray(values, dtype=float)
    v = v[np.abs(v) > rel_floor * np.abs(v).max()]
    return int(np.count_nonzero(np.signbit(v[1:]) != np.signbit(v[:-1])))


@dataclass(frozen=True)
class EigenstateRecord:
    n: int
    E_n: float
    norm_const: float
    coeffs: tuple


def eigenstate_table(params: OscillatorParams) -> list[EigenstateRecord]:
    """One record per bound level (deformed branch)."""
    if params.undeformed:
        raise DomainError("the undeformed branch has no finite eigenstate table")
    out = []
    for n in range(n_max(derive(params).v) + 1):
        phi = eigenfunction(n, params)
        out.append(EigenstateRecord(n, phi.energy, phi.norm_const, tuple(phi.poly.coeffs)))
    return out

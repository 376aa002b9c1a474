"""Classical dynamics and the classical complexifier.

Two phase-space charts are supported:

* ``xp_CHART``: physical coordinates with
  ``H = (1 + lam x^2) p^2 / 2m + m w^2 x^2 / (2 (1 + lam x^2))``;
* ``XP_CHART``: canonical coordinates with
  ``H = P^2 / 2m + (m w^2 / 2 lam) tanh^2(sqrt(lam) X)``.

The complex coordinates ``z``, ``Z`` and ``A`` are kept in the dimensional
convention (units of action**(1/2)).  The quantum annihilator built on the
grid is dimensionless, so a classical ``A`` corresponds to ``sqrt(hbar)``
times the quantum one; that factor is not absorbed here.  On the undeformed
branch ``Z`` reduces to ``A``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import OscillatorParams, P_to_p, X_to_x, p_to_P, x_to_X
from .errors import DomainError, IntegrationError

__all__ = [
    "Chart",
    "Scheme",
    "PhaseState",
    "Trajectory",
    "to_chart",
    "hamiltonian",
    "hamiltonian_qp",
    "rhs",
    "composition_coefficients",
    "integrate_orbit",
    "exact_orbit",
    "orbit_frequency",
    "orbit_energy",
    "orbit_period",
    "measure_period",
    "poisson_bracket",
    "bracket_tower",
    "complexifier_z",
    "complexifier_z_series",
    "complexifier_Z",
    "complexifier_A",
    "bracket_ZZstar",
    "zdot_closed",
    "zdot_check",
]


class Chart(enum.Enum):
    XP_CHART = "XP"
    xp_CHART = "xp"


class Scheme(enum.Enum):
    RK4 = "rk4"
    LEAPFROG_XP = "leapfrog_xp"



@dataclass(frozen=True)
class PhaseState:
    """Phase-space point ``(q, pq)`` in the given chart at time ``t``."""

    q: float
    pq: float
    chart: Chart = Chart.xp_CHART
    t: float = 0.0


def to_chart(state: PhaseState, params: OscillatorParams, chart: Chart) -> PhaseState:
    if state.chart is chart:
        return state
    if chart is Chart.XP_CHART:
        X = float(x_to_X(state.q, params))
        return PhaseState(X, float(p_to_P(state.q, state.pq, params)), chart, state.t)
    x = float(X_to_x(state.q, params))
    return PhaseState(x, float(P_to_p(state.q, state.pq, params)), chart, state.t)


def hamiltonian_qp(q, p, chart: Chart, params: OscillatorParams):
    """Energy for arrays of coordinates in ``chart``."""
    m, w, lam = params.m, params.omega, params.lam
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    if chart is Chart.XP_CHART:
        if lam == 0:
            pot = 0.5 * m * w * w * q * q
        else:
            pot = (0.5 * m * w * w / lam) * np.tanh(math.sqrt(lam) * q) ** 2
        return p * p / (2.0 * m) + pot
    g = 1.0 + lam * q * q
    return g * p * p / (2.0 * m) + m * w * w * q * q / (2.0 * g)


def hamiltonian(state: PhaseState, params: OscillatorParams) -> float:
    """Energy of ``state``; the two charts agree on corresponding points.

    Examples
    --------
    >>> hamiltonian(PhaseState(1.0, 0.0), OscillatorParams(lam=0.1))  # doctest: +ELLIPSIS
    0.4545454545...
    """
    return float(hamiltonian_qp(state.q, state.pq, state.chart, params))


def rhs(state: PhaseState, params: OscillatorParams):
    """Hamilton's equations ``(dq/dt, dp/dt)`` in the state's chart."""
    m, w, lam = params.m, params.omega, params.lam
    q, p = state.q, state.pq
    if state.chart is Chart.XP_CHART:
        if lam == 0:
            return p / m, -m * w * w * q
        sl = math.sqrt(lam)
        ch = math.cosh(sl * q)
        return p / m, -(m * w * w / sl) * math.sinh(sl * q) / ch**3
    g = 1.0 + lam * q * q
    return g * p / m, -lam * q * p * p / m - m * w * w * q / (g * g)


def composition_coefficients(order: int) -> np.ndarray:
    """Substep weights of the symmetric triple-jump composition of Stormer-Verlet.

    ``order`` must be even; ``2`` is plain Stormer-Verlet.
    """
    if order < 2 or order % 2:
        raise DomainError(f"composition order must be even and >= 2, got {order}")
    c = np.array([1.0])
    for k in range(2, order, 2):
        r = 2.0 ** (1.0 / (k + 1))
        w1 = 1.0 / (2.0 - r)
        w0 = -r * w1
        c = np.concatenate([c * w1, c * w0, c * w1])
    return c


@dataclass(frozen=True)
class Trajectory:
    """Sampled orbit.  ``energy_drift`` is ``max |E(t) - E(0)| / |E(0)|``
    (absolute when ``E(0) = 0``)."""

    t: np.ndarray
    q: np.ndarray
    p: np.ndarray
    chart: Chart
    dt: float
    energy_drift: float
    scheme: Scheme

    @property
    def samples(self) -> list[PhaseState]:
        return [PhaseState(float(a), float(b), self.chart, float(c)) for a, b, c in zip(self.q, self.p, self.t)]

    def __len__(self):
        return self.t.shape[0]


def integrate_orbit(initial: PhaseState, params: OscillatorParams, dt: float, n_steps: int,
                    scheme: Scheme = Scheme.RK4, order: int = 6) -> Trajectory:
    """Integrate Hamilton's equations from ``initial``.

    ``Scheme.RK4`` works in either chart.  ``Scheme.LEAPFROG_XP`` needs the
    canonical chart, where the Hamiltonian is separable, and uses the
    symmetric composition of the given even ``order``.

    Raises
    ------
    IntegrationError
        At the first step where the state stops being finite.
    """
    if not (dt > 0 and math.isfinite(dt)):
        raise DomainError(f"dt must be positive, got {dt!r}")
    if n_steps < 1:
        raise DomainError(f"n_steps must be >= 1, got {n_steps}")
    scheme = Scheme(scheme)
    m, w, lam = float(params.m), float(params.omega), float(params.lam)
    if scheme is Scheme.LEAPFROG_XP:
        if initial.chart is not Chart.XP_CHART:
            raise DomainError("LEAPFROG_XP requires an XP_CHART initial state")
        q, p = _kernels.integrate_leapfrog(float(initial.q), float(initial.pq), m, w, lam, float(dt),
                                           int(n_steps), composition_coefficients(order))
    else:
        code = 0 if initial.chart is Chart.XP_CHART else 1
        q, p = _kernels.integrate_rk4(float(initial.q), float(initial.pq), m, w, lam, float(dt), int(n_steps), code)
    bad = ~(np.isfinite(q) & np.isfinite(p))
    if bad.any():
        raise IntegrationError(int(np.argmax(bad)))
    t = initial.t + dt * np.arange(n_steps + 1)
    E = hamiltonian_qp(q, p, initial.chart, params)
    scale = abs(E[0]) if E[0] != 0 else 1.0
    drift = float(np.max(np.abs(E - E[0])) / scale)
    return Trajectory(t, q, p, initial.chart, float(dt), drift, scheme)


def orbit_frequency(A: float, params: OscillatorParams) -> float:
    """``Omega = w / sqrt(1 + lam A^2)``."""
    return params.omega / math.sqrt(1.0 + params.lam * A * A)


def orbit_period(A: float, params: OscillatorParams) -> float:
    return 2.0 * math.pi / orbit_frequency(A, params)


def orbit_energy(A: float, params: OscillatorParams) -> float:
    """``(m w^2 / 2 lam)(1 - 1/(1 + lam A^2))`` written as ``m w^2 A^2 / (2 (1 + lam A^2))``."""
    return 0.5 * params.m * params.omega**2 * A * A / (1.0 + params.lam * A * A)


def exact_orbit(A: float, Phi: float, params: OscillatorParams, t):
    """``x(t) = A sin(Omega t + Phi)``."""
    return A * np.sin(orbit_frequency(A, params) * np.asarray(t, dtype=float) + Phi)


def measure_period(traj: Trajectory) -> float:
    """Mean period from successive upward zero crossings of ``q``.

    Each crossing is located by the root of the quadratic through three
    samples around the sign change.
    """
    q = traj.q
    idx = np.flatnonzero((q[:-1] < 0) & (q[1:] >= 0))
    idx = idx[(idx >= 1) & (idx + 1 < q.shape[0])]
    if idx.size < 2:
        raise DomainError("need at least two upward zero crossings to measure a period")
    times = np.empty(idx.size)
    for j, i in enumerate(idx):
        y0, y1, y2 = q[i - 1], q[i], q[i + 1]
        # q(s) = y1 + b s + c s^2 on s in {-1, 0, 1}
        b = 0.5 * (y2 - y0)
        c = 0.5 * (y2 + y0) - y1
        s = -y1 / b if c == 0 else _quad_root(y1, b, c)
        times[j] = traj.t[i] + s * traj.dt
    return float((times[-1] - times[0]) / (idx.size - 1))


def _quad_root(a0, b, c):
    disc = b * b - 4.0 * c * a0
    sq = math.sqrt(max(disc, 0.0))
    # numerically stable root nearest s in [0, 1]
    qq = -0.5 * (b + math.copysign(sq, b))
    r1 = qq / c
    r2 = a0 / qq if qq != 0 else r1
    return r1 if abs(r1 - 0.5) < abs(r2 - 0.5) else r2


def poisson_bracket(f, g, at: PhaseState, h=None):
    """``{f, g} = f_q g_p - f_p g_q`` by Richardson-extrapolated central differences.

    ``f`` and ``g`` are callables of ``(q, p)`` in the chart of ``at``.  The
    default steps are ``1e-4 (1 + |q|)`` and ``1e-4 (1 + |p|)``; the error is
    ``O(h^4)``.
    """
    q, p = float(at.q), float(at.pq)
    hq = h if h is not None else 1e-4 * (1.0 + abs(q))
    hp = h if h is not None else 1e-4 * (1.0 + abs(p))
    if hq <= 0 or hp <= 0:
        raise DomainError("step must be positive")

    def d(fun, dq, dp):
        def c(s):
            return (fun(q + s * dq, p + s * dp) - fun(q - s * dq, p - s * dp)) / (2.0 * s * (dq + dp))
        return (4.0 * c(0.5) - c(1.0)) / 3.0

    fq, fp = d(f, hq, 0.0), d(f, 0.0, hp)
    gq, gp = d(g, hq, 0.0), d(g, 0.0, hp)
    return fq * gp - fp * gq


def bracket_tower(n: int, x, p, params: OscillatorParams):
    """Closed form of the ``n``-fold bracket ``{x, C}_(n)`` with ``C = (1 + lam x^2) p^2 / (2 m w)``."""
    if n < 0:
        raise DomainError("bracket depth must be >= 0")
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    lam, mw = params.lam, params.m * params.omega
    g = 1.0 + lam * x * x
    k, odd = divmod(n, 2)
    if odd:
        return p ** (2 * k + 1) * lam**k * g ** (k + 1) / mw ** (2 * k + 1)
    return p ** (2 * k) * lam**k * g**k * x / mw ** (2 * k)


def complexifier_z(x, p, params: OscillatorParams):
    """Complex coordinate ``z(x, p)`` generated from ``x`` by the complexifier."""
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    m, w, lam = params.m, params.omega, params.lam
    pre = math.sqrt(m * w / 2.0)
    if lam == 0:
        return pre * x + 1j * p / math.sqrt(2.0 * m * w)
    g = 1.0 + lam * x * x
    theta = p * np.sqrt(lam * g) / (m * w)
    return pre * (x * np.cos(theta) + 1j * np.sqrt(g / lam) * np.sin(theta))


def complexifier_z_series(x, p, params: OscillatorParams, N: int):
    """Partial sum ``sqrt(m w / 2) sum_{n<N} i^n / n! {x, C}_(n)``."""
    if N < 1:
        raise DomainError("need at least one term")
    total = 0j
    for n in range(N):
        total = total + (1j**n / math.factorial(n)) * bracket_tower(n, x, p, params)
    return math.sqrt(params.m * params.omega / 2.0) * total


def _w(X, P, params):
    sl = math.sqrt(params.lam)
    return sl * np.asarray(X, dtype=float) + 1j * sl * np.asarray(P, dtype=float) / (params.m * params.omega)


def complexifier_A(X, P, params: OscillatorParams):
    """``A = sqrt(m w / 2) X + i P / sqrt(2 m w)``."""
    mw = params.m * params.omega
    return math.sqrt(mw / 2.0) * np.asarray(X, dtype=float) + 1j * np.asarray(P, dtype=float) / math.sqrt(2.0 * mw)


def complexifier_Z(X, P, params: OscillatorParams):
    """``Z = sqrt(m w / 2 lam) sinh(sqrt(lam) X + i sqrt(lam) P / (m w))``; ``A`` when ``lam = 0``."""
    if params.lam == 0:
        return complexifier_A(X, P, params)
    return math.sqrt(params.m * params.omega / (2.0 * params.lam)) * np.sinh(_w(X, P, params))


def bracket_ZZstar(X, P, params: OscillatorParams):
    """Closed form ``{Z, Z*} = (-i/2)[cosh(2 sqrt(lam) X) + cos(2 sqrt(lam) P / (m w))]``."""
    if params.lam == 0:
        return np.full(np.shape(X), -1j) if np.ndim(X) else -1j
    sl = math.sqrt(params.lam)
    X = np.asarray(X, dtype=float)
    P = np.asarray(P, dtype=float)
    out = np.asarray(-0.5j * (np.cosh(2.0 * sl * X) + np.cos(2.0 * sl * P / (params.m * params.omega))))
    return out if out.ndim else complex(out)


def zdot_closed(X, P, params: OscillatorParams):
    """``dZ/dt = sqrt(m w / 2)(P/m - (i w / sqrt(lam)) sinh(s X)/cosh^3(s X)) cosh(s X + i s P / m w)``, ``s = sqrt(lam)``."""
    m, w, lam = params.m, params.omega, params.lam
    X = np.asarray(X, dtype=float)
    P = np.asarray(P, dtype=float)
    pre = math.sqrt(m * w / 2.0)
    if lam == 0:
        return pre * (P / m - 1j * w * X)
    sl = math.sqrt(lam)
    ch = np.cosh(sl * X)
    return pre * (P / m - (1j * w / sl) * np.sinh(sl * X) / ch**3) * np.cosh(_w(X, P, params))


def zdot_check(X: float, P: float, params: OscillatorParams, h=None) -> float:
    """``|{Z, H}_numeric - dZ/dt_closed|`` at the canonical point ``(X, P)``."""

    def Z(q, p):
        return complex(complexifier_Z(q, p, params))

    def H(q, p):
        return float(hamiltonian_qp(q, p, Chart.XP_CHART, params))

    num = poisson_bracket(Z, H, PhaseState(X, P, Chart.XP_CHART), h)
    return float(abs(num - complex(zdot_closed(X, P, params))))

import math

import numpy as np
import pytest

from nlho import (AlgebraTruncationError, DomainError, OscillatorParams, OutOfSpectrumError, bound_state_count,
                  derive, energy_level, epsilon_level, f_cutoff, f_deformation, hypergeometric_params, level_table,
                  n_max)
from nlho.spectrum import UNBOUNDED, decay_exponent

# frozen with mpmath at 50 digits for v = 100
EPS0 = 9.512492197250393
E0 = 0.4756246098625196
E9 = 4.986867587387873
F0 = 1.0006244149155263
F1_SQ = 0.9512492197250393


def test_bound_count_v100(params):
    assert n_max(100.0) == 9
    assert bound_state_count(params) == 10


def test_ties_count_as_bound():
    # sqrt(1/4 + v) - 1/2 = 2 exactly at v = 6
    assert n_max(6.0) == 2
    assert decay_exponent(2, 6.0) == 0.0


def test_known_levels(params):
    assert epsilon_level(0, 100.0) == pytest.approx(EPS0, rel=1e-15)
    assert energy_level(0, params) == pytest.approx(E0, rel=1e-15)
    assert energy_level(9, params) == pytest.approx(E9, rel=1e-15)


def test_levels_below_threshold_and_increasing(params):
    E = [energy_level(n, params) for n in range(10)]
    assert all(a < b for a, b in zip(E, E[1:]))
    assert E[-1] < params.threshold


def test_energy_scale(params):
    d = derive(params)
    for n in range(10):
        assert energy_level(n, params) == pytest.approx(epsilon_level(n, d.v) / d.epsilon_scale, rel=1e-14)


def test_out_of_spectrum(params):
    with pytest.raises(OutOfSpectrumError):
        energy_level(10, params)
    with pytest.raises(OutOfSpectrumError):
        epsilon_level(-1, 1.0)


def test_v_zero_levels():
    assert n_max(0.0) == 0
    assert epsilon_level(0, 0.0) == 0.0
    for n in range(11):
        assert epsilon_level(n, 0.0, strict=False) == -n * n


def test_harmonic_limit():
    p = OscillatorParams(lam=1e-8)
    for n in range(6):
        assert abs(energy_level(n, p) - (n + 0.5)) < 1e-6


def test_undeformed_branch():
    p = OscillatorParams(lam=0.0)
    assert energy_level(3, p) == 3.5
    assert bound_state_count(p) == UNBOUNDED
    assert f_deformation(7, p) == 1.0
    with pytest.raises(DomainError):
        level_table(p)


def test_f_values(params):
    assert f_deformation(0, params) == pytest.approx(F0, rel=1e-15)
    assert f_deformation(1, params) ** 2 == pytest.approx(F1_SQ, rel=1e-15)
    # f(n)^2 falls linearly with step 1 / (2 sqrt v)
    steps = [f_deformation(n, params) ** 2 - f_deformation(n + 1, params) ** 2 for n in range(20)]
    assert np.allclose(steps, 0.05, rtol=0, atol=1e-15)


def test_f_cutoff(params):
    assert f_cutoff(params) == 20
    f_deformation(20, params)
    with pytest.raises(AlgebraTruncationError):
        f_deformation(21, params)


def test_hypergeometric_params(params):
    a, b, c, s = hypergeometric_params(2, params)
    assert b - a == pytest.approx(2 * ((2 + 0.5) - math.sqrt(100.25)))
    assert c == pytest.approx(2 * s)
    assert s == pytest.approx(derive(params).sigma)


def test_level_table(params):
    tab = level_table(params)
    assert len(tab) == 10
    assert [r.n for r in tab] == list(range(10))
    assert np.isclose(tab[0].E_n, E0)

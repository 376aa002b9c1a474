import math

import numpy as np
import pytest

from nlho import DomainError, OscillatorParams, X_to_x, derive, x_to_X, p_to_P, P_to_p


def test_defaults_are_natural_units():
    p = OscillatorParams()
    assert (p.m, p.omega, p.lam, p.hbar) == (1.0, 1.0, 0.1, 1.0)


@pytest.mark.parametrize("kw", [dict(m=0.0), dict(omega=-1.0), dict(hbar=math.nan), dict(lam=-1e-3),
                                dict(lam=math.inf), dict(m="1")])
def test_rejects_bad_parameters(kw):
    with pytest.raises(DomainError):
        OscillatorParams(**kw)


def test_derived_values(params):
    d = derive(params)
    assert d.v == pytest.approx(100.0, rel=1e-15)
    # sigma = 1/2 + sqrt(1/4 + v)/2, frozen from mpmath
    assert d.sigma == pytest.approx(5.506246098625196, rel=1e-15)
    assert d.b2 == 1.0
    assert d.xi == pytest.approx(10.0)
    assert d.epsilon_scale == pytest.approx(20.0)


def test_undeformed_derived():
    d = derive(OscillatorParams(lam=0.0))
    assert d.undeformed and math.isinf(d.v) and math.isinf(d.xi)
    assert OscillatorParams(lam=0.0).threshold == math.inf


def test_threshold(params):
    assert params.threshold == pytest.approx(5.0)


def test_chart_maps_roundtrip(params):
    x = np.linspace(-50, 50, 101)
    X = x_to_X(x, params)
    assert np.allclose(X_to_x(X, params), x, rtol=1e-14, atol=1e-13)
    assert x_to_X(1.0, params) == pytest.approx(math.asinh(math.sqrt(0.1)) / math.sqrt(0.1), rel=1e-15)
    p = np.linspace(-3, 3, 101)
    assert np.allclose(P_to_p(X, p_to_P(x, p, params), params), p, rtol=1e-14, atol=1e-15)


def test_chart_maps_identity_when_undeformed():
    p0 = OscillatorParams(lam=0.0)
    x = np.array([-2.0, 0.5, 3.0])
    assert np.array_equal(x_to_X(x, p0), x)
    assert np.array_equal(X_to_x(x, p0), x)


def test_with_lam(params):
    q = params.with_lam(0.3)
    assert q.lam == 0.3 and q.m == params.m

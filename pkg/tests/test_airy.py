import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from brownian_storage.airy import (
    X_SWITCH,
    AiryMethod,
    _asymptotic_sum,
    airy_ai,
    airy_ai_asymptotic,
    airy_ai_integral,
    airy_ai_value,
    log_airy_ai,
)
from brownian_storage.errors import DomainError


def test_known_values():
    assert airy_ai(0.0) == pytest.approx(0.3550280538878172, rel=1e-15)
    assert airy_ai(1.0) == pytest.approx(0.1352924163128814, rel=1e-14)
    assert airy_ai(5.0) == pytest.approx(1.0834e-4, rel=5e-4)
    assert airy_ai_asymptotic(5.0, 1) == pytest.approx(airy_ai(5.0), rel=1e-3)


@pytest.mark.parametrize("x", [0.0, 0.5, 1.0, 2.0, 4.0])
def test_quadrature_oracle(x):
    oracle = airy_ai_integral(x)
    assert oracle.method is AiryMethod.QUADRATURE
    assert abs(airy_ai(x) - oracle.ai) <= 1e-8


@pytest.mark.parametrize("x", [0.1, 3.0, 6.9, 7.0, 7.1, 9.0, 15.0, 40.0, 100.0])
def test_against_mpmath(x):
    assert airy_ai(x) == pytest.approx(float(mpmath.airyai(x)), rel=1e-10)


def test_log_form_beyond_underflow():
    ref = float(mpmath.log(mpmath.airyai(300)))
    assert log_airy_ai(300.0) == pytest.approx(ref, rel=1e-13)
    assert airy_ai_value(300.0).ai == 0.0


def test_series_and_asymptotic_agree_at_switch():
    x = X_SWITCH
    zeta = 2 / 3 * x ** 1.5
    asym = math.exp(-zeta) / (2 * math.sqrt(math.pi) * x ** 0.25) * _asymptotic_sum(x)
    assert asym == pytest.approx(airy_ai(x), rel=1e-10)
    assert airy_ai_value(x).method is AiryMethod.POWER_SERIES
    assert airy_ai_value(x + 1e-9).method is AiryMethod.ASYMPTOTIC


def test_asymptotic_examples():
    assert airy_ai_asymptotic(8.0, 1) == pytest.approx(airy_ai(8.0), rel=1e-3)
    assert airy_ai(30.0) / airy_ai_asymptotic(30.0, 0) == pytest.approx(1.0, abs=1e-3)
    with pytest.raises(DomainError):
        airy_ai_asymptotic(0.0)
    with pytest.raises(DomainError):
        airy_ai_asymptotic(1.0, order=2)


@given(st.floats(1e-3, 100.0))
def test_order_one_below_order_zero(u):
    assert airy_ai_asymptotic(u, 1) < airy_ai_asymptotic(u, 0)


def test_decreasing_and_log_concave():
    x = np.linspace(0, 20, 801)
    la = np.array([log_airy_ai(v) for v in x])
    assert np.all(np.diff(la) < 0)
    assert np.all(np.diff(la, 2) < 0)


def test_negative_argument_rejected():
    with pytest.raises(DomainError):
        airy_ai(-0.1)
    with pytest.raises(DomainError):
        log_airy_ai(-1.0)

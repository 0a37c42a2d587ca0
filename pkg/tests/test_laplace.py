import math

import numpy as np
import pytest
from scipy import integrate

from brownian_storage import harness
from brownian_storage.errors import DomainError
from brownian_storage.laplace import (
    lt_derivative,
    lt_table,
    mean_stationary_area,
    mean_transient_area,
    stationary_lt,
    stationary_lt_displayed,
    stationary_lt_mixture,
    transient_lt,
)
from brownian_storage.model import QueueParams
from brownian_storage.simulation import busy_period_samples

ONE = QueueParams(1.0)


def test_transient_at_zero_start():
    assert transient_lt(0.7, 0.0, ONE) == 1.0
    with pytest.raises(DomainError):
        transient_lt(0.0, 1.0, ONE)
    with pytest.raises(DomainError):
        transient_lt(1.0, -1.0, ONE)


def test_transient_slope_gives_mean():
    assert lt_derivative(ONE, x=1.0) == pytest.approx(1.0, rel=0.01)
    assert lt_derivative(QueueParams(2.0), x=1.0) == pytest.approx(0.375, rel=0.01)


def test_transient_against_mc():
    _tau, area = busy_period_samples(ONE, 1e-3, 100_000, seed=31, x0=1.0)
    rep = harness.mean_report(np.exp(-area), 31)
    assert abs(rep.estimate - transient_lt(1.0, 1.0, ONE)) <= 3 * rep.half_width


def test_stationary_small_gamma():
    assert stationary_lt(1e-6, ONE) == pytest.approx(1.0, abs=1e-3)
    slope = -(stationary_lt(1e-4, ONE) - 1.0) / 1e-4
    assert slope == pytest.approx(0.5, rel=0.01)
    assert lt_derivative(ONE) == pytest.approx(0.5, rel=0.01)


@pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("gamma", [0.01, 0.1, 1.0, 10.0])
def test_two_quadrature_forms_agree(c, gamma):
    p = QueueParams(c)
    assert abs(stationary_lt_displayed(gamma, p) - stationary_lt_mixture(gamma, p)) <= 1e-8


def test_decreasing_in_gamma_and_convex():
    g = np.logspace(-3, 2, 30)
    s = np.array([stationary_lt(v, ONE) for v in g])
    assert np.all((s > 0) & (s < 1))
    assert np.all(np.diff(s) < 0)
    # convex in gamma: check on an evenly spaced grid
    lin = np.linspace(0.01, 5, 30)
    v = np.array([stationary_lt(x, ONE) for x in lin])
    assert np.all(np.diff(v, 2) > 0)
    t = np.array([transient_lt(x, 1.0, ONE) for x in g])
    assert np.all((t > 0) & (t < 1)) and np.all(np.diff(t) < 0)


def test_transient_decreasing_in_start():
    x = np.linspace(0, 5, 40)
    v = [transient_lt(0.5, xx, ONE) for xx in x]
    assert np.all(np.diff(v) < 0)


def test_mean_formulas():
    assert mean_transient_area(0.0, ONE) == 0.0
    assert mean_transient_area(1.0, ONE) == 1.0
    assert mean_transient_area(1.0, QueueParams(2.0)) == 0.375
    assert mean_stationary_area(ONE) == 0.5
    assert mean_stationary_area(QueueParams(2.0)) == 1 / 16
    mix = integrate.quad(lambda x: 2 * math.exp(-2 * x) * mean_transient_area(x, ONE),
                         0, np.inf, epsabs=1e-14)[0]
    assert mix == pytest.approx(0.5, abs=1e-10)


def test_second_moment_is_numeric_and_plausible():
    # E J(x)^2 > (E J(x))^2
    assert lt_derivative(ONE, x=1.0, gamma0=1e-3, order=2) > 1.0


def test_lt_table(tmp_path):
    out = tmp_path / "lt.csv"
    text = lt_table([0.1, 1.0], ONE, path=out)
    lines = text.splitlines()
    assert lines[0] == "gamma,lt" and len(lines) == 3
    assert out.read_text() == text
    with pytest.raises(DomainError):
        lt_table([1.0], ONE, mode="transient")

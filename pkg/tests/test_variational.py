import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from brownian_storage.asymptotics import minimize_psi_closed_form, phi_TM
from brownian_storage.errors import DomainError, NoConvergence
from brownian_storage.model import GridPath, QueueParams, trapezoid_area
from brownian_storage.variational import (
    Scenario,
    minimize_psi_numeric,
    most_likely_path,
    path_table,
    rate_functional,
    skorokhod_map,
)

ONE = QueueParams(1.0)
pos = st.floats(0.2, 5.0)


def test_empty_start_path():
    mlp = most_likely_path(3.0, 1.0, ONE, 300_001)
    assert mlp.scenario is Scenario.EMPTY_START and mlp.a_star == 0.0
    s = math.sqrt(6.0)
    g = mlp.grid
    k = int(np.searchsorted(g.times, s))
    assert np.interp(s, g.times, g.values) == pytest.approx(s, abs=1e-9)
    assert np.all(g.values[k:] == g.values[-1])


def test_symmetric_busy_path():
    mlp = most_likely_path(3.0, 6.0, ONE, 3001)
    assert mlp.scenario is Scenario.SYMMETRIC_BUSY
    assert mlp.a_star == pytest.approx(1.5)
    g = mlp.grid
    assert g.values[-1] == pytest.approx(3.0)
    mid = len(g) // 2
    slope = (g.values[mid + 1] - g.values[mid - 1]) / (2 * g.h)
    assert slope == pytest.approx(1.0, abs=1e-9)


@given(pos, pos, pos)
@settings(max_examples=30)
def test_path_starts_at_zero(c, T, M):
    assert most_likely_path(T, M, QueueParams(c), 11).grid.values[0] == 0.0


def test_path_validation():
    with pytest.raises(DomainError):
        most_likely_path(1.0, 1.0, ONE, 1)
    with pytest.raises(DomainError):
        most_likely_path(0.0, 1.0, ONE, 10)


def test_rate_functional_examples():
    assert rate_functional(GridPath(0.0, 0.1, [2.0] * 11)) == 0.0
    assert rate_functional(GridPath.from_function(lambda t: t, 0.0, 1.0, 101)) == pytest.approx(0.5)


def test_rate_identity_example():
    mlp = most_likely_path(3.0, 1.0, ONE, 100_000)
    val = rate_functional(mlp.grid) + 2 * mlp.a_star
    assert val == pytest.approx(2 * math.sqrt(6) / 3, abs=1e-6)


@given(pos, pos, st.floats(0.2, 3.0))
@settings(max_examples=20, deadline=None)
def test_rate_identity_both_branches(c, M, ratio):
    p = QueueParams(c)
    T = ratio * math.sqrt(6 * M / c)
    mlp = most_likely_path(T, M, p, 100_000)
    lhs = rate_functional(mlp.grid) + 2 * mlp.a_star * c
    assert lhs == pytest.approx(phi_TM(T, M, p).value, abs=1e-5)


def test_skorokhod_pure_drain():
    g = GridPath(0.0, 0.25, np.zeros(9))
    q = skorokhod_map(g, ONE, 1.0)
    np.testing.assert_allclose(q.values, np.maximum(1.0 - g.times, 0.0), atol=1e-15)
    with pytest.raises(DomainError):
        skorokhod_map(g, ONE, -1.0)


def test_skorokhod_on_empty_start_path():
    n = 30_001
    mlp = most_likely_path(3.0, 1.0, ONE, n)
    q = skorokhod_map(mlp.grid, ONE, 0.0)
    h = q.h
    hits = q.times[(q.values == 0.0) & (q.times > 0)]
    assert hits[0] == pytest.approx(math.sqrt(6), abs=2 * h)
    assert trapezoid_area(q) >= 1.0 - 10 * h


def test_skorokhod_on_symmetric_path():
    n = 30_001
    mlp = most_likely_path(3.0, 6.0, ONE, n)
    q = skorokhod_map(mlp.grid, ONE, mlp.a_star)
    h = q.h
    assert q.values[0] == pytest.approx(mlp.a_star)
    assert q.values[-1] == pytest.approx(mlp.a_star, abs=2 * h)
    assert trapezoid_area(q) >= 6.0 - 10 * h


@given(st.lists(st.floats(-5, 5), min_size=2, max_size=40), st.floats(0, 3), st.floats(0, 3))
def test_skorokhod_nonnegative_and_monotone(values, q_lo, extra):
    g = GridPath(0.0, 0.1, values)
    lo = skorokhod_map(g, ONE, q_lo)
    hi = skorokhod_map(g, ONE, q_lo + extra)
    assert np.all(lo.values >= 0)
    assert np.all(hi.values >= lo.values)


def test_path_table(tmp_path):
    out = tmp_path / "p.csv"
    text = path_table(most_likely_path(3.0, 1.0, ONE, 1000), ONE, out)
    lines = out.read_text().splitlines()
    assert lines[0] == "r,f_star,q" and len(lines) == 1001
    assert text == out.read_text()


@pytest.mark.parametrize("T,value", [(7.0, 4.0), (3.0, 5.0), (6.0, 4.0)])
def test_numeric_minimiser_examples(T, value):
    r = minimize_psi_numeric(T, 6.0, ONE)
    assert r.value == pytest.approx(value, abs=1e-8)
    closed = minimize_psi_closed_form(T, 6.0, ONE)
    assert r.s_star == pytest.approx(closed.s_star, abs=1e-4)
    assert r.a_star == pytest.approx(closed.a_star, abs=1e-4)


@given(pos, pos, pos)
@settings(max_examples=40, deadline=None)
def test_numeric_minimiser_oracle(c, T, M):
    p = QueueParams(c)
    assert minimize_psi_numeric(T, M, p).value == pytest.approx(
        minimize_psi_closed_form(T, M, p).value, abs=1e-7)


def test_numeric_minimiser_reports_nonconvergence():
    with pytest.raises(NoConvergence):
        minimize_psi_numeric(3.0, 1.0, ONE, tol=1e-14, maxiter=3)

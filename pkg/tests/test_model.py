import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from brownian_storage.errors import DomainError, NonPositiveDrainRate
from brownian_storage.model import (
    CycleRecord,
    EstimatorReport,
    GridPath,
    QueueParams,
    WorkloadTrace,
    cycles_to_csv,
    trapezoid_area,
    validate_params,
    z_value,
)


def test_validate_params_accepts_positive():
    assert validate_params(1.0) == QueueParams(1.0)
    assert QueueParams(2).stationary_rate == 4.0
    assert QueueParams(2).stationary_mean == 0.25


@pytest.mark.parametrize("c", [0.0, -2.5, math.nan, math.inf])
def test_validate_params_rejects(c):
    with pytest.raises(NonPositiveDrainRate):
        validate_params(c)


def test_z_value_default_is_99_percent():
    assert z_value() == pytest.approx(2.5758293035489, abs=1e-12)
    with pytest.raises(DomainError):
        z_value(1.0)


def test_trapezoid_examples():
    assert trapezoid_area(GridPath(0.0, 0.25, [1.0] * 5)) == 1.0
    assert trapezoid_area(GridPath(0.0, 0.5, [0.0, 0.5, 1.0])) == 0.5
    assert trapezoid_area(GridPath(0.0, 1.0, [0.0, 1.0, 0.0])) == 1.0
    assert trapezoid_area(GridPath(0.0, 1.0, [3.0])) == 0.0


@given(st.lists(st.floats(0, 1e6), min_size=2, max_size=50),
       st.floats(1e-3, 10), st.floats(0, 100))
def test_trapezoid_nonnegative_and_homogeneous(values, h, lam):
    g = GridPath(0.0, h, values)
    a = trapezoid_area(g)
    assert a >= 0
    scaled = trapezoid_area(GridPath(0.0, h, np.asarray(values) * lam))
    assert scaled == pytest.approx(lam * a, rel=1e-12, abs=1e-300)


def test_gridpath_invariants():
    g = GridPath(1.0, 0.5, [0, 1, 2, 3])
    assert g.length == 1.5
    np.testing.assert_allclose(g.times, [1.0, 1.5, 2.0, 2.5])
    with pytest.raises(ValueError):
        g.values[0] = 5
    with pytest.raises(DomainError):
        GridPath(0.0, 0.0, [1.0])
    with pytest.raises(DomainError):
        GridPath(0.0, 1.0, [])


def test_from_samples_rejects_nonuniform():
    assert GridPath.from_samples([0, 0.1, 0.2], [1, 2, 3]).h == pytest.approx(0.1)
    with pytest.raises(DomainError):
        GridPath.from_samples([0, 0.1, 0.3], [1, 2, 3])


def test_gridpath_round_trips(tmp_path):
    rng = np.random.default_rng(1)
    g = GridPath(0.3, 1 / 3, rng.standard_normal(20))
    assert GridPath.from_json(g.to_json()) == g
    path = tmp_path / "g.csv"
    g.to_csv(path)
    back = GridPath.from_csv(path)
    assert path.read_text().splitlines()[0] == "t,value"
    np.testing.assert_array_equal(back.values, g.values)
    assert back.h == pytest.approx(g.h, rel=1e-15)


def test_workload_trace_rejects_negative_values():
    p = QueueParams(1.0)
    with pytest.raises(DomainError):
        WorkloadTrace(p, GridPath(0.0, 1.0, [0.0, -1e-9]), 0.0)
    tr = WorkloadTrace(p, GridPath(0.0, 1.0, [0.0, 1.0]), 0.5)
    assert tr.to_csv().splitlines() == ["t,Q", "0,0", "1,1"]


def test_cycle_records():
    with pytest.raises(DomainError):
        CycleRecord(1.0, 1.0, 0.0, 0.0)
    text = cycles_to_csv([CycleRecord(0.5, 1.5, 0.2, 1.0)])
    assert text.splitlines() == ["sigma,tau,H,xi", "0.5,1.5,0.20000000000000001,1"]


def test_estimator_report_contract():
    z = z_value()
    rep = EstimatorReport(0.5, 0.01, 0.5 - z * 0.01, 0.5 + z * 0.01, 100, 7, 0.1)
    assert rep.half_width == pytest.approx(z * rep.std_error)
    assert EstimatorReport.from_json(rep.to_json()) == rep
    assert set(json.loads(rep.to_json())) >= {"estimate", "std_error", "ci_low", "ci_high",
                                               "n_replications", "seed", "wall_time"}
    with pytest.raises(DomainError):
        EstimatorReport(0.7, 0.01, 0.4, 0.6, 100, 7, 0.1)
    with pytest.raises(DomainError):
        EstimatorReport(0.5, -1.0, 0.4, 0.6, 100, 7, 0.1)

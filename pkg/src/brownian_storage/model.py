"""
Domain types shared by the simulation, formula and harness modules.

All types are frozen dataclasses; array-valued fields are stored read-only so
instances can be handed to worker threads without copying.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import norm

from .errors import DomainError, NonPositiveDrainRate

DEFAULT_CONFIDENCE = 0.99

# relative slack allowed when checking that sample times are equally spaced
_UNIFORM_RTOL = 1e-9


def z_value(confidence: float = DEFAULT_CONFIDENCE) -> float:
    """Two-sided standard normal quantile for a confidence level."""
    if not 0.0 < confidence < 1.0:
        raise DomainError(f"confidence must lie in (0, 1), got {confidence}")
    return float(norm.ppf(0.5 + 0.5 * confidence))


@dataclass(frozen=True)
class QueueParams:
    """Brownian storage queue drained at rate ``c``.

    The stationary workload is exponential with rate ``2c``.
    """

    c: float

    def __post_init__(self):
        c = float(self.c)
        if not math.isfinite(c) or c <= 0.0:
            raise NonPositiveDrainRate(f"drain rate must be > 0, got {self.c!r}")
        object.__setattr__(self, "c", c)

    @property
    def stationary_rate(self) -> float:
        return 2.0 * self.c

    @property
    def stationary_mean(self) -> float:
        return 1.0 / (2.0 * self.c)


def validate_params(c: float) -> QueueParams:
    """Build :class:`QueueParams`, rejecting ``c <= 0``."""
    return QueueParams(c)


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise DomainError("path values must be one-dimensional")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class GridPath:
    """Samples ``values[k] = f(t0 + k*h)`` of a path on a uniform grid."""

    t0: float
    h: float
    values: np.ndarray

    def __post_init__(self):
        h = float(self.h)
        if not math.isfinite(h) or h <= 0.0:
            raise DomainError(f"grid step must be > 0, got {self.h!r}")
        values = _frozen_array(self.values)
        if values.size == 0:
            raise DomainError("a grid path needs at least one sample")
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, GridPath):
            return NotImplemented
        return (self.t0 == other.t0 and self.h == other.h
                and np.array_equal(self.values, other.values))

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.h * np.arange(self.values.size)

    @property
    def length(self) -> float:
        """Length of the covered interval, ``(len - 1) * h``."""
        return (self.values.size - 1) * self.h

    @classmethod
    def from_samples(cls, times, values) -> "GridPath":
        """Build from explicit sample times; non-uniform grids are rejected."""
        t = np.asarray(times, dtype=float)
        v = np.asarray(values, dtype=float)
        if t.shape != v.shape or t.ndim != 1 or t.size == 0:
            raise DomainError("times and values must be equal-length 1-D arrays")
        if t.size == 1:
            return cls(t[0], 1.0, v)
        steps = np.diff(t)
        h = (t[-1] - t[0]) / (t.size - 1)
        if h <= 0 or np.max(np.abs(steps - h)) > _UNIFORM_RTOL * max(1.0, abs(h), abs(t[-1])):
            raise DomainError("sample times must form an increasing uniform grid")
        return cls(t[0], h, v)

    @classmethod
    def from_function(cls, f, t0: float, t1: float, n: int) -> "GridPath":
        """Sample ``f`` at ``n`` equally spaced points on ``[t0, t1]``."""
        if n < 2:
            raise DomainError("need at least two grid points")
        t = np.linspace(t0, t1, n)
        return cls(t0, (t1 - t0) / (n - 1), np.asarray(f(t), dtype=float))

    def to_csv(self, path=None) -> str:
        """CSV with columns ``t,value``; 17 significant digits."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "value"])
        for t, v in zip(self.times, self.values):
            w.writerow([f"{t:.17g}", f"{v:.17g}"])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, source) -> "GridPath":
        text = _read_text(source)
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls.from_samples([float(r["t"]) for r in rows],
                                [float(r["value"]) for r in rows])

    def to_json(self) -> str:
        return json.dumps({"t0": self.t0, "h": self.h, "values": self.values.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "GridPath":
        d = json.loads(text)
        return cls(d["t0"], d["h"], d["values"])


def _read_text(source) -> str:
    if isinstance(source, Path):
        return source.read_text()
    if isinstance(source, str) and "\n" not in source and Path(source).exists():
        return Path(source).read_text()
    return source


def trapezoid_area(grid: GridPath) -> float:
    """Trapezoidal integral of the grid path; exact for piecewise-linear paths."""
    v = grid.values
    if v.size < 2:
        return 0.0
    return float(grid.h * (v.sum() - 0.5 * (v[0] + v[-1])))


@dataclass(frozen=True)
class CycleRecord:
    """One surrogate busy period: up-crossing of ``2*delta`` to down-crossing of ``delta``."""

    sigma: float
    tau: float
    area: float
    xi: float

    def __post_init__(self):
        if not self.sigma < self.tau:
            raise DomainError("cycle must end after it starts")


def cycles_to_csv(cycles, path=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["sigma", "tau", "H", "xi"])
    for cyc in cycles:
        w.writerow([f"{cyc.sigma:.17g}", f"{cyc.tau:.17g}", f"{cyc.area:.17g}", f"{cyc.xi:.17g}"])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


@dataclass(frozen=True, eq=False)
class WorkloadTrace:
    """A reflected workload realisation on a uniform grid."""

    params: QueueParams
    grid: GridPath
    area: float
    hit_zero_at: float | None = None
    cycles: tuple = ()

    def __post_init__(self):
        if np.any(self.grid.values < 0.0):
            raise DomainError("workload values must be nonnegative")
        object.__setattr__(self, "cycles", tuple(self.cycles))

    def to_csv(self, path=None) -> str:
        """CSV with columns ``t,Q``."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "Q"])
        for t, q in zip(self.grid.times, self.grid.values):
            w.writerow([f"{t:.17g}", f"{q:.17g}"])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text


class Branch(str, enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class RateResult:
    """Decay rate together with the minimising start level and duration."""

    value: float
    a_star: float
    s_star: float
    branch: Branch

    def to_dict(self) -> dict:
        return {"phi": self.value, "branch": self.branch.value,
                "s_star": self.s_star, "a_star": self.a_star}


@dataclass(frozen=True)
class EstimatorReport:
    """Monte Carlo estimate with its confidence interval.

    ``std_error`` is defined so that ``(ci_high - ci_low) / 2 == z * std_error``;
    for proportions the interval is Wilson's, so ``std_error`` is the Wilson
    half-width divided by ``z``.
    """

    estimate: float
    std_error: float
    ci_low: float
    ci_high: float
    n_replications: int
    seed: int
    wall_time: float
    confidence: float = DEFAULT_CONFIDENCE
    hits: int | None = None
    zero_hits: bool = False
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.n_replications < 1:
            raise DomainError("need at least one replication")
        if self.std_error < 0:
            raise DomainError("standard error must be nonnegative")
        # tolerate last-bit rounding of the interval ends
        slack = 1e-12 * max(1.0, abs(self.estimate))
        if not (self.ci_low - slack <= self.estimate <= self.ci_high + slack):
            raise DomainError("estimate must lie inside its confidence interval")

    @property
    def half_width(self) -> float:
        return 0.5 * (self.ci_high - self.ci_low)

    def overlaps(self, other: "EstimatorReport") -> bool:
        return self.ci_low <= other.ci_high and other.ci_low <= self.ci_high

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "EstimatorReport":
        return cls(**json.loads(text))

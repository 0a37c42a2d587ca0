"""
Sample paths of the reflected Brownian workload.

Two stepping schemes are available.  The Lindley/Euler scheme reflects the
grid increments, ``q' = max(q + dB - c h, 0)``.  The exact scheme samples the
drifted increment ``w`` together with the running maximum ``m`` of the
time-reversed increment process and sets ``q' = max(q + w, m)``; the grid
values are then an exact skeleton of the continuous-time process.

Visits to zero between grid points are detected with the Brownian-bridge
crossing probability ``exp(-2 q_k q_{k+1} / h)``.  In exact mode the crossing
indicator follows from the joint ``(w, m)`` draw, which has the same law.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import _kernels, rng as _rng
from .errors import DomainError, HorizonExceeded
from .model import CycleRecord, GridPath, QueueParams, WorkloadTrace, trapezoid_area

# batch lanes keep the streams of unrelated batch jobs apart
LANE_AREA = 1
LANE_BUSY = 2


@dataclass(frozen=True)
class SimConfig:
    """Grid and stream settings for one simulation job.

    ``stream_index`` selects the stream of a single trace; batched jobs derive
    their block streams from ``seed`` alone.  ``time_cap`` bounds first-passage
    runs and defaults to ``1e4 / c``.
    """

    h: float
    horizon: float
    seed: int = 0
    stream_index: int = 0
    use_exact_step: bool = True
    use_bridge_correction: bool = True
    time_cap: float | None = None

    def __post_init__(self):
        if not (self.h > 0 and math.isfinite(self.h)):
            raise DomainError(f"step must be > 0, got {self.h}")
        if not self.h <= self.horizon:
            raise DomainError("step must not exceed the horizon")
        if self.stream_index < 0:
            raise DomainError("stream index must be nonnegative")
        if not 0 <= self.seed < 1 << 64:
            raise DomainError("seed must be a 64-bit unsigned integer")

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.horizon / self.h)))

    @property
    def step(self) -> float:
        """Effective step ``horizon / n_steps`` (equal to ``h`` when it divides)."""
        return self.horizon / self.n_steps

    def cap_steps(self, params: QueueParams, h: float | None = None) -> int:
        cap = self.time_cap if self.time_cap is not None else 1e4 / params.c
        return int(math.ceil(cap / (h or self.h)))

    def replace(self, **changes) -> "SimConfig":
        d = asdict(self)
        d.update(changes)
        return SimConfig(**d)

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_dict(cls, d: dict) -> "SimConfig":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise DomainError(f"unknown SimConfig fields: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, source) -> "SimConfig":
        text = Path(source).read_text() if isinstance(source, Path) else source
        if isinstance(text, str) and not text.lstrip().startswith("{"):
            text = Path(text).read_text()
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class FirstPassageSample:
    """Hitting time of zero and the area swept before it."""

    tau: float
    area: float

    def __post_init__(self):
        if self.tau < 0 or self.area < 0:
            raise DomainError("hitting time and area must be nonnegative")


def stationary_q0_from_uniform(u: float, params: QueueParams) -> float:
    """Inverse CDF of the stationary law ``Exp(2c)`` at ``u`` in ``(0, 1]``."""
    if not 0.0 < u <= 1.0:
        raise DomainError("uniform input must lie in (0, 1]")
    return -math.log(u) / (2.0 * params.c)


def sample_stationary_q0(params: QueueParams, rng: np.random.Generator) -> float:
    """One draw of the stationary workload by inversion."""
    return stationary_q0_from_uniform(1.0 - rng.random(), params)


def reflect_step(q, params, h, z, u, exact=True, bridge=True):
    """Deterministic step given the normal draw ``z`` and uniform ``u``.

    Returns ``(q_next, hit)``.
    """
    if q < 0:
        raise DomainError("workload must be nonnegative")
    q_next, _free, hit = _kernels.reflect_step(float(q), params.c, 1.0, float(h),
                                               float(z), float(u), bool(exact), bool(bridge))
    return q_next, bool(hit)


def step_workload(q: float, params: QueueParams, h: float,
                  rng: np.random.Generator, exact: bool = True) -> float:
    """Advance the workload by one step of length ``h``."""
    z = rng.standard_normal()
    u = rng.random()
    return reflect_step(q, params, h, z, u, exact)[0]


def simulate_trace(params: QueueParams, config: SimConfig, q0: float,
                   draws: tuple | None = None, delta: float | None = None) -> WorkloadTrace:
    """Simulate the workload on ``[0, horizon]`` started at ``q0``.

    ``draws`` may supply the ``(z, u)`` arrays explicitly, e.g. a degenerate
    zero-noise stream.  When ``delta`` is given the trace carries its cycle
    decomposition.
    """
    if q0 < 0:
        raise DomainError("initial workload must be nonnegative")
    n = config.n_steps
    h = config.step
    if draws is None:
        g = _rng.generator(config.seed, config.stream_index)
        z = g.standard_normal(n)
        u = g.random(n)
    else:
        z = np.ascontiguousarray(draws[0], dtype=float)
        u = np.ascontiguousarray(draws[1], dtype=float)
        if z.shape != (n,) or u.shape != (n,):
            raise DomainError(f"need {n} draws of each kind")
    out = np.empty(n + 1)
    hit = _kernels.trace_from_draws(float(q0), params.c, h, z, u,
                                    config.use_exact_step, config.use_bridge_correction, out)
    grid = GridPath(0.0, h, out)
    trace = WorkloadTrace(params, grid, trapezoid_area(grid), None if hit < 0 else hit)
    if delta is not None:
        trace = WorkloadTrace(params, grid, trace.area, trace.hit_zero_at,
                              decompose_cycles(trace, delta))
    return trace


def decompose_cycles(trace: WorkloadTrace, delta: float) -> list[CycleRecord]:
    """Split a trace into up-crossings of ``2 delta`` followed by down-crossings of ``delta``.

    Scanning starts at the end of the initial busy period (time 0 if the trace
    starts empty).  Crossings are located at the first grid point satisfying
    the inequality; only completed cycles are reported.
    """
    if not delta > 0:
        raise DomainError("delta must be positive")
    v = trace.grid.values
    h = trace.grid.h
    t0 = trace.grid.t0
    if v[0] <= 0.0:
        k = 0
    elif trace.hit_zero_at is not None:
        k = int(math.ceil((trace.hit_zero_at - t0) / h - 1e-12))
    else:
        return []
    cycles = []
    n = v.size
    while k < n:
        up = np.flatnonzero(v[k + 1:] >= 2 * delta)
        if up.size == 0:
            break
        i = k + 1 + up[0]
        down = np.flatnonzero(v[i + 1:] <= delta)
        if down.size == 0:
            break
        j = i + 1 + down[0]
        seg = v[i:j + 1]
        area = float(h * (seg.sum() - 0.5 * (seg[0] + seg[-1])))
        cycles.append(CycleRecord(t0 + i * h, t0 + j * h, area, (j - i) * h))
        k = j
    return cycles


# ---------------------------------------------------------------- batches

def area_samples(params: QueueParams, h: float, horizon: float, n: int, seed: int,
                 exact: bool = True, q0: float | None = None, drivers: int = 1,
                 threads: int | None = None, lane: int = LANE_AREA):
    """Areas over ``[0, horizon]`` and terminal workloads for ``n`` replications.

    ``q0=None`` starts each replication from the stationary law of the
    (possibly averaged) input.  Returns ``(area, last)`` arrays.
    """
    if n < 1:
        raise DomainError("need at least one replication")
    nsteps = max(1, int(round(horizon / h)))
    step = horizon / nsteps
    start = -1.0 if q0 is None else float(q0)
    area = np.empty(n)
    last = np.empty(n)

    def run(b, lo, size):
        g = _rng.generator(seed, lane, drivers, b)
        _kernels.area_block(g, size, params.c, step, nsteps, int(drivers), bool(exact),
                            start, area[lo:lo + size], last[lo:lo + size])

    _rng.map_blocks(run, n, threads)
    return area, last


def busy_period_samples(params: QueueParams, h: float, n: int, seed: int,
                        x0: float | None = None, bridge: bool = True,
                        time_cap: float | None = None, threads: int | None = None):
    """First-passage times and areas of the free process for ``n`` replications.

    ``x0=None`` draws the start from the stationary law (residual busy
    periods); otherwise every replication starts at ``x0``.  Censored
    replications are NaN.  Returns ``(tau, area)``.
    """
    if n < 1:
        raise DomainError("need at least one replication")
    if x0 is not None and x0 < 0:
        raise DomainError("start level must be nonnegative")
    cap = time_cap if time_cap is not None else 1e4 / params.c
    cap_steps = int(math.ceil(cap / h))
    start = -1.0 if x0 is None else float(x0)
    tau = np.empty(n)
    area = np.empty(n)
    # fixed starts get their own key so streams do not depend on x0
    key = 0 if x0 is None else 1

    def run(b, lo, size):
        g = _rng.generator(seed, LANE_BUSY, key, b)
        _kernels.first_passage_block(g, size, params.c, h, start, cap_steps, bool(bridge),
                                     tau[lo:lo + size], area[lo:lo + size])

    _rng.map_blocks(run, n, threads)
    return tau, area


def _single_first_passage(params, config, x0):
    g = _rng.generator(config.seed, config.stream_index)
    tau = np.empty(1)
    area = np.empty(1)
    _kernels.first_passage_block(g, 1, params.c, config.h, -1.0 if x0 is None else float(x0),
                                 config.cap_steps(params), config.use_bridge_correction,
                                 tau, area)
    if np.isnan(tau[0]):
        raise HorizonExceeded("zero not reached before the time cap")
    return FirstPassageSample(float(tau[0]), float(area[0]))


def sample_residual_busy_area(params: QueueParams, config: SimConfig) -> FirstPassageSample:
    """Residual busy period and its area from a stationary start.

    Before the first visit to zero the workload is the free process
    ``Q(0) + B(t) - c t``.  Raises :class:`HorizonExceeded` when the cap is hit.
    """
    return _single_first_passage(params, config, None)


def sample_first_passage(x: float, params: QueueParams, config: SimConfig) -> FirstPassageSample:
    """Hitting time ``tau(x)`` and area ``J(x)`` from a fixed level ``x``."""
    if x < 0:
        raise DomainError("start level must be nonnegative")
    return _single_first_passage(params, config, x)

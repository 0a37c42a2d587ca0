"""
Monte Carlo experiments that confront simulation with the closed forms.

Work is split into fixed-size blocks with their own counter-based streams
(see :mod:`brownian_storage.rng`); block results are combined in block order,
so reports do not depend on the number of threads.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import laplace
from .asymptotics import phi_M, phi_TM, theorem1_asymptotic
from .errors import DomainError, InfeasibleGrid
from .model import DEFAULT_CONFIDENCE, EstimatorReport, QueueParams, z_value
from .rng import generator
from .simulation import SimConfig, area_samples, busy_period_samples


LANE_LEMMA1 = 3


class Regime(str, enum.Enum):
    SHORT = "Short"
    INTERMEDIATE = "Intermediate"
    LONG = "Long"
    BUSY_PERIOD = "BusyPeriod"
    SCALING = "Scaling"


@dataclass(frozen=True)
class Target:
    """Reference value with either a relative-error or a CI-multiple tolerance."""

    label: str
    reference: float
    rel_tol: float | None = None
    ci_multiple: float | None = None

    def __post_init__(self):
        if (self.rel_tol is None) == (self.ci_multiple is None):
            raise DomainError("give exactly one of rel_tol and ci_multiple")

    def check(self, report: EstimatorReport) -> bool:
        if self.rel_tol is not None:
            return abs(report.estimate - self.reference) <= self.rel_tol * abs(self.reference)
        return abs(report.estimate - self.reference) <= self.ci_multiple * report.half_width


@dataclass(frozen=True)
class Experiment:
    name: str
    params: QueueParams
    sim: SimConfig
    targets: tuple = ()
    regime: Regime = Regime.BUSY_PERIOD
    settings: dict = field(default_factory=dict)


@dataclass(frozen=True)
class HorizonRule:
    """``T(u) = scale * u ** exponent``."""

    scale: float = 1.0
    exponent: float = 0.0

    def __call__(self, u: float) -> float:
        return self.scale * u ** self.exponent


# ------------------------------------------------------------ estimators

def wilson_report(hits: int, n: int, seed: int, wall_time: float = 0.0,
                  confidence: float = DEFAULT_CONFIDENCE) -> EstimatorReport:
    """Proportion ``hits / n`` with a Wilson score interval."""
    z = z_value(confidence)
    p = hits / n
    denom = 1.0 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    lo = max(0.0, min(p, centre - half))
    hi = min(1.0, max(p, centre + half))
    return EstimatorReport(p, (hi - lo) / (2 * z), lo, hi, n, seed, wall_time, confidence,
                           hits=int(hits), zero_hits=hits == 0)


def mean_report(samples, seed: int, wall_time: float = 0.0,
                confidence: float = DEFAULT_CONFIDENCE, **extra) -> EstimatorReport:
    """Sample mean with a normal-theory interval."""
    x = np.asarray(samples, dtype=float)
    n = x.size
    mean = float(x.mean())
    se = float(x.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    z = z_value(confidence)
    return EstimatorReport(mean, se, mean - z * se, mean + z * se, n, seed, wall_time,
                           confidence, extra=extra)


def _uncensored(*arrays):
    keep = ~np.isnan(arrays[0])
    return keep, [a[keep] for a in arrays]


# ------------------------------------------------------------ tail probabilities

def estimate_pi(params: QueueParams, T_of_u, u: float, sim: SimConfig, n: int,
                threads: int | None = None) -> EstimatorReport:
    """Estimate ``P(int_0^{T(u)} Q(r) dr > u)`` from ``n`` stationary replications.

    ``T_of_u`` is a callable (e.g. :class:`HorizonRule`) or a constant.  The
    grid step is ``sim.h`` (shortened slightly when it does not divide
    ``T(u)``).  When nothing hits, ``zero_hits`` is set and ``ci_high`` is the
    only informative number.
    """
    if u < 0:
        raise DomainError("threshold must be nonnegative")
    horizon = T_of_u(u) if callable(T_of_u) else float(T_of_u)
    if not horizon > 0:
        raise DomainError("horizon must be positive")
    t0 = time.perf_counter()
    area, _ = area_samples(params, min(sim.h, horizon), horizon, n, sim.seed,
                           exact=sim.use_exact_step, threads=threads)
    hits = int(np.count_nonzero(area > u))
    return wilson_report(hits, n, sim.seed, time.perf_counter() - t0)


def lemma1_event_mc(params: QueueParams, u: float, T: float, n: int, seed: int,
                    confidence: float = DEFAULT_CONFIDENCE) -> EstimatorReport:
    """Plain MC of ``P(T Q(0) + T^{3/2} N / sqrt(3) > u + c T^2 / 2)``."""
    t0 = time.perf_counter()
    g = generator(seed, LANE_LEMMA1, 0)
    q0 = g.exponential(1.0 / (2.0 * params.c), n)
    z = g.standard_normal(n)
    hits = int(np.count_nonzero(T * q0 + T ** 1.5 / math.sqrt(3.0) * z > u + 0.5 * params.c * T * T))
    return wilson_report(hits, n, seed, time.perf_counter() - t0, confidence)


def scaling_check(params: QueueParams, T: float, M: float, n_superpose: int, sim: SimConfig,
                  n_reps: int, threads: int | None = None):
    """Both sides of the many-sources scaling identity.

    Left: the workload fed by the average of ``n_superpose`` independent
    Brownian motions, area over ``[0, T]`` above ``M``, simulated with one
    normal draw per driver per step.  Right: a single queue over
    ``[0, T n]`` above ``M n^2``, with step ``h n`` so both sides use the same
    number of steps.  The two sides use disjoint streams.
    """
    if n_superpose < 1:
        raise DomainError("n_superpose must be >= 1")
    n = int(n_superpose)
    t0 = time.perf_counter()
    left_area, _ = area_samples(params, sim.h, T, n_reps, sim.seed, exact=sim.use_exact_step,
                                drivers=n, threads=threads)
    left = wilson_report(int(np.count_nonzero(left_area > M)), n_reps, sim.seed,
                         time.perf_counter() - t0)
    t0 = time.perf_counter()
    right_area, _ = area_samples(params, sim.h * n, T * n, n_reps, sim.seed + 1,
                                 exact=sim.use_exact_step, threads=threads)
    right = wilson_report(int(np.count_nonzero(right_area > M * n * n)), n_reps, sim.seed + 1,
                          time.perf_counter() - t0)
    return left, right


# ------------------------------------------------------------ regime studies

@dataclass(frozen=True)
class RegimeRow:
    u: float
    horizon: float
    h: float
    report: EstimatorReport
    rate: float
    target: float

    @property
    def rel_gap(self) -> float:
        return abs(self.rate - self.target) / self.target


@dataclass(frozen=True)
class RegimeTable:
    regime: Regime
    M: float
    target: float
    rows: tuple

    def rates(self):
        return [r.rate for r in self.rows]

    def increasing(self) -> bool:
        r = self.rates()
        return all(b > a for a, b in zip(r, r[1:]))

    def final_gap(self) -> float:
        return self.rows[-1].rel_gap

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["u", "T_u", "h", "n", "hits", "pi_hat", "ci_low", "ci_high",
                    "rate_hat", "target", "rel_gap"])
        for r in self.rows:
            rep = r.report
            w.writerow([f"{x:.10g}" if isinstance(x, float) else x for x in (
                r.u, r.horizon, r.h, rep.n_replications, rep.hits, rep.estimate, rep.ci_low,
                rep.ci_high, r.rate, r.target, r.rel_gap)])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text


def _predicted_probability(u_done, pi_done, u, target):
    """Log-linear extrapolation in sqrt(u) from the last two estimates, else exp(-target sqrt(u))."""
    pts = [(math.sqrt(a), math.log(p)) for a, p in zip(u_done, pi_done) if p > 0]
    if len(pts) >= 2:
        (x1, y1), (x2, y2) = pts[-2:]
        slope = (y2 - y1) / (x2 - x1)
        return math.exp(y2 + slope * (math.sqrt(u) - x2))
    return math.exp(-target * math.sqrt(u))


def regime_study(params: QueueParams, M: float, regime: Regime, u_grid, sim: SimConfig, n: int,
                 T: float | None = None, exponent: float = 0.75, min_hits: int = 20,
                 threads: int | None = None, progress=None) -> RegimeTable:
    """Trend of ``-log(pi_hat) / sqrt(u)`` against the limiting decay rate.

    Intermediate: ``T(u) = T sqrt(u)``, target ``phi(T, M)``.  Long:
    ``T(u) = u ** exponent``, target ``phi(M)``.  The event is
    ``int_0^{T(u)} Q > M u``.  The step at threshold ``u`` is
    ``sim.h * sqrt(u)``, i.e. ``sim.h`` is measured on the natural
    ``sqrt(u)`` time scale.

    Before each grid point the hit count is predicted (from the last two
    estimates once available); :class:`InfeasibleGrid` is raised when fewer
    than ``min_hits`` are expected, or observed after the run.  The partial
    table of accepted rows is attached to the exception as ``.table``.
    """
    regime = Regime(regime)
    u_grid = [float(u) for u in u_grid]
    if any(b <= a for a, b in zip(u_grid, u_grid[1:])):
        raise DomainError("u grid must be increasing")
    if regime is Regime.INTERMEDIATE:
        if T is None:
            raise DomainError("intermediate regime needs T")
        target = phi_TM(T, M, params).value
        rule = HorizonRule(T, 0.5)
    elif regime is Regime.LONG:
        target = phi_M(M, params)
        rule = HorizonRule(1.0, exponent)
    else:
        raise DomainError("regime_study covers the Intermediate and Long regimes")
    rows = []
    for u in u_grid:
        done = [r.report for r in rows]
        p_pred = _predicted_probability([r.u for r in rows], [d.estimate for d in done], u, target)
        if n * p_pred < min_hits:
            err = InfeasibleGrid(f"expected {n * p_pred:.3g} hits at u={u:g} with n={n}")
            err.table = RegimeTable(regime, M, target, tuple(rows))
            raise err
        horizon = rule(u)
        h = min(sim.h * math.sqrt(u), horizon)
        rep = estimate_pi(params, horizon, M * u, sim.replace(h=h, horizon=horizon), n, threads)
        rate = -math.log(rep.estimate) / math.sqrt(u) if rep.hits else math.inf
        row = RegimeRow(u, horizon, h, rep, rate, target)
        if rep.hits < min_hits:
            # the prediction was optimistic; the point is not usable either
            err = InfeasibleGrid(f"observed {rep.hits} hits at u={u:g} with n={n}")
            err.table = RegimeTable(regime, M, target, tuple(rows))
            err.rejected = row
            raise err
        rows.append(row)
        if progress:
            progress(rows[-1])
    return RegimeTable(regime, M, target, tuple(rows))


# ------------------------------------------------------------ busy periods

@dataclass(frozen=True)
class TargetCheck:
    target: Target
    report: EstimatorReport
    passed: bool


@dataclass(frozen=True)
class BusyPeriodReport:
    checks: tuple
    censored: int

    @property
    def passed(self) -> bool:
        return all(ch.passed for ch in self.checks)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "censored": self.censored,
                "checks": [{"label": ch.target.label, "reference": ch.target.reference,
                            "passed": ch.passed, **ch.report.to_dict()} for ch in self.checks]}


def busy_period_suite(params: QueueParams, sim: SimConfig, n: int, x_grid=(0.5, 1.0, 2.0),
                      gamma_grid=(1.0,), rel_tol: float = 0.05, ci_multiple: float = 3.0,
                      threads: int | None = None) -> BusyPeriodReport:
    """Compare busy-period simulation with the closed forms.

    Checks the mean residual-busy-period area (``1/(2c^3)``), ``E J(x)`` on
    ``x_grid`` (relative tolerance) and ``E exp(-gamma * area)`` on
    ``gamma_grid`` against the stationary transform (CI multiple).
    """
    if n < 10_000:
        raise DomainError("busy_period_suite needs n >= 1e4")
    checks = []
    censored = 0
    t0 = time.perf_counter()
    tau, area = busy_period_samples(params, sim.h, n, sim.seed, bridge=sim.use_bridge_correction,
                                    time_cap=sim.time_cap, threads=threads)
    keep, (area_ok,) = _uncensored(area)
    censored += int((~keep).sum())
    wall = time.perf_counter() - t0
    tgt = Target("mean residual busy area", laplace.mean_stationary_area(params), rel_tol=rel_tol)
    rep = mean_report(area_ok, sim.seed, wall)
    checks.append(TargetCheck(tgt, rep, tgt.check(rep)))
    for g in gamma_grid:
        tgt = Target(f"E exp(-{g:g} area)", laplace.stationary_lt(g, params),
                     ci_multiple=ci_multiple)
        rep = mean_report(np.exp(-g * area_ok), sim.seed, wall)
        checks.append(TargetCheck(tgt, rep, tgt.check(rep)))
    for x in x_grid:
        t0 = time.perf_counter()
        _tau, jx = busy_period_samples(params, sim.h, n, sim.seed, x0=x,
                                       bridge=sim.use_bridge_correction,
                                       time_cap=sim.time_cap, threads=threads)
        keep, (jx_ok,) = _uncensored(jx)
        censored += int((~keep).sum())
        tgt = Target(f"E J({x:g})", laplace.mean_transient_area(x, params), rel_tol=rel_tol)
        rep = mean_report(jx_ok, sim.seed, time.perf_counter() - t0)
        checks.append(TargetCheck(tgt, rep, tgt.check(rep)))
    return BusyPeriodReport(tuple(checks), censored)


# ------------------------------------------------------------ experiment files

def load_experiments(source) -> list[dict]:
    """Read an experiment file: one JSON object or a list of them."""
    text = Path(source).read_text() if not str(source).lstrip().startswith(("{", "[")) else source
    data = json.loads(text)
    return data if isinstance(data, list) else [data]


def run_experiment(spec: dict, out_dir=None, threads: int | None = None) -> dict:
    """Run one experiment description and optionally write ``<name>.json`` / ``<name>.csv``.

    Keys: ``name``, ``regime``, ``params`` ({"c": ...}), ``sim`` (SimConfig
    fields), ``n``, optional ``seed`` (overrides ``sim.seed``), plus per-regime
    keys: ``M``, ``T``, ``exponent``, ``u_grid`` for Intermediate/Long;
    ``x_grid``, ``gamma_grid`` for BusyPeriod; ``u``, ``T`` for Short;
    ``T``, ``M``, ``n_superpose`` for Scaling.
    """
    name = spec["name"]
    regime = Regime(spec["regime"])
    params = QueueParams(spec["params"]["c"])
    sim_d = dict(spec.get("sim", {}))
    if "seed" in spec:
        sim_d["seed"] = spec["seed"]
    sim_d.setdefault("horizon", max(sim_d.get("h", 0.01), 1.0))
    sim = SimConfig.from_dict(sim_d)
    n = int(spec["n"])
    table_csv = None
    if regime in (Regime.INTERMEDIATE, Regime.LONG):
        try:
            table = regime_study(params, spec["M"], regime, spec["u_grid"], sim, n,
                                 T=spec.get("T"), exponent=spec.get("exponent", 0.75),
                                 threads=threads)
            infeasible = None
        except InfeasibleGrid as exc:
            table, infeasible = exc.table, str(exc)
        result = {"target": table.target, "increasing": table.increasing(),
                  "final_rel_gap": table.final_gap() if table.rows else None,
                  "infeasible": infeasible,
                  "rows": [{"u": r.u, "rate": r.rate, **r.report.to_dict()} for r in table.rows]}
        table_csv = table.to_csv()
    elif regime is Regime.BUSY_PERIOD:
        rep = busy_period_suite(params, sim, n, spec.get("x_grid", (0.5, 1.0, 2.0)),
                                spec.get("gamma_grid", (1.0,)), threads=threads)
        result = rep.to_dict()
    elif regime is Regime.SHORT:
        u, T = float(spec["u"]), float(spec["T"])
        rep = estimate_pi(params, T, u, sim, n, threads)
        asym = theorem1_asymptotic(u, T, params)
        result = {"asymptotic": asym, "ratio": rep.estimate / asym, **rep.to_dict()}
    else:
        left, right = scaling_check(params, spec["T"], spec["M"], spec["n_superpose"], sim, n,
                                    threads)
        result = {"left": left.to_dict(), "right": right.to_dict(),
                  "overlap": left.overlaps(right)}
    report = {"name": name, "regime": regime.value, "params": asdict(params),
              "sim": asdict(sim), "n": n, "result": result}
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{name}.json").write_text(json.dumps(report, indent=2))
        if table_csv is not None:
            (out / f"{name}.csv").write_text(table_csv)
    return report

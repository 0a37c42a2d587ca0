"""
Acceptance suite: each criterion as a function returning a :class:`CriterionResult`.

``quick=True`` shrinks replication counts for a smoke run; the stated
tolerances are never relaxed.  Monte Carlo seeds are fixed offsets from a
base seed, so a run is reproducible.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, stats

from . import airy, asymptotics, harness, laplace, variational
from .errors import InfeasibleGrid
from .model import QueueParams
from .simulation import SimConfig, area_samples, busy_period_samples

BUSY_H = 1e-4


@dataclass(frozen=True)
class CriterionResult:
    key: str
    title: str
    passed: bool
    summary: str
    wall_time: float = 0.0
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.key:>3}  {self.title}: {self.summary} ({self.wall_time:.1f}s)"


class _Context:
    """Run settings plus a cache so criteria can share busy-period samples."""

    def __init__(self, quick: bool, seed: int, threads):
        self.quick = quick
        self.seed = seed
        self.threads = threads
        self._busy = {}

    def n(self, full: int, quick: int) -> int:
        return quick if self.quick else full

    def busy(self, params: QueueParams, n: int, x0=None):
        key = (params.c, n, x0)
        if key not in self._busy:
            self._busy[key] = busy_period_samples(params, BUSY_H, n, self.seed + 2, x0=x0,
                                                  threads=self.threads)
        return self._busy[key]


def _uncensored(a):
    return a[~np.isnan(a)]


def stationary_law(ctx: _Context) -> CriterionResult:
    params = QueueParams(1.0)
    n = ctx.n(100_000, 20_000)
    # the exact step makes h irrelevant; 20 time units of warm-in from empty
    _, last = area_samples(params, 0.1, 20.0, n, ctx.seed + 1, exact=True, q0=0.0,
                           threads=ctx.threads)
    ks = stats.kstest(last, "expon", args=(0.0, 0.5))
    rep = harness.wilson_report(int(np.count_nonzero(last > 1.0)), n, ctx.seed + 1)
    target = harness.Target("P(Q>1)", math.exp(-2.0), ci_multiple=3.0)
    ok = ks.pvalue >= 0.01 and target.check(rep)
    return CriterionResult("1", "stationary law Exp(2c)", ok,
                           f"KS p={ks.pvalue:.3g}, P(Q>1)={rep.estimate:.5f} vs {math.exp(-2):.5f}"
                           f" +- {rep.half_width:.5f}",
                           detail={"ks_pvalue": ks.pvalue, "report": rep.to_dict()})


def busy_area_mean(ctx: _Context) -> CriterionResult:
    params = QueueParams(1.0)
    _tau, area = ctx.busy(params, ctx.n(100_000, 20_000))
    rep = harness.mean_report(_uncensored(area), ctx.seed + 2)
    target = harness.Target("mean residual busy area", 0.5, rel_tol=0.05)
    return CriterionResult("2", "mean residual busy-period area 1/(2c^3)", target.check(rep),
                           f"{rep.estimate:.5f} vs 0.5 (5%)", detail={"report": rep.to_dict()})


def transient_area_mean(ctx: _Context) -> CriterionResult:
    params = QueueParams(1.0)
    n = ctx.n(100_000, 20_000)
    parts, ok, detail = [], True, {}
    for x in (0.5, 1.0, 2.0):
        _tau, jx = ctx.busy(params, n, x)
        rep = harness.mean_report(_uncensored(jx), ctx.seed + 2)
        ref = laplace.mean_transient_area(x, params)
        good = harness.Target(f"E J({x})", ref, rel_tol=0.05).check(rep)
        ok &= good
        parts.append(f"J({x:g})={rep.estimate:.4f}/{ref:g}")
        detail[str(x)] = rep.to_dict()
    return CriterionResult("3", "mean J(x) = x^2/(2c) + x/(2c^2)", ok, ", ".join(parts),
                           detail=detail)


def psi_oracle(ctx: _Context) -> CriterionResult:
    rng = np.random.default_rng(ctx.seed + 4)
    worst = 0.0
    for c, T, M in rng.uniform(0.2, 5.0, size=(100, 3)):
        p = QueueParams(float(c))
        num = variational.minimize_psi_numeric(T, M, p).value
        closed = asymptotics.minimize_psi_closed_form(T, M, p).value
        worst = max(worst, abs(num - closed))
    return CriterionResult("4", "numeric psi minimiser vs closed form", worst <= 1e-7,
                           f"max |diff| = {worst:.2e} over 100 triples (1e-7)",
                           detail={"max_abs_diff": worst})


def rate_identity(ctx: _Context) -> CriterionResult:
    rng = np.random.default_rng(ctx.seed + 5)
    worst, branches = 0.0, set()
    for i in range(20):
        c, M = rng.uniform(0.2, 5.0, size=2)
        s_free = math.sqrt(6.0 * M / c)
        # alternate branches: T beyond or short of sqrt(6M/c)
        T = s_free * (rng.uniform(1.1, 3.0) if i % 2 == 0 else rng.uniform(0.2, 0.9))
        p = QueueParams(float(c))
        mlp = variational.most_likely_path(T, M, p, 100_000)
        lhs = variational.rate_functional(mlp.grid) + 2.0 * mlp.a_star * c
        res = asymptotics.phi_TM(T, M, p)
        branches.add(res.branch)
        worst = max(worst, abs(lhs - res.value))
    ok = worst <= 1e-5 and len(branches) == 2
    return CriterionResult("5", "I(f*) + 2a*c = phi(T,M)", ok,
                           f"max |diff| = {worst:.2e} over 20 triples, both branches (1e-5)",
                           detail={"max_abs_diff": worst})


def lemma1(ctx: _Context) -> CriterionResult:
    params = QueueParams(1.0)
    exact = asymptotics.lemma1_exact_probability(0.5, 1.0, params)
    rep = harness.lemma1_event_mc(params, 0.5, 1.0, ctx.n(1_000_000, 1_000_000), ctx.seed + 6)
    mc_ok = harness.Target("lemma1", exact, ci_multiple=3.0).check(rep)
    ratios = [asymptotics.lemma1_exact_probability(u, u ** 0.3, params)
              / asymptotics.theorem1_asymptotic(u, u ** 0.3, params) for u in (10.0, 20.0, 40.0)]
    gaps = [abs(r - 1.0) for r in ratios]
    trend_ok = all(b <= a for a, b in zip(gaps, gaps[1:])) and 0.9 <= ratios[-1] <= 1.1
    return CriterionResult("6", "exact Gaussian-plus-exponential tail", mc_ok and trend_ok,
                           f"closed {exact:.6f} vs MC {rep.estimate:.6f} +- {rep.half_width:.6f};"
                           f" ratios {', '.join(f'{r:.10f}' for r in ratios)}",
                           detail={"exact": exact, "mc": rep.to_dict(), "ratios": ratios})


def short_timescale(ctx: _Context) -> CriterionResult:
    params = QueueParams(1.0)
    u = 4.0
    T = u ** (1.0 / 3.0)
    sim = SimConfig(h=0.01, horizon=T, seed=ctx.seed + 7)
    rep = harness.estimate_pi(params, T, u, sim, ctx.n(10_000_000, 1_000_000), ctx.threads)
    asym = asymptotics.theorem1_asymptotic(u, T, params)
    ratio = rep.estimate / asym
    return CriterionResult("7", "short-timescale tail vs exp(-2cu/T - c^2T/3)",
                           0.5 <= ratio <= 2.0,
                           f"pi_hat={rep.estimate:.4e}, asymptotic={asym:.4e}, ratio {ratio:.3f}",
                           detail={"report": rep.to_dict(), "asymptotic": asym})


def scaling(ctx: _Context) -> CriterionResult:
    params = QueueParams(1.0)
    n = ctx.n(1_000_000, 200_000)
    parts, ok, detail = [], True, {}
    for k, M in ((2, 0.5), (3, 0.3)):
        sim = SimConfig(h=0.01, horizon=1.0, seed=ctx.seed + 8 + 10 * k)
        left, right = harness.scaling_check(params, 1.0, M, k, sim, n, ctx.threads)
        ok &= left.overlaps(right)
        parts.append(f"n={k}: {left.estimate:.5f} vs {right.estimate:.5f}")
        detail[str(k)] = {"left": left.to_dict(), "right": right.to_dict()}
    return CriterionResult("8", "many-sources scaling identity (99% CIs overlap)", ok,
                           "; ".join(parts), detail=detail)


def airy_certification(ctx: _Context) -> CriterionResult:
    quad_err = max(abs(airy.airy_ai(x) - airy.airy_ai_integral(x).ai)
                   for x in (0.0, 0.5, 1.0, 2.0, 4.0))
    asym_err = max(abs(airy.airy_ai_asymptotic(x, 1) / airy.airy_ai(x) - 1.0)
                   for x in (8.0, 10.0, 15.0, 20.0, 50.0, 100.0))
    ok = quad_err <= 1e-8 and asym_err <= 1e-3
    return CriterionResult("9", "Airy Ai certification", ok,
                           f"vs quadrature {quad_err:.1e} (1e-8 abs), vs order-1 asymptotic"
                           f" {asym_err:.1e} (1e-3 rel)",
                           detail={"quadrature_abs": quad_err, "asymptotic_rel": asym_err})


def transform_consistency(ctx: _Context) -> CriterionResult:
    form_gap = 0.0
    for c in (0.5, 1.0, 2.0):
        p = QueueParams(c)
        for g in (0.01, 0.1, 1.0, 10.0):
            form_gap = max(form_gap, abs(laplace.stationary_lt_displayed(g, p)
                                         - laplace.stationary_lt_mixture(g, p)))
    slope_err = max(abs(laplace.lt_derivative(QueueParams(c)) / laplace.mean_stationary_area(
        QueueParams(c)) - 1.0) for c in (0.5, 1.0, 2.0))
    params = QueueParams(1.0)
    _tau, area = ctx.busy(params, ctx.n(100_000, 20_000))
    rep = harness.mean_report(np.exp(-_uncensored(area)), ctx.seed + 2)
    ref = laplace.stationary_lt(1.0, params)
    mc_ok = harness.Target("LT(1)", ref, ci_multiple=3.0).check(rep)
    ok = form_gap <= 1e-8 and slope_err <= 0.01 and mc_ok
    return CriterionResult("10", "busy-area transform consistency", ok,
                           f"forms {form_gap:.1e} (1e-8), slope {slope_err:.2%} (1%),"
                           f" MC {rep.estimate:.5f} vs {ref:.5f} +- {rep.half_width:.5f}",
                           detail={"form_gap": form_gap, "slope_rel_err": slope_err,
                                   "mc": rep.to_dict(), "quadrature": ref})


def _regime(ctx, regime, u_grid, tol, key, T=None):
    params = QueueParams(1.0)
    sim = SimConfig(h=0.02, horizon=1.0, seed=ctx.seed + 11)
    n = ctx.n(10_000_000, 1_000_000)
    stop = ""
    try:
        table = harness.regime_study(params, 0.2, regime, u_grid, sim, n, T=T,
                                     threads=ctx.threads)
    except InfeasibleGrid as exc:
        table = exc.table
        stop = f"; stopped: {exc}"
    rates = ", ".join(f"{r.rate:.3f}@{math.sqrt(r.u):g}" for r in table.rows)
    ok = len(table.rows) >= 2 and table.increasing() and table.final_gap() <= tol
    gap = table.final_gap() if table.rows else math.nan
    return CriterionResult(key, f"{regime.value} rate trend (within {tol:.0%})", ok,
                           f"rate@sqrt(u): {rates}; target {table.target:.4f},"
                           f" final gap {gap:.1%}{stop}",
                           detail={"csv": table.to_csv()})


def intermediate_regime(ctx: _Context) -> CriterionResult:
    return _regime(ctx, harness.Regime.INTERMEDIATE, [s * s for s in (6, 10, 14, 18, 20, 22, 24)],
                   0.25, "11a", T=2.0)


def long_regime(ctx: _Context) -> CriterionResult:
    return _regime(ctx, harness.Regime.LONG, [s * s for s in (10, 15, 20, 25, 28, 30, 32)],
                   0.30, "11b")


def xi_first_passage(ctx: _Context) -> CriterionResult:
    params = QueueParams(1.0)
    total, _err = integrate.quad(lambda t: asymptotics.xi_density(t, 1.0, params), 0.0, np.inf,
                                 epsabs=1e-13, epsrel=1e-12, limit=200)
    tau, _area = ctx.busy(params, ctx.n(100_000, 20_000), 1.0)
    rep = harness.mean_report(_uncensored(tau), ctx.seed + 2)
    mc_ok = harness.Target("E tau(1)", 1.0, ci_multiple=3.0).check(rep)
    ok = abs(total - 1.0) <= 1e-8 and mc_ok
    return CriterionResult("12", "first-passage density from delta", ok,
                           f"mass {total:.12f}, E tau(1) = {rep.estimate:.5f} +- {rep.half_width:.5f}"
                           " vs 1",
                           detail={"mass": total, "mc": rep.to_dict()})


CRITERIA = {
    "1": stationary_law,
    "2": busy_area_mean,
    "3": transient_area_mean,
    "4": psi_oracle,
    "5": rate_identity,
    "6": lemma1,
    "7": short_timescale,
    "8": scaling,
    "9": airy_certification,
    "10": transform_consistency,
    "11a": intermediate_regime,
    "11b": long_regime,
    "12": xi_first_passage,
}


class Suite:
    """Runs criteria against one shared context (and sample cache)."""

    def __init__(self, quick: bool = False, seed: int = 0, threads: int | None = None):
        self.ctx = _Context(quick, seed, threads)

    def run(self, key: str) -> CriterionResult:
        t0 = time.perf_counter()
        res = CRITERIA[key](self.ctx)
        return CriterionResult(res.key, res.title, bool(res.passed), res.summary,
                               time.perf_counter() - t0, res.detail)


def run_all(quick: bool = False, seed: int = 0, threads: int | None = None, only=None,
            progress=None) -> list[CriterionResult]:
    suite = Suite(quick, seed, threads)
    out = []
    for key in (only or CRITERIA):
        res = suite.run(key)
        out.append(res)
        if progress:
            progress(res)
    return out

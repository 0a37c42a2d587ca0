"""
Most likely paths and the variational problem behind the intermediate-scale rate.

The numeric minimiser here never calls the closed-form minimiser; it exists
to check it.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import minimize_scalar

from .asymptotics import psi
from .errors import DomainError, NoConvergence
from .model import Branch, GridPath, QueueParams, RateResult


class Scenario(str, enum.Enum):
    EMPTY_START = "EmptyStart"
    SYMMETRIC_BUSY = "SymmetricBusy"


@dataclass(frozen=True)
class MostLikelyPath:
    grid: GridPath
    a_star: float
    scenario: Scenario


def most_likely_path(T: float, M: float, params: QueueParams, n_grid: int) -> MostLikelyPath:
    """Cheapest input path on ``[0, T]`` whose workload sweeps area ``M``.

    If ``s* = sqrt(6M/c) < T`` the queue starts empty and drains at ``s*``;
    the path is ``2cr - (c r^2 / 6) sqrt(6c/M)`` up to ``s*`` and flat after.
    Otherwise the queue starts at ``a* = M/T - cT/6`` and the path is
    ``2cr - (c/T) r^2``.
    """
    if not (T > 0 and M > 0):
        raise DomainError("T and M must be positive")
    if n_grid < 2:
        raise DomainError("need at least two grid points")
    c = params.c
    r = np.linspace(0.0, T, n_grid)
    s_star = math.sqrt(6.0 * M / c)
    if s_star < T:
        rc = np.minimum(r, s_star)
        f = 2.0 * c * rc - c * rc ** 2 / 6.0 * math.sqrt(6.0 * c / M)
        a_star, scenario = 0.0, Scenario.EMPTY_START
    else:
        f = 2.0 * c * r - c / T * r ** 2
        a_star, scenario = M / T - c * T / 6.0, Scenario.SYMMETRIC_BUSY
    return MostLikelyPath(GridPath(0.0, T / (n_grid - 1), f), a_star, scenario)


def rate_functional(path: GridPath) -> float:
    """``(1/2) int f'(r)^2 dr`` by forward differences (exact for piecewise-linear paths)."""
    d = np.diff(path.values)
    return float(0.5 * np.sum(d * d) / path.h)


def skorokhod_map(path: GridPath, params: QueueParams, q0: float) -> GridPath:
    """Discrete reflection ``q_k = max(q_{k-1} + f_k - f_{k-1} - c h, 0)`` with ``q_0 = q0``."""
    if q0 < 0:
        raise DomainError("initial workload must be nonnegative")
    inc = np.diff(path.values) - params.c * path.h
    q = np.empty(path.values.size)
    q[0] = q0
    level = q0
    for k, d in enumerate(inc, start=1):
        level = level + d
        if level < 0.0:
            level = 0.0
        q[k] = level
    return GridPath(path.t0, path.h, q)


def path_table(mlp: MostLikelyPath, params: QueueParams, path=None) -> str:
    """CSV with columns ``r,f_star,q``, the workload started at ``a*``."""
    q = skorokhod_map(mlp.grid, params, mlp.a_star)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "f_star", "q"])
    for r, f, qq in zip(mlp.grid.times, mlp.grid.values, q.values):
        w.writerow([f"{r:.17g}", f"{f:.17g}", f"{qq:.17g}"])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def _bounded_min(fun, lo, hi, tol, maxiter):
    res = minimize_scalar(fun, bounds=(lo, hi), method="bounded",
                          options={"xatol": tol, "maxiter": maxiter})
    if not res.success:
        raise NoConvergence(f"bracket [{lo}, {hi}] not reduced below {tol} in {maxiter} iterations")
    # Brent's bounded search never lands exactly on an endpoint
    best_x, best_f = res.x, res.fun
    for x in (lo, hi):
        fx = fun(x)
        if fx < best_f:
            best_x, best_f = x, fx
    return best_x, best_f


def minimize_psi_numeric(T: float, M: float, params: QueueParams, tol: float = 1e-10,
                         maxiter: int = 500) -> RateResult:
    """Nested bounded-Brent minimisation of ``psi`` over ``s in (0, T]`` and ``a >= 0``.

    For fixed ``s`` the objective in ``a`` is a convex parabola plus a linear
    term, increasing beyond ``a = (M + c s^2/2) / s``, which bounds the inner
    bracket.  The outer bracket starts at ``T * 1e-9`` where ``psi`` is huge.
    """
    if not (T > 0 and M > 0):
        raise DomainError("T and M must be positive")
    if not tol > 0:
        raise DomainError("tol must be positive")
    c = params.c

    def inner(s):
        a_hi = (M + 0.5 * c * s * s) / s
        return _bounded_min(lambda a: psi(M, a, s, params), 0.0, a_hi, tol * max(1.0, a_hi), maxiter)

    s_star, value = _bounded_min(lambda s: inner(s)[1], T * 1e-9, T, tol * T, maxiter)
    a_star, value = inner(s_star)
    branch = Branch.BOUNDARY if s_star >= T else Branch.INTERIOR
    return RateResult(value, a_star, s_star, branch)

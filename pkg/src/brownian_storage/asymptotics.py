"""
Closed-form tail asymptotics, rate functions and minimisers.

Short timescale (``T(u)`` small against ``sqrt(u)``)::

    P(int_0^T Q > u) ~ exp(-2cu/T - c^2 T / 3)

Intermediate timescale (``T(u) = T sqrt(u)``, threshold ``M u``): decay rate
``phi(T, M)``; long timescale: ``phi(M) = (2/3) sqrt(6) c sqrt(cM)``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import DomainError
from .model import Branch, QueueParams, RateResult


@dataclass(frozen=True)
class ShortTimescaleInput:
    u: float
    T: float
    params: QueueParams

    def __post_init__(self):
        if not (self.u > 0 and self.T > 0):
            raise DomainError("u and T must be positive")


def _positive(name, value):
    if not value > 0:
        raise DomainError(f"{name} must be positive, got {value}")


def theorem1_asymptotic(u: float, T: float, params: QueueParams) -> float:
    """``exp(-2cu/T - c^2 T/3)``, the short-timescale tail approximation."""
    _positive("T", T)
    c = params.c
    return math.exp(-2.0 * c * u / T - c * c * T / 3.0)


def lemma1_exact_probability(u: float, T: float, params: QueueParams) -> float:
    """``P(T Q(0) + T^{3/2} N / sqrt(3) > u + c T^2 / 2)`` exactly.

    ``Q(0) ~ Exp(2c)`` and ``N`` standard normal, independent; this is the tail
    of the area of the unreflected process ``Q(0) + B(r) - c r`` over ``[0, T]``.
    Conditioning on ``N = x`` gives ``I1 + I2``: ``I2 = P(N > a1)`` and
    ``I1 = E[exp(-2c (v/T - sqrt(T/3) N)); N < a1]`` with ``v = u + cT^2/2``.
    Completing the square shifts the normal by ``2c sqrt(T/3)``, so

        I1 = exp(-2cu/T - c^2 T/3) * Phi(a1 - 2c sqrt(T/3)).
    """
    _positive("T", T)
    c = params.c
    a1 = math.sqrt(3.0) * (u + 0.5 * c * T * T) / T ** 1.5
    shift = 2.0 * c * math.sqrt(T / 3.0)
    i1 = theorem1_asymptotic(u, T, params) * float(ndtr(a1 - shift))
    i2 = float(ndtr(-a1))
    return i1 + i2


def phi_TM(T: float, M: float, params: QueueParams) -> RateResult:
    """Intermediate-timescale decay rate ``phi(T, M)`` with its minimiser.

    The branch point ``T = sqrt(6M/c)`` is tagged Boundary; both formulas agree there.
    """
    _positive("T", T)
    _positive("M", M)
    c = params.c
    s_free = math.sqrt(6.0 * M / c)
    if s_free < T:
        return RateResult(phi_M(M, params), 0.0, s_free, Branch.INTERIOR)
    return RateResult(2.0 * c * M / T + c * c * T / 3.0, M / T - c * T / 6.0, T, Branch.BOUNDARY)


def psi(M: float, a: float, s: float, params: QueueParams) -> float:
    """``(M + c s^2/2 - a s)^2 / ((2/3) s^3) + 2 a c``."""
    if not s > 0:
        raise DomainError(f"s must be positive, got {s}")
    c = params.c
    return (M + 0.5 * c * s * s - a * s) ** 2 / (2.0 / 3.0 * s ** 3) + 2.0 * a * c


def minimize_psi_closed_form(T: float, M: float, params: QueueParams) -> RateResult:
    """Minimise ``psi`` over ``a >= 0``, ``s in (0, T]`` using the explicit minimiser.

    The value is ``psi`` evaluated at the minimiser rather than the rate
    formula, so agreement with :func:`phi_TM` is a genuine check.
    """
    _positive("T", T)
    _positive("M", M)
    c = params.c
    s_free = math.sqrt(6.0 * M / c)
    if s_free < T:
        a, s, branch = 0.0, s_free, Branch.INTERIOR
    else:
        a, s, branch = M / T - c * T / 6.0, T, Branch.BOUNDARY
    return RateResult(psi(M, a, s, params), a, s, branch)


def phi_M(M: float, params: QueueParams) -> float:
    """Long-timescale decay rate ``(2/3) sqrt(6) c sqrt(c M)``."""
    _positive("M", M)
    c = params.c
    # one square root, (2/3) sqrt(6 c^3 M), to keep rounding down
    return 2.0 / 3.0 * math.sqrt(6.0 * c ** 3 * M)


def psi_tilde(M: float, delta: float, s: float, params: QueueParams) -> float:
    if not s > 0:
        raise DomainError(f"s must be positive, got {s}")
    c = params.c
    return (M + 0.5 * c * s * s - delta * s) ** 2 / (2.0 / 3.0 * s ** 3)


def psi_tilde_minimizer(M: float, delta: float, params: QueueParams) -> tuple[float, float]:
    """Return ``(s*, psi_tilde(M, delta, s*))`` with ``s* = (sqrt(delta^2 + 6Mc) - delta) / c``."""
    _positive("M", M)
    if delta < 0:
        raise DomainError("delta must be nonnegative")
    c = params.c
    s = (-delta + math.sqrt(delta * delta + 6.0 * M * c)) / c
    return s, psi_tilde(M, delta, s, params)


def xi_density(t, delta: float, params: QueueParams, extended: bool = False):
    """Inverse-Gaussian density of the first passage from ``delta`` to zero.

    ``delta / sqrt(2 pi t^3) * exp(-(delta - c t)^2 / (2 t))``.  Nonpositive
    ``t`` raises unless ``extended`` is set, in which case it maps to 0.
    """
    _positive("delta", delta)
    c = params.c
    t_arr = np.asarray(t, dtype=float)
    bad = t_arr <= 0
    if np.any(bad) and not extended:
        raise DomainError("density argument must be positive")
    ts = np.where(bad, 1.0, t_arr)
    out = delta / np.sqrt(2.0 * np.pi * ts ** 3) * np.exp(-(delta - c * ts) ** 2 / (2.0 * ts))
    out = np.where(bad, 0.0, out)
    return float(out) if out.ndim == 0 else out


def evaluate_rows(rows, params: QueueParams) -> list[dict]:
    """Evaluate ``(u, T)`` or ``(T, M)`` rows.

    ``(u, T)`` rows gain ``value`` (short-timescale asymptotic) and ``exact``;
    ``(T, M)`` rows gain ``value``, ``branch``, ``a_star`` and ``s_star``.
    """
    out = []
    for row in rows:
        row = dict(row)
        if "M" in row:
            r = phi_TM(float(row["T"]), float(row["M"]), params)
            row.update(value=r.value, branch=r.branch.value, a_star=r.a_star, s_star=r.s_star)
        elif "u" in row:
            u, T = float(row["u"]), float(row["T"])
            row.update(value=theorem1_asymptotic(u, T, params),
                       exact=lemma1_exact_probability(u, T, params))
        else:
            raise DomainError("rows need columns (u, T) or (T, M)")
        out.append(row)
    return out


def evaluate_csv(text: str, params: QueueParams) -> str:
    """CSV in, CSV out with appended result columns."""
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        raise DomainError("empty input")
    done = evaluate_rows(rows, params)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(done[0]), lineterminator="\n")
    w.writeheader()
    for row in done:
        w.writerow({k: (f"{v:.17g}" if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()

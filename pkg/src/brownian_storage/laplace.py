"""
Laplace transforms and means of the area swept over a busy period.

``J(x)`` is the area under ``x + B(t) - c t`` until it hits zero; the residual
busy period seen from stationarity mixes ``J(x)`` over ``x ~ Exp(2c)``.  With
``A = (2 gamma)^{-2/3} c^2`` and ``B = (2 gamma)^{1/3}``::

    E exp(-gamma J(x)) = exp(c x) Ai(A + B x) / Ai(A)
    E exp(-gamma area) = 2c / Ai(A) * int_0^inf exp(-c x) Ai(A + B x) dx

All Airy ratios are formed in log space.  ``gamma = 0`` is not accepted:
the transform is 1 there and the Airy arguments diverge.
"""
from __future__ import annotations

import csv
import io
import math
import warnings

from scipy import integrate

from .airy import log_airy_ai
from .errors import DomainError, QuadratureFailure
from .model import QueueParams

TAIL_TOL = 1e-12
CONSISTENCY_TOL = 1e-8


def _airy_args(gamma: float, c: float):
    if not gamma > 0:
        raise DomainError(f"transform argument must be > 0, got {gamma}")
    two_g = 2.0 * gamma
    return two_g ** (-2.0 / 3.0) * c * c, two_g ** (1.0 / 3.0)


def transient_lt(gamma: float, x: float, params: QueueParams) -> float:
    """``E exp(-gamma J(x))`` for a busy period started at level ``x``."""
    if x < 0:
        raise DomainError("start level must be nonnegative")
    c = params.c
    a, b = _airy_args(gamma, c)
    if x == 0:
        return 1.0
    return math.exp(c * x + log_airy_ai(a + b * x) - log_airy_ai(a))


def _quad(f, lo, hi):
    # QUADPACK round-off warnings are noise here: the two routes are compared anyway
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _err = integrate.quad(f, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


def _truncation_point(gamma: float, c: float) -> float:
    # Ai is decreasing, so the tail beyond X is at most e^{-cX}/c * Ai(A+BX)/Ai(A)
    a, b = _airy_args(gamma, c)
    log_a = log_airy_ai(a)
    x = 1.0 / c
    while True:
        bound = -c * x - math.log(c) + log_airy_ai(a + b * x) - log_a
        if bound < math.log(TAIL_TOL):
            return x
        x *= 1.5


def stationary_lt_displayed(gamma: float, params: QueueParams) -> float:
    """Stationary transform via the Airy integral, integrated in ``x``."""
    c = params.c
    a, b = _airy_args(gamma, c)
    log_a = log_airy_ai(a)
    upper = _truncation_point(gamma, c)

    def f(x):
        return math.exp(-c * x + log_airy_ai(a + b * x) - log_a)

    return 2.0 * c * _quad(f, 0.0, upper)


def stationary_lt_mixture(gamma: float, params: QueueParams) -> float:
    """Stationary transform as the ``Exp(2c)`` mixture of :func:`transient_lt`.

    Integrated over ``y = exp(-2 c x)`` in ``(0, 1]`` so the quadrature nodes
    differ from :func:`stationary_lt_displayed`.
    """
    c = params.c
    y_min = math.exp(-2.0 * c * _truncation_point(gamma, c))

    def f(y):
        return transient_lt(gamma, -math.log(y) / (2.0 * c), params)

    return _quad(f, y_min, 1.0)


def stationary_lt(gamma: float, params: QueueParams) -> float:
    """``E exp(-gamma * area)`` over the residual busy period from stationarity.

    Computed twice by different quadratures; :class:`QuadratureFailure` if
    they disagree by more than ``CONSISTENCY_TOL``.
    """
    displayed = stationary_lt_displayed(gamma, params)
    mixture = stationary_lt_mixture(gamma, params)
    if abs(displayed - mixture) > CONSISTENCY_TOL:
        raise QuadratureFailure(
            f"quadrature forms disagree at gamma={gamma}: {displayed!r} vs {mixture!r}")
    return displayed


def mean_transient_area(x: float, params: QueueParams) -> float:
    """``E J(x) = x^2/(2c) + x/(2c^2)``."""
    if x < 0:
        raise DomainError("start level must be nonnegative")
    c = params.c
    return x * x / (2.0 * c) + x / (2.0 * c * c)


def mean_stationary_area(params: QueueParams) -> float:
    """Mean area over the residual busy period, ``1/(2c^3)``."""
    return 1.0 / (2.0 * params.c ** 3)


def lt_derivative(params: QueueParams, x: float | None = None, gamma0: float = 1e-4,
                  order: int = 1) -> float:
    """Numerical derivative of a transform at ``gamma0`` (central differences + Richardson).

    ``order=1`` returns ``-LT'(gamma0)`` (approximately the mean area),
    ``order=2`` returns ``LT''(gamma0)`` (approximately the second moment).
    ``x=None`` selects the stationary transform.  Purely numerical.
    """
    if order not in (1, 2):
        raise DomainError("order must be 1 or 2")

    def lt(g):
        return stationary_lt(g, params) if x is None else transient_lt(g, x, params)

    def diff(step):
        if order == 1:
            return -(lt(gamma0 + step) - lt(gamma0 - step)) / (2.0 * step)
        return (lt(gamma0 + step) - 2.0 * lt(gamma0) + lt(gamma0 - step)) / (step * step)

    step = 0.5 * gamma0
    return (4.0 * diff(0.5 * step) - diff(step)) / 3.0


def lt_table(gammas, params: QueueParams, mode: str = "stationary", x: float | None = None,
             path=None) -> str:
    """CSV of ``gamma,lt`` for the stationary or transient transform."""
    if mode not in ("stationary", "transient"):
        raise DomainError("mode must be 'stationary' or 'transient'")
    if mode == "transient" and x is None:
        raise DomainError("transient mode needs a start level x")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["gamma", "lt"])
    for g in gammas:
        val = stationary_lt(g, params) if mode == "stationary" else transient_lt(g, x, params)
        w.writerow([f"{g:.17g}", f"{val:.17g}"])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text

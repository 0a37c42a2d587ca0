"""
Airy function ``Ai`` on ``[0, inf)``.

Below ``X_SWITCH`` the Maclaurin series ``Ai(0) f(x) + Ai'(0) g(x)`` is summed
in 40-digit decimal arithmetic: ``f`` and ``g`` grow like ``Bi`` while ``Ai``
decays, and at ``x = 7`` the cancellation eats about 12 digits.  Above the
switch the asymptotic series

    Ai(x) ~ exp(-zeta) / (2 sqrt(pi) x^(1/4)) * sum_k (-1)^k u_k / zeta^k,
    zeta = (2/3) x^(3/2)

is truncated at its smallest term.  Both are also available in log form so
that ratios of tiny values (``Ai(300)`` is ``exp(-3464)``) stay finite.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext

from scipy import integrate

from .errors import DomainError

# where series and asymptotic expansion agree to < 1e-10 relative (see tests)
X_SWITCH = 7.0

_PREC = 40
_AI0 = Decimal("0.3550280538878172392600631860041831763979791741991772405833")
_AIP0 = Decimal("-0.2588194037928067984051835601892039634790911383549345822100")
_LOG_2SQRTPI = math.log(2.0 * math.sqrt(math.pi))


class AiryMethod(str, enum.Enum):
    POWER_SERIES = "PowerSeries"
    QUADRATURE = "Quadrature"
    ASYMPTOTIC = "Asymptotic"


@dataclass(frozen=True)
class AiryValue:
    x: float
    ai: float
    method: AiryMethod

    def __post_init__(self):
        # zero only through underflow, beyond x ~ 104
        if self.x >= 0 and not self.ai >= 0:
            raise DomainError("Ai is positive on [0, inf)")


def _check(x):
    if not x >= 0:
        raise DomainError(f"Ai is only evaluated on [0, inf), got {x}")


def _series(x: float) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = _PREC
        xd = Decimal(x)
        x3 = xd * xd * xd
        tiny = Decimal(10) ** (-_PREC - 5)
        f_term = Decimal(1)
        g_term = xd
        f_sum = f_term
        g_sum = g_term
        k = 1
        while True:
            # y'' = x y gives c_{n+3} = c_n / ((n+2)(n+3))
            f_term = f_term * x3 / ((3 * k - 1) * (3 * k))
            g_term = g_term * x3 / ((3 * k) * (3 * k + 1))
            f_sum += f_term
            g_sum += g_term
            if f_term < tiny * f_sum and g_term <= tiny * max(g_sum, tiny):
                break
            k += 1
        return _AI0 * f_sum + _AIP0 * g_sum


def _asymptotic_sum(x: float) -> float:
    zeta = 2.0 / 3.0 * x ** 1.5
    total = 1.0
    u = 1.0
    prev = math.inf
    k = 1
    while True:
        u *= (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
        term = u / zeta ** k
        if term >= prev or term < 1e-17:
            break
        total += -term if k % 2 else term
        prev = term
        k += 1
    return total


def airy_ai_value(x: float) -> AiryValue:
    _check(x)
    x = float(x)
    if x <= X_SWITCH:
        return AiryValue(x, float(_series(x)), AiryMethod.POWER_SERIES)
    return AiryValue(x, math.exp(log_airy_ai(x)), AiryMethod.ASYMPTOTIC)


def airy_ai(x: float) -> float:
    """``Ai(x)`` for ``x >= 0`` to about 1e-12 relative accuracy."""
    return airy_ai_value(x).ai


def log_airy_ai(x: float) -> float:
    """``log Ai(x)``; finite for arguments where ``Ai`` underflows."""
    _check(x)
    x = float(x)
    if x <= X_SWITCH:
        return float(_series(x).ln())
    zeta = 2.0 / 3.0 * x ** 1.5
    return -zeta - _LOG_2SQRTPI - 0.25 * math.log(x) + math.log(_asymptotic_sum(x))


def airy_ai_asymptotic(u: float, order: int = 1) -> float:
    """Leading asymptotic form, with the ``-(5/48) u^{-3/2}`` correction when ``order >= 1``."""
    if not u > 0:
        raise DomainError(f"asymptotic form needs u > 0, got {u}")
    if order not in (0, 1):
        raise DomainError("order must be 0 or 1")
    lead = math.exp(-2.0 / 3.0 * u ** 1.5) / (2.0 * math.sqrt(math.pi) * u ** 0.25)
    if order == 1:
        lead *= 1.0 - 5.0 / 48.0 * u ** -1.5
    return lead


def airy_ai_integral(x: float) -> AiryValue:
    """``(1/pi) int_0^inf cos(t^3/3 + x t) dt`` by quadrature.

    The contour is rotated to ``t = s exp(i pi/6)``, which turns the
    oscillatory integrand into the damped one
    ``exp(-s^3/3 - x s/2) cos(sqrt(3) x s / 2 + pi/6)``.  Slow; meant as an
    independent check of :func:`airy_ai`.
    """
    _check(x)
    k = 0.5 * math.sqrt(3.0) * x

    def f(s):
        return math.exp(-s ** 3 / 3.0 - 0.5 * x * s) * math.cos(k * s + math.pi / 6.0)

    # integrand is below 1e-300 beyond s = 13
    val, _err = integrate.quad(f, 0.0, 13.0, epsabs=1e-15, epsrel=1e-13, limit=400)
    return AiryValue(x, val / math.pi, AiryMethod.QUADRATURE)

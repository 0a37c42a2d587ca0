"""
Compiled inner loops.

Every step consumes exactly one standard normal ``z`` followed by one uniform
``u`` regardless of mode, so exact/Euler and corrected/naive runs on the same
stream see the same driving noise.
"""
import math

import numba
import numpy as np

_jit = numba.njit(nogil=True, cache=True)

# exp(-40) < 5e-18: below this the bridge-crossing probability is skipped
_BRIDGE_CUTOFF = 40.0


@_jit
def stationary_from_uniform(u, rate):
    # inverse CDF of Exp(rate) for u in (0, 1]
    return -math.log(u) / rate


@_jit
def reflect_step(q, c, var, h, z, u, exact, bridge):
    """One step of the reflected process.

    Returns ``(q_next, free_next, hit)`` where ``free_next = q + w`` is the
    unreflected endpoint and ``hit`` flags a visit to zero inside the step.
    """
    w = -c * h + math.sqrt(var * h) * z
    free = q + w
    if exact:
        # running max of the reversed increment given its endpoint w:
        # P(M >= m | w) = exp(-2 m (m - w) / (var h)), inverted at e = -log(1 - u)
        e = -math.log1p(-u)
        m = 0.5 * (w + math.sqrt(w * w + 2.0 * var * h * e))
        q_next = free if free > m else m
        if free <= 0.0:
            hit = True
        elif bridge:
            hit = m >= free
        else:
            hit = False
    else:
        q_next = free if free > 0.0 else 0.0
        if free <= 0.0:
            hit = True
        elif bridge:
            x = 2.0 * q * free / (var * h)
            hit = x < _BRIDGE_CUTOFF and u < math.exp(-x)
        else:
            hit = False
    return q_next, free, hit


@_jit
def crossing_fraction(q, free):
    # fraction of the step at which the path is taken to reach zero
    return q / (q + abs(free)) if q > 0.0 else 0.0


@_jit
def trace_from_draws(q0, c, h, z, u, exact, bridge, out):
    """Fill ``out`` with a reflected path; return first hit time or -1."""
    q = q0
    out[0] = q
    hit_time = 0.0 if q0 <= 0.0 else -1.0
    for k in range(z.size):
        q_next, free, hit = reflect_step(q, c, 1.0, h, z[k], u[k], exact, bridge)
        if hit and hit_time < 0.0:
            hit_time = (k + crossing_fraction(q, free)) * h
        q = q_next
        out[k + 1] = q
    return hit_time


@_jit
def area_block(rng, n, c, h, nsteps, drivers, exact, q0, out_area, out_last):
    """Trapezoidal area over ``nsteps`` steps for ``n`` replications.

    ``q0 < 0`` requests a stationary start.  With ``drivers > 1`` the input is
    the average of that many independent Brownian motions.
    """
    var = 1.0 / drivers
    rate = 2.0 * c / var
    for i in range(n):
        if q0 < 0.0:
            q = stationary_from_uniform(1.0 - rng.random(), rate)
        else:
            q = q0
        area = 0.0
        for _ in range(nsteps):
            if drivers == 1:
                z = rng.standard_normal()
            else:
                s = 0.0
                for _d in range(drivers):
                    s += rng.standard_normal()
                # sqrt(h) * mean of the drivers == sqrt(var h) * z
                z = s / math.sqrt(drivers)
            u = rng.random()
            q_next, _free, _hit = reflect_step(q, c, var, h, z, u, exact, False)
            area += 0.5 * h * (q + q_next)
            q = q_next
        out_area[i] = area
        out_last[i] = q


@_jit
def first_passage_block(rng, n, c, h, x0, cap_steps, bridge, out_tau, out_area):
    """Hitting time of zero and area for the free process ``x + B(t) - c t``.

    ``x0 < 0`` requests a stationary start.  Censored runs get NaN entries.
    """
    sqrt_h = math.sqrt(h)
    rate = 2.0 * c
    for i in range(n):
        if x0 < 0.0:
            x = stationary_from_uniform(1.0 - rng.random(), rate)
        else:
            x = x0
        if x <= 0.0:
            out_tau[i] = 0.0
            out_area[i] = 0.0
            continue
        area = 0.0
        tau = np.nan
        k = 0
        while k < cap_steps:
            z = rng.standard_normal()
            u = rng.random()
            y = x - c * h + sqrt_h * z
            hit = y <= 0.0
            if not hit and bridge:
                a = 2.0 * x * y / h
                hit = a < _BRIDGE_CUTOFF and u < math.exp(-a)
            if hit:
                frac = x / (x + abs(y))
                tau = (k + frac) * h
                area += 0.5 * x * frac * h
                break
            area += 0.5 * h * (x + y)
            x = y
            k += 1
        out_tau[i] = tau
        out_area[i] = area if tau == tau else np.nan

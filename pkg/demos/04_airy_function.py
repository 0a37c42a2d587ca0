"""
The Airy function on the positive axis
======================================

Busy-period transforms are ratios of Airy functions.  ``Ai`` is summed from
its Maclaurin series in extended precision up to ``x = 7`` and from its
asymptotic expansion beyond; both are checked against direct quadrature of
the integral definition.
"""
from brownian_storage import airy_ai, airy_ai_asymptotic, airy_ai_integral, log_airy_ai
from brownian_storage.airy import X_SWITCH

# the quadrature is an absolute-accuracy check, so it is only shown for moderate x
print("   x        series/asym           quadrature")
for x in (0.0, 0.5, 1.0, 2.0, 4.0):
    print(f"{x:5.1f} {airy_ai(x):20.15e} {airy_ai_integral(x).ai:20.15e}")

print("\n   x        series/asym      order-1 asymptotic   rel. diff")
for x in (2.0, 4.0, 8.0, 16.0, 32.0):
    ai, asym = airy_ai(x), airy_ai_asymptotic(x, 1)
    print(f"{x:5.1f} {ai:20.15e} {asym:20.15e} {asym / ai - 1:10.2e}")

print(f"\nswitch point {X_SWITCH}")
print(f"log Ai(300) = {log_airy_ai(300.0):.6f} (Ai itself underflows)")

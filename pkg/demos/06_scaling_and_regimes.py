"""
Many sources and the approach to the decay rates
================================================

Averaging ``n`` independent inputs is equivalent, in law, to stretching time
by ``n``.  Then we watch ``-log(pi)/sqrt(u)`` creep towards its limit on the
intermediate scale.  Convergence is logarithmic, so at reachable ``u`` the
gap is still sizeable.
"""
import math

from brownian_storage import QueueParams, SimConfig, regime_study, scaling_check

params = QueueParams(c=1.0)
sim = SimConfig(h=0.01, horizon=1.0, seed=5)

for n, M in ((2, 0.5), (3, 0.3)):
    left, right = scaling_check(params, T=1.0, M=M, n_superpose=n, sim=sim, n_reps=200_000)
    print(f"n={n}: averaged inputs {left.estimate:.5f}, stretched time {right.estimate:.5f},"
          f" CIs overlap: {left.overlaps(right)}")

table = regime_study(params, M=0.2, regime="Intermediate", u_grid=[s * s for s in (3, 6, 9, 12)],
                     sim=SimConfig(h=0.02, horizon=1.0, seed=5), n=1_000_000, T=2.0)
print()
print(table.to_csv())
print(f"target {table.target:.4f}; rates increasing: {table.increasing()};"
      f" gap at sqrt(u) = {math.sqrt(table.rows[-1].u):g}: {table.final_gap():.1%}")

"""
Decay rates and most likely paths
=================================

On the intermediate scale the tail decays like ``exp(-phi(T, M) sqrt(u))``.
The rate comes from minimising ``psi(M, a, s)`` over a start level ``a`` and
a duration ``s``; two regimes appear depending on whether ``sqrt(6M/c)``
fits inside the window.
"""
from brownian_storage import (
    QueueParams,
    minimize_psi_closed_form,
    minimize_psi_numeric,
    most_likely_path,
    phi_M,
    rate_functional,
    skorokhod_map,
    trapezoid_area,
)

params = QueueParams(c=1.0)
M = 6.0

print("   T    branch     phi(T,M)   numeric     a*      s*")
for T in (2.0, 3.0, 5.0, 6.0, 7.0, 10.0):
    closed = minimize_psi_closed_form(T, M, params)
    num = minimize_psi_numeric(T, M, params)
    print(f"{T:5.1f}  {closed.branch.value:9s} {closed.value:9.5f} {num.value:9.5f}"
          f" {closed.a_star:7.3f} {closed.s_star:7.3f}")
print(f"long-window limit phi(M) = {phi_M(M, params):.5f}")

# the cheapest input paths and the workload they produce
for T in (3.0, 7.0):
    mlp = most_likely_path(T, M, params, n_grid=10_001)
    q = skorokhod_map(mlp.grid, params, mlp.a_star)
    cost = rate_functional(mlp.grid) + 2 * mlp.a_star * params.c
    print(f"\nT={T}: {mlp.scenario.value}, start level {mlp.a_star:.3f}")
    print(f"  path cost {cost:.6f}, swept area {trapezoid_area(q):.4f} (target {M})")
    print(f"  workload at 0, T/2, T: {q.values[0]:.3f} {q.values[len(q) // 2]:.3f}"
          f" {q.values[-1]:.3f}")

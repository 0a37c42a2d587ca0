"""
Tail of the area over short windows
===================================

For windows ``T(u)`` short against ``sqrt(u)`` the probability that the
area over ``[0, T(u)]`` exceeds ``u`` behaves like ``exp(-2cu/T - c^2 T/3)``.
The dominant scenario is a large initial workload plus a Gaussian
fluctuation; the probability of that scenario is available in closed form.
"""
from brownian_storage import (
    QueueParams,
    SimConfig,
    estimate_pi,
    lemma1_exact_probability,
    theorem1_asymptotic,
)
from brownian_storage.harness import HorizonRule

params = QueueParams(c=1.0)

print("  u      T     asymptotic    Gaussian+Exp     ratio")
for u in (1.0, 5.0, 10.0, 20.0, 40.0):
    T = u ** 0.3
    a = theorem1_asymptotic(u, T, params)
    e = lemma1_exact_probability(u, T, params)
    print(f"{u:5.1f} {T:6.3f} {a:13.4e} {e:15.4e} {e / a:9.6f}")

# a direct Monte Carlo check at u = 4, T = u^(1/3)
rule = HorizonRule(scale=1.0, exponent=1 / 3)
rep = estimate_pi(params, rule, 4.0, SimConfig(h=0.01, horizon=rule(4.0), seed=7), n=1_000_000)
print(f"\nMC estimate {rep.estimate:.4e}  99% CI [{rep.ci_low:.4e}, {rep.ci_high:.4e}]")
print(f"asymptotic  {theorem1_asymptotic(4.0, rule(4.0), params):.4e}")

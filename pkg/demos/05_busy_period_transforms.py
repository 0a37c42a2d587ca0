"""
Busy-period areas: means and Laplace transforms
===============================================

The area swept before an excursion from level ``x`` returns to zero has mean
``x^2/(2c) + x/(2c^2)``; from stationarity the mean is ``1/(2c^3)``.  Its
Laplace transform is an Airy ratio, which we evaluate by quadrature in two
independent ways and confront with simulation.
"""
import numpy as np

from brownian_storage import (
    QueueParams,
    lt_derivative,
    mean_stationary_area,
    mean_transient_area,
    stationary_lt,
    transient_lt,
)
from brownian_storage.harness import mean_report
from brownian_storage.laplace import stationary_lt_displayed, stationary_lt_mixture
from brownian_storage.simulation import busy_period_samples

params = QueueParams(c=1.0)

print(" gamma   Airy integral      Exp(2c) mixture")
for g in (0.01, 0.1, 1.0, 10.0):
    print(f"{g:6.2f} {stationary_lt_displayed(g, params):.15f} "
          f"{stationary_lt_mixture(g, params):.15f}")

print(f"\nslope at 0: {lt_derivative(params):.5f} vs 1/(2c^3) = {mean_stationary_area(params)}")

# simulate residual busy periods with a bridge-corrected crossing test
_tau, area = busy_period_samples(params, h=1e-3, n=100_000, seed=3)
print(f"MC mean area {mean_report(area, 3).estimate:.4f}")
rep = mean_report(np.exp(-area), 3)
print(f"MC E exp(-area) {rep.estimate:.5f} +- {rep.half_width:.5f}"
      f" vs {stationary_lt(1.0, params):.5f}")

for x in (0.5, 1.0, 2.0):
    _tau, jx = busy_period_samples(params, h=1e-3, n=50_000, seed=4, x0=x)
    print(f"x={x}: E J = {jx.mean():.4f} (closed form {mean_transient_area(x, params)}),"
          f" E exp(-J) = {np.exp(-jx).mean():.4f} vs {transient_lt(1.0, x, params):.4f}")

"""
Area swept by a stationary reflected Brownian motion with drift ``-c``.

Closed-form tail asymptotics and rate functions, most likely paths, Airy-based
busy-period transforms, and Monte Carlo machinery to check all of them.
"""
from .airy import airy_ai, airy_ai_asymptotic, airy_ai_integral, log_airy_ai
from .asymptotics import (
    lemma1_exact_probability,
    minimize_psi_closed_form,
    phi_M,
    phi_TM,
    psi,
    psi_tilde,
    psi_tilde_minimizer,
    theorem1_asymptotic,
    xi_density,
)
from .errors import (
    BrownianStorageError,
    DomainError,
    HorizonExceeded,
    InfeasibleGrid,
    NoConvergence,
    NonPositiveDrainRate,
    QuadratureFailure,
)
from .harness import (
    busy_period_suite,
    estimate_pi,
    regime_study,
    run_experiment,
    scaling_check,
)
from .laplace import (
    lt_derivative,
    mean_stationary_area,
    mean_transient_area,
    stationary_lt,
    transient_lt,
)
from .model import (
    Branch,
    CycleRecord,
    EstimatorReport,
    GridPath,
    QueueParams,
    RateResult,
    WorkloadTrace,
    trapezoid_area,
    validate_params,
)
from .simulation import (
    SimConfig,
    decompose_cycles,
    sample_first_passage,
    sample_residual_busy_area,
    sample_stationary_q0,
    simulate_trace,
    step_workload,
)
from .variational import (
    minimize_psi_numeric,
    most_likely_path,
    path_table,
    rate_functional,
    skorokhod_map,
)

__version__ = "0.1.0"

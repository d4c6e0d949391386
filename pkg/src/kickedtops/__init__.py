"""Coupled kicked tops: quantum/classical dynamics and entanglement production."""

__version__ = "0.1.0"

from .experiments import (
    CHAOTIC_SEA_SET,
    ConfigError,
    ExperimentConfig,
    RunManifest,
    load_config,
    run_experiment,
)
from .classical import (
    ClassicalEnsemble,
    ClassicalPoint,
    average_lyapunov,
    ensemble_variance_series,
    finite_time_lyapunov,
    lambda_sum,
    map_step,
    poincare_section,
    sample_ensemble,
)
from .coupled import (
    CoupledParams,
    CoupledState,
    ReducedDensity,
    coupled_step,
    entropies_from_amplitudes,
    entropy_series,
    linear_entropy,
    reduced_density,
    von_neumann_entropy,
)
from .perturbation import (
    D_0,
    SIGMA_SAT_SQ,
    CorrelationMatrix,
    OmegaEstimate,
    PhenoParams,
    RateOutOfDomainError,
    correlation_matrix,
    estimate_omega,
    flow_rate,
    gamma_eff,
    improved_rate,
    pheno_entropy,
    product_correlation,
    production_rate,
    s_lin_pt,
    s_lin_pt_series,
    sigma_sq_estimate,
)
from .quantum import TopParams, build_floquet, evolve, variance_series, z_moments
from .series import EntropySeries, VarianceSeries
from .spin import (
    CoherentParams,
    OperatorMatrix,
    SpinBasis,
    SpinState,
    build_angular_momentum,
    coherent_state,
    husimi,
    wigner_d,
)

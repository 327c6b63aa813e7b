"""Bayesian estimation for linear inverse problems with an unknown operator.

The observation is a noisy operator image Y = K_theta f + eps*Z together
with an independent noisy sample T = theta + delta*W of the operator
parameter. The package provides forward simulation in coefficient space, a
cutoff Galerkin projection estimator with adaptive level selection, and a
Metropolis-within-Gibbs sampler for the joint posterior of (f, theta),
plus a benchmark harness reproducing the heat-equation and blind
deconvolution reference experiments.
"""

from .basis import (
    BasisKind,
    BasisSpec,
    CoefficientVector,
    LevelScaling,
    SINE_BASIS,
    TRIG_BASIS,
    coefficient_distance,
    evaluate_on_grid,
    l2_norm,
    project,
    sobolev_norm,
)
from .errors import (
    BlindinvError,
    ChainDiverged,
    ConfigError,
    EmptyGrid,
    IndexOutOfTheta,
    LevelMismatch,
    ModelMismatch,
    ShapeMismatch,
    SingularOperator,
)
from .operator import (
    DiagonalMatrix,
    ModelKind,
    OperatorModel,
    ThetaKind,
    ThetaParam,
    apply,
    heat_model,
    inverse_opnorm,
    projected_matrix,
    sigma_schedule,
    singular_value,
    singular_values,
    svd_diagonal_model,
)
from .forward import (
    Observation,
    load_observation,
    log_likelihood_projected,
    log_prior_f,
    log_prior_theta,
    save_observation,
    simulate,
)
from .estimator import (
    GalerkinConfig,
    GalerkinResult,
    LepskiConfig,
    LepskiResult,
    ThetaRefPolicy,
    galerkin_estimate,
    lepski_select,
    max_level,
    oracle_level,
)
from .posterior import (
    ChainConfig,
    PosteriorSummary,
    PriorConfig,
    UpdatePolicy,
    conditional_f_given_theta,
    gibbs_run,
    mh_theta_step,
    posterior_mean_theta,
    rmse_theta,
    theta_conditional_gaussian,
)
from .bench import (
    ExperimentConfig,
    ExperimentReport,
    deconv62_config,
    f0_coefficients,
    f0_trig_coefficients,
    f0_values,
    heat61_config,
    heat_level_rule,
    laplace_singular_values,
    run_deconvolution,
    run_experiment,
    run_heat,
)
from .reporting import emit_report, parse_config_file

__version__ = "0.1.0"

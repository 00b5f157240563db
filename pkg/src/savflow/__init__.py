"""Structure-preserving integrators for gradient flows via scalar auxiliary variables."""

from .cn import CnWorkspace, Predictor, PredictorKind, cn_run, cn_step, predict_half
from .core import (
    AugmentedState,
    GradientSystem,
    Splitting,
    StructureKind,
    apply_augmented_operator,
    augmented_rhs,
    init_augmented,
    modified_energy,
    modified_gradient,
    original_energy,
    phi,
    z_inner,
    z_norm,
)
from .elliptic import elliptic_K, jacobi_cn
from .errors import (
    ConfigError,
    ConvergenceError,
    DimensionMismatch,
    DomainError,
    MissingHistory,
    SavflowError,
    SingularMatrix,
    SingularOperator,
    SplittingUnavailable,
    StepError,
)
from .harness import (
    ExperimentConfig,
    build_problem,
    emit_orbit,
    fit_order,
    parse_config_echo,
    run_convergence,
    run_experiment,
)
from .kdv import (
    CnoidalParams,
    KdvGrid,
    cnoidal,
    default_cnoidal_params,
    kdv_splitting,
    kdv_system,
    spectral_delta,
)
from .kepler import (
    KEPLER_PERIOD,
    kepler_initial_state,
    kepler_reference,
    kepler_system,
    kepler_vector_field,
)
from .linalg import (
    DenseOperator,
    FourierDiagonalOperator,
    LinearSolvePlan,
    plan_implicit,
    solve_dense,
)
from .records import RunRecord
from .rk import (
    ButcherTableau,
    ExpTableau,
    ExplicitPredictorTableau,
    erk_step,
    exp_heun3_tableau,
    explicit_predictor_tableau,
    gauss2_tableau,
    phi1,
    phi2,
    predict_stages_explicit,
    predict_stages_exponential,
    rk4_run,
    rk4_step,
)

__version__ = "0.1.0"

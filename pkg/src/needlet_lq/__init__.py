"""Localized polynomial (needlet) kernels on the unit ball, l^q-regularized
kernel regression over sample-dependent hypothesis spaces, and the experiment
protocols built on them."""

__version__ = "0.1.0"

from .special_functions import (  # noqa: F401
    BasisConstants,
    addition_kernel_eval,
    gegenbauer_eval,
    gegenbauer_norm,
    pochhammer,
    sphere_surface_area,
    u_eval,
    v_coeff,
)
from .quadrature import (  # noqa: F401
    BallRule,
    Rule1D,
    SphereRule,
    ball_rule,
    ball_volume,
    gauss_jacobi_rule,
    integrate,
    lift_ball_rule_from_sphere,
    sphere_rule,
    weighted_sphere_rule,
)
from .needlet_kernel import (  # noqa: F401
    AdmissibleCutoff,
    NeedletKernel,
    ReproducingKernel,
    ball_metric,
    eta_eval,
)
from .lq_solver import (  # noqa: F401
    FitResult,
    LqProblem,
    coefficient_bound_check,
    objective,
    predict,
    project_M,
    prox_lq,
    solve_prox_grad,
    solve_ridge,
)
from .cubature_mz import (  # noqa: F401
    CubatureWitness,
    ball_moments,
    min_norm_sphere_weights,
    min_norm_weights,
    mz_check,
    weight_growth_report,
)
from .experiments import (  # noqa: F401
    DatasetSpec,
    KernelChoice,
    PhaseConfig,
    PhaseGrid,
    accuracy_confidence_curve,
    gen_data,
    phase_transition,
    sparsity_count,
    sweep_lambda,
    test_error,
)

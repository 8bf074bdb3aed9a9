"""Radial calculus over the p-adic numbers.

Evaluates the Vladimirov fractional derivative D^alpha and its right
inverse, the fractional integral I^alpha, on radial functions, and
solves the weakly degenerate Cauchy problem
|t|_p^gamma (D^alpha u)(|t|_p) = f(|t|_p, u(|t|_p)), u(0) = u0, by
Picard iteration plus level-by-level fixed-point continuation, with
built-in residual verification.
"""

from .errors import (
    BudgetError,
    ContractionError,
    DegenerationError,
    DivergenceError,
    DomainError,
    IndeterminateResidualError,
    InfeasibleRadiusError,
    MagnitudeError,
    MetadataError,
    NonConvergenceError,
)
from .haar import (
    DEFAULT_DEPTH,
    OVERFLOW_GUARD,
    Prime,
    ball_log_integral,
    ball_log_integral_oracle,
    ball_power_integral,
    ball_power_integral_oracle,
    haar_volume,
    p_pow,
    sphere_log_integral,
    sphere_power_integral,
    sphere_shifted_log_integral,
    sphere_shifted_log_integral_oracle,
    sphere_shifted_power_integral,
    sphere_shifted_power_integral_oracle,
)
from .radial import (
    ConditionCheck,
    RadialFunction,
    SummabilityReport,
    TailModel,
    check_summability,
    dump_radial,
    level_weighted_sum_left,
    level_weighted_sum_right,
    load_radial,
    radial_eval,
    weighted_sum_left,
    weighted_sum_right,
)
from .vladimirov import DalphaCoefficients, apply_dalpha, apply_dalpha_oracle
from .fracint import (
    BoundConstants,
    KernelConstants,
    apply_ialpha,
    assemble_fractional_integral,
    bound_constants,
    kernel_constant,
    kernel_constant_oracle,
    power_image_coefficient,
)
from .cauchy import (
    ExtensionDiagnostic,
    GlobalHypothesesReport,
    Nonlinearity,
    ProblemSpec,
    ResidualEstimate,
    ScaledRhs,
    SolveReport,
    catalog_nonlinearity,
    check_global_hypotheses,
    choose_local_radius,
    extend_step,
    extension_constant,
    make_ftilde,
    picard_solve,
    residual,
    solve_problem,
)

__version__ = "0.1.0"

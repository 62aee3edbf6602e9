"""Spectral energy-balance climate models with a dynamic ice line.

A zonally averaged surface-temperature equation (insolation minus linear
outgoing radiation plus horizontal heat transport, either diffusive or
relaxation-to-the-global-mean) is coupled to an equation moving the ice
edge toward its critical temperature.  Expanding in even Legendre
polynomials reduces the pair to a small ODE system with fast temperature
modes and a slow ice line; this package builds those systems, their
reduced slow flows h(eta), equilibria and stability, full and reduced
trajectories (including Filippov sliding on the Jormungand snow line),
and one-parameter bifurcation sweeps.
"""

from .albedo import (
    BudykoAlbedo,
    JormungandAlbedo,
    budyko_moments,
    jormungand_moments,
    moment_by_quadrature,
    pointwise_albedo,
)
from .config import ConfigError, load_config, params_from_dict, params_to_dict
from .dynamics import (
    FenichelReport,
    IntegratorOpts,
    StepFailureError,
    Trajectory,
    TrajectoryEvent,
    fenichel_check,
    integrate,
    integrate_reduced,
)
from .insolation import (
    DEFAULT_OBLIQUITY_DEG,
    s_coefficients,
    s_exact,
    s_quadratic,
    series_eval,
    series_poly,
)
from .legendre import (
    NonConvergenceError,
    legendre_antideriv,
    legendre_eval,
    legendre_poly,
    poly_eval,
    quadrature,
)
from .model import (
    DIFFUSIVE,
    RELAX_TO_MEAN,
    ModelParams,
    SpectralModel,
    build_model,
    global_mean,
    iceline_temperature,
    jacobian_gap_at_sigma,
    modern_climate_params,
    neoproterozoic_params,
    rhs,
    rhs_diffusive,
    rhs_relax_budyko,
    rhs_relax_jormungand,
)
from .reduced import (
    BOUNDARY_ICE_FREE,
    BOUNDARY_SNOWBALL,
    DEGENERATE,
    SLIDING_AT_RHO,
    STABLE,
    UNSTABLE,
    DegenerateRootError,
    Equilibrium,
    NoSolutionError,
    ReducedFlow,
    build_h,
    filippov_interval,
    find_equilibria,
    has_sliding_equilibrium,
    slow_manifold_temps,
    solve_D_for_target,
)
from .sweep import (
    BifurcationBranch,
    FoldPoint,
    SweepResult,
    SweepSpec,
    bistability_window,
    run_sweep,
)

__version__ = "0.1.0"

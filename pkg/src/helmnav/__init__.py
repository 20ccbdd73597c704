"""Hybrid stabilize/avoid feedback for a single-integrator vehicle in R^n
with one spherical obstacle: geometry, parameter certification, hybrid-time
simulation, and property verification."""

from .controller import (
    AtObstacleCenter,
    EmptyJumpTarget,
    flow_margin,
    flow_set_contains,
    jump_margin,
    jump_select,
    jump_set_contains,
    kappa,
)
from .geometry import (
    Ball,
    Cone,
    HalfCone,
    HalfSpace,
    Helmet,
    Line,
    geodesic_dist,
    orth_proj,
    par_proj,
    pi_theta,
    reflect,
    region_contains,
    region_margin,
)
from .hybrid_sim import (
    Arc,
    HybridState,
    HybridTrajectory,
    JumpEvent,
    NumericalStall,
    SimConfig,
    UnsafeStart,
    batch_simulate,
    locate_event,
    rk4_flow_step,
    simulate,
)
from .params import (
    ObstacleSpec,
    RawParams,
    ValidatedParams,
    ValidationFailure,
    construct_p1,
    mu_min,
    psi_max,
    theta_max,
    validate,
)
from .verify import (
    LyapunovSample,
    PropertyReport,
    audit_trajectory,
    check_boundary_flow,
    check_jump_cover,
    check_lemma1,
    check_lemma3,
    check_lemma4,
    lyapunov_series,
    random_feasible_params,
)

__version__ = "0.1.0"

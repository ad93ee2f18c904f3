"""Numerical verification lab for the clamped-plate Green function on
the unit ball and the fourth-order conformal kernel on hyperbolic
3-space: closed-form identities, a radial shooting solver, the integral
representation of clamped solutions, moving-plane kernel audits, the
ball <-> hyperbolic transport, and the nonexistence demonstration for
exponentially growing solutions of the integral equation."""

__version__ = "0.1.0"

from .ball_kernel import (
    BoggioConstant,
    C_DEFAULT,
    KernelJet,
    boggio_g,
    grad_x_g,
    kernel_jet,
    laplacian_y_g,
    normal_deriv_laplacian_y_g,
)
from .geometry import (
    BallPoint,
    PlaneReflector,
    bracket_xy,
    conformal_factor,
    hyperbolic_distance,
    kelvin_point,
    reflect,
)
from .hyperbolic_kernel import (
    KernelForm,
    ResolventOrder,
    gauss_2f1_euler,
    p2_green,
    p2_green_derivative,
    p2_green_partial_fraction,
    resolvent_green,
)
from .hyperbolic_map import (
    HyperbolicProfile,
    ball_to_hyperbolic,
    check_conformal_covariance,
    check_p2_equation,
    growth_coefficient,
    hyperbolic_to_ball,
    nonexistence_demo,
)
from .radial_solver import (
    ChoiXuProfile,
    NonConvergenceError,
    PositivityLossError,
    RadialSolution,
    ShootingConfig,
    SourceFn,
    calibrate_beta,
    choi_xu_profile,
    residual,
    series_start,
    shoot,
)
from .report import CheckReport
from .representation import (
    RepresentationConstants,
    ball_rule,
    check_representation,
    oracle_constants,
    paper_constants,
    representation_rhs,
)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Two-sided gradient bounds for Dirichlet and Neumann eigenfunctions.

Closed-form lower/upper bounds on the gradient ratio |grad phi|/|phi| of
eigenfunctions on model domains, finite-difference eigensolvers serving as
oracles, and Monte-Carlo verification of the underlying first-passage and
martingale structure.
"""

from ._core import (
    BoundSet,
    CurvatureData,
    Domain,
    DomainSpec,
    EigenPair,
    FptResult,
    GeometryParams,
    MartingaleCheck,
    MCConfig,
    NumericError,
    SurvivalResult,
    UpperVariant,
    bessel_j0,
    bessel_j0_zero,
    bessel_j1,
    boundary_alpha_grid_sup,
    boundary_gradient,
    circle_modes,
    convention_power,
    dirichlet_lower_bound,
    dirichlet_lower_bound_sup_t,
    dirichlet_lower_bound_weak,
    dirichlet_upper_bound,
    dirichlet_upper_bound_best,
    eps_max_closed_form,
    fpt_probability_exact,
    gradient_ratio,
    intro_c1_c2,
    make_ball,
    make_circle,
    make_interval,
    martingale_check,
    neumann_lower_bound,
    neumann_upper_bound,
    psi_gradient_bound_f,
    simulate_fpt,
    simulate_killed_diffusion,
    solve_ball_radial,
    solve_interval,
    survival_series,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

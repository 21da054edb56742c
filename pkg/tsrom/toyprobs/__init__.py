"""Initialize toy problems module"""

from tsrom.toyprobs.problems import (
    ADVECTION_DIFFUSION,
    VARCOEF_BVP,
    ToyProblem,
    adv_diff_solution,
    bvp_solution,
    generate,
    get_problem,
    midpoints,
    solution,
    spatial_grid,
)
from tsrom.toyprobs.finite_difference import fd_solve, ode_residual

__all__ = [
    "ADVECTION_DIFFUSION",
    "VARCOEF_BVP",
    "ToyProblem",
    "adv_diff_solution",
    "bvp_solution",
    "generate",
    "get_problem",
    "midpoints",
    "solution",
    "spatial_grid",
    "fd_solve",
    "ode_residual",
]

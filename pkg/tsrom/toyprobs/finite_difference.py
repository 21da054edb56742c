"""Finite-difference oracle for the toy problems."""

from typing import Tuple

import numpy as np
from scipy.linalg import solve_banded

from tsrom.errors import InvalidArgumentError
from tsrom.toyprobs.problems import (
    ADVECTION_DIFFUSION,
    VARCOEF_BVP,
    ToyProblem,
    solution,
    spatial_grid,
    varcoef_coefficient,
)


def fd_solve(problem: ToyProblem, s: float, m_points: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Second-order finite-difference solution on a uniform grid.

    Returns:
        Tuple of (x grid, f values) with zero boundary values
    """
    x = spatial_grid(problem, m_points)
    h = x[1] - x[0]
    n = m_points - 2

    if problem.kind == ADVECTION_DIFFUSION.kind:
        lower = np.full(n, s / h**2 - 1.0 / (2.0 * h))
        diag = np.full(n, -2.0 * s / h**2)
        upper = np.full(n, s / h**2 + 1.0 / (2.0 * h))
        rhs = np.full(n, -1.0)
    elif problem.kind == VARCOEF_BVP.kind:
        a_half = varcoef_coefficient(0.5 * (x[:-1] + x[1:]), s)
        lower = -a_half[:-1] / h**2
        diag = (a_half[:-1] + a_half[1:]) / h**2
        upper = -a_half[1:] / h**2
        rhs = np.ones(n)
    else:
        raise InvalidArgumentError(f"Unknown problem kind: {problem.kind}")

    # banded storage: row 0 superdiagonal, row 1 diagonal, row 2 subdiagonal
    banded = np.zeros((3, n))
    banded[0, 1:] = upper[:-1]
    banded[1] = diag
    banded[2, :-1] = lower[1:]

    f = np.zeros(m_points)
    f[1:-1] = solve_banded((1, 1), banded, rhs)
    return x, f


def ode_residual(problem: ToyProblem, s: float, x: np.ndarray, h: float = 1e-4) -> np.ndarray:
    """
    Residual of the closed form substituted into its ODE via central differences.

    x must keep a distance of at least h from the domain ends.
    """
    x = np.asarray(x, dtype=np.float64)
    f_minus = solution(problem, x - h, s)
    f_mid = solution(problem, x, s)
    f_plus = solution(problem, x + h, s)

    first = (f_plus - f_minus) / (2.0 * h)
    second = (f_plus - 2.0 * f_mid + f_minus) / h**2

    if problem.kind == ADVECTION_DIFFUSION.kind:
        return first + s * second + 1.0
    if problem.kind == VARCOEF_BVP.kind:
        a = varcoef_coefficient(x, s)
        a_prime = 4.0 * s * (2.0 * x - 1.0)
        return -(a * second + a_prime * first) - 1.0
    raise InvalidArgumentError(f"Unknown problem kind: {problem.kind}")

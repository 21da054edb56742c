"""Closed-form parameterized boundary-value problems used as test data.

advection_diffusion:  f' + s f'' = -1 on [-10, 10], s in [2, 20]
varcoef_bvp:          -(a f')' = 1 on [0, 1], a = 1 + 4s(x^2 - x), s in [0.1, 0.9]

Both use homogeneous boundary conditions.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np

from tsrom.errors import DuplicateParameterError, InvalidArgumentError, OutOfDomainError
from tsrom.storage.models import ColumnFile

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class ToyProblem:
    """A one-parameter boundary-value problem with a closed-form solution"""
    kind: str
    x_domain: Tuple[float, float]
    s_domain: Tuple[float, float]


ADVECTION_DIFFUSION = ToyProblem("advection_diffusion", (-10.0, 10.0), (2.0, 20.0))
VARCOEF_BVP = ToyProblem("varcoef_bvp", (0.0, 1.0), (0.1, 0.9))

PROBLEMS = {problem.kind: problem for problem in (ADVECTION_DIFFUSION, VARCOEF_BVP)}


def get_problem(kind: str) -> ToyProblem:
    """Look up a problem by kind"""
    if kind not in PROBLEMS:
        raise InvalidArgumentError(f"Unknown problem kind: {kind} (expected one of {sorted(PROBLEMS)})")
    return PROBLEMS[kind]


def _check(values: ArrayLike, domain: Tuple[float, float], name: str) -> None:
    arr = np.asarray(values)
    if np.any(arr < domain[0]) or np.any(arr > domain[1]):
        raise OutOfDomainError(f"{name} outside [{domain[0]}, {domain[1]}]")


def adv_diff_solution(x: ArrayLike, s: float) -> ArrayLike:
    """
    Solution of f' + s f'' = -1 with f(-10) = f(10) = 0.

    Raises:
        OutOfDomainError: If x or s is outside its domain
    """
    _check(x, ADVECTION_DIFFUSION.x_domain, "x")
    _check(s, ADVECTION_DIFFUSION.s_domain, "s")

    x = np.asarray(x, dtype=np.float64)
    growth = np.exp(20.0 / s)
    value = (growth * (x - 10.0) + 20.0 * np.exp((10.0 - x) / s) - x - 10.0) / (1.0 - growth)
    return value if value.ndim else float(value)


def varcoef_coefficient(x: ArrayLike, s: float) -> ArrayLike:
    """Diffusion coefficient a(x, s) = 1 + 4s(x^2 - x)"""
    x = np.asarray(x, dtype=np.float64)
    return 1.0 + 4.0 * s * (x * x - x)


def bvp_solution(x: ArrayLike, s: float) -> ArrayLike:
    """
    Solution of -(a f')' = 1 with f(0) = f(1) = 0 (natural logarithm).

    Raises:
        OutOfDomainError: If x or s is outside its domain
        ValueError: If the coefficient is not positive
    """
    _check(x, VARCOEF_BVP.x_domain, "x")
    _check(s, VARCOEF_BVP.s_domain, "s")

    a = varcoef_coefficient(x, s)
    if np.any(a <= 0.0):
        raise InvalidArgumentError(f"coefficient 1 + 4s(x^2 - x) is not positive for s={s!r}")

    value = -np.log(a) / (8.0 * s)
    return value if np.ndim(value) else float(value)


def solution(problem: ToyProblem, x: ArrayLike, s: float) -> ArrayLike:
    """Closed-form solution of problem at (x, s)"""
    if problem.kind == ADVECTION_DIFFUSION.kind:
        return adv_diff_solution(x, s)
    if problem.kind == VARCOEF_BVP.kind:
        return bvp_solution(x, s)
    raise InvalidArgumentError(f"Unknown problem kind: {problem.kind}")


def spatial_grid(problem: ToyProblem, m_points: int) -> np.ndarray:
    """Uniform grid with m_points nodes including both endpoints"""
    if m_points < 3:
        raise InvalidArgumentError(f"m_points must be at least 3, got {m_points}")
    return np.linspace(problem.x_domain[0], problem.x_domain[1], m_points)


def generate(problem: ToyProblem, m_points: int, s_values: Sequence[float]) -> List[ColumnFile]:
    """
    Sample the closed form on a uniform spatial grid, one column per s.

    Row ids are 0..m_points-1 in spatial order.

    Raises:
        OutOfDomainError: If an s value is outside the problem's domain
        DuplicateParameterError: If s_values repeats a value
    """
    x = spatial_grid(problem, m_points)
    s_values = [float(s) for s in s_values]
    if len(set(s_values)) != len(s_values):
        raise DuplicateParameterError(f"repeated parameter value in {s_values}")
    _check(s_values, problem.s_domain, "s")

    row_ids = np.arange(m_points, dtype=np.uint64)
    columns = [ColumnFile(s, row_ids, solution(problem, x, s)) for s in s_values]

    logger.info(f"Generated {len(columns)} {problem.kind} columns with {m_points} rows")
    return columns


def midpoints(grid: Sequence[float]) -> np.ndarray:
    """Midpoints of the intervals of an ascending grid"""
    grid = np.asarray(grid, dtype=np.float64)
    return 0.5 * (grid[:-1] + grid[1:])

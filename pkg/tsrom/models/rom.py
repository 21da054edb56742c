"""Interpolation-based reduced-order model with a mean/variance split.

Right singular vectors are interpolated in the parameter. Terms whose
neighboring differences grow too fast (the variation metric exceeds the
threshold) are not interpolated; they only contribute prediction variance.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import PchipInterpolator

from tsrom.core.executor import ChunkExecutor
from tsrom.core.tsqr import SvdFactors
from tsrom.errors import (
    DimensionMismatchError,
    InvalidArgumentError,
    MismatchedRowsError,
    NonUniformGridError,
    OutOfDomainError,
    UncalibratedError,
    ZeroTruthError,
)
from tsrom.storage.models import ColumnFile, RowVector
from tsrom.storage.products import matmat, matvec
from tsrom.utils.helpers import is_uniform_grid

logger = logging.getLogger(__name__)

INTERPOLANT_KINDS = ("linear", "pchip")


@dataclass(eq=False)
class Prediction:
    """ROM prediction at one parameter value"""
    s: float
    split_r: int
    row_ids: np.ndarray
    mean: np.ndarray
    variance: np.ndarray
    tau_bar: Optional[float] = None

    @property
    def std(self) -> np.ndarray:
        """Per-row prediction standard deviation"""
        return np.sqrt(self.variance)

    def confidence_bounds(self, z: float = 1.96) -> Tuple[np.ndarray, np.ndarray]:
        """Per-row band mean -/+ z * std"""
        half_width = z * self.std
        return self.mean - half_width, self.mean + half_width

    def as_row_vector(self) -> RowVector:
        """The mean keyed by row id"""
        return RowVector(self.row_ids, self.mean)


@dataclass(eq=False)
class RomModel:
    """
    SVD factors of the snapshot matrix plus the interpolant and threshold.

    The parameter grid must be uniform; tau_bar stays None until calibrated.
    """
    factors: SvdFactors
    interpolant_kind: str = "linear"
    tau_bar: Optional[float] = None
    _pchip: Optional[PchipInterpolator] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if self.interpolant_kind not in INTERPOLANT_KINDS:
            raise InvalidArgumentError(
                f"Invalid interpolant kind: {self.interpolant_kind} (expected one of {INTERPOLANT_KINDS})"
            )
        if not is_uniform_grid(self.factors.parameter_grid):
            raise NonUniformGridError("the ROM needs a uniform parameter grid")
        if self.tau_bar is not None and self.tau_bar < 0:
            raise InvalidArgumentError(f"tau_bar must be nonnegative, got {self.tau_bar}")

    @property
    def grid(self) -> np.ndarray:
        return self.factors.parameter_grid

    @property
    def delta_s(self) -> float:
        grid = self.grid
        return float((grid[-1] - grid[0]) / (grid.size - 1))

    def pchip(self) -> PchipInterpolator:
        """PCHIP interpolant of all V columns at once, built on first use"""
        if self._pchip is None:
            self._pchip = PchipInterpolator(self.grid, self.factors.v, axis=0)
        return self._pchip


def _check_domain(grid: np.ndarray, s: float) -> None:
    if not grid[0] <= s <= grid[-1]:
        raise OutOfDomainError(f"s={s!r} outside training domain [{float(grid[0])!r}, {float(grid[-1])!r}]")


def _interval_index(grid: np.ndarray, s: float) -> int:
    """j with s_j <= s < s_{j+1}, zero-based; s = s_N uses the last interval"""
    return int(min(np.searchsorted(grid, s, side="right") - 1, grid.size - 2))


def interpolate_columns(
    factors: SvdFactors, s: float, kind: str = "linear", model: Optional[RomModel] = None
) -> np.ndarray:
    """
    Interpolated values of every right singular vector at s.

    Grid nodes are reproduced exactly for both kinds.

    Raises:
        OutOfDomainError: If s is outside [s_1, s_N]
    """
    grid = factors.parameter_grid
    _check_domain(grid, s)

    node = np.flatnonzero(grid == s)
    if node.size:
        return factors.v[node[0]].copy()

    if kind == "linear":
        j = _interval_index(grid, s)
        weight = (s - grid[j]) / (grid[j + 1] - grid[j])
        return factors.v[j] + weight * (factors.v[j + 1] - factors.v[j])
    if kind == "pchip":
        interpolant = model.pchip() if model is not None else PchipInterpolator(grid, factors.v, axis=0)
        return np.asarray(interpolant(s), dtype=np.float64)

    raise InvalidArgumentError(f"Invalid interpolant kind: {kind}")


def interpolate_v(factors: SvdFactors, k: int, s: float, kind: str = "linear") -> float:
    """
    Interpolated k-th right singular function at s (k is 1-based).

    Raises:
        OutOfDomainError: If s is outside the training domain
    """
    if not 1 <= k <= factors.n_cols:
        raise DimensionMismatchError(f"column index k={k} outside [1, {factors.n_cols}]")
    return float(interpolate_columns(factors, s, kind)[k - 1])


def variation_profile(factors: SvdFactors, s: float) -> np.ndarray:
    """
    Variation metric tau(r, s) for r = 1..N.

    tau(r, s) = sum_{k<=r} |V[j+1, k] - V[j, k]| / delta_s on the interval holding s.
    """
    grid = factors.parameter_grid
    _check_domain(grid, s)

    j = _interval_index(grid, s)
    delta_s = (grid[-1] - grid[0]) / (grid.size - 1)
    return np.cumsum(np.abs(factors.v[j + 1] - factors.v[j])) / delta_s


def variation_metric(factors: SvdFactors, r: int, s: float) -> float:
    """Variation metric tau(r, s) for 1 <= r <= N"""
    if not 1 <= r <= factors.n_cols:
        raise DimensionMismatchError(f"r={r} outside [1, {factors.n_cols}]")
    return float(variation_profile(factors, s)[r - 1])


def choose_split(factors: SvdFactors, s: float, tau_bar: float) -> int:
    """
    Largest r with tau(r, s) <= tau_bar; 0 when even tau(1, s) exceeds it.

    tau is nondecreasing in r, so this counts the profile entries under the threshold.
    """
    if tau_bar < 0:
        raise InvalidArgumentError(f"tau_bar must be nonnegative, got {tau_bar}")
    return int(np.count_nonzero(variation_profile(factors, s) <= tau_bar))


def predict_with_split(
    model: RomModel,
    s: float,
    split_r: int,
    executor: Optional[ChunkExecutor] = None,
) -> Prediction:
    """
    Mean and variance at s for an explicitly given split.

    mean[i] = sum_{k<=R} sigma_k U[i, k] v~_k(s)
    variance[i] = sum_{k>R} sigma_k^2 U[i, k]^2
    """
    factors = model.factors
    n = factors.n_cols
    if not 0 <= split_r <= n:
        raise DimensionMismatchError(f"split R={split_r} outside [0, {n}]")

    v_tilde = interpolate_columns(factors, s, model.interpolant_kind, model)
    u = factors.u

    if split_r > 0:
        weights = factors.sigma[:split_r] * v_tilde[:split_r]
        mean_vec = matvec(u, weights, (1, split_r), executor=executor)
        row_ids, mean = mean_vec.row_ids, mean_vec.values
    else:
        row_ids, mean = None, None

    if split_r < n:
        var_vec = matvec(u, factors.sigma[split_r:] ** 2, (split_r + 1, n), executor=executor, square=True)
        row_ids, variance = var_vec.row_ids, var_vec.values
    else:
        variance = None

    if mean is None:
        mean = np.zeros_like(variance)
    if variance is None:
        variance = np.zeros_like(mean)

    return Prediction(
        s=float(s),
        split_r=int(split_r),
        row_ids=row_ids,
        mean=mean,
        variance=variance,
        tau_bar=model.tau_bar,
    )


def predict(model: RomModel, s: float, executor: Optional[ChunkExecutor] = None) -> Prediction:
    """
    ROM prediction at s using the calibrated threshold.

    Raises:
        UncalibratedError: If the model has no threshold yet
        OutOfDomainError: If s is outside the training domain
    """
    if model.tau_bar is None:
        raise UncalibratedError("the model has no variation threshold; run calibrate first")

    split_r = choose_split(model.factors, s, model.tau_bar)
    prediction = predict_with_split(model, s, split_r, executor=executor)
    logger.debug(f"Predicted s={s!r} with split R={split_r}")
    return prediction


def predict_batch(
    model: RomModel,
    s_values: Sequence[float],
    executor: Optional[ChunkExecutor] = None,
) -> List[Prediction]:
    """
    Predictions at many parameter values in one pass over the U chunks.

    Raises:
        UncalibratedError: If the model has no threshold yet
    """
    if model.tau_bar is None:
        raise UncalibratedError("the model has no variation threshold; run calibrate first")
    if len(s_values) == 0:
        return []

    factors = model.factors
    n = factors.n_cols
    splits = [choose_split(factors, s, model.tau_bar) for s in s_values]

    mean_weights = np.zeros((n, len(s_values)))
    var_weights = np.zeros((n, len(s_values)))
    for p, (s, split_r) in enumerate(zip(s_values, splits)):
        v_tilde = interpolate_columns(factors, s, model.interpolant_kind, model)
        mean_weights[:split_r, p] = factors.sigma[:split_r] * v_tilde[:split_r]
        var_weights[split_r:, p] = factors.sigma[split_r:] ** 2

    row_ids, means = matmat(factors.u, mean_weights, executor=executor)
    _, variances = matmat(factors.u, var_weights, executor=executor, square=True)

    logger.info(f"Predicted {len(s_values)} parameter values in one pass over {len(factors.u)} chunks")
    return [
        Prediction(
            s=float(s),
            split_r=split_r,
            row_ids=row_ids,
            mean=means[:, p].copy(),
            variance=variances[:, p].copy(),
            tau_bar=model.tau_bar,
        )
        for p, (s, split_r) in enumerate(zip(s_values, splits))
    ]


def covariance_entry(model: RomModel, s: float, i: int, j: int) -> float:
    """
    Prediction covariance between rows with ids i and j at s.

    Returns sum_{k>R} sigma_k^2 U[i, k] U[j, k].
    """
    if model.tau_bar is None:
        raise UncalibratedError("the model has no variation threshold; run calibrate first")

    split_r = choose_split(model.factors, s, model.tau_bar)
    return covariance_with_split(model, split_r, i, j)


def covariance_with_split(model: RomModel, split_r: int, i: int, j: int) -> float:
    """Covariance between rows i and j for an explicitly given split"""
    factors = model.factors
    u_i = factors.u.row(i)[split_r:]
    u_j = factors.u.row(j)[split_r:]
    return float(np.sum(factors.sigma[split_r:] ** 2 * u_i * u_j))


def relative_error(mean: RowVector, truth: ColumnFile) -> float:
    """
    Relative 2-norm error ||truth - mean|| / ||truth|| over all rows.

    Raises:
        MismatchedRowsError: If the row ids differ
        ZeroTruthError: If the truth has zero norm
    """
    if mean.row_ids.size != truth.row_ids.size or not np.array_equal(mean.row_ids, truth.row_ids):
        raise MismatchedRowsError(f"prediction rows do not match truth at s={truth.parameter_value!r}")

    norm = np.linalg.norm(truth.values)
    if norm == 0.0:
        raise ZeroTruthError(f"truth at s={truth.parameter_value!r} has zero norm")
    return float(np.linalg.norm(truth.values - mean.values) / norm)

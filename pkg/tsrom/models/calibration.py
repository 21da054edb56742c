"""Threshold calibration of the variation split against a testing set."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from tsrom.core.executor import ChunkExecutor, get_executor
from tsrom.errors import EmptyTestingError, InvalidArgumentError, OutOfDomainError, SiteCollisionError
from tsrom.models.rom import (
    RomModel,
    choose_split,
    predict_with_split,
    relative_error,
    variation_profile,
)
from tsrom.storage.models import ColumnFile

logger = logging.getLogger(__name__)

DEFAULT_CANDIDATES = 20
DEFAULT_TOLERANCE = 0.05


@dataclass(eq=False)
class CalibrationReport:
    """Error surface E(s_l, tau_bar_m) over testing sites and candidate thresholds"""
    testing_sites: np.ndarray
    candidate_thresholds: np.ndarray
    errors: np.ndarray
    splits: np.ndarray
    chosen_tau_bar: float
    chosen_index: int
    site_splits: np.ndarray = field(default=None)
    site_errors: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.site_splits is None:
            self.site_splits = self.splits[:, self.chosen_index]
        if self.site_errors is None:
            self.site_errors = self.errors[:, self.chosen_index]

    @property
    def max_errors(self) -> np.ndarray:
        """Max-over-sites error for each candidate"""
        return self.errors.max(axis=0)

    def split_rows(self) -> List[Tuple[float, float, int, float]]:
        """Rows (s, tau_bar, R, error) at the chosen threshold"""
        return [
            (float(s), self.chosen_tau_bar, int(r), float(e))
            for s, r, e in zip(self.testing_sites, self.site_splits, self.site_errors)
        ]

    def surface_rows(self) -> List[Tuple[int, int, float, float, float]]:
        """Rows (site_index, candidate_index, s, tau, error) of the full surface"""
        return [
            (l, m, float(s), float(tau), float(self.errors[l, m]))
            for l, s in enumerate(self.testing_sites)
            for m, tau in enumerate(self.candidate_thresholds)
        ]

    def to_dict(self) -> Dict:
        """Convert report to dictionary representation"""
        return {
            "testing_sites": [float(s) for s in self.testing_sites],
            "candidate_thresholds": [float(t) for t in self.candidate_thresholds],
            "chosen_tau_bar": self.chosen_tau_bar,
            "site_splits": [int(r) for r in self.site_splits],
            "site_errors": [float(e) for e in self.site_errors],
        }


def candidate_thresholds(model: RomModel, sites: Sequence[float], n_candidates: int) -> np.ndarray:
    """
    Uniformly spaced thresholds over [min_l tau(1, s_l), max_l tau(N, s_l)].
    """
    profiles = np.array([variation_profile(model.factors, s) for s in sites])
    return np.linspace(profiles[:, 0].min(), profiles[:, -1].max(), n_candidates)


def select_threshold(errors: np.ndarray, candidates: np.ndarray, tolerance: float = DEFAULT_TOLERANCE) -> int:
    """
    Index of the smallest candidate whose max-over-sites error is within
    tolerance (relative) of the best achievable max-over-sites error.
    """
    worst = errors.max(axis=0)
    best = worst.min()
    admissible = np.flatnonzero(worst <= best * (1.0 + tolerance))
    return int(admissible[np.argmin(candidates[admissible])])


def _validate_sites(model: RomModel, testing: Sequence[ColumnFile]) -> np.ndarray:
    if not testing:
        raise EmptyTestingError("calibration needs at least one testing column")

    grid = model.grid
    sites = np.array([column.parameter_value for column in testing])
    for s in sites:
        if np.any(grid == s):
            raise SiteCollisionError(f"testing site s={float(s)!r} coincides with a training node")
        if not grid[0] < s < grid[-1]:
            raise OutOfDomainError(f"testing site s={float(s)!r} is not strictly inside the training domain")
    return sites


def calibrate(
    model: RomModel,
    testing: Sequence[ColumnFile],
    n_candidates: int = DEFAULT_CANDIDATES,
    executor: Optional[ChunkExecutor] = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> CalibrationReport:
    """
    Choose the variation threshold from held-out testing runs.

    For every testing site and candidate threshold the ROM mean is compared
    with the testing run. The model's tau_bar is set to the chosen candidate.

    Args:
        model: ROM to calibrate (modified in place)
        testing: Testing runs at sites strictly inside the domain, off the grid
        n_candidates: Number of candidate thresholds (>= 2)
        executor: Worker pool; sites are evaluated in parallel
        tolerance: Relative slack on the best max-over-sites error

    Returns:
        CalibrationReport with the full error surface

    Raises:
        EmptyTestingError: If there are no testing runs
        SiteCollisionError: If a testing site equals a training node
    """
    if n_candidates < 2:
        raise InvalidArgumentError(f"n_candidates must be at least 2, got {n_candidates}")

    sites = _validate_sites(model, testing)
    candidates = candidate_thresholds(model, sites, n_candidates)
    pool = get_executor(executor)

    def evaluate_site(column: ColumnFile) -> Tuple[np.ndarray, np.ndarray]:
        s = column.parameter_value
        splits = np.array([choose_split(model.factors, s, tau) for tau in candidates])
        by_split: Dict[int, float] = {}
        for split_r in np.unique(splits):
            prediction = predict_with_split(model, s, int(split_r))
            by_split[int(split_r)] = relative_error(prediction.as_row_vector(), column)
        return splits, np.array([by_split[int(r)] for r in splits])

    results = pool.map(evaluate_site, list(testing))
    splits = np.vstack([result[0] for result in results])
    errors = np.vstack([result[1] for result in results])

    chosen = select_threshold(errors, candidates, tolerance)
    model.tau_bar = float(candidates[chosen])

    report = CalibrationReport(
        testing_sites=sites,
        candidate_thresholds=candidates,
        errors=errors,
        splits=splits,
        chosen_tau_bar=model.tau_bar,
        chosen_index=chosen,
    )
    logger.info(
        f"Calibrated tau_bar={model.tau_bar:.6g} (candidate {chosen + 1} of {n_candidates}); "
        f"max site error {report.site_errors.max():.4g}"
    )
    return report

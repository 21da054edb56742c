"""Scalar quantities of interest computed from a full field."""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from tsrom.errors import EmptyInputError, InvalidArgumentError

QOI_KINDS = ("mean", "exceedance")


@dataclass
class QuantityOfInterest:
    """
    Row-subset functional of a field.

    kind "mean" averages the selected rows; kind "exceedance" is the fraction
    of selected rows whose value is strictly above threshold.
    """
    kind: str = "mean"
    row_range: Optional[Tuple[int, int]] = None
    threshold: float = 0.0

    def __post_init__(self):
        if self.kind not in QOI_KINDS:
            raise InvalidArgumentError(f"Invalid QoI kind: {self.kind}")

    def select(self, row_ids: np.ndarray, values: np.ndarray) -> np.ndarray:
        """Values of the rows whose id falls in the inclusive row_range"""
        if self.row_range is None:
            selected = values
        else:
            low, high = self.row_range
            mask = (row_ids >= np.uint64(low)) & (row_ids <= np.uint64(high))
            selected = values[mask]
        if selected.size == 0:
            raise EmptyInputError(f"QoI row range {self.row_range} selects no rows")
        return selected

    def __call__(self, row_ids: np.ndarray, values: np.ndarray) -> float:
        selected = self.select(row_ids, values)
        if self.kind == "mean":
            return float(np.mean(selected))
        return float(np.count_nonzero(selected > self.threshold) / selected.size)

"""Pydantic models for pipeline configuration."""

import os
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from tsrom.models.qoi import QuantityOfInterest
from tsrom.storage.models import DEFAULT_CHUNK_ROWS
from tsrom.toyprobs.problems import get_problem, midpoints

OUTPUT_DIR_ENV = "TSROM_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "tsrom_output"

DEFAULT_TRAINING = {
    "advection_diffusion": {"start": 2.0, "stop": 20.0, "count": 15},
    "varcoef_bvp": {"start": 0.1, "stop": 0.9, "count": 11},
}


def default_output_dir() -> str:
    """Output directory from TSROM_OUTPUT_DIR, else the package default"""
    return os.getenv(OUTPUT_DIR_ENV) or DEFAULT_OUTPUT_DIR


class GridSpec(BaseModel):
    """Parameter grid given either as start/stop/count or as explicit values."""
    start: Optional[float] = None
    stop: Optional[float] = None
    count: Optional[int] = Field(default=None, ge=2)
    values: Optional[List[float]] = None

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def check_form(self) -> "GridSpec":
        if self.values is not None:
            if len(self.values) == 0:
                raise ValueError("grid values must not be empty")
            if len(set(self.values)) != len(self.values):
                raise ValueError("grid values must be distinct")
        elif None in (self.start, self.stop, self.count):
            raise ValueError("grid needs either values or start, stop and count")
        elif self.stop <= self.start:
            raise ValueError("grid stop must exceed start")
        return self

    def to_array(self) -> np.ndarray:
        """Grid values in ascending order"""
        if self.values is not None:
            return np.sort(np.asarray(self.values, dtype=np.float64))
        return np.linspace(self.start, self.stop, self.count)


class QoiSpec(BaseModel):
    """Scalar quantity of interest compared in validate."""
    kind: Literal["mean", "exceedance"] = "mean"
    row_range: Optional[Tuple[int, int]] = None
    threshold: float = 0.0

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def check_range(self) -> "QoiSpec":
        if self.row_range is not None and not 0 <= self.row_range[0] <= self.row_range[1]:
            raise ValueError(f"row_range must satisfy 0 <= low <= high, got {self.row_range}")
        return self

    def build(self) -> QuantityOfInterest:
        return QuantityOfInterest(kind=self.kind, row_range=self.row_range, threshold=self.threshold)


class PipelineConfig(BaseModel):
    """Configuration shared by every pipeline subcommand."""
    problem: Literal["advection_diffusion", "varcoef_bvp"] = "varcoef_bvp"
    m_points: int = Field(default=1999, ge=3, description="Spatial points including endpoints")
    training: Optional[GridSpec] = Field(default=None, description="Training parameter grid")
    testing: Optional[GridSpec] = Field(default=None, description="Testing sites; midpoints when omitted")
    chunk_rows: int = Field(default=DEFAULT_CHUNK_ROWS, ge=1)
    interpolant_kind: Literal["linear", "pchip"] = "linear"
    n_candidates: int = Field(default=20, ge=2)
    tolerance: float = Field(default=0.05, ge=0.0, description="Relative slack on the best max error")
    output_dir: str = Field(default_factory=default_output_dir)
    threads: int = Field(default=1, ge=1)
    qoi: QoiSpec = Field(default_factory=QoiSpec)
    surface_kind: Literal["linear", "nearest", "cubic_spline", "pchip", "auto"] = "pchip"

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def check_grids(self) -> "PipelineConfig":
        if self.training is None:
            self.training = GridSpec(**DEFAULT_TRAINING[self.problem])

        low, high = get_problem(self.problem).s_domain
        training = self.training.to_array()
        if training.size < 2:
            raise ValueError("training grid needs at least two values")
        if training[0] < low or training[-1] > high:
            raise ValueError(f"training grid leaves the {self.problem} domain [{low}, {high}]")

        testing = self.testing_values()
        if testing.min() < low or testing.max() > high:
            raise ValueError(f"testing sites leave the {self.problem} domain [{low}, {high}]")
        if np.intersect1d(training, testing).size:
            raise ValueError("testing sites must be disjoint from training sites")
        return self

    def training_values(self) -> np.ndarray:
        return self.training.to_array()

    def testing_values(self) -> np.ndarray:
        if self.testing is None:
            return midpoints(self.training_values())
        return self.testing.to_array()

"""Initialize models module"""

from tsrom.models.rom import (
    Prediction,
    RomModel,
    choose_split,
    covariance_entry,
    covariance_with_split,
    interpolate_columns,
    interpolate_v,
    predict,
    predict_batch,
    predict_with_split,
    relative_error,
    variation_metric,
    variation_profile,
)
from tsrom.models.calibration import CalibrationReport, calibrate, candidate_thresholds, select_threshold
from tsrom.models.response_surface import ResponseSurface, response_surface, select_response_surface
from tsrom.models.qoi import QuantityOfInterest

__all__ = [
    "Prediction",
    "RomModel",
    "choose_split",
    "covariance_entry",
    "covariance_with_split",
    "interpolate_columns",
    "interpolate_v",
    "predict",
    "predict_batch",
    "predict_with_split",
    "relative_error",
    "variation_metric",
    "variation_profile",
    "CalibrationReport",
    "calibrate",
    "candidate_thresholds",
    "select_threshold",
    "ResponseSurface",
    "response_surface",
    "select_response_surface",
    "QuantityOfInterest",
]

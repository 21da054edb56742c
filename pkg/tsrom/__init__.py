"""Out-of-core SVD reduced-order models for parameterized simulations

Snapshot matrices are assembled from per-run column files into row chunks,
factored with a tall-and-skinny QR followed by an SVD of the small R factor,
and turned into an interpolating reduced-order model whose prediction
variance flags parameter regions the model cannot resolve.
"""

__version__ = "0.1.0"
__license__ = "MIT"

from tsrom.core.executor import ChunkExecutor
from tsrom.core.tsqr import SvdFactors, tssvd
from tsrom.models.calibration import CalibrationReport, calibrate
from tsrom.models.rom import Prediction, RomModel, predict, predict_batch
from tsrom.storage.assembly import assemble
from tsrom.storage.models import ColumnFile, SnapshotMatrix

__all__ = [
    "ChunkExecutor",
    "SvdFactors",
    "tssvd",
    "CalibrationReport",
    "calibrate",
    "Prediction",
    "RomModel",
    "predict",
    "predict_batch",
    "assemble",
    "ColumnFile",
    "SnapshotMatrix",
]

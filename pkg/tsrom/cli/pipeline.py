"""Pipeline orchestration behind the command-line interface."""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from tsrom.config.schemas import PipelineConfig
from tsrom.core.executor import ChunkExecutor
from tsrom.core.tsqr import tssvd
from tsrom.errors import EmptyTestingError
from tsrom.models.calibration import CalibrationReport, calibrate
from tsrom.models.response_surface import ResponseSurface, select_response_surface
from tsrom.models.rom import Prediction, RomModel, predict_batch, relative_error
from tsrom.storage.assembly import assemble
from tsrom.storage.models import ColumnFile
from tsrom.storage.repositories import (
    ColumnRepository,
    FactorRepository,
    MatrixRepository,
    PredictionRepository,
)
from tsrom.toyprobs.problems import generate, get_problem
from tsrom.utils.helpers import write_csv

logger = logging.getLogger(__name__)

SINGULAR_VALUES_CSV = "singular_values.csv"
RIGHT_VECTORS_CSV = "right_vectors.csv"
CALIBRATION_CSV = "calibration.csv"
SPLIT_TABLE_CSV = "split_table.csv"
VALIDATE_CSV = "validate.csv"

CALIBRATION_HEADER = ["site_index", "candidate_index", "s", "tau", "error"]
SPLIT_TABLE_HEADER = ["s", "tau_bar", "R", "error"]
VALIDATE_HEADER = [
    "s",
    "R",
    "error",
    "qoi_truth",
    "qoi_rom",
    "qoi_surface",
    "abs_error_rom",
    "abs_error_surface",
]


def _clear(directory: Path, pattern: str) -> None:
    """Remove stale artifacts matching pattern (and their sidecars) from a previous run"""
    if not directory.is_dir():
        return
    for path in directory.glob(pattern):
        path.unlink()


class Pipeline:
    """
    Runs the pipeline stages against one output directory.

    Layout under output_dir:
        columns/train, columns/test   column files
        matrix/                       snapshot matrix chunks + manifest.json
        factors/                      factors.json, u/, singular_values.csv, right_vectors.csv
        predictions/                  prediction files + sidecars
        calibration.csv, split_table.csv, validate.csv
    """

    def __init__(self, config: PipelineConfig, executor: Optional[ChunkExecutor] = None):
        """
        Initialize the pipeline.

        Args:
            config: Validated pipeline configuration
            executor: Worker pool; built from config.threads when omitted
        """
        self.config = config
        self.executor = executor or ChunkExecutor(threads=config.threads)
        self.out = Path(config.output_dir)

    @property
    def train_dir(self) -> Path:
        return self.out / "columns" / "train"

    @property
    def test_dir(self) -> Path:
        return self.out / "columns" / "test"

    @property
    def matrix_dir(self) -> Path:
        return self.out / "matrix"

    @property
    def factor_dir(self) -> Path:
        return self.out / "factors"

    @property
    def prediction_dir(self) -> Path:
        return self.out / "predictions"

    def cmd_toygen(self) -> Tuple[List[Path], List[Path]]:
        """
        Generate training and testing column files for the configured problem.

        Returns:
            Tuple of (training paths, testing paths)
        """
        problem = get_problem(self.config.problem)
        training = generate(problem, self.config.m_points, self.config.training_values())
        testing = generate(problem, self.config.m_points, self.config.testing_values())

        paths = []
        for directory, columns in ((self.train_dir, training), (self.test_dir, testing)):
            _clear(directory, "column_*")
            paths.append(ColumnRepository(directory).save_all(columns))

        logger.info(f"Generated {len(training)} training and {len(testing)} testing columns")
        return paths[0], paths[1]

    def cmd_assemble(self) -> Path:
        """Assemble training columns into the chunked snapshot matrix"""
        columns = ColumnRepository(self.train_dir).load_all()
        matrix = assemble(columns, chunk_rows=self.config.chunk_rows, executor=self.executor)

        _clear(self.matrix_dir, "chunk-*")
        return MatrixRepository(self.matrix_dir).save(matrix)

    def cmd_decompose(self) -> Path:
        """
        Factor the snapshot matrix and write the factor manifest and CSVs.

        singular_values.csv holds (k, sigma, sigma/sigma_1, energy);
        right_vectors.csv holds sigma_k * v_k(s_j) per training site.
        """
        matrix = MatrixRepository(self.matrix_dir).load()
        _clear(self.factor_dir / "u", "chunk-*")
        factors = tssvd(matrix, executor=self.executor)

        path = FactorRepository(self.factor_dir).save(factors, interpolant_kind=self.config.interpolant_kind)

        sigma = factors.sigma
        ratio = sigma / sigma[0] if sigma[0] > 0 else np.zeros_like(sigma)
        write_csv(
            self.factor_dir / SINGULAR_VALUES_CSV,
            ["k", "sigma", "sigma_ratio", "energy"],
            zip(range(1, sigma.size + 1), sigma, ratio, factors.energy()),
        )

        scaled = factors.v * sigma
        write_csv(
            self.factor_dir / RIGHT_VECTORS_CSV,
            ["s"] + [f"sigma_v_{k}" for k in range(1, sigma.size + 1)],
            ([s] + list(row) for s, row in zip(factors.parameter_grid, scaled)),
        )
        return path

    def _load_model(self, tau_bar: Optional[float] = None) -> RomModel:
        repository = FactorRepository(self.factor_dir)
        manifest = repository.manifest()
        return RomModel(
            factors=repository.load(),
            interpolant_kind=manifest.interpolant_kind,
            tau_bar=manifest.tau_bar if tau_bar is None else tau_bar,
        )

    def cmd_calibrate(self) -> CalibrationReport:
        """Choose tau_bar from the testing columns and write calibration.csv and split_table.csv"""
        repository = FactorRepository(self.factor_dir)
        model = RomModel(repository.load(), interpolant_kind=self.config.interpolant_kind)
        testing = ColumnRepository(self.test_dir).load_all()

        report = calibrate(
            model,
            testing,
            n_candidates=self.config.n_candidates,
            executor=self.executor,
            tolerance=self.config.tolerance,
        )
        repository.update_model(self.config.interpolant_kind, report.chosen_tau_bar)

        write_csv(self.out / CALIBRATION_CSV, CALIBRATION_HEADER, report.surface_rows())
        write_csv(self.out / SPLIT_TABLE_CSV, SPLIT_TABLE_HEADER, report.split_rows())
        return report

    def cmd_predict(
        self,
        s_values: Optional[Sequence[float]] = None,
        tau_bar: Optional[float] = None,
    ) -> List[Prediction]:
        """
        Predict at s_values (the testing sites when omitted) in one batch.

        Args:
            s_values: Parameter values to predict at
            tau_bar: Threshold overriding the calibrated one

        Raises:
            UncalibratedError: If no threshold is known
            OutOfDomainError: If an s value is outside the training domain
        """
        model = self._load_model(tau_bar)
        if s_values is None or len(s_values) == 0:
            s_values = [float(s) for s in self.config.testing_values()]

        predictions = predict_batch(model, list(s_values), executor=self.executor)

        _clear(self.prediction_dir, "prediction_*")
        repository = PredictionRepository(self.prediction_dir)
        for index, prediction in enumerate(predictions):
            repository.save(prediction, index)
        logger.info(f"Wrote {len(predictions)} predictions to {self.prediction_dir}")
        return predictions

    def response_surface(self, training: Sequence[ColumnFile]) -> ResponseSurface:
        """
        Baseline response surface fitted to the QoI of the training runs.

        With surface_kind "auto" the kind is chosen by fitting on even-indexed
        runs and scoring on odd-indexed ones, then refit on all runs.
        """
        qoi = self.config.qoi.build()
        sites = [(column.parameter_value, qoi(column.row_ids, column.values)) for column in training]

        kind = self.config.surface_kind
        if kind == "auto":
            ordered = sorted(sites)
            kind, _ = select_response_surface(ordered[::2], ordered[1::2])
        return ResponseSurface(sites, kind)

    def cmd_validate(self) -> Path:
        """
        Compare predictions against the testing truth and the response-surface baseline.

        Raises:
            MismatchedRowsError: If a prediction and its truth differ in rows
            EmptyTestingError: If no prediction has a matching truth column
        """
        truth_by_s = {column.parameter_value: column for column in ColumnRepository(self.test_dir).load_all()}
        training = ColumnRepository(self.train_dir).load_all()
        predictions = PredictionRepository(self.prediction_dir).load_all()

        qoi = self.config.qoi.build()
        surface = self.response_surface(training)

        rows = []
        for prediction in predictions:
            truth = truth_by_s.get(prediction.s)
            if truth is None:
                logger.warning(f"No truth column for prediction at s={prediction.s!r}; skipped")
                continue

            q_truth = qoi(truth.row_ids, truth.values)
            q_rom = qoi(prediction.row_ids, prediction.mean)
            q_surface = surface(prediction.s)
            rows.append(
                (
                    prediction.s,
                    prediction.split_r,
                    relative_error(prediction.as_row_vector(), truth),
                    q_truth,
                    q_rom,
                    q_surface,
                    abs(q_rom - q_truth),
                    abs(q_surface - q_truth),
                )
            )

        if not rows:
            raise EmptyTestingError("no prediction matches a testing column")

        rows.sort(key=lambda row: row[0])
        path = write_csv(self.out / VALIDATE_CSV, VALIDATE_HEADER, rows)
        logger.info(f"Validated {len(rows)} sites with {surface.kind} response surface baseline")
        return path

    def run(self) -> Dict[str, Path]:
        """Run toygen, assemble, decompose, calibrate, predict and validate in order"""
        self.cmd_toygen()
        self.cmd_assemble()
        self.cmd_decompose()
        self.cmd_calibrate()
        self.cmd_predict()
        self.cmd_validate()
        return self.artifacts()

    def artifacts(self) -> Dict[str, Path]:
        """CSV artifacts of a complete run"""
        return {
            "singular_values": self.factor_dir / SINGULAR_VALUES_CSV,
            "right_vectors": self.factor_dir / RIGHT_VECTORS_CSV,
            "calibration": self.out / CALIBRATION_CSV,
            "split_table": self.out / SPLIT_TABLE_CSV,
            "validate": self.out / VALIDATE_CSV,
        }

    def info(self) -> Tuple[List[Tuple[int, float, float, float]], Dict]:
        """
        Summary of the stored factors.

        Returns:
            Tuple of (rows of (k, sigma, sigma/sigma_1, energy), model metadata)
        """
        repository = FactorRepository(self.factor_dir)
        manifest = repository.manifest()
        factors = repository.load()

        sigma = factors.sigma
        ratio = sigma / sigma[0] if sigma[0] > 0 else np.zeros_like(sigma)
        rows = [
            (k, float(value), float(r), float(e))
            for k, (value, r, e) in enumerate(zip(sigma, ratio, factors.energy()), start=1)
        ]
        metadata = {
            "m_rows": factors.u.m_rows,
            "n_cols": factors.n_cols,
            "grid": f"[{manifest.parameter_grid[0]:g}, {manifest.parameter_grid[-1]:g}]",
            "interpolant_kind": manifest.interpolant_kind,
            "tau_bar": manifest.tau_bar,
        }
        return rows, metadata

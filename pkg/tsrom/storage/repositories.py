"""Repository pattern implementations for on-disk artifacts."""

import hashlib
import json
import logging
from pathlib import Path
from typing import TYPE_CHECKING, List, Sequence, Union

import numpy as np
from pydantic import ValidationError

from tsrom.errors import CorruptHeaderError, EmptyInputError, IoFailureError
from tsrom.storage.codec import CHUNK_SUFFIX, read_chunk, read_column, sidecar_path, write_chunk, write_column
from tsrom.storage.models import ChunkedMatrix, ChunkRef, ColumnFile, MatrixChunk, SnapshotMatrix
from tsrom.storage.schema import (
    ChunkEntry,
    FactorManifest,
    MatrixManifest,
    PredictionSidecar,
)
from tsrom.utils.helpers import dump_json

if TYPE_CHECKING:
    from tsrom.core.tsqr import SvdFactors
    from tsrom.models.rom import Prediction

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

MANIFEST_NAME = "manifest.json"
FACTOR_MANIFEST_NAME = "factors.json"


def _read_model(path: Path, model_cls):
    # tau_bar may be stored as the Infinity token
    try:
        return model_cls.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except OSError as e:
        raise IoFailureError(f"cannot read {path}: {e}") from e
    except (ValidationError, json.JSONDecodeError) as e:
        raise CorruptHeaderError(f"{path}: invalid {model_cls.__name__}: {e}") from e


class ColumnRepository:
    """Repository for column files of one training or testing set."""

    def __init__(self, directory: PathLike):
        """Initialize with the directory holding the column files."""
        self.directory = Path(directory)

    def save_all(self, columns: Sequence[ColumnFile]) -> List[Path]:
        """Write columns as column_0000.tsmx, column_0001.tsmx, ... in the given order"""
        paths = [
            write_column(column, self.directory / f"column_{index:04d}{CHUNK_SUFFIX}")
            for index, column in enumerate(columns)
        ]
        logger.info(f"Wrote {len(paths)} column files to {self.directory}")
        return paths

    def paths(self) -> List[Path]:
        """Column files in name order"""
        return sorted(self.directory.glob(f"column_*{CHUNK_SUFFIX}"))

    def load_all(self) -> List[ColumnFile]:
        """
        Read every column file in the directory.

        Raises:
            EmptyInputError: If the directory holds no column files
        """
        paths = self.paths()
        if not paths:
            raise EmptyInputError(f"no column files in {self.directory}")
        return [read_column(path) for path in paths]


class MatrixRepository:
    """Repository for chunked matrices stored as chunk files plus a JSON manifest."""

    def __init__(self, directory: PathLike):
        """Initialize with the directory holding manifest and chunks."""
        self.directory = Path(directory)

    def save(self, matrix: ChunkedMatrix, name: str = MANIFEST_NAME) -> Path:
        """
        Persist every chunk and write the manifest.

        Args:
            matrix: Matrix to persist
            name: Manifest file name

        Returns:
            Path of the manifest
        """
        entries = []
        for ref in matrix.chunks:
            chunk = ref.load()
            filename = f"{ref.tag}{CHUNK_SUFFIX}"
            payload = write_chunk(chunk, self.directory / filename)
            entries.append(
                ChunkEntry(
                    tag=ref.tag,
                    path=filename,
                    n_rows=chunk.n_rows,
                    first_row_id=ref.first_row_id,
                    last_row_id=ref.last_row_id,
                    sha256=hashlib.sha256(payload).hexdigest(),
                )
            )

        grid = getattr(matrix, "parameter_grid", None)
        manifest = MatrixManifest(
            m_rows=matrix.m_rows,
            n_cols=matrix.n_cols,
            parameter_grid=None if grid is None else [float(s) for s in grid],
            chunks=entries,
        )
        path = dump_json(manifest.model_dump(), self.directory / name)

        logger.info(f"Saved {matrix.m_rows}x{matrix.n_cols} matrix in {len(entries)} chunks to {path}")
        return path

    def manifest(self, name: str = MANIFEST_NAME) -> MatrixManifest:
        """Read and validate the manifest"""
        return _read_model(self.directory / name, MatrixManifest)

    def load(self, name: str = MANIFEST_NAME) -> ChunkedMatrix:
        """
        Open a stored matrix; chunks are read lazily when first used.

        Returns:
            SnapshotMatrix when the manifest carries a parameter grid, else ChunkedMatrix
        """
        manifest = self.manifest(name)
        refs = [
            ChunkRef(
                tag=entry.tag,
                n_rows=entry.n_rows,
                first_row_id=entry.first_row_id,
                last_row_id=entry.last_row_id,
                path=self.directory / entry.path,
            )
            for entry in manifest.chunks
        ]

        if manifest.parameter_grid is not None:
            matrix: ChunkedMatrix = SnapshotMatrix(refs, manifest.n_cols, manifest.parameter_grid)
        else:
            matrix = ChunkedMatrix(refs, manifest.n_cols)

        if matrix.m_rows != manifest.m_rows:
            raise CorruptHeaderError(
                f"manifest lists m_rows={manifest.m_rows} but chunks hold {matrix.m_rows}"
            )
        return matrix

    def verify(self, name: str = MANIFEST_NAME) -> List[str]:
        """
        Re-hash every chunk file against the manifest.

        Returns:
            Tags of chunks that are missing or whose checksum differs
        """
        bad = []
        for entry in self.manifest(name).chunks:
            path = self.directory / entry.path
            try:
                digest = hashlib.sha256(path.read_bytes()).hexdigest()
            except OSError:
                digest = ""
            if digest != entry.sha256:
                logger.warning(f"Checksum mismatch for chunk {entry.tag} at {path}")
                bad.append(entry.tag)
        return bad


class FactorRepository:
    """Repository for SVD factors: U as a chunked matrix, sigma and V in a JSON manifest."""

    def __init__(self, directory: PathLike):
        """Initialize with the factor directory."""
        self.directory = Path(directory)

    def save(
        self,
        factors: "SvdFactors",
        interpolant_kind: str = "linear",
        tau_bar: float = None,
    ) -> Path:
        """Persist U chunks, the U manifest and the factor manifest"""
        u_dir = self.directory / "u"
        MatrixRepository(u_dir).save(factors.u)

        manifest = FactorManifest(
            sigma=[float(x) for x in factors.sigma],
            v=[[float(x) for x in row] for row in factors.v],
            parameter_grid=[float(s) for s in factors.parameter_grid],
            u_manifest=f"u/{MANIFEST_NAME}",
            interpolant_kind=interpolant_kind,
            tau_bar=tau_bar,
        )
        path = dump_json(manifest.model_dump(), self.directory / FACTOR_MANIFEST_NAME)
        logger.info(f"Saved factors with {len(manifest.sigma)} singular triplets to {path}")
        return path

    def manifest(self) -> FactorManifest:
        """Read and validate the factor manifest"""
        return _read_model(self.directory / FACTOR_MANIFEST_NAME, FactorManifest)

    def load(self) -> "SvdFactors":
        """Open stored factors; U chunks are read lazily"""
        from tsrom.core.tsqr import SvdFactors

        manifest = self.manifest()
        u_path = self.directory / manifest.u_manifest
        u = MatrixRepository(u_path.parent).load(u_path.name)

        return SvdFactors(
            u=u,
            sigma=np.array(manifest.sigma),
            v=np.array(manifest.v),
            parameter_grid=np.array(manifest.parameter_grid),
        )

    def update_model(self, interpolant_kind: str, tau_bar: float) -> Path:
        """Record the calibrated threshold and interpolant in the factor manifest"""
        manifest = self.manifest()
        manifest.interpolant_kind = interpolant_kind
        manifest.tau_bar = tau_bar
        return dump_json(manifest.model_dump(), self.directory / FACTOR_MANIFEST_NAME)


class PredictionRepository:
    """Repository for predictions: (mean, variance) chunk plus JSON sidecar."""

    def __init__(self, directory: PathLike):
        """Initialize with the prediction directory."""
        self.directory = Path(directory)

    def save(self, prediction: "Prediction", index: int) -> Path:
        """Write prediction_<index>.tsmx and its sidecar"""
        path = self.directory / f"prediction_{index:04d}{CHUNK_SUFFIX}"
        chunk = MatrixChunk(
            path.stem,
            prediction.row_ids,
            np.column_stack([prediction.mean, prediction.variance]),
        )
        write_chunk(chunk, path)

        sidecar = PredictionSidecar(s=prediction.s, split_r=prediction.split_r, tau_bar=prediction.tau_bar)
        dump_json(sidecar.model_dump(), sidecar_path(path))
        return path

    def paths(self) -> List[Path]:
        """Prediction files in name order"""
        return sorted(self.directory.glob(f"prediction_*{CHUNK_SUFFIX}"))

    def load(self, path: PathLike) -> "Prediction":
        """Read one prediction file and its sidecar"""
        from tsrom.models.rom import Prediction

        path = Path(path)
        chunk = read_chunk(path)
        if chunk.n_cols != 2:
            raise CorruptHeaderError(f"{path}: prediction file has {chunk.n_cols} columns, expected 2")
        sidecar = _read_model(sidecar_path(path), PredictionSidecar)

        return Prediction(
            s=sidecar.s,
            split_r=sidecar.split_r,
            row_ids=chunk.row_ids,
            mean=chunk.rows[:, 0].copy(),
            variance=chunk.rows[:, 1].copy(),
            tau_bar=sidecar.tau_bar,
        )

    def load_all(self) -> List["Prediction"]:
        """Read every prediction in the directory"""
        return [self.load(path) for path in self.paths()]

"""Initialize storage module with public API."""

from .models import (
    DEFAULT_CHUNK_ROWS,
    ChunkedMatrix,
    ChunkRef,
    ColumnFile,
    MatrixChunk,
    RowVector,
    SnapshotMatrix,
    chunk_tag,
)
from .codec import (
    read_chunk,
    write_chunk,
    read_column,
    write_column,
    serialize_chunk,
    deserialize_chunk,
)
from .schema import ChunkEntry, ColumnSidecar, FactorManifest, MatrixManifest, PredictionSidecar
from .assembly import assemble
from .products import matmat, matvec
from .repositories import (
    ColumnRepository,
    FactorRepository,
    MatrixRepository,
    PredictionRepository,
)

__all__ = [
    # Models
    "DEFAULT_CHUNK_ROWS",
    "ChunkedMatrix",
    "ChunkRef",
    "ColumnFile",
    "MatrixChunk",
    "RowVector",
    "SnapshotMatrix",
    "chunk_tag",

    # Codec
    "read_chunk",
    "write_chunk",
    "read_column",
    "write_column",
    "serialize_chunk",
    "deserialize_chunk",

    # Schema
    "ChunkEntry",
    "ColumnSidecar",
    "FactorManifest",
    "MatrixManifest",
    "PredictionSidecar",

    # Operations
    "assemble",
    "matmat",
    "matvec",

    # Repositories
    "ColumnRepository",
    "FactorRepository",
    "MatrixRepository",
    "PredictionRepository",
]

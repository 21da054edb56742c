"""In-memory types of the matrix store: column files, chunks and chunked matrices."""

import bisect
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from tsrom.errors import (
    DimensionMismatchError,
    EmptyInputError,
    InvalidArgumentError,
    MismatchedRowsError,
    TagCollisionError,
    UnsortedRowsError,
)
from tsrom.utils.helpers import is_strictly_increasing

logger = logging.getLogger(__name__)

ROW_ID_DTYPE = np.uint64
VALUE_DTYPE = np.float64

# Keeps per-chunk QR working sets small at desk scale.
DEFAULT_CHUNK_ROWS = 65536


def chunk_tag(index: int) -> str:
    """Tag of the index-th chunk; lexicographic order equals row order"""
    return f"chunk-{index:06d}"


def _as_row_ids(row_ids: Sequence[int]) -> np.ndarray:
    arr = np.asarray(row_ids)
    if arr.ndim != 1:
        raise DimensionMismatchError("row_ids must be one-dimensional")
    if arr.size and arr.dtype.kind == "i" and np.any(arr < 0):
        raise InvalidArgumentError("row_ids must be unsigned")
    return np.ascontiguousarray(arr, dtype=ROW_ID_DTYPE)


@dataclass(eq=False)
class ColumnFile:
    """One training or testing run: f(x_i, s) sampled at every row id"""
    parameter_value: float
    row_ids: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.parameter_value = float(self.parameter_value)
        self.row_ids = _as_row_ids(self.row_ids)
        self.values = np.ascontiguousarray(self.values, dtype=VALUE_DTYPE)

        if self.values.ndim != 1 or self.values.size != self.row_ids.size:
            raise DimensionMismatchError(
                f"values length {self.values.size} != row_ids length {self.row_ids.size}"
            )
        if self.row_ids.size < 1:
            raise EmptyInputError("column file has no rows")
        if not is_strictly_increasing(self.row_ids):
            raise UnsortedRowsError("row_ids must be strictly increasing")

    def __len__(self) -> int:
        return int(self.row_ids.size)

    def to_dict(self) -> dict:
        """Convert to a summary dictionary (payload omitted)"""
        return {
            "parameter_value": self.parameter_value,
            "n_rows": len(self),
            "first_row_id": int(self.row_ids[0]),
            "last_row_id": int(self.row_ids[-1]),
        }


@dataclass(eq=False)
class MatrixChunk:
    """A contiguous block of rows of a tall matrix, identified by its tag"""
    chunk_tag: str
    row_ids: np.ndarray
    rows: np.ndarray

    def __post_init__(self):
        self.row_ids = _as_row_ids(self.row_ids)
        self.rows = np.ascontiguousarray(self.rows, dtype=VALUE_DTYPE)

        if self.rows.ndim != 2:
            raise DimensionMismatchError("chunk rows must be a 2-D matrix")
        if self.rows.shape[0] != self.row_ids.size:
            raise DimensionMismatchError(
                f"chunk {self.chunk_tag}: {self.rows.shape[0]} rows but {self.row_ids.size} row ids"
            )
        if not is_strictly_increasing(self.row_ids):
            raise UnsortedRowsError(f"chunk {self.chunk_tag}: row_ids must be strictly increasing")

    @property
    def n_rows(self) -> int:
        return int(self.rows.shape[0])

    @property
    def n_cols(self) -> int:
        return int(self.rows.shape[1])

    def equals(self, other: "MatrixChunk") -> bool:
        """Bit-exact comparison of tag, row ids and IEEE-754 payload"""
        return (
            self.chunk_tag == other.chunk_tag
            and self.rows.shape == other.rows.shape
            and self.row_ids.tobytes() == other.row_ids.tobytes()
            and self.rows.tobytes() == other.rows.tobytes()
        )


@dataclass
class ChunkRef:
    """
    Manifest entry for one chunk.

    The chunk is either held in memory or stored on disk and read on demand,
    so a matrix never has to be resident as a whole.
    """
    tag: str
    n_rows: int
    first_row_id: int
    last_row_id: int
    path: Optional[Path] = None
    chunk: Optional[MatrixChunk] = field(default=None, repr=False)

    @classmethod
    def from_chunk(cls, chunk: MatrixChunk, path: Optional[Path] = None, keep: bool = True) -> "ChunkRef":
        """Build a reference describing chunk; keep=False drops the payload"""
        if chunk.n_rows == 0:
            raise EmptyInputError(f"chunk {chunk.chunk_tag} has no rows")
        return cls(
            tag=chunk.chunk_tag,
            n_rows=chunk.n_rows,
            first_row_id=int(chunk.row_ids[0]),
            last_row_id=int(chunk.row_ids[-1]),
            path=path,
            chunk=chunk if keep else None,
        )

    def load(self) -> MatrixChunk:
        """Return the chunk, reading it from disk when not held in memory"""
        if self.chunk is not None:
            return self.chunk
        if self.path is None:
            raise InvalidArgumentError(f"chunk {self.tag} has neither payload nor path")

        from tsrom.storage.codec import read_chunk

        return read_chunk(self.path, chunk_tag=self.tag)


class ChunkedMatrix:
    """
    Tall dense matrix stored as an ordered list of row chunks.

    Chunks cover disjoint, increasing row-id ranges and share one column count.
    """

    def __init__(self, chunks: List[ChunkRef], n_cols: int):
        """
        Initialize a chunked matrix.

        Args:
            chunks: Chunk references in ascending row-id order
            n_cols: Column count shared by every chunk
        """
        if not chunks:
            raise EmptyInputError("a chunked matrix needs at least one chunk")

        tags = [ref.tag for ref in chunks]
        if len(set(tags)) != len(tags):
            raise TagCollisionError("chunk tags must be unique")

        for prev, nxt in zip(chunks, chunks[1:]):
            if nxt.first_row_id <= prev.last_row_id:
                raise MismatchedRowsError(
                    f"chunk {nxt.tag} overlaps or precedes chunk {prev.tag}"
                )

        self.chunks = list(chunks)
        self.n_cols = int(n_cols)
        self.m_rows = int(sum(ref.n_rows for ref in chunks))
        self._first_ids = [ref.first_row_id for ref in chunks]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.m_rows, self.n_cols

    def __len__(self) -> int:
        return len(self.chunks)

    def iter_chunks(self) -> Iterator[MatrixChunk]:
        """Yield chunks in row order, loading each on demand"""
        for ref in self.chunks:
            chunk = ref.load()
            if chunk.n_cols != self.n_cols:
                raise DimensionMismatchError(
                    f"chunk {ref.tag} has {chunk.n_cols} columns, expected {self.n_cols}"
                )
            yield chunk

    def row(self, row_id: int) -> np.ndarray:
        """
        Look up a single row by its id.

        Raises:
            KeyError: If the row id is not stored in this matrix
        """
        index = bisect.bisect_right(self._first_ids, int(row_id)) - 1
        if index < 0 or int(row_id) > self.chunks[index].last_row_id:
            raise KeyError(f"row id {row_id} not found")

        chunk = self.chunks[index].load()
        pos = int(np.searchsorted(chunk.row_ids, np.uint64(row_id)))
        if pos >= chunk.n_rows or int(chunk.row_ids[pos]) != int(row_id):
            raise KeyError(f"row id {row_id} not found")
        return chunk.rows[pos]

    def to_dense(self) -> np.ndarray:
        """Materialize the full matrix; meant for small instances and tests"""
        return np.vstack([chunk.rows for chunk in self.iter_chunks()])

    @classmethod
    def from_dense(
        cls,
        data: np.ndarray,
        chunk_rows: int = DEFAULT_CHUNK_ROWS,
        row_ids: Optional[Sequence[int]] = None,
        boundaries: Optional[Sequence[int]] = None,
        **kwargs,
    ) -> "ChunkedMatrix":
        """
        Split a dense matrix into chunks.

        Args:
            data: Dense M x N matrix
            chunk_rows: Maximum rows per chunk
            row_ids: Row ids (defaults to 0..M-1)
            boundaries: Explicit interior split points, overriding chunk_rows
            **kwargs: Extra constructor arguments (e.g. parameter_grid)
        """
        data = np.asarray(data, dtype=VALUE_DTYPE)
        if data.ndim != 2:
            raise DimensionMismatchError("dense data must be 2-D")
        ids = np.arange(data.shape[0], dtype=ROW_ID_DTYPE) if row_ids is None else _as_row_ids(row_ids)

        if boundaries is None:
            boundaries = list(range(chunk_rows, data.shape[0], chunk_rows))
        edges = [0] + list(boundaries) + [data.shape[0]]

        refs = []
        for index, (start, stop) in enumerate(zip(edges, edges[1:])):
            chunk = MatrixChunk(chunk_tag(index), ids[start:stop], data[start:stop])
            refs.append(ChunkRef.from_chunk(chunk))

        return cls(refs, data.shape[1], **kwargs)


class SnapshotMatrix(ChunkedMatrix):
    """The snapshot matrix F: one column per training parameter value"""

    def __init__(self, chunks: List[ChunkRef], n_cols: int, parameter_grid: Sequence[float]):
        """
        Initialize the snapshot matrix.

        Args:
            chunks: Chunk references in ascending row-id order
            n_cols: Number of training runs N
            parameter_grid: Ascending parameter values s_1..s_N
        """
        super().__init__(chunks, n_cols)
        self.parameter_grid = np.asarray(parameter_grid, dtype=VALUE_DTYPE)

        if self.parameter_grid.size != self.n_cols:
            raise DimensionMismatchError(
                f"parameter grid has {self.parameter_grid.size} values for {self.n_cols} columns"
            )
        if self.n_cols < 2:
            raise EmptyInputError("the snapshot matrix needs at least two columns")
        if self.m_rows < self.n_cols:
            raise DimensionMismatchError(
                f"snapshot matrix must be tall: {self.m_rows} rows < {self.n_cols} columns"
            )
        if not is_strictly_increasing(self.parameter_grid):
            raise UnsortedRowsError("parameter grid must be strictly increasing")


@dataclass(eq=False)
class RowVector:
    """Per-row values keyed by row id, e.g. the result of a matrix-vector product"""
    row_ids: np.ndarray
    values: np.ndarray

    def __len__(self) -> int:
        return int(self.row_ids.size)

"""Assembly of the snapshot matrix from per-parameter column files."""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from tsrom.core.executor import ChunkExecutor, get_executor
from tsrom.errors import DuplicateParameterError, EmptyInputError, MismatchedRowsError
from tsrom.storage.models import (
    DEFAULT_CHUNK_ROWS,
    ChunkRef,
    ColumnFile,
    MatrixChunk,
    SnapshotMatrix,
    chunk_tag,
)
from tsrom.utils.helpers import validate_positive_int

logger = logging.getLogger(__name__)


def row_ranges(m_rows: int, chunk_rows: int) -> List[Tuple[int, int]]:
    """Contiguous [start, stop) ranges of at most chunk_rows rows"""
    return [(start, min(start + chunk_rows, m_rows)) for start in range(0, m_rows, chunk_rows)]


def assemble(
    columns: Sequence[ColumnFile],
    chunk_rows: int = DEFAULT_CHUNK_ROWS,
    executor: Optional[ChunkExecutor] = None,
) -> SnapshotMatrix:
    """
    Build the snapshot matrix F from one column file per training run.

    Columns are ordered by ascending parameter value and rows are split into
    contiguous row-id ranges. Entry (i, j) is column j's value at row id i.

    Args:
        columns: Column files, in any order
        chunk_rows: Maximum rows per chunk
        executor: Worker pool for the per-chunk gather

    Returns:
        SnapshotMatrix held in memory

    Raises:
        EmptyInputError: Fewer than two columns
        DuplicateParameterError: Two columns share a parameter value
        MismatchedRowsError: Row-id sets differ between columns
    """
    chunk_rows = validate_positive_int(chunk_rows, "chunk_rows")
    if len(columns) < 2:
        raise EmptyInputError(f"assembly needs at least two columns, got {len(columns)}")

    ordered = sorted(columns, key=lambda column: column.parameter_value)
    grid = np.array([column.parameter_value for column in ordered])
    if np.any(np.diff(grid) == 0):
        duplicate = grid[np.flatnonzero(np.diff(grid) == 0)[0]]
        raise DuplicateParameterError(f"two columns share parameter value {float(duplicate)!r}")

    row_ids = ordered[0].row_ids
    for column in ordered[1:]:
        if column.row_ids.size != row_ids.size or not np.array_equal(column.row_ids, row_ids):
            raise MismatchedRowsError(
                f"column s={column.parameter_value!r} has a different row-id set "
                f"than column s={ordered[0].parameter_value!r}"
            )

    ranges = row_ranges(row_ids.size, chunk_rows)

    def gather(indexed_range: Tuple[int, Tuple[int, int]]) -> MatrixChunk:
        index, (start, stop) = indexed_range
        rows = np.column_stack([column.values[start:stop] for column in ordered])
        return MatrixChunk(chunk_tag(index), row_ids[start:stop], rows)

    chunks = get_executor(executor).map(gather, list(enumerate(ranges)))
    refs = [ChunkRef.from_chunk(chunk) for chunk in chunks]

    logger.info(
        f"Assembled snapshot matrix {row_ids.size}x{len(ordered)} in {len(refs)} chunks"
    )
    return SnapshotMatrix(refs, len(ordered), grid)

"""Chunked matrix-vector and matrix-matrix products."""

import logging
from typing import Optional, Tuple

import numpy as np

from tsrom.core.executor import ChunkExecutor, get_executor
from tsrom.errors import DimensionMismatchError
from tsrom.storage.models import ChunkedMatrix, ChunkRef, RowVector

logger = logging.getLogger(__name__)

ColRange = Tuple[int, int]


def _resolve_range(matrix: ChunkedMatrix, col_range: Optional[ColRange]) -> ColRange:
    if col_range is None:
        return 1, matrix.n_cols

    first, last = int(col_range[0]), int(col_range[1])
    if not 1 <= first <= last <= matrix.n_cols:
        raise DimensionMismatchError(
            f"column range ({first}, {last}) outside [1, {matrix.n_cols}]"
        )
    return first, last


def matmat(
    matrix: ChunkedMatrix,
    vecs: np.ndarray,
    col_range: Optional[ColRange] = None,
    executor: Optional[ChunkExecutor] = None,
    square: bool = False,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Multiply a column range of a chunked matrix by several vectors in one pass.

    Args:
        matrix: Chunked matrix (snapshot matrix or U factor)
        vecs: Array of shape (width,) or (width, P)
        col_range: Inclusive 1-based column range; defaults to all columns
        executor: Worker pool for the per-chunk products
        square: Use the entrywise squares of the matrix

    Returns:
        Tuple of (row_ids, products) with products of shape (M,) or (M, P)

    Raises:
        DimensionMismatchError: If the vector length differs from the range width
    """
    first, last = _resolve_range(matrix, col_range)
    vecs = np.asarray(vecs, dtype=np.float64)
    if vecs.shape[0] != last - first + 1:
        raise DimensionMismatchError(
            f"vector length {vecs.shape[0]} != column range width {last - first + 1}"
        )

    def product(ref: ChunkRef) -> Tuple[np.ndarray, np.ndarray]:
        chunk = ref.load()
        if chunk.n_cols != matrix.n_cols:
            raise DimensionMismatchError(
                f"chunk {ref.tag} has {chunk.n_cols} columns, expected {matrix.n_cols}"
            )
        block = chunk.rows[:, first - 1:last]
        if square:
            block = block * block
        if vecs.ndim == 1:
            # per-row reduction: each row is summed identically whatever the chunking
            return chunk.row_ids, np.sum(block * vecs, axis=1)
        return chunk.row_ids, block @ vecs

    parts = get_executor(executor).map(product, matrix.chunks)
    row_ids = np.concatenate([part[0] for part in parts])
    values = np.concatenate([part[1] for part in parts], axis=0)
    return row_ids, values


def matvec(
    matrix: ChunkedMatrix,
    vec: np.ndarray,
    col_range: Optional[ColRange] = None,
    executor: Optional[ChunkExecutor] = None,
    square: bool = False,
) -> RowVector:
    """
    Chunked matrix-vector product over an inclusive 1-based column range.

    output[i] = sum_k matrix[i, k] * vec[k] for k in col_range, keyed by row id.
    """
    vec = np.asarray(vec, dtype=np.float64)
    if vec.ndim != 1:
        raise DimensionMismatchError("matvec expects a one-dimensional vector")

    row_ids, values = matmat(matrix, vec, col_range, executor=executor, square=square)
    return RowVector(row_ids, values)

"""Chunked tall-and-skinny QR and SVD.

Map stage: each chunk is QR-factorized independently. Reduce stage: the
small R factors, ordered by tag, are stacked and factorized once. The SVD
of the global R is taken on a single node and its left factor is pushed
back through the per-chunk Q factors to recover U chunk by chunk.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as la

from tsrom.core.executor import ChunkExecutor, get_executor
from tsrom.errors import (
    DimensionMismatchError,
    EmptyInputError,
    InvalidArgumentError,
    NonFiniteError,
    TagCollisionError,
    TagMismatchError,
)
from tsrom.storage.codec import CHUNK_SUFFIX, write_chunk
from tsrom.storage.models import ChunkedMatrix, ChunkRef, MatrixChunk

logger = logging.getLogger(__name__)

GLOBAL_TAG = "global"


class QChunk(MatrixChunk):
    """Q factor of one chunk; keeps the chunk's tag and row ids"""

    @property
    def q(self) -> np.ndarray:
        return self.rows


@dataclass(eq=False)
class RFactor:
    """Upper-triangular N x N factor produced for one tag"""
    tag: str
    r: np.ndarray

    def __post_init__(self):
        self.r = np.asarray(self.r, dtype=np.float64)
        if self.r.ndim != 2 or self.r.shape[0] != self.r.shape[1]:
            raise DimensionMismatchError(f"R factor {self.tag} must be square, got {self.r.shape}")
        if np.any(np.tril(self.r, -1) != 0.0):
            raise InvalidArgumentError(f"R factor {self.tag} has nonzero entries below the diagonal")


@dataclass(eq=False)
class SvdFactors:
    """F = U diag(sigma) V^T with U stored in chunks"""
    u: ChunkedMatrix
    sigma: np.ndarray
    v: np.ndarray
    parameter_grid: np.ndarray

    def __post_init__(self):
        self.sigma = np.asarray(self.sigma, dtype=np.float64)
        self.v = np.asarray(self.v, dtype=np.float64)
        self.parameter_grid = np.asarray(self.parameter_grid, dtype=np.float64)

        n = self.sigma.size
        if self.v.shape != (n, n) or self.u.n_cols != n or self.parameter_grid.size != n:
            raise DimensionMismatchError(
                f"inconsistent factor shapes: sigma {n}, V {self.v.shape}, "
                f"U columns {self.u.n_cols}, grid {self.parameter_grid.size}"
            )

    @property
    def n_cols(self) -> int:
        return int(self.sigma.size)

    def energy(self) -> np.ndarray:
        """Cumulative energy fraction sum_{k<=r} sigma_k^2 / sum sigma_k^2 for r = 1..N"""
        squares = self.sigma ** 2
        total = squares.sum()
        if total == 0.0:
            return np.zeros_like(squares)
        return np.cumsum(squares) / total


def _check_finite(data: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(data)):
        raise NonFiniteError(f"{what} contains NaN or Inf")


def _positive_diagonal(q: np.ndarray, r: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    signs = np.sign(np.diag(r))
    signs[signs == 0.0] = 1.0
    return q * signs, r * signs[:, None]


def fix_signs(u: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Make the largest-magnitude entry of every V column positive.

    The lowest index wins ties; the matching U column is flipped in tandem.
    """
    pivots = np.argmax(np.abs(v), axis=0)
    signs = np.where(v[pivots, np.arange(v.shape[1])] < 0.0, -1.0, 1.0)
    return u * signs, v * signs


def chunk_qr(chunk: MatrixChunk) -> Tuple[QChunk, RFactor]:
    """
    Householder QR of one chunk.

    Chunks with fewer rows than columns yield a trapezoidal R padded with
    zero rows to N x N, and Q padded with zero columns.

    Raises:
        EmptyInputError: If the chunk has no rows
        NonFiniteError: If the chunk holds NaN or Inf
    """
    if chunk.n_rows < 1:
        raise EmptyInputError(f"chunk {chunk.chunk_tag} has no rows")
    _check_finite(chunk.rows, f"chunk {chunk.chunk_tag}")

    m, n = chunk.rows.shape
    q, r = la.qr(chunk.rows, mode="economic")
    if m < n:
        q = np.hstack([q, np.zeros((m, n - m))])
        r = np.vstack([r, np.zeros((n - m, n))])

    q, r = _positive_diagonal(q, r)
    logger.debug(f"QR of chunk {chunk.chunk_tag}: {m}x{n}")
    return QChunk(chunk.chunk_tag, chunk.row_ids, q), RFactor(chunk.chunk_tag, np.triu(r))


def combine_r(rfactors: Sequence[RFactor]) -> Tuple[RFactor, List[Tuple[str, np.ndarray]]]:
    """
    Single-reducer combination of per-chunk R factors.

    The factors are stacked in sorted tag order and QR-factorized; the Q of
    that stack is split back into one N x N block per tag.

    Returns:
        Tuple of (global R factor, [(tag, Q block)] in sorted tag order)

    Raises:
        TagCollisionError: If two factors share a tag
        DimensionMismatchError: If the factors differ in size
    """
    if not rfactors:
        raise EmptyInputError("combine_r needs at least one R factor")

    tags = [factor.tag for factor in rfactors]
    if len(set(tags)) != len(tags):
        raise TagCollisionError(f"duplicate R factor tags in {sorted(tags)}")

    n = rfactors[0].r.shape[0]
    if any(factor.r.shape != (n, n) for factor in rfactors):
        raise DimensionMismatchError("all R factors must share the same N x N shape")

    ordered = sorted(rfactors, key=lambda factor: factor.tag)
    stack = np.vstack([factor.r for factor in ordered])

    q, r = la.qr(stack, mode="economic")
    q, r = _positive_diagonal(q, r)

    blocks = [(factor.tag, q[index * n:(index + 1) * n]) for index, factor in enumerate(ordered)]
    return RFactor(GLOBAL_TAG, np.triu(r)), blocks


def small_svd(r: RFactor) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    SVD of the small global R factor, sign-fixed.

    Returns:
        Tuple of (u_r, sigma descending, v)

    Raises:
        NonFiniteError: If R holds NaN or Inf
    """
    _check_finite(r.r, "R factor")
    u_r, sigma, vt = la.svd(r.r, full_matrices=False, lapack_driver="gesvd")
    u_r, v = fix_signs(u_r, vt.T)
    return u_r, sigma, v


def reconstruct_u(q_chunk: QChunk, q_second: Tuple[str, np.ndarray], u_r: np.ndarray) -> MatrixChunk:
    """
    U block of one chunk: Q_i Q_{i,1} U_R, row ids preserved.

    Raises:
        TagMismatchError: If q_second belongs to a different tag
    """
    tag, block = q_second
    if tag != q_chunk.chunk_tag:
        raise TagMismatchError(f"Q block tag {tag} does not match chunk {q_chunk.chunk_tag}")
    return MatrixChunk(q_chunk.chunk_tag, q_chunk.row_ids, q_chunk.q @ (block @ u_r))


def tssvd(
    matrix: ChunkedMatrix,
    executor: Optional[ChunkExecutor] = None,
    spill_dir: Optional[Path] = None,
    order: Optional[Sequence[int]] = None,
) -> SvdFactors:
    """
    Thin SVD of a tall chunked matrix via TSQR and R-SVD.

    Args:
        matrix: Tall matrix, usually the SnapshotMatrix
        executor: Worker pool for the per-chunk stages
        spill_dir: When set, Q and U chunks are written here and only referenced
        order: Optional chunk submission order (results do not depend on it)

    Returns:
        SvdFactors with chunked U, descending sigma and sign-fixed V

    Raises:
        DimensionMismatchError: If the matrix is wider than tall
    """
    if matrix.m_rows < matrix.n_cols:
        raise DimensionMismatchError(
            f"tssvd needs M >= N, got {matrix.m_rows}x{matrix.n_cols}"
        )
    pool = get_executor(executor)
    spill = Path(spill_dir) if spill_dir is not None else None

    def qr_stage(ref: ChunkRef) -> Tuple[ChunkRef, RFactor]:
        q_chunk, r_factor = chunk_qr(ref.load())
        path = None
        if spill is not None:
            path = spill / "q" / f"{ref.tag}{CHUNK_SUFFIX}"
            write_chunk(q_chunk, path)
        return ChunkRef.from_chunk(q_chunk, path=path, keep=spill is None), r_factor

    mapped = pool.map(qr_stage, matrix.chunks, order=order)
    global_r, blocks = combine_r([r_factor for _, r_factor in mapped])
    u_r, sigma, v = small_svd(global_r)
    second = dict(blocks)

    def u_stage(q_ref: ChunkRef) -> ChunkRef:
        q_chunk = q_ref.load()
        q_chunk = QChunk(q_chunk.chunk_tag, q_chunk.row_ids, q_chunk.rows)
        u_chunk = reconstruct_u(q_chunk, (q_ref.tag, second[q_ref.tag]), u_r)
        path = None
        if spill is not None:
            path = spill / "u" / f"{q_ref.tag}{CHUNK_SUFFIX}"
            write_chunk(u_chunk, path)
        return ChunkRef.from_chunk(u_chunk, path=path, keep=spill is None)

    u_refs = pool.map(u_stage, [q_ref for q_ref, _ in mapped], order=order)
    grid = getattr(matrix, "parameter_grid", None)
    if grid is None:
        grid = np.arange(1, matrix.n_cols + 1, dtype=np.float64)

    logger.info(
        f"TSSVD of {matrix.m_rows}x{matrix.n_cols} matrix over {len(matrix)} chunks: "
        f"sigma_1={sigma[0]:.6g}, sigma_N={sigma[-1]:.6g}"
    )
    return SvdFactors(u=ChunkedMatrix(u_refs, matrix.n_cols), sigma=sigma, v=v, parameter_grid=grid)

"""Initialize core module"""

from tsrom.core.executor import ChunkExecutor, get_executor
from tsrom.core.tsqr import (
    QChunk,
    RFactor,
    SvdFactors,
    chunk_qr,
    combine_r,
    fix_signs,
    reconstruct_u,
    small_svd,
    tssvd,
)

__all__ = [
    "ChunkExecutor",
    "get_executor",
    "QChunk",
    "RFactor",
    "SvdFactors",
    "chunk_qr",
    "combine_r",
    "fix_signs",
    "reconstruct_u",
    "small_svd",
    "tssvd",
]

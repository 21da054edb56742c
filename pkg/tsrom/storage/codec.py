"""Bit-exact binary chunk format.

Layout (all little-endian): magic ``TSMX``, format version u32, n_rows u64,
n_cols u64, n_rows row ids as u64, then n_rows*n_cols binary64 values in
row-major order.
"""

import json
import logging
import struct
from pathlib import Path
from typing import Optional, Union

import numpy as np
from pydantic import ValidationError

from tsrom.errors import CorruptHeaderError, IoFailureError, UnsortedRowsError
from tsrom.storage.models import ColumnFile, MatrixChunk
from tsrom.storage.schema import ColumnSidecar

logger = logging.getLogger(__name__)

MAGIC = b"TSMX"
FORMAT_VERSION = 1
HEADER = struct.Struct("<4sIQQ")
CHUNK_SUFFIX = ".tsmx"
SIDECAR_SUFFIX = ".json"

PathLike = Union[str, Path]


def serialize_chunk(chunk: MatrixChunk) -> bytes:
    """Encode a chunk into the binary chunk format"""
    header = HEADER.pack(MAGIC, FORMAT_VERSION, chunk.n_rows, chunk.n_cols)
    return (
        header
        + chunk.row_ids.astype("<u8", copy=False).tobytes()
        + chunk.rows.astype("<f8", copy=False).tobytes(order="C")
    )


def deserialize_chunk(payload: bytes, chunk_tag: str) -> MatrixChunk:
    """
    Decode bytes in the binary chunk format.

    Raises:
        CorruptHeaderError: Bad magic, unknown version, truncated payload or unsorted row ids
    """
    if len(payload) < HEADER.size:
        raise CorruptHeaderError(f"{chunk_tag}: truncated header ({len(payload)} bytes)")

    magic, version, n_rows, n_cols = HEADER.unpack_from(payload)
    if magic != MAGIC:
        raise CorruptHeaderError(f"{chunk_tag}: bad magic bytes {magic!r}")
    if version != FORMAT_VERSION:
        raise CorruptHeaderError(f"{chunk_tag}: unsupported format version {version}")

    expected = HEADER.size + 8 * n_rows + 8 * n_rows * n_cols
    if len(payload) != expected:
        raise CorruptHeaderError(
            f"{chunk_tag}: payload is {len(payload)} bytes, header implies {expected}"
        )

    offset = HEADER.size
    row_ids = np.frombuffer(payload, dtype="<u8", count=n_rows, offset=offset)
    offset += 8 * n_rows
    values = np.frombuffer(payload, dtype="<f8", count=n_rows * n_cols, offset=offset)

    try:
        return MatrixChunk(
            chunk_tag=chunk_tag,
            row_ids=row_ids.astype(np.uint64),
            rows=values.astype(np.float64).reshape(n_rows, n_cols),
        )
    except UnsortedRowsError as e:
        raise CorruptHeaderError(f"{chunk_tag}: {e}") from e


def write_chunk(chunk: MatrixChunk, path: PathLike) -> bytes:
    """
    Write a chunk to disk.

    Args:
        chunk: Chunk to persist
        path: Destination file

    Returns:
        The serialized bytes (callers hash them for manifests)

    Raises:
        IoFailureError: If the file cannot be written
    """
    payload = serialize_chunk(chunk)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(payload)
    except OSError as e:
        raise IoFailureError(f"cannot write chunk {chunk.chunk_tag} to {path}: {e}") from e

    logger.debug(f"Wrote chunk {chunk.chunk_tag} ({chunk.n_rows}x{chunk.n_cols}) to {path}")
    return payload


def read_chunk(path: PathLike, chunk_tag: Optional[str] = None) -> MatrixChunk:
    """
    Read a chunk from disk.

    Args:
        path: Chunk file
        chunk_tag: Tag to assign; defaults to the file stem

    Raises:
        IoFailureError: If the file cannot be read
        CorruptHeaderError: If the content is not a valid chunk
    """
    path = Path(path)
    try:
        payload = path.read_bytes()
    except OSError as e:
        raise IoFailureError(f"cannot read chunk {path}: {e}") from e

    return deserialize_chunk(payload, chunk_tag or path.stem)


def sidecar_path(path: PathLike) -> Path:
    """JSON sidecar that accompanies a chunk file"""
    return Path(path).with_suffix(SIDECAR_SUFFIX)


def write_column(column: ColumnFile, path: PathLike) -> Path:
    """
    Write a column file: a one-column chunk plus a JSON sidecar with s.

    Returns:
        Path of the chunk file
    """
    path = Path(path)
    chunk = MatrixChunk(path.stem, column.row_ids, column.values.reshape(-1, 1))
    write_chunk(chunk, path)

    sidecar = ColumnSidecar(parameter_value=column.parameter_value)
    try:
        sidecar_path(path).write_text(
            json.dumps(sidecar.model_dump(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    except OSError as e:
        raise IoFailureError(f"cannot write sidecar for {path}: {e}") from e

    return path


def read_column(path: PathLike) -> ColumnFile:
    """
    Read a column file and its sidecar.

    Raises:
        IoFailureError: If either file is missing or unreadable
        CorruptHeaderError: If the chunk has more than one column or the sidecar is invalid
    """
    path = Path(path)
    chunk = read_chunk(path)
    if chunk.n_cols != 1:
        raise CorruptHeaderError(f"{path}: column file has {chunk.n_cols} columns")

    try:
        sidecar = ColumnSidecar.model_validate_json(sidecar_path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise IoFailureError(f"cannot read sidecar for {path}: {e}") from e
    except ValidationError as e:
        raise CorruptHeaderError(f"{path}: invalid sidecar: {e}") from e

    return ColumnFile(sidecar.parameter_value, chunk.row_ids, chunk.rows[:, 0])

"""Pydantic models for manifests and JSON sidecars."""

from typing import List, Optional

from pydantic import BaseModel, Field


class ColumnSidecar(BaseModel):
    """Sidecar of a column file"""
    parameter_value: float


class ChunkEntry(BaseModel):
    """One chunk file listed in a matrix manifest"""
    tag: str
    path: str = Field(..., description="Chunk file path relative to the manifest")
    n_rows: int = Field(..., ge=1)
    first_row_id: int = Field(..., ge=0)
    last_row_id: int = Field(..., ge=0)
    sha256: str = Field(..., min_length=64, max_length=64)


class MatrixManifest(BaseModel):
    """Manifest of a chunked matrix; chunks are listed in row order"""
    m_rows: int = Field(..., ge=1)
    n_cols: int = Field(..., ge=1)
    parameter_grid: Optional[List[float]] = None
    chunks: List[ChunkEntry]


class FactorManifest(BaseModel):
    """Manifest of SVD factors; U lives in its own matrix manifest"""
    sigma: List[float]
    v: List[List[float]] = Field(..., description="Right singular vectors, row-major")
    parameter_grid: List[float]
    u_manifest: str = Field(..., description="Path of U's matrix manifest relative to this file")
    interpolant_kind: str = "linear"
    tau_bar: Optional[float] = Field(default=None, ge=0.0)


class PredictionSidecar(BaseModel):
    """Sidecar of a prediction file whose two columns are (mean, variance)"""
    s: float
    split_r: int = Field(..., ge=0)
    tau_bar: Optional[float] = None

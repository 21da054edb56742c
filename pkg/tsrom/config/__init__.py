"""Initialize configuration module"""

from tsrom.config.loader import load_config
from tsrom.config.schemas import (
    DEFAULT_OUTPUT_DIR,
    OUTPUT_DIR_ENV,
    GridSpec,
    PipelineConfig,
    QoiSpec,
    default_output_dir,
)

__all__ = [
    "load_config",
    "DEFAULT_OUTPUT_DIR",
    "OUTPUT_DIR_ENV",
    "GridSpec",
    "PipelineConfig",
    "QoiSpec",
    "default_output_dir",
]

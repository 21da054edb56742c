"""Load pipeline configuration from a JSON or YAML file plus overrides."""

import logging
from pathlib import Path
from typing import Any, Optional, Union

import yaml
from pydantic import ValidationError

from tsrom.config.schemas import PipelineConfig
from tsrom.errors import ConfigError, IoFailureError

logger = logging.getLogger(__name__)


def load_config(path: Optional[Union[str, Path]] = None, **overrides: Any) -> PipelineConfig:
    """
    Build a PipelineConfig from a file and keyword overrides.

    JSON files are read by the YAML loader. Overrides that are None are
    ignored so unset CLI flags leave the file values alone.

    Args:
        path: Optional config file
        **overrides: Field values taking precedence over the file

    Returns:
        Validated configuration

    Raises:
        IoFailureError: If the file cannot be read
        ConfigError: If the content is not a mapping or fails validation
    """
    data = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise IoFailureError(f"cannot read config {path}: {e}") from e
        try:
            data = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"cannot parse config {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must hold a mapping, got {type(data).__name__}")

    data.update({key: value for key, value in overrides.items() if value is not None})

    try:
        config = PipelineConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {e}") from e

    logger.debug(f"Loaded configuration for {config.problem} into {config.output_dir}")
    return config

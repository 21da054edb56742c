"""Initialize CLI module"""

from tsrom.cli.main import cli
from tsrom.cli.pipeline import Pipeline

__all__ = ["cli", "Pipeline"]

"""Initialize utils module"""

from tsrom.utils.helpers import (
    setup_logging,
    format_float,
    write_csv,
    read_csv,
    dump_json,
    is_strictly_increasing,
    is_uniform_grid,
    validate_positive_int,
)

__all__ = [
    "setup_logging",
    "format_float",
    "write_csv",
    "read_csv",
    "dump_json",
    "is_strictly_increasing",
    "is_uniform_grid",
    "validate_positive_int",
]

"""Exception hierarchy for tsrom.

Every error carries a stable ``code`` that the CLI prints as
``ERROR <code>: <message>``.
"""


class TsromError(Exception):
    """Base class for all tsrom errors"""

    code = "TSROM_ERROR"


class EmptyInputError(TsromError, ValueError):
    code = "EMPTY_INPUT"


class MismatchedRowsError(TsromError, ValueError):
    code = "MISMATCHED_ROWS"


class DuplicateParameterError(TsromError, ValueError):
    code = "DUPLICATE_PARAMETER"


class DimensionMismatchError(TsromError, ValueError):
    code = "DIMENSION_MISMATCH"


class IoFailureError(TsromError, OSError):
    code = "IO_FAILURE"


class CorruptHeaderError(TsromError):
    code = "CORRUPT_HEADER"


class NonFiniteError(TsromError, ValueError):
    code = "NON_FINITE"


class TagCollisionError(TsromError, ValueError):
    code = "TAG_COLLISION"


class TagMismatchError(TsromError, ValueError):
    code = "TAG_MISMATCH"


class OutOfDomainError(TsromError, ValueError):
    code = "OUT_OF_DOMAIN"


class UncalibratedError(TsromError, RuntimeError):
    code = "UNCALIBRATED"


class ZeroTruthError(TsromError, ValueError):
    code = "ZERO_TRUTH"


class SiteCollisionError(TsromError, ValueError):
    code = "SITE_COLLISION"


class EmptyTestingError(TsromError, ValueError):
    code = "EMPTY_TESTING"


class DuplicateSiteError(TsromError, ValueError):
    code = "DUPLICATE_SITE"


class NonUniformGridError(TsromError, ValueError):
    code = "NON_UNIFORM_GRID"


class ConfigError(TsromError, ValueError):
    code = "CONFIG_ERROR"


class InvalidArgumentError(TsromError, ValueError):
    code = "INVALID_ARGUMENT"


class UnsortedRowsError(TsromError, ValueError):
    code = "UNSORTED_ROWS"

"""Exception hierarchy with stable machine-parsable error codes.

Every error surfaced by the CLI is printed as ``error: <code>: <message>``;
the ``code`` attribute on each class is that stable identifier.
"""


class CbirError(Exception):
    """Base class for all engine errors."""

    code = "error"


class DecodeError(CbirError):
    code = "decode"


class UnsupportedFormatError(CbirError):
    code = "unsupported-format"


class InvalidArgumentError(CbirError, ValueError):
    code = "invalid-argument"


class InvariantViolationError(CbirError):
    code = "invariant-violation"


class EmptyGlcmError(CbirError):
    code = "empty-glcm"


class ImageTooSmallError(CbirError):
    code = "image-too-small"


class InsufficientDataError(CbirError):
    code = "insufficient-data"


class InsufficientCorpusError(CbirError):
    code = "insufficient-corpus"


class EmptyIndexError(CbirError):
    code = "empty-index"


class EmptyResultError(CbirError):
    code = "empty-result"


class IncompatibleVersionError(CbirError):
    code = "incompatible-version"


class CorruptIndexError(CbirError):
    code = "corrupt-index"


class ConfigError(CbirError):
    code = "config"


class GroundTruthError(CbirError):
    code = "ground-truth"


class IoError(CbirError):
    code = "io"

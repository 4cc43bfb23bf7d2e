"""Exception types shared across the toolkit.

The CLI maps these onto exit codes: ValidationError -> 2, file/format
problems (OSError, AudioFileError, ModelFormatError) -> 3,
DivergenceError -> 4.
"""


class ValidationError(ValueError):
    """A parameter or input violates a documented precondition."""


class AudioFileError(OSError):
    """A WAV file exists but cannot be used (non-PCM, empty, bad width)."""


class ModelFormatError(ValueError):
    """A model file is corrupt: bad magic, version, sizes, or truncation."""


class DivergenceError(ArithmeticError):
    """Training produced a non-finite loss."""

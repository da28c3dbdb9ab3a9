"""Exception types shared across the package."""


class GlacierSegError(Exception):
    """Base class for all package errors."""


class InvalidInputError(GlacierSegError):
    """Degenerate or out-of-contract input (empty extent, bad ratios, ...)."""


class EmptyDatasetError(GlacierSegError):
    """An operation that needs at least one sample received none."""


class BandMismatchError(GlacierSegError):
    """Raster channel count does not match the expected band stack."""


class SceneSpecError(GlacierSegError):
    """Synthetic scene specification is infeasible or malformed."""


class ShapeMismatchError(GlacierSegError):
    """Array shapes violate an operation's contract."""


class InvalidConfigError(GlacierSegError):
    """Model or run configuration failed validation."""


class InvalidWeightError(GlacierSegError):
    """Loss weight outside its allowed range."""


class CheckpointError(GlacierSegError):
    """Missing, corrupt, or incompatible checkpoint file."""


class TrainingDivergedError(GlacierSegError):
    """Training aborted after a non-finite loss."""

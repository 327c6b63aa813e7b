"""Exception types shared across the package."""


class BlindinvError(Exception):
    """Base class for all package errors."""


class LevelMismatch(BlindinvError):
    """A truncation level is incompatible with the data it is applied to."""


class IndexOutOfTheta(BlindinvError):
    """A sequence-valued operator parameter has no entry for the requested level."""


class ModelMismatch(BlindinvError):
    """An operation was invoked with an operator model it does not support."""


class SingularOperator(BlindinvError):
    """A singular value required for inversion is exactly zero."""


class ShapeMismatch(BlindinvError):
    """Two parameter objects do not have compatible shapes."""


class EmptyGrid(BlindinvError):
    """The adaptive-selection candidate grid is empty."""


class ChainDiverged(BlindinvError):
    """An MCMC chain produced a non-finite state."""


class ConfigError(BlindinvError):
    """An experiment configuration is invalid."""

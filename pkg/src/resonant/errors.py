"""Exception types raised by the resonant package."""


class ResonantError(Exception):
    """Base class for all package errors."""


class BlockRangeError(ResonantError, ValueError):
    """A block label or coupling index lies outside the supported range."""


class BlockSizeError(ResonantError, ValueError):
    """A block is larger than the configured dimension cap."""


class UnsupportedFamilyError(ResonantError, ValueError):
    """No closed form is available for the requested coupling family."""


class DiagonalizationError(ResonantError, RuntimeError):
    """The eigensolver failed to converge for a block."""


class DegenerateSpectrumError(ResonantError, ValueError):
    """A spectrum or sample is too degenerate for the requested statistic."""


class UnfoldingWindowError(DegenerateSpectrumError):
    """An unfolding window spans a fully degenerate stretch of levels."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"zero-width unfolding window at level index {index}")

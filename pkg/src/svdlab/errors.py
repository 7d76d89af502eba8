"""Exception types shared across the library.

Input-shaped problems subclass ValueError so callers (and the CLI) can treat
them uniformly as bad input; iteration failures subclass RuntimeError.
"""


class DimensionMismatch(ValueError):
    """Matrix/vector shapes are inconsistent with the operation."""


class LengthMismatch(ValueError):
    """Paired vectors have different lengths."""


class ZeroVector(ValueError):
    """A reflector was requested for the zero vector."""


class ZeroCoupling(ValueError):
    """The subdiagonal entry at the split point is zero; the problem already
    separates into independent blocks."""


class PoleEvaluation(ValueError):
    """The secular function was evaluated exactly at a pole."""


class EmptyWindow(ValueError):
    """A PERCLOS window contains no frames."""


class EmptyModel(ValueError):
    """Classification was attempted against a model with no stored faces."""


class NoConvergence(RuntimeError):
    """An iteration budget was exhausted.

    `detail` carries the sweep count or the stalled index, depending on the
    algorithm that raised.
    """

    def __init__(self, message: str, detail=None):
        super().__init__(message)
        self.detail = detail


class SchemeFailure(RuntimeError):
    """A one-sided secular root scheme overshot its bracket or lost its
    monotone progression; callers fall back to the middle-way scheme."""


class InterlacingViolation(RuntimeError):
    """A corrected-weight radicand came out negative beyond roundoff,
    signalling inaccurate upstream roots."""


class RankDeficient(RuntimeError):
    """Training data has no usable spectrum (all eigenvalues at noise level)."""


class RankDeficiencyWarning(UserWarning):
    """The requested eigenface count exceeded the numerical rank and was capped."""

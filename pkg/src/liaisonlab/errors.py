"""Exception types raised by the library.

Every failure mode that callers are expected to branch on gets its own
class; plain misuse (wrong ring, bad argument types) raises the builtin
ValueError/TypeError instead.
"""


class LiaisonError(Exception):
    """Base class for all library-specific errors."""


class HomogeneityError(LiaisonError):
    """A polynomial expected to be homogeneous has terms of mixed multidegree."""


class DimensionError(LiaisonError):
    """A scheme does not have the dimension the operation requires."""


class RegularityError(LiaisonError):
    """Hilbert-function probing failed to stabilize within the enumeration cap."""


class InfeasibleLinkError(LiaisonError):
    """A predicted residual would have non-positive degree."""


class InconsistentLinkError(LiaisonError):
    """The two closed-form evaluations of an intersection length disagree."""


class MapUndefinedError(LiaisonError):
    """All forms defining a ring map lie in the source ideal."""


class ProjectionError(LiaisonError):
    """Eliminating the fiber coordinates did not produce a principal ideal."""


class SpecialityError(LiaisonError):
    """A twist is special (degree < 2g-1), so the closed-form rank check does not apply."""


class DegenerateSampleError(LiaisonError):
    """Random sampling kept hitting a degenerate configuration and gave up."""


class PointScarcityError(LiaisonError):
    """Not enough rational points were found on a curve; a larger prime may help."""


class RankShortfallError(LiaisonError):
    """A graded piece is too small to supply the requested number of forms."""


class NotContainingError(LiaisonError):
    """Forms handed to the link operation do not all contain the curve."""


class NotEmbeddingError(LiaisonError):
    """A linear series failed to embed: the image has arithmetic genus above the source genus."""


class SpecialPositionError(LiaisonError):
    """Marked points impose dependent conditions on the adjoint system."""


class SaturationLimitError(LiaisonError):
    """Saturation did not stabilize within the iteration bound."""


class EngineLimitError(LiaisonError):
    """A Groebner computation exceeded a hard safety bound."""

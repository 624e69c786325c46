"""Common exception base for the package.

Concrete error types live next to the code that raises them; everything
derives from :class:`CfsGeomError` so callers can catch the whole family.
"""


class CfsGeomError(Exception):
    """Base class for all errors raised by this package."""


class NumericalFailure(CfsGeomError):
    """An internal numerical guarantee was violated beyond tolerance.

    Raised when a quantity that is exact in the underlying theory (block
    structure of a kernel in adapted bases, pseudo-unitarity of a constructed
    frame, ...) fails its residual check.  Indicates ill-conditioned input
    rather than a usage error.
    """

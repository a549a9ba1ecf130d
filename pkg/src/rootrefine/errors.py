"""Exception types shared across the package."""


class RootRefineError(Exception):
    """Base class for all errors raised by this package."""


class ContourProximityError(RootRefineError):
    """A contour sample of p is degenerately small.

    Raised when some |p(point)| on the evaluation circle falls below
    2^(-lambda/2) * max|p_i|, which means a root sits (numerically) on the
    contour.  The certified isolation of the disc should be re-checked by
    the caller; the estimate cannot be trusted.
    """


class IsolationContractError(RootRefineError):
    """An input disc violates its certified isolation contract.

    Signalled when Newton steps stop contracting quadratically, or when a
    root count recovered from the contour disagrees with the declared one.
    """


class FactorExtractionError(RootRefineError):
    """Cluster factor reconstruction failed (bad root count or certificate)."""


class OracleError(RootRefineError):
    """The test-only oracle root finder could not certify its output."""


class ProblemError(RootRefineError):
    """A problem document is malformed; the message names the bad field."""

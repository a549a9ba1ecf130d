"""Precision-controlled refinement of isolated complex polynomial roots.

The package turns initial isolated discs around the roots of a univariate
polynomial into arbitrarily accurate root approximations with certified
error radii.  The pipeline is: estimate the root (or the power sums of a
root cluster) from contour values of p'/p sampled at roots of unity,
shrink the disc until Newton's iteration is guaranteed to converge
quadratically, then iterate Newton to the target accuracy.  An all-roots
driver batches the contour and Newton evaluations through fast multipoint
evaluation so every disc is processed simultaneously.
"""

from .numctx import PrecisionContext, working_precision_for
from .poly import FoldedPolynomial, Polynomial
from .powersum import IsolatedDisc, PowerSumEstimate, select_q
from .boost import BoostResult, boost_isolation
from .newton import RefinementRequest, RefinementResult, newton_refine
from .driver import AllRootsPlan, DiscFailure, Factor, extract_factor, refine_all
from .errors import (
    ContourProximityError,
    FactorExtractionError,
    IsolationContractError,
    OracleError,
    ProblemError,
    RootRefineError,
)

__all__ = [
    "AllRootsPlan",
    "BoostResult",
    "ContourProximityError",
    "DiscFailure",
    "Factor",
    "FactorExtractionError",
    "FoldedPolynomial",
    "IsolatedDisc",
    "IsolationContractError",
    "OracleError",
    "Polynomial",
    "PowerSumEstimate",
    "PrecisionContext",
    "ProblemError",
    "RefinementRequest",
    "RefinementResult",
    "RootRefineError",
    "boost_isolation",
    "extract_factor",
    "newton_refine",
    "refine_all",
    "select_q",
    "working_precision_for",
]

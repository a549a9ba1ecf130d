"""Precision-controlled complex arithmetic built on MPFR/MPC via gmpy2.

Every operation in the package runs inside a gmpy2 context whose mantissa
width is the working precision lambda of a :class:`PrecisionContext`.
MPFR/MPC arithmetic is correctly rounded; the rounding mode is fixed to
round-to-nearest throughout.  Error radii are tracked analytically by the
callers (no per-operation interval arithmetic).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import gmpy2
from gmpy2 import mpc, mpfr


def working_precision_for(ell: int, tau: int, d: int) -> int:
    """Working precision (bits) so the estimator pipeline delivers ell bits.

    Evaluates the closed form

        lambda = ell + tau*lg(8d) + (3/2)*lg^2(d) + (13/2)*lg(d)
                 + 4*lg(lg(d)) + 18

    rounded up.  It covers the rounding-error growth of the folding step,
    the three DFTs and the quotients so the final estimates carry an error
    within 2^(-ell).  Monotone nondecreasing in each argument.

    Parameters
    ----------
    ell : target output precision in bits, >= 1.
    tau : bound on lg(max |p_i|), >= 0.
    d : polynomial degree, >= 2 (lg lg d is undefined at d = 1; linear
        polynomials bypass the schedule, see :func:`linear_working_precision`).
    """
    if d < 2:
        raise ValueError(f"degree must be >= 2, got {d}")
    if ell < 1:
        raise ValueError(f"target precision must be >= 1 bit, got {ell}")
    if tau < 0:
        raise ValueError(f"coefficient bound exponent must be >= 0, got {tau}")
    lgd = math.log2(d)
    value = ell + tau * math.log2(8 * d) + 1.5 * lgd * lgd + 6.5 * lgd
    if d > 2:
        value += 4.0 * math.log2(lgd)
    return math.ceil(value + 18.0)


def linear_working_precision(ell: int, tau: int) -> int:
    """Working precision for degree-1 inputs (root is -p0/p1, one division)."""
    if ell < 1 or tau < 0:
        raise ValueError("need ell >= 1 and tau >= 0")
    return ell + tau + 8


@dataclass(frozen=True)
class PrecisionContext:
    """Immutable bundle of the precision parameters of one computation.

    lambda_bits is the mantissa width used for all arithmetic, ell the
    precision the final results are good to, and tau the magnitude bound
    exponent of the input coefficients.
    """

    lambda_bits: int
    ell: int
    tau: int = 0

    def __post_init__(self):
        if self.ell < 1:
            raise ValueError("ell must be >= 1")
        if self.lambda_bits < self.ell:
            raise ValueError("lambda must be at least ell")
        if self.tau < 0:
            raise ValueError("tau must be >= 0")

    @classmethod
    def for_target(cls, ell: int, tau: int, d: int) -> "PrecisionContext":
        """Context with lambda from the working-precision schedule."""
        if d == 1:
            return cls(linear_working_precision(ell, tau), ell, tau)
        return cls(working_precision_for(ell, tau, d), ell, tau)

    def activate(self) -> gmpy2.context:
        """gmpy2 context manager running at lambda bits, round-to-nearest."""
        return gmpy2.context(precision=self.lambda_bits)

    def widened(self, extra_bits: int) -> "PrecisionContext":
        """Same targets, lambda increased by extra_bits guard bits."""
        if extra_bits < 0:
            raise ValueError("extra_bits must be >= 0")
        return replace(self, lambda_bits=self.lambda_bits + extra_bits)

    def doubled(self) -> "PrecisionContext":
        return replace(self, lambda_bits=2 * self.lambda_bits)

    @property
    def epsilon(self) -> mpfr:
        """2^(-ell), the accuracy the context is meant to deliver."""
        with self.activate():
            return mpfr(2) ** (-self.ell)


def root_of_unity(q: int, j: int, ctx: PrecisionContext) -> mpc:
    """exp(2*pi*i*j/q) at lambda bits; exact for the quarter-turn multiples."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if not 0 <= j < q:
        raise ValueError(f"index j={j} outside [0, {q})")
    if 4 * j % q == 0:
        quarter = 4 * j // q
        return (mpc(1), mpc(0, 1), mpc(-1), mpc(0, -1))[quarter]
    # guard bits so the angle rounding stays below half an ulp of the output
    with gmpy2.context(precision=ctx.lambda_bits + 16):
        angle = 2 * gmpy2.const_pi() * j / q
        s, c = gmpy2.sin_cos(angle)
    with ctx.activate():
        return mpc(c + 0, s + 0)


def magnitude_exponent(x) -> int:
    """Smallest-ish e with |x| <= 2^e, from the MPFR exponents (no trusting
    rounded magnitudes; may overestimate by one bit at exact powers of two)."""
    if isinstance(x, mpc):
        n = gmpy2.norm(x)  # |x|^2, faithfully rounded
        if n == 0:
            return -(1 << 30)
        # |x|^2 < 2^e2  =>  |x| < 2^ceil(e2/2); the rounding of norm() is
        # covered because e2 only moves when |x|^2 crosses a power of two
        e2 = gmpy2.get_exp(n)
        return (e2 + 1) // 2
    ax = abs(mpfr(x))
    if ax == 0:
        return -(1 << 30)
    return gmpy2.get_exp(ax)

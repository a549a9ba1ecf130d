"""Dense complex polynomials and the elementary transforms the pipeline needs.

Coefficients are stored low-to-high as gmpy2 mpc values.  Operations take
an explicit :class:`~rootrefine.numctx.PrecisionContext` and perform their
arithmetic at its lambda bits; polynomials themselves are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpc, mpfr

from .numctx import PrecisionContext, magnitude_exponent


class Polynomial:
    """Immutable dense polynomial sum(coeffs[i] * x^i) with p_d != 0.

    tau is recomputed on construction as the smallest non-negative integer
    with lg(max |p_i|) <= tau; it is never trusted from the caller.
    """

    __slots__ = ("coeffs", "degree", "tau")

    def __init__(self, coeffs: Iterable, allow_zero: bool = False):
        items = [c if isinstance(c, mpc) else mpc(c) for c in coeffs]
        while len(items) > 1 and items[-1] == 0:
            items.pop()
        if not items:
            raise ValueError("empty coefficient sequence")
        if items == [mpc(0)] and not allow_zero:
            # allow_zero admits the constant 0, needed for exact remainders
            raise ValueError("the zero polynomial has no degree")
        object.__setattr__(self, "coeffs", tuple(items))
        object.__setattr__(self, "degree", len(items) - 1)
        object.__setattr__(self, "tau", max(0, max(magnitude_exponent(c) for c in items)))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    def __repr__(self):
        return f"Polynomial(degree={self.degree}, tau={self.tau})"

    @classmethod
    def from_roots(cls, roots: Sequence, ctx: PrecisionContext) -> "Polynomial":
        """Monic product of (x - root), expanded sequentially at lambda bits."""
        with ctx.activate():
            acc = [mpc(1)]
            for root in roots:
                z = root if isinstance(root, mpc) else mpc(root)
                acc.append(mpc(0))
                for j in range(len(acc) - 1, 0, -1):
                    acc[j] = acc[j - 1] - z * acc[j]
                acc[0] = -z * acc[0]
        return cls(acc)

    def eval(self, x, ctx: PrecisionContext) -> mpc:
        """Horner evaluation of p(x) at lambda bits."""
        with ctx.activate():
            z = x if isinstance(x, mpc) else mpc(x)
            acc = mpc(self.coeffs[-1])
            for c in reversed(self.coeffs[:-1]):
                acc = acc * z + c
            return acc

    def derivative(self, ctx: PrecisionContext) -> "Polynomial":
        """p' of degree d-1; rejects constants."""
        if self.degree < 1:
            raise ValueError("cannot differentiate a constant polynomial")
        with ctx.activate():
            return Polynomial(i * c for i, c in enumerate(self.coeffs) if i >= 1)

    def reverse(self, ctx: PrecisionContext) -> "Polynomial":
        """Coefficient reversal; roots become reciprocals of the roots of p.

        Requires p(0) != 0, otherwise the output would silently drop degree.
        """
        if self.coeffs[0] == 0:
            raise ValueError("p(0) = 0: reversal would drop the degree")
        with ctx.activate():
            return Polynomial(reversed(self.coeffs))

    def taylor_shift_scale(self, center, scale, ctx: PrecisionContext) -> "Polynomial":
        """Polynomial g with g(y) = p(center + scale*y); exact in exact arithmetic.

        Computed as coefficient scaling by scale^i followed by the O(d^2)
        Horner-style shift recurrence, which is the stable choice at the
        degrees this package targets.
        """
        with ctx.activate():
            r = mpfr(scale)
            if not r > 0:
                raise ValueError("scale must be a positive real")
            x0 = center if isinstance(center, mpc) else mpc(center)
            a = list(self.coeffs)
            if r != 1:
                pw = mpfr(1)
                for i in range(1, len(a)):
                    pw = pw * r
                    a[i] = a[i] * pw
            if x0 != 0:
                c = x0 / r
                d = len(a) - 1
                for i in range(d):
                    for j in range(d - 1, i - 1, -1):
                        a[j] = a[j] + c * a[j + 1]
            return Polynomial(a)

    def fold(self, q: int, ctx: PrecisionContext) -> "FoldedPolynomial":
        """Length-q fold with coefficients sum_j p[i+j*q]; < d additions.

        The folded polynomial agrees with p at every q-th root of unity.
        """
        if q < 1:
            raise ValueError("q must be >= 1")
        with ctx.activate():
            out = [mpc(0)] * q
            for i, c in enumerate(self.coeffs):
                out[i % q] = out[i % q] + c
            return FoldedPolynomial(q, tuple(out))

    def max_coeff_magnitude(self, ctx: PrecisionContext) -> mpfr:
        with ctx.activate():
            return max(abs(c) for c in self.coeffs)


@dataclass(frozen=True)
class FoldedPolynomial:
    """q coefficients p_{q,i} of the fold of p; evaluates like p at the
    q-th roots of unity."""

    q: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.q:
            raise ValueError("folded coefficient count must equal q")

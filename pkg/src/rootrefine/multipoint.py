"""Fast multipoint evaluation through a subproduct tree (Moenck-Borodin).

The point set is grouped into monic moduli, internal nodes hold products
of their children (FFT multiplication), and remaindering F down the tree
yields F mod P_j for every leaf; with degree-1 leaves the remainders are
the values of F at the points.  Division at each level goes through
coefficient reversal and power-series inversion by Newton iteration, so
every stage is softly linear in the number of points.

Precision bookkeeping follows the modular-representation accounting: with
lg||F|| <= tau1, m moduli of degree n and all points of magnitude at most
2^rho, remaindering at lambda bits delivers results within
2^-(lambda - loss) where loss = 4*(tau1*lg(m) + m*n*rho + lg(mn) + 10)
(the concrete constant is fixed here; tests validate the resulting
accuracy empirically).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import gmpy2
from gmpy2 import mpc

from .dft import dft_forward, dft_inverse, get_plan
from .numctx import PrecisionContext
from .poly import Polynomial

_SCHOOLBOOK_CUTOFF = 24


def remainder_loss_bits(tau1: int, m: int, n: int, rho: int) -> int:
    """Accuracy loss (bits) of the remainder cascade for the λ schedule."""
    mn = max(2, m * n)
    return math.ceil(
        4.0 * (tau1 * math.log2(max(2, m)) + m * n * rho + math.log2(mn) + 10.0)
    )


def working_precision_for_points(ell: int, tau1: int, m: int, n: int, rho: int) -> int:
    """Lambda delivering ell-bit remainders under the loss schedule."""
    return ell + remainder_loss_bits(tau1, m, n, rho)


def points_magnitude_bits(points) -> int:
    """Smallest non-negative rho with all |points| <= 2^rho (via |z|^2 < 2^e)."""
    rho = 0
    with gmpy2.context(precision=64):
        for pt in points:
            z = pt if isinstance(pt, mpc) else mpc(pt)
            n = gmpy2.norm(z)
            if n > 1:
                rho = max(rho, (gmpy2.get_exp(n) + 1) // 2)
    return rho


@dataclass(frozen=True)
class SubproductTree:
    """Binary tree of monic products over a point set.

    levels[0] are the m leaf moduli (degree <= n each), levels[-1] holds
    the single root, the product of all moduli.  rho bounds the point
    magnitudes (|point| <= 2^rho); tau1 is bound to the polynomial being
    remaindered and is recorded by :func:`remainders`.
    """

    points: tuple
    n: int
    levels: tuple
    rho: int
    lambda_bits: int

    @property
    def m(self) -> int:
        return len(self.levels[0])

    @property
    def root(self) -> Polynomial:
        return self.levels[-1][0]

    def loss_bits(self, tau1: int) -> int:
        return remainder_loss_bits(tau1, self.m, self.n, self.rho)


def build_tree(points: Sequence, n: int, ctx: PrecisionContext) -> SubproductTree:
    """Subproduct tree with monic degree-n leaves over the given points."""
    if not points:
        raise ValueError("cannot build a tree over an empty point set")
    if n < 1:
        raise ValueError("leaf degree must be >= 1")
    pts = tuple(pt if isinstance(pt, mpc) else mpc(pt) for pt in points)
    rho = points_magnitude_bits(pts)
    with ctx.activate():
        leaves = []
        for i in range(0, len(pts), n):
            chunk = pts[i : i + n]
            leaves.append(list(Polynomial.from_roots(chunk, ctx).coeffs))
        levels = [leaves]
        while len(levels[-1]) > 1:
            prev = levels[-1]
            nxt = []
            for i in range(0, len(prev) - 1, 2):
                prod = _mul(prev[i], prev[i + 1], ctx)
                prod[-1] = mpc(1)  # product of monics is monic exactly
                nxt.append(prod)
            if len(prev) % 2:
                nxt.append(prev[-1])
            levels.append(nxt)
    wrapped = tuple(tuple(Polynomial(c, allow_zero=True) for c in lvl) for lvl in levels)
    return SubproductTree(pts, n, wrapped, rho, ctx.lambda_bits)


def remainders(F: Polynomial, tree: SubproductTree, ctx: PrecisionContext) -> list:
    """F mod P_j for every leaf modulus, by remaindering down the tree."""
    with ctx.activate():
        cur = [_mod(list(F.coeffs), list(tree.root.coeffs), ctx)]
        for level in range(len(tree.levels) - 2, -1, -1):
            nodes = tree.levels[level]
            nxt = []
            for i, node in enumerate(nodes):
                nxt.append(_mod(cur[i // 2], list(node.coeffs), ctx))
            cur = nxt
    return [Polynomial(c, allow_zero=True) for c in cur]


def eval_many(
    p: Polynomial,
    points: Sequence,
    ctx: PrecisionContext,
    method: str = "auto",
    guard_bits: Optional[int] = None,
) -> list:
    """Values p(point) for every point.

    method "tree" runs build_tree (n = 1) + remainders, "horner" evaluates
    each point directly, "auto" picks whichever costs fewer operations at
    desk scale (the tree pays off only once both the degree and the point
    count are large).  On the tree path the working precision is widened
    by guard_bits (default: an estimate of the cascade loss) and the
    results are rounded back to lambda bits.
    """
    if method not in ("auto", "tree", "horner"):
        raise ValueError(f"unknown method {method!r}")
    pts = [pt if isinstance(pt, mpc) else mpc(pt) for pt in points]
    if not pts:
        return []
    if method == "auto":
        # tree descent costs ~14*lg(m)*(lg(m)+5) multiplications per point
        # versus deg for Horner, so the tree only wins at serious degrees
        lg = math.log2(max(4, len(pts)))
        method = "tree" if p.degree > 14 * lg * (lg + 5) else "horner"
    if method == "horner":
        with ctx.activate():
            return [p.eval(pt, ctx) for pt in pts]
    if guard_bits is None:
        rho = points_magnitude_bits(pts)
        guard_bits = math.ceil(
            p.tau
            + 4 * min(2 * p.degree + 2, len(pts)) * max(1, rho)
            + 8 * math.log2(max(2, len(pts)))
            + 32
        )
    wctx = ctx.widened(guard_bits)
    tree = build_tree(pts, 1, wctx)
    rems = remainders(F=p, tree=tree, ctx=wctx)
    with ctx.activate():
        return [r.coeffs[0] + mpc(0) for r in rems]  # round back to lambda bits


def divide(F: Polynomial, P: Polynomial, ctx: PrecisionContext):
    """Quotient and remainder of F by a monic P at lambda bits.

    Returns (quotient, remainder coefficients); the remainder is a raw
    tuple because it may be identically zero.
    """
    if P.coeffs[-1] != 1:
        raise ValueError("divisor must be monic")
    if F.degree < P.degree:
        return None, tuple(F.coeffs)
    with ctx.activate():
        q, r = _divmod(list(F.coeffs), list(P.coeffs), ctx)
    return Polynomial(q), tuple(r)


# -- internal helpers on raw coefficient lists (low-to-high) ---------------


def _mul(a: list, b: list, ctx: PrecisionContext) -> list:
    out_len = len(a) + len(b) - 1
    if min(len(a), len(b)) <= _SCHOOLBOOK_CUTOFF:
        out = [mpc(0)] * out_len
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        return out
    size = 1 << math.ceil(math.log2(out_len))
    plan = get_plan(size, ctx)
    fa = dft_forward(plan, a + [mpc(0)] * (size - len(a)))
    fb = dft_forward(plan, b + [mpc(0)] * (size - len(b)))
    return dft_inverse(plan, [x * y for x, y in zip(fa, fb)])[:out_len]


def _series_inverse(g: list, t: int, ctx: PrecisionContext) -> list:
    """Inverse of a power series with g[0] = 1, modulo x^t (Newton)."""
    inv = [mpc(1)]
    have = 1
    while have < t:
        have = min(2 * have, t)
        gi = _mul(g[:have], inv, ctx)[:have]
        gi[0] = 2 - gi[0]
        for i in range(1, len(gi)):
            gi[i] = -gi[i]
        inv = _mul(inv, gi, ctx)[:have]
    return inv


def _divmod(f: list, p: list, ctx: PrecisionContext):
    """Long division f = q*p + r for monic p; returns (q, r with len < deg p)."""
    df, dp = len(f) - 1, len(p) - 1
    if dp == 0:
        return list(f), [mpc(0)]
    nq = df - dp + 1
    if dp <= _SCHOOLBOOK_CUTOFF or nq <= 8:
        r = list(f)
        q = [mpc(0)] * nq
        for i in range(df, dp - 1, -1):
            c = r[i]
            q[i - dp] = c
            if c != 0:
                for j in range(dp):
                    r[i - dp + j] = r[i - dp + j] - c * p[j]
                r[i] = mpc(0)
        return q, r[:dp]
    inv = _series_inverse(p[::-1], nq, ctx)
    qrev = _mul(f[::-1][:nq], inv, ctx)[:nq]
    q = qrev[::-1]
    qp = _mul(q, p, ctx)
    r = [f[i] - qp[i] for i in range(dp)]
    return q, r


def _mod(f: list, p: list, ctx: PrecisionContext) -> list:
    if len(f) - 1 < len(p) - 1:
        return f
    return _divmod(f, p, ctx)[1]

"""Radix-2 DFT on the +angle root table Omega = [w^(hi)].

The estimator consumes three forward transforms per batch: two to evaluate
the folded polynomial and its folded derivative at the q-th roots of
unity, one to apply Omega to the quotient vector.  Plans precompute the
root table once per (q, lambda) pair; transforms are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpc

from .numctx import PrecisionContext, root_of_unity
from .poly import FoldedPolynomial

_PLAN_CACHE: dict = {}


@dataclass(frozen=True)
class DftPlan:
    q: int
    lambda_bits: int
    roots: tuple  # roots[j] = exp(2*pi*i*j/q)

    def __post_init__(self):
        if self.q < 2 or self.q & (self.q - 1):
            raise ValueError(f"transform size must be a power of two >= 2, got {self.q}")

    def conj_root(self, j: int) -> mpc:
        w = self.roots[(-j) % self.q]
        return w


def get_plan(q: int, ctx: PrecisionContext) -> DftPlan:
    """Plan for size q at the context's lambda; cached per (q, lambda)."""
    key = (q, ctx.lambda_bits)
    plan = _PLAN_CACHE.get(key)
    if plan is None:
        plan = DftPlan(q, ctx.lambda_bits, _root_table(q, ctx))
        _PLAN_CACHE[key] = plan
    return plan


def _root_table(q: int, ctx: PrecisionContext) -> tuple:
    """Quarter-circle trig calls, the rest by exact rotations."""
    if q == 2:
        return (mpc(1), mpc(-1))
    quarter = q // 4
    table = [None] * q
    for j in range(quarter):
        table[j] = root_of_unity(q, j, ctx)
    with ctx.activate():  # keep the full mantissas through the rotations
        for j in range(quarter):
            w = table[j]
            table[j + quarter] = mpc(-w.imag, w.real)      # *i, exact
            table[j + 2 * quarter] = mpc(-w.real, -w.imag)  # *-1, exact
            table[j + 3 * quarter] = mpc(w.imag, -w.real)   # *-i, exact
    return tuple(table)


def _transform(plan: DftPlan, values, conjugate: bool) -> list:
    q = plan.q
    a = [x if isinstance(x, mpc) else mpc(x) for x in values]
    # bit-reversal permutation
    j = 0
    for i in range(1, q):
        bit = q >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            a[i], a[j] = a[j], a[i]
    roots = plan.roots
    size = 2
    while size <= q:
        half = size >> 1
        step = q // size
        for start in range(0, q, size):
            k = 0
            for i in range(start, start + half):
                idx = (-k) % q if conjugate else k
                t = roots[idx] * a[i + half]
                a[i + half] = a[i] - t
                a[i] = a[i] + t
                k += step
        size <<= 1
    return a


def dft_forward(plan: DftPlan, values) -> list:
    """Omega * v, i.e. out[h] = sum_i w^(hi) v[i], in O(q log q) ops."""
    if len(values) != plan.q:
        raise ValueError(f"expected {plan.q} values, got {len(values)}")
    with gmpy2.context(precision=plan.lambda_bits):
        return _transform(plan, values, conjugate=False)


def dft_inverse(plan: DftPlan, values) -> list:
    """Inverse of dft_forward: conjugated roots and division by q (exact)."""
    if len(values) != plan.q:
        raise ValueError(f"expected {plan.q} values, got {len(values)}")
    with gmpy2.context(precision=plan.lambda_bits):
        out = _transform(plan, values, conjugate=True)
        return [x / plan.q for x in out]


def eval_at_roots(fp: FoldedPolynomial, plan: DftPlan) -> list:
    """Values p(w^j) for all j, through the fold identity."""
    if fp.q != plan.q:
        raise ValueError(f"fold length {fp.q} does not match plan size {plan.q}")
    return dft_forward(plan, fp.coeffs)

"""Power sums of the roots inside an isolated disc, with certified error radii.

The estimator samples v_j = p'(x_j)/p(x_j) at q points on the disc
boundary and applies the DFT matrix row k+1, which aliases the Laurent
coefficients of p'/p down to the power sum s_k of the enclosed roots plus
a geometrically decaying tail.  The tail is bounded in closed form by

    (inner * z^(q+k) + (d - inner) * z^(q-k)) / (1 - z^q)

where z < 1 certifies how far all roots stay from the contour (on either
side, as a ratio).  That bound is the error radius attached to every
estimate, and driving it below a target is how q is selected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import gmpy2
from gmpy2 import mpc, mpfr

from .dft import dft_forward, eval_at_roots, get_plan
from .errors import ContourProximityError
from .numctx import PrecisionContext
from .poly import Polynomial


@dataclass(frozen=True)
class IsolatedDisc:
    """Disc D(center, radius) whose boundary is the evaluation contour.

    isolation is the certified ratio (1+eta)^2 > 1: every root of p either
    lies within radius/sqrt(isolation) of the center ("inside") or at least
    radius*sqrt(isolation) away ("outside"), so the contour keeps a
    sqrt(isolation) margin from the nearest root on each side.
    claimed_root_count, when present, is the number of enclosed roots
    counted with multiplicity; it is a trusted input at runtime.
    """

    center: mpc
    radius: mpfr
    isolation: float
    claimed_root_count: Optional[int] = None

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disc radius must be positive")
        if not self.isolation > 1:
            raise ValueError("isolation ratio must exceed 1")
        if self.claimed_root_count is not None and self.claimed_root_count < 0:
            raise ValueError("root count cannot be negative")

    def z_bound(self, ctx: PrecisionContext) -> mpfr:
        """Certified z = 1/sqrt(isolation) < 1 for the tail bound."""
        with ctx.activate():
            return 1 / gmpy2.sqrt(mpfr(self.isolation))

    def eta(self, ctx: PrecisionContext) -> mpfr:
        """eta with (1+eta)^2 = isolation."""
        with ctx.activate():
            return gmpy2.sqrt(mpfr(self.isolation)) - 1


@dataclass(frozen=True)
class PowerSumEstimate:
    """Estimate s_k^* of the k-th power sum of the enclosed roots, in the
    disc's local coordinate y = (x - center)/radius."""

    k: int
    value: mpc
    error_radius: mpfr
    q_used: int


def truncation_bound(z, q: int, k: int, d: int, inner: int = 1):
    """Closed-form tail bound on |s_k^* - s_k| for a degree-d polynomial.

    inner is the number of enclosed roots (with multiplicity); the classic
    single-root form uses inner = 1.
    """
    zz = mpfr(z)
    if not 0 < zz < 1:
        raise ValueError(f"need 0 < z < 1, got {zz}")
    if not 0 <= k < q:
        raise ValueError(f"need 0 <= k < q, got k={k}, q={q}")
    zq = zz**q
    return (inner * zq * zz**k + (d - inner) * zq / zz**k) / (1 - zq)


def select_q(z, k: int, d: int, delta, inner: int = 1) -> int:
    """Smallest power of two q > k whose tail bound is at most delta.

    The bound strictly decreases as q doubles, so the scan terminates for
    every z < 1.  Raises ValueError when z >= 1 (the disc is not isolated).
    """
    with gmpy2.context(precision=96):
        zz = mpfr(z)
        dd = mpfr(delta)
        if not zz < 1:
            raise ValueError(f"z = {zz} >= 1: disc is not isolated")
        if not zz > 0:
            raise ValueError("z must be positive")
        if not dd > 0:
            raise ValueError("target error must be positive")
        q = 2
        while q <= k:
            q <<= 1
        while truncation_bound(zz, q, k, d, inner) > dd:
            q <<= 1
            if q > 1 << 26:
                raise ValueError("q exceeded 2^26; target error unreachable for this z")
        return q


def _next_pow2(n: int) -> int:
    return 1 << max(1, math.ceil(math.log2(max(2, n))))


def _quotient_vector(p_vals, pd_vals, guard, scale=None) -> list:
    """v_j = scale * p'(x_j)/p(x_j), guarding against contour-grazing roots."""
    v = []
    for j, (pv, dv) in enumerate(zip(p_vals, pd_vals)):
        if abs(pv) < guard:
            raise ContourProximityError(
                f"|p| = {abs(pv):.3e} at contour point {j} is below the "
                f"2^(-lambda/2) guard; re-certify the disc isolation"
            )
        quot = dv / pv
        v.append(quot if scale is None else scale * quot)
    return v


def _estimates(v, plan, kmax: int, z, d: int, inner: int, shift=None) -> list:
    """Rows 1..kmax+1 of Omega*v (plus the rank-one shift), scaled by 1/q."""
    w = dft_forward(plan, v)
    q = plan.q
    out = []
    for k in range(kmax + 1):
        val = w[k + 1]
        if shift is not None:
            val = val + shift * w[0]  # w[0] = sum_j v_j
        out.append(PowerSumEstimate(k, val / q, truncation_bound(z, q, k, d, inner), q))
    return out


def power_sums_unit_disc(
    p: Polynomial,
    q: int,
    kmax: int,
    ctx: PrecisionContext,
    isolation: float,
    inner: int = 1,
) -> list:
    """Power-sum estimates s_0^*..s_kmax^* for the roots inside the unit disc.

    The unit circle is the contour: the enclosed roots must lie within
    1/sqrt(isolation) and all others beyond sqrt(isolation); inner is how
    many roots (with multiplicity) are enclosed, which scales the s-part
    of the tail bound.  s_0^* estimates the number of enclosed roots.
    Three forward DFTs of size q.
    """
    if q < 2 or q & (q - 1):
        raise ValueError(f"q must be a power of two >= 2, got {q}")
    if not 0 <= kmax <= q - 2:
        raise ValueError(f"kmax must satisfy 0 <= kmax <= q-2, got kmax={kmax}, q={q}")
    if p.degree < 1:
        raise ValueError("polynomial must have at least one root")
    if not isolation > 1:
        raise ValueError("isolation ratio must exceed 1")
    if not 1 <= inner <= p.degree:
        raise ValueError(f"inner root count {inner} outside [1, degree]")
    plan = get_plan(q, ctx)
    with ctx.activate():
        p_vals = eval_at_roots(p.fold(q, ctx), plan)
        pd_vals = eval_at_roots(p.derivative(ctx).fold(q, ctx), plan)
        guard = p.max_coeff_magnitude(ctx) * mpfr(2) ** (-(ctx.lambda_bits // 2))
        v = _quotient_vector(p_vals, pd_vals, guard)
        z = 1 / gmpy2.sqrt(mpfr(isolation))
        return _estimates(v, plan, kmax, z, p.degree, inner)


def power_sums_in_disc(
    p: Polynomial,
    disc: IsolatedDisc,
    kmax: int,
    delta,
    ctx: PrecisionContext,
    inner: int = 1,
) -> list:
    """Estimates of the power sums of the roots of p inside disc.

    Works in the local coordinate y = (x - center)/radius by shifting and
    scaling the variable, then running the unit-disc estimator; q is the
    smallest power of two at which the k = kmax tail bound is <= delta.
    """
    with ctx.activate():
        z = 1 / gmpy2.sqrt(mpfr(disc.isolation))
    q = select_q(z, kmax, p.degree, delta, inner)
    q = max(q, _next_pow2(kmax + 2))
    g = p.taylor_shift_scale(disc.center, disc.radius, ctx)
    return power_sums_unit_disc(g, q, kmax, ctx, disc.isolation, inner)


def shifted_power_sums(
    p: Polynomial,
    disc: IsolatedDisc,
    c,
    q: int,
    ctx: PrecisionContext,
    kmax: Optional[int] = None,
) -> list:
    """Estimates produced by the rank-one shifted matrix c*[1] + Omega.

    Row for row this equals the plain estimate plus c * (sum_j v_j)/q,
    at the cost of 3d extra ops; with c = center/radius the k = 1 row
    reads out the enclosed root in global coordinates directly.
    """
    if kmax is None:
        kmax = q - 2
    if q < 2 or q & (q - 1):
        raise ValueError(f"q must be a power of two >= 2, got {q}")
    if not 0 <= kmax <= q - 2:
        raise ValueError(f"kmax must satisfy 0 <= kmax <= q-2, got kmax={kmax}, q={q}")
    g = p.taylor_shift_scale(disc.center, disc.radius, ctx)
    plan = get_plan(q, ctx)
    with ctx.activate():
        p_vals = eval_at_roots(g.fold(q, ctx), plan)
        pd_vals = eval_at_roots(g.derivative(ctx).fold(q, ctx), plan)
        guard = g.max_coeff_magnitude(ctx) * mpfr(2) ** (-(ctx.lambda_bits // 2))
        v = _quotient_vector(p_vals, pd_vals, guard)
        z = 1 / gmpy2.sqrt(mpfr(disc.isolation))
        shift = c if isinstance(c, mpc) else mpc(c)
        return _estimates(v, plan, kmax, z, p.degree, 1, shift=shift)

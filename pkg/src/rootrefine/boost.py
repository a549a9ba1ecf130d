"""Isolation boosting: shrink a mildly isolated disc to a 5d^2-isolated one.

For a disc holding a single root (any multiplicity m), the first power sum
of the enclosed roots is m times the root, so estimating it to within
Delta = 0.2 * radius * eta / d^2 and recentering on the estimate yields a
disc D(c, Delta) whose isolation ratio is at least 5d^2 -- exactly the
hypothesis Newton's iteration needs to converge quadratically from c.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import gmpy2
from gmpy2 import mpc, mpfr

from .errors import IsolationContractError
from .numctx import PrecisionContext
from .poly import Polynomial
from .powersum import IsolatedDisc, power_sums_in_disc


@dataclass(frozen=True)
class BoostResult:
    """Boosted center c and radius delta with D(c, delta) 5d^2-isolated.

    delta is taken exactly at the threshold 0.2*r*eta/d^2 (the smallest q
    then suffices); the enclosed root lies in D(c, delta) whenever the
    input disc honoured its isolation contract.
    """

    center: mpc
    delta: mpfr
    q_used: int


def boost_isolation(
    p: Polynomial,
    disc: IsolatedDisc,
    ctx: PrecisionContext,
    multiplicity: Optional[int] = None,
) -> BoostResult:
    """Boost a (1+eta)^2-isolated disc around one root to 5d^2 isolation.

    The disc must contain exactly one root of p, of the given multiplicity
    (default: the disc's claimed_root_count, else 1).  The center estimate
    is the first local power sum divided by the multiplicity, mapped back
    to global coordinates.
    """
    d = p.degree
    if d < 1:
        raise ValueError("polynomial must have at least one root")
    m = multiplicity if multiplicity is not None else (disc.claimed_root_count or 1)
    if m < 1 or m > d:
        raise ValueError(f"multiplicity {m} outside [1, degree]")
    with ctx.activate():
        eta = disc.eta(ctx)
        r = mpfr(disc.radius)
        delta = mpfr("0.2") * r * eta / (d * d)
        delta_local = mpfr("0.2") * eta / (d * d)
    ests = power_sums_in_disc(p, disc, kmax=1, delta=delta_local, ctx=ctx, inner=m)
    with ctx.activate():
        s0, s1 = ests[0], ests[1]
        if s0.error_radius < 0.5:
            counted = round(float(s0.value.real))
            if counted != m:
                raise IsolationContractError(
                    f"contour root count {counted} disagrees with declared "
                    f"multiplicity {m}; the disc certificate is wrong"
                )
        center = disc.center + r * (s1.value / m)
    return BoostResult(center=center, delta=delta, q_used=s1.q_used)

"""All-roots pipeline: batched boosting and Newton over many isolated discs.

Instead of shifting the polynomial into each disc (d Taylor shifts), p and
p' are evaluated at the q contour points of every disc in one batched
multipoint evaluation; each disc's quotient vector then goes through its
own DFT row to produce the boosted center, and the concurrent Newton
stage batches the 2d evaluations of every sweep the same way.  Also hosts
the power-sums-to-coefficients path that reconstructs the monic factor of
a root cluster inside one disc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import gmpy2
from gmpy2 import mpc, mpfr

from .boost import BoostResult, boost_isolation
from .dft import dft_forward, get_plan
from .errors import (
    ContourProximityError,
    FactorExtractionError,
    IsolationContractError,
    RootRefineError,
)
from .multipoint import divide, eval_many
from .newton import (
    NewtonState,
    RefinementRequest,
    RefinementResult,
    evaluation_floor_coeff,
    iteration_budget,
    newton_refine,
)
from .numctx import PrecisionContext
from .poly import Polynomial
from .powersum import IsolatedDisc, power_sums_in_disc, select_q, truncation_bound


@dataclass(frozen=True)
class AllRootsPlan:
    """d pairwise disjoint isolated discs, each holding one simple root.

    q overrides the per-disc contour size when set; by default each disc
    gets the smallest power of two meeting its own boost target, so discs
    with weaker isolation sample more points.
    """

    discs: tuple
    epsilon: float
    q: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "discs", tuple(self.discs))
        if not self.discs:
            raise ValueError("plan needs at least one disc")
        with gmpy2.context(precision=64):
            if not 0 < mpfr(self.epsilon) < 1:
                raise ValueError("epsilon must lie in (0, 1)")
        if self.q is not None and (self.q < 4 or self.q & (self.q - 1)):
            raise ValueError("q override must be a power of two >= 4")
        with gmpy2.context(precision=128):
            for i in range(len(self.discs)):
                for j in range(i + 1, len(self.discs)):
                    a, b = self.discs[i], self.discs[j]
                    gap = abs(a.center - b.center)
                    if not gap > mpfr(a.radius) + mpfr(b.radius):
                        raise ValueError(f"discs {i} and {j} overlap")


@dataclass(frozen=True)
class DiscFailure:
    """Per-disc failure record; other discs keep their results."""

    index: int
    stage: str
    message: str


@dataclass(frozen=True)
class Factor:
    """Monic factor of p whose roots are exactly those inside one disc."""

    coeffs: tuple
    residual: mpfr

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


Outcome = Union[RefinementResult, DiscFailure]


def refine_all(p: Polynomial, plan: AllRootsPlan, ctx: PrecisionContext) -> list:
    """Refine the root in every disc of the plan to within plan.epsilon.

    Output order matches disc order; failures are reported per index
    without aborting the rest.  A single-disc plan degenerates to the
    plain boost + newton_refine path (bit-for-bit identical results).
    """
    d = p.degree
    if d < 1:
        raise ValueError("polynomial must have at least one root")
    discs = plan.discs
    if len(discs) == 1:
        try:
            b = boost_isolation(p, discs[0], ctx, multiplicity=1)
            return [newton_refine(p, b, RefinementRequest(plan.epsilon), ctx)]
        except RootRefineError as exc:
            return [DiscFailure(0, "single", str(exc))]

    pd = p.derivative(ctx)
    outcomes: dict = {}

    # stage 1: batched contour evaluation, per-disc DFT row k=1
    with ctx.activate():
        eps = mpfr(plan.epsilon)
        guard = p.max_coeff_magnitude(ctx) * mpfr(2) ** (-(ctx.lambda_bits // 2))
        qs, radii, etas = [], [], []
        points: list = []
        for i, disc in enumerate(discs):
            eta = disc.eta(ctx)
            z = 1 / gmpy2.sqrt(mpfr(disc.isolation))
            delta_local = mpfr("0.2") * eta / (d * d)
            if plan.q is None:
                q = max(4, select_q(z, 1, d, delta_local))
            else:
                q = plan.q
                if truncation_bound(z, q, 1, d) > delta_local:
                    outcomes[i] = DiscFailure(
                        i, "boost", f"q override {q} cannot reach the boost target"
                    )
            dplan = get_plan(q, ctx)
            r = mpfr(disc.radius)
            points.extend(disc.center + r * w for w in dplan.roots)
            qs.append(q)
            radii.append(r)
            etas.append(eta)
    p_vals = eval_many(p, points, ctx)
    pd_vals = eval_many(pd, points, ctx)

    boosts: dict = {}
    with ctx.activate():
        offset = 0
        for i, disc in enumerate(discs):
            q, r = qs[i], radii[i]
            seg = slice(offset, offset + q)
            offset += q
            if i in outcomes:
                continue
            try:
                v = []
                for pv, dv in zip(p_vals[seg], pd_vals[seg]):
                    if abs(pv) < guard:
                        raise ContourProximityError(
                            f"|p| below the contour guard on disc {i}; "
                            "re-certify its isolation"
                        )
                    v.append(r * dv / pv)
                w = dft_forward(get_plan(q, ctx), v)
                center = disc.center + r * (w[2] / q)
                delta = mpfr("0.2") * r * etas[i] / (d * d)
                boosts[i] = BoostResult(center=center, delta=delta, q_used=q)
            except RootRefineError as exc:
                outcomes[i] = DiscFailure(i, "boost", str(exc))

    # stage 2: concurrent Newton, evaluations batched per sweep
    with ctx.activate():
        floor_coeff = evaluation_floor_coeff(p, ctx)
        states = {
            i: NewtonState(b.center, b.delta, iteration_budget(b.delta, plan.epsilon))
            for i, b in boosts.items()
        }
    while states:
        order = sorted(states)
        pts = [states[i].x for i in order]
        pv = eval_many(p, pts, ctx)
        pdv = eval_many(pd, pts, ctx)
        with ctx.activate():
            for i, hv, hdv in zip(order, pv, pdv):
                try:
                    done = states[i].advance(hv, hdv, eps, floor_coeff, d)
                    if done is not None:
                        root, radius = done
                        outcomes[i] = _finish(p, root, radius, states[i].iters, ctx)
                        del states[i]
                except RootRefineError as exc:
                    outcomes[i] = DiscFailure(i, "newton", str(exc))
                    del states[i]

    return [outcomes[i] for i in range(len(discs))]


def _finish(p, root, radius, iterations, ctx) -> RefinementResult:
    return RefinementResult(
        root=root,
        error_radius=radius,
        iterations=iterations,
        residual=abs(p.eval(root, ctx)),
    )


def extract_factor(
    p: Polynomial,
    disc: IsolatedDisc,
    ctx: PrecisionContext,
    target_bits: Optional[int] = None,
) -> Factor:
    """Monic factor of p whose roots are the m roots of p inside disc.

    m is recovered by rounding the s_0 estimate (its error radius is
    driven below 1/2 first); the local power sums s_1..s_m are then
    converted to elementary symmetric functions by Newton's identities and
    the monic local factor is mapped back to global coordinates.  The
    conversion is the O(m^2) back-substitution, which is transparent and
    plenty at desk scale.
    """
    d = p.degree
    ell_f = target_bits if target_bits is not None else ctx.ell
    counted = power_sums_in_disc(p, disc, kmax=0, delta=0.499, ctx=ctx)
    s0 = counted[0]
    if not s0.error_radius < 0.5:
        raise FactorExtractionError("could not certify the root count")
    m = round(float(s0.value.real))
    if abs(complex(s0.value) - m) > 0.5:
        raise FactorExtractionError(
            f"s_0 estimate {complex(s0.value):.4f} is not near an integer"
        )
    if m < 1:
        raise FactorExtractionError("disc encloses no roots")
    if disc.claimed_root_count is not None and disc.claimed_root_count != m:
        raise FactorExtractionError(
            f"contour count {m} disagrees with declared count "
            f"{disc.claimed_root_count}"
        )

    # power-sum accuracy so the identities deliver ell_f-bit coefficients
    loss = m + m * math.ceil(math.log2(m + 1)) + 6
    delta_s = mpfr(2) ** (-(ell_f + loss))
    ests = power_sums_in_disc(p, disc, kmax=m, delta=delta_s, ctx=ctx, inner=m)
    with ctx.activate():
        s = [e.value for e in ests]
        e = [mpc(1)]
        for k in range(1, m + 1):
            acc = mpc(0)
            sign = 1
            for i in range(1, k + 1):
                acc = acc + sign * e[k - i] * s[i]
                sign = -sign
            e.append(acc / k)
        local = [(-1) ** (m - t) * e[m - t] for t in range(m + 1)]
        r = mpfr(disc.radius)
        shifted = Polynomial(local).taylor_shift_scale(-disc.center / r, 1 / r, ctx)
        lead = shifted.coeffs[-1] * r**m
        coeffs = tuple(c * r**m / lead for c in shifted.coeffs[:-1]) + (mpc(1),)
        factor = Polynomial(coeffs)
        _, rem = divide(p, factor, ctx)
        residual = max(abs(c) for c in rem) / p.max_coeff_magnitude(ctx)
    return Factor(coeffs=factor.coeffs, residual=residual)

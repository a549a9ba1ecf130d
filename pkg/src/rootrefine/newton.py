"""Newton's iteration from a boosted center, with certified stopping.

Starting inside a 5d^2-isolated disc of radius delta around a simple root,
x_{k+1} = x_k - p(x_k)/p'(x_k) contracts quadratically from the first
step.  The stopping rule certifies the error from step sizes: once two
consecutive quadratic contractions have been observed, the error of the
latest iterate is at most twice the last step.  Steps at or below the
round-off floor of one evaluation (which scales with max|p_i|, |x|^d and
1/|p'(x)|) mean the iterate is converged at lambda bits; the floor is then
the certificate.  A root of multiplicity m is refined by running the same
iteration on the (m-1)-th derivative, whose corresponding root is simple
and keeps the disc isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import gmpy2
from gmpy2 import mpc, mpfr

from .boost import BoostResult
from .errors import IsolationContractError
from .numctx import PrecisionContext
from .poly import Polynomial


@dataclass(frozen=True)
class RefinementRequest:
    epsilon: float
    multiplicity: int = 1

    def __post_init__(self):
        with gmpy2.context(precision=64):
            if not 0 < mpfr(self.epsilon) < 1:
                raise ValueError("epsilon must lie in (0, 1)")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")


@dataclass(frozen=True)
class RefinementResult:
    root: mpc
    error_radius: mpfr
    iterations: int
    residual: mpfr
    trace: Optional[tuple] = None


def newton_step(p: Polynomial, x, ctx: PrecisionContext) -> mpc:
    """One iteration x - p(x)/p'(x) at lambda bits."""
    pd = p.derivative(ctx)
    with ctx.activate():
        z = x if isinstance(x, mpc) else mpc(x)
        return z - p.eval(z, ctx) / pd.eval(z, ctx)


def iteration_budget(start_radius, epsilon) -> int:
    """ceil(lg lg (start_radius/epsilon)) + 3 iterations, at least 4."""
    ratio = float(gmpy2.log2(mpfr(start_radius) / mpfr(epsilon)))
    if ratio <= 2.0:
        return 4
    return max(4, math.ceil(math.log2(ratio)) + 3)


class NewtonState:
    """Per-root iteration state shared by the single and batched drivers."""

    __slots__ = ("x", "prev", "quad", "bad", "iters", "budget", "delta")

    def __init__(self, x0: mpc, delta, budget: int):
        self.x = x0
        self.prev = None
        self.quad = 0
        self.bad = 0
        self.iters = 0
        self.budget = budget
        self.delta = delta

    def advance(self, hv, hdv, eps, floor_coeff, degree):
        """Apply one Newton update from the evaluated pair (h(x), h'(x)).

        Returns (root, error_radius) once the error is certified <= eps,
        else None.  Must run inside the working-precision context.
        """
        if hdv == 0:
            raise IsolationContractError("p' vanished at an iterate")
        step = hv / hdv
        s = abs(step)
        floor = floor_coeff * max(mpfr(1), abs(self.x)) ** degree / abs(hdv)
        if s == 0:
            if floor > eps:
                raise IsolationContractError(
                    "working precision too low for the requested epsilon"
                )
            return self.x, floor
        self.x = self.x - step
        self.iters += 1
        if s <= floor:
            # round-off regime: the step is evaluation noise, the iterate
            # is converged at lambda bits
            radius = max(2 * s, floor)
            if radius > eps:
                raise IsolationContractError(
                    "working precision too low for the requested epsilon"
                )
            return self.x, radius
        if self.prev is not None:
            if s <= self.prev * self.prev / self.delta:
                self.quad += 1
                self.bad = 0
            else:
                self.bad += 1
                self.quad = 0
                if self.bad >= 3:
                    raise IsolationContractError(
                        "steps failed to contract quadratically three times "
                        "in a row; isolation input looks wrong"
                    )
        if self.quad >= 2 and 2 * s <= eps:
            return self.x, 2 * s
        if self.iters >= self.budget:
            raise IsolationContractError(
                f"no certified convergence within {self.iters} iterations"
            )
        self.prev = s
        return None


def evaluation_floor_coeff(h: Polynomial, ctx: PrecisionContext):
    """Scale factor of the one-evaluation round-off floor: the full floor is
    this times max(1,|x|)^d / |h'(x)|."""
    return h.max_coeff_magnitude(ctx) * mpfr(2) ** (
        -ctx.lambda_bits + 2 * h.degree.bit_length() + 3
    )


def newton_refine(
    p: Polynomial,
    start: BoostResult,
    req: RefinementRequest,
    ctx: PrecisionContext,
    keep_trace: bool = False,
) -> RefinementResult:
    """Refine the root near start.center until the certified error <= epsilon.

    Raises IsolationContractError when the steps fail to contract
    quadratically three times in a row or the iteration budget runs out,
    both of which mean the isolation certificate of the input was wrong
    (or lambda is too small for the requested epsilon).
    """
    m = req.multiplicity
    if m > p.degree:
        raise ValueError(f"multiplicity {m} exceeds degree {p.degree}")
    h = p
    for _ in range(m - 1):
        h = h.derivative(ctx)
    hd = h.derivative(ctx)
    with ctx.activate():
        eps = mpfr(req.epsilon)
        x0 = start.center if isinstance(start.center, mpc) else mpc(start.center)
        state = NewtonState(x0, mpfr(start.delta), iteration_budget(start.delta, eps))
        floor_coeff = evaluation_floor_coeff(h, ctx)
        trace = [x0]
        while True:
            hv = h.eval(state.x, ctx)
            hdv = hd.eval(state.x, ctx)
            done = state.advance(hv, hdv, eps, floor_coeff, h.degree)
            if keep_trace and trace[-1] is not state.x:
                trace.append(state.x)
            if done is not None:
                root, radius = done
                break
        residual = abs(p.eval(root, ctx))
    return RefinementResult(
        root=root,
        error_radius=radius,
        iterations=state.iters,
        residual=residual,
        trace=tuple(trace) if keep_trace else None,
    )

"""Execute a problem document against the refinement pipelines.

This is the single entry point shared by the HTTP service and the CLI:
parse the polynomial and discs at the working precision derived from the
target accuracy, dispatch on the mode, and emit string-serialized result
records with certified error exponents.
"""

from __future__ import annotations

import math
import time

import gmpy2
from gmpy2 import mpc, mpfr

from .boost import boost_isolation
from .driver import AllRootsPlan, DiscFailure, extract_factor, refine_all
from .errors import ProblemError, RootRefineError
from .newton import RefinementRequest, newton_refine
from .numctx import PrecisionContext, magnitude_exponent
from .oracle import oracle_roots
from .poly import Polynomial
from .powersum import IsolatedDisc
from .schemas import ProblemSpec, ResultRecord, RunSummary, SolveResponse


def parse_real(text: str, field: str) -> mpfr:
    """Exact decimal or hex-float string to mpfr at the active precision."""
    s = text.strip()
    try:
        if s.lower().lstrip("+-").startswith("0x"):
            return mpfr(s, 0, 0)  # base 0 auto-detects the hex-float format
        return mpfr(s)
    except ValueError as exc:
        raise ProblemError(f"{field}: cannot parse number {text!r}") from exc


def format_real(x: mpfr, digits: int) -> str:
    """Correctly rounded decimal string with the given significant digits."""
    if x == 0:
        return "0"
    mant, exp, _ = gmpy2.digits(x, 10, digits)
    sign = "-" if mant.startswith("-") else ""
    mant = mant.lstrip("-")
    return f"{sign}{mant[0]}.{mant[1:]}e{exp - 1}"


def error_exponent(radius) -> int:
    """Smallest e with radius <= 2^e (the certified error as an exponent)."""
    r = mpfr(radius)
    if r == 0:
        return -(1 << 20)
    return gmpy2.get_exp(r)


def digits_for(ell: int) -> int:
    return math.ceil(ell * 0.302)


def _build_inputs(problem: ProblemSpec):
    """Polynomial, discs and context, parsed losslessly at lambda bits."""
    # first pass at a provisional precision to learn tau and the degree
    width = max(
        [64]
        + [8 + 4 * len(s) for pair in problem.coeffs for s in pair]
        + [8 + 4 * len(s) for d in problem.discs for s in (d.cx, d.cy, d.r)]
    )
    with gmpy2.context(precision=width):
        coeffs = [
            mpc(
                parse_real(re, f"coeffs[{i}][0]"),
                parse_real(im, f"coeffs[{i}][1]"),
            )
            for i, (re, im) in enumerate(problem.coeffs)
        ]
    if all(c == 0 for c in coeffs):
        raise ProblemError("coeffs: the zero polynomial has no roots")
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    degree = len(coeffs) - 1
    if degree < 1:
        raise ProblemError("coeffs: degree must be at least 1")
    tau = max(0, max(magnitude_exponent(c) for c in coeffs))
    if problem.precision_bits is not None:
        lam = problem.precision_bits
        if lam < problem.eps_bits:
            raise ProblemError("precision_bits: must be at least eps_bits")
        ctx = PrecisionContext(lam, problem.eps_bits, tau)
    else:
        ctx = PrecisionContext.for_target(problem.eps_bits, tau, degree)

    # second pass: re-parse everything at the final working precision
    with ctx.activate():
        coeffs = [
            mpc(
                parse_real(re, f"coeffs[{i}][0]"),
                parse_real(im, f"coeffs[{i}][1]"),
            )
            for i, (re, im) in enumerate(problem.coeffs[: degree + 1])
        ]
        poly = Polynomial(coeffs)
        discs = []
        for i, d in enumerate(problem.discs):
            if not d.isolation > 1:
                raise ProblemError(f"discs[{i}].isolation: must exceed 1")
            radius = parse_real(d.r, f"discs[{i}].r")
            if not radius > 0:
                raise ProblemError(f"discs[{i}].r: radius must be positive")
            discs.append(
                IsolatedDisc(
                    center=mpc(
                        parse_real(d.cx, f"discs[{i}].cx"),
                        parse_real(d.cy, f"discs[{i}].cy"),
                    ),
                    radius=radius,
                    isolation=d.isolation,
                    claimed_root_count=d.count,
                )
            )
    return poly, discs, ctx


def _root_record(index, root, err_radius, iters, q, ms, digits, ctx) -> ResultRecord:
    with ctx.activate():
        return ResultRecord(
            index=index,
            root=[format_real(root.real, digits), format_real(root.imag, digits)],
            err_exp=error_exponent(err_radius),
            iters=iters,
            q=q,
            ms=ms,
        )


def run_problem(problem: ProblemSpec) -> SolveResponse:
    """Dispatch a validated problem document; see ProblemSpec for the modes."""
    t_start = time.perf_counter()
    poly, discs, ctx = _build_inputs(problem)
    digits = digits_for(problem.eps_bits)
    records = []

    if problem.mode in ("refine", "all", "factor") and not discs:
        raise ProblemError(f"discs: no discs given for mode {problem.mode!r}")

    if problem.mode == "refine":
        with ctx.activate():
            eps = mpfr(2) ** (-problem.eps_bits)
        for i, disc in enumerate(discs):
            t0 = time.perf_counter()
            mult = problem.discs[i].multiplicity or 1
            try:
                boosted = boost_isolation(poly, disc, ctx, multiplicity=mult)
                res = newton_refine(
                    poly, boosted, RefinementRequest(eps, mult), ctx
                )
                ms = 1000 * (time.perf_counter() - t0)
                records.append(
                    _root_record(
                        i, res.root, res.error_radius, res.iterations,
                        boosted.q_used, ms, digits, ctx,
                    )
                )
            except RootRefineError as exc:
                ms = 1000 * (time.perf_counter() - t0)
                records.append(ResultRecord(index=i, ms=ms, error=str(exc)))

    elif problem.mode == "all":
        with ctx.activate():
            eps = mpfr(2) ** (-problem.eps_bits)
        t0 = time.perf_counter()
        outcomes = refine_all(poly, AllRootsPlan(tuple(discs), eps), ctx)
        ms = 1000 * (time.perf_counter() - t0) / max(1, len(outcomes))
        for i, out in enumerate(outcomes):
            if isinstance(out, DiscFailure):
                records.append(
                    ResultRecord(index=i, ms=ms, error=f"{out.stage}: {out.message}")
                )
            else:
                records.append(
                    _root_record(
                        i, out.root, out.error_radius, out.iterations,
                        None, ms, digits, ctx,
                    )
                )

    elif problem.mode == "factor":
        for i, disc in enumerate(discs):
            t0 = time.perf_counter()
            try:
                fac = extract_factor(poly, disc, ctx)
                ms = 1000 * (time.perf_counter() - t0)
                with ctx.activate():
                    coeff_strings = [
                        [format_real(c.real, digits), format_real(c.imag, digits)]
                        for c in fac.coeffs
                    ]
                    records.append(
                        ResultRecord(
                            index=i,
                            factor=coeff_strings,
                            err_exp=error_exponent(fac.residual),
                            ms=ms,
                        )
                    )
            except RootRefineError as exc:
                ms = 1000 * (time.perf_counter() - t0)
                records.append(ResultRecord(index=i, ms=ms, error=str(exc)))

    elif problem.mode == "oracle":
        t0 = time.perf_counter()
        try:
            roots = oracle_roots(poly, 2 * problem.eps_bits)
            ms = 1000 * (time.perf_counter() - t0) / max(1, len(roots))
            for i, z in enumerate(roots):
                records.append(
                    _root_record(
                        i, z, mpfr(2) ** (-problem.eps_bits), None, None,
                        ms, digits, ctx,
                    )
                )
        except RootRefineError as exc:
            ms = 1000 * (time.perf_counter() - t0)
            records.append(ResultRecord(index=0, ms=ms, error=str(exc)))

    n_failed = sum(1 for r in records if r.error is not None)
    summary = RunSummary(
        mode=problem.mode,
        degree=poly.degree,
        eps_bits=problem.eps_bits,
        lambda_bits=ctx.lambda_bits,
        n_ok=len(records) - n_failed,
        n_failed=n_failed,
        total_ms=1000 * (time.perf_counter() - t_start),
    )
    return SolveResponse(records=records, summary=summary)

"""Test-only oracle: Aberth-Ehrlich simultaneous root finding + disc setup.

Used to validate certificates and to manufacture isolated input discs for
polynomials whose roots are not known by construction.  Deliberately
independent of the estimator/Newton pipeline: only the basic polynomial
and precision types are shared.
"""

from __future__ import annotations

import math

import gmpy2
from gmpy2 import mpc, mpfr

from .errors import OracleError
from .poly import Polynomial
from .powersum import IsolatedDisc

_MAX_SWEEPS = 400
_ISOLATION_CAP = 1.0e6


def oracle_roots(p: Polynomial, precision: int) -> list:
    """All d roots of a squarefree p, each within 2^(-precision/2) of a true root.

    Aberth-Ehrlich iteration from deterministic perturbed-circle starts at
    precision + 64 working bits.  Output is validated by residual and
    pairwise-separation checks; failure to converge or a detected multiple
    root raises OracleError instead of returning wrong answers.
    """
    d = p.degree
    if d < 1:
        raise ValueError("constant polynomials have no roots")
    work = precision + 64
    with gmpy2.context(precision=work):
        coeffs = [mpc(c) for c in p.coeffs]
        lead = coeffs[-1]
        monic = [c / lead for c in coeffs]
        if d == 1:
            return [-monic[0]]
        # perturbed circle inside the Cauchy bound
        radius = 1 + max(abs(c) for c in monic[:-1])
        pi2 = 2 * gmpy2.const_pi()
        zs = []
        for j in range(d):
            ang = pi2 * (j + mpfr("0.3613")) / d + mpfr("0.2718")
            s, c = gmpy2.sin_cos(ang)
            wobble = 1 + mpfr((j * 7919) % 101 - 50) / 400
            zs.append(radius * wobble / 2 * mpc(c, s))

        stop = mpfr(2) ** (-(precision + 16))
        converged = False
        for _ in range(_MAX_SWEEPS):
            biggest = mpfr(0)
            for j in range(d):
                pv, dv = _horner_pair(monic, zs[j])
                if pv == 0:
                    continue
                if dv == 0:
                    zs[j] = zs[j] * (1 + mpfr(2) ** (-work // 2))
                    biggest = max(biggest, abs(zs[j]))
                    continue
                newton = pv / dv
                acc = mpc(0)
                for k in range(d):
                    if k != j:
                        diff = zs[j] - zs[k]
                        if diff == 0:
                            raise OracleError("iterates collided: multiple root?")
                        acc += 1 / diff
                denom = 1 - newton * acc
                w = newton if denom == 0 else newton / denom
                zs[j] = zs[j] - w
                biggest = max(biggest, abs(w) / max(mpfr(1), abs(zs[j])))
            if biggest <= stop:
                converged = True
                break
        if not converged:
            raise OracleError(f"no convergence within {_MAX_SWEEPS} sweeps")

        maxc = max(abs(c) for c in monic)
        res_bound = mpfr(2) ** (-(precision // 2))
        sep_bound = mpfr(2) ** (-max(8, precision // 8))
        for j in range(d):
            pv, _ = _horner_pair(monic, zs[j])
            scale = maxc * max(mpfr(1), abs(zs[j])) ** d
            if not abs(pv) <= res_bound * scale:
                raise OracleError(f"residual check failed at root {j}")
        for j in range(d):
            for k in range(j + 1, d):
                scale = max(mpfr(1), abs(zs[j]), abs(zs[k]))
                if abs(zs[j] - zs[k]) < sep_bound * scale:
                    raise OracleError(
                        f"roots {j} and {k} nearly coincide: "
                        "multiple roots are rejected in oracle mode"
                    )
        return zs


def _horner_pair(coeffs, x):
    """(p(x), p'(x)) in one pass."""
    pv = coeffs[-1]
    dv = mpc(0)
    for c in reversed(coeffs[:-1]):
        dv = dv * x + pv
        pv = pv * x + c
    return pv, dv


def oracle_discs(
    p: Polynomial,
    isolation_target: float,
    precision: int = 192,
) -> list:
    """One isolated disc per root, certified at isolation_target.

    Each disc is centered near (not on) its root: the center is the root
    plus a deterministic perturbation of at most radius/4, the radius is
    half the separation to the nearest other root divided by
    sqrt(isolation_target), and discs of distinct roots are disjoint.
    """
    if not isolation_target > 1:
        raise ValueError("isolation target must exceed 1")
    roots = oracle_roots(p, precision)
    d = len(roots)
    with gmpy2.context(precision=precision):
        target = mpfr(min(isolation_target, _ISOLATION_CAP))
        sq = gmpy2.sqrt(target)
        discs = []
        for i, z in enumerate(roots):
            if d == 1:
                r = mpfr(1)
            else:
                nearest = min(abs(z - w) for j, w in enumerate(roots) if j != i)
                # the 1.6 floor keeps mutually-nearest discs disjoint even
                # after the center perturbations at low targets
                r = nearest / (2 * max(sq, mpfr("1.6")))
            bump = r / max(4, math.ceil(float(sq)))
            ang = mpfr("2.39996") * (i + 1)
            s, c = gmpy2.sin_cos(ang)
            discs.append(
                IsolatedDisc(
                    center=z + bump * mpc(c, s),
                    radius=r,
                    isolation=float(target),
                    claimed_root_count=1,
                )
            )
        return discs

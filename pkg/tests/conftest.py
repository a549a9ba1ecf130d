"""Shared helpers: seeded instance generators and independent oracles.

The generators place roots explicitly, so the "oracle" root locations are
known by construction; the numeric oracles here (naive power evaluation,
naive sequential products, naive DFT) are deliberately separate
implementations from the package's code paths.
"""

import math
import random

import gmpy2
from gmpy2 import mpc, mpfr
import pytest

from rootrefine import Polynomial


def naive_eval(coeffs, x):
    """sum p_i x^i with explicit powers (independent of Horner)."""
    acc = mpc(0)
    power = mpc(1)
    for c in coeffs:
        acc += c * power
        power *= x
    return acc


def naive_product(roots):
    """Sequential expansion of prod (x - z); independent of Polynomial."""
    coeffs = [mpc(1)]
    for z in roots:
        zz = mpc(z)
        shifted = [mpc(0)] + coeffs
        coeffs = [a - zz * b for a, b in zip(shifted, coeffs + [mpc(0)])]
    return coeffs


def naive_dft(roots_table, v):
    """O(q^2) multiply by the matrix [w^(hi)]."""
    q = len(v)
    return [sum(roots_table[(h * i) % q] * v[i] for i in range(q)) for h in range(q)]


def rand_in_disc(rng, radius):
    """Uniform draw from a disc of the given radius."""
    a = rng.uniform(0, 2 * math.pi)
    r = radius * math.sqrt(rng.uniform(0, 1))
    return mpc(r * math.cos(a), r * math.sin(a))


def rand_in_annulus(rng, r_in, r_out):
    a = rng.uniform(0, 2 * math.pi)
    r = rng.uniform(r_in, r_out)
    return mpc(r * math.cos(a), r * math.sin(a))


def isolated_instance(
    rng,
    d,
    eta,
    ctx,
    center=0,
    radius=1,
    outer_lo=None,
    outer_hi=None,
    max_curvature=None,
):
    """Polynomial with exactly one root in the two-sidedly isolated disc.

    The enclosed root sits within radius/(1+eta) of the center, the other
    d-1 roots at global distances in [outer_lo, outer_hi] from the center
    (defaulting to hug the isolation annulus at radius*(1+eta)).
    max_curvature, when set, redraws until |sum 1/(inner - z_j)| over the
    outer roots stays below it: that signed sum is the second-order Newton
    constant, so capping it keeps the measured contraction quadratic from
    the stated threshold on.  Returns (p, inner_root, all_roots).
    """
    center = mpc(center)
    radius = mpfr(radius)
    lo = float(radius) * (1 + eta) * 1.05 if outer_lo is None else outer_lo
    hi = max(4 * float(radius), 2 * lo) if outer_hi is None else outer_hi
    assert lo >= float(radius) * (1 + eta), "outer roots would break the certificate"
    for _ in range(400):
        inner = center + radius * rand_in_disc(rng, 0.95 / (1 + eta))
        outer = [center + rand_in_annulus(rng, lo, hi) for _ in range(d - 1)]
        if max_curvature is not None and d > 1:
            curv = abs(sum(1 / (inner - z) for z in outer))
            if curv > max_curvature:
                continue
        roots = [inner] + outer
        return Polynomial.from_roots(roots, ctx), inner, roots
    raise AssertionError("instance generator failed to meet the curvature bound")


@pytest.fixture
def rng():
    return random.Random(20240811)

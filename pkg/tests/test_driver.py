import gmpy2
from gmpy2 import mpc, mpfr
import pytest

from rootrefine import (
    AllRootsPlan,
    DiscFailure,
    IsolatedDisc,
    Polynomial,
    PrecisionContext,
    RefinementRequest,
    boost_isolation,
    extract_factor,
    newton_refine,
    refine_all,
)
from rootrefine.errors import FactorExtractionError

from conftest import naive_product, rand_in_disc

CTX = PrecisionContext.for_target(220, 20, 8)


def integer_roots_instance():
    with CTX.activate():
        p = Polynomial.from_roots(range(1, 9), CTX)
        discs = tuple(IsolatedDisc(mpc(j), mpfr("0.3"), 9.0) for j in range(1, 9))
    return p, discs


class TestPlan:
    def test_rejects_overlapping_discs(self):
        with CTX.activate():
            discs = (
                IsolatedDisc(mpc(0), mpfr(1), 4.0),
                IsolatedDisc(mpc(1), mpfr("0.5"), 4.0),
            )
        with pytest.raises(ValueError, match="overlap"):
            AllRootsPlan(discs, 0.5)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            AllRootsPlan((), 0.5)


class TestRefineAll:
    def test_single_disc_is_bit_identical_to_plain_path(self):
        p, discs = integer_roots_instance()
        with CTX.activate():
            eps = mpfr(2) ** -200
        batched = refine_all(p, AllRootsPlan((discs[3],), eps), CTX)[0]
        plain = newton_refine(
            p, boost_isolation(p, discs[3], CTX), RefinementRequest(eps), CTX
        )
        assert batched.root == plain.root
        assert batched.error_radius == plain.error_radius
        assert batched.iterations == plain.iterations

    def test_eight_integer_roots(self):
        p, discs = integer_roots_instance()
        with CTX.activate():
            out = refine_all(p, AllRootsPlan(discs, mpfr(2) ** -200), CTX)
            for j, res in zip(range(1, 9), out):
                assert not isinstance(res, DiscFailure)
                assert abs(res.root - j) <= mpfr(2) ** -200
                assert res.error_radius <= mpfr(2) ** -200

    def test_permutation_equivariance(self):
        p, discs = integer_roots_instance()
        with CTX.activate():
            eps = mpfr(2) ** -200
        forward = refine_all(p, AllRootsPlan(discs, eps), CTX)
        perm = [5, 2, 7, 0, 3, 6, 1, 4]
        shuffled = refine_all(
            p, AllRootsPlan(tuple(discs[i] for i in perm), eps), CTX
        )
        for slot, src in enumerate(perm):
            assert shuffled[slot].root == forward[src].root

    def test_per_disc_failure_does_not_poison_batch(self):
        p, discs = integer_roots_instance()
        with CTX.activate():
            # disc 2 is a lie: no root of p lies anywhere near 30
            bad = IsolatedDisc(mpc(30), mpfr("0.3"), 9.0)
            eps = mpfr(2) ** -200
        out = refine_all(p, AllRootsPlan((discs[0], bad, discs[2]), eps), CTX)
        assert isinstance(out[1], DiscFailure)
        with CTX.activate():
            assert abs(out[0].root - 1) <= eps
            assert abs(out[2].root - 3) <= eps

    def test_batched_matches_unbatched(self):
        p, discs = integer_roots_instance()
        with CTX.activate():
            eps = mpfr(2) ** -200
        batched = refine_all(p, AllRootsPlan(discs, eps), CTX)
        with CTX.activate():
            tol = mpfr(2) ** -190
            for disc, res in zip(discs, batched):
                single = newton_refine(
                    p, boost_isolation(p, disc, CTX), RefinementRequest(eps), CTX
                )
                assert abs(single.root - res.root) <= tol


class TestExtractFactor:
    def test_hand_example_half_third(self):
        ctx = PrecisionContext(256, 128, 2)
        with ctx.activate():
            p = Polynomial.from_roots([mpfr(1) / 2, mpfr(1) / 3, 4, 6], ctx)
            disc = IsolatedDisc(mpc(0), mpfr(1), 4.0)
        fac = extract_factor(p, disc, ctx)
        assert fac.degree == 2
        with ctx.activate():
            expected = (mpfr(1) / 6, mpfr(-5) / 6, mpfr(1))
            for c, e in zip(fac.coeffs, expected):
                assert abs(c - e) <= mpfr(2) ** -100

    def test_single_root_factor_matches_boost_center(self):
        ctx = PrecisionContext(256, 128, 4)
        with ctx.activate():
            p = Polynomial.from_roots([mpfr("0.25"), 6, 9], ctx)
            disc = IsolatedDisc(mpc(0), mpfr(1), 16.0)
        fac = extract_factor(p, disc, ctx)
        assert fac.degree == 1
        with ctx.activate():
            # x - s1*: the constant term is minus the boosted center estimate
            assert abs(-fac.coeffs[0] - mpfr("0.25")) <= mpfr(2) ** -100

    def test_four_root_cluster(self, rng):
        ctx = PrecisionContext(320, 128, 4)
        with ctx.activate():
            cluster = [rand_in_disc(rng, 0.009) for _ in range(4)]
            outer = [mpc(1.5, 0.2), mpc(-2, 1), mpc(0, 3), mpc(4, -2)]
            p = Polynomial.from_roots(cluster + outer, ctx)
            disc = IsolatedDisc(mpc(0), mpfr("0.1"), 100.0)
        fac = extract_factor(p, disc, ctx)
        assert fac.degree == 4
        with ctx.activate():
            reference = naive_product(cluster)
            for c, e in zip(fac.coeffs, reference):
                assert abs(c - e) <= mpfr(2) ** -80
            assert fac.residual <= mpfr(2) ** -64

    def test_rejects_wrong_declared_count(self):
        ctx = PrecisionContext(256, 128, 2)
        with ctx.activate():
            p = Polynomial.from_roots([mpfr("0.2"), mpfr("-0.3"), 7], ctx)
            disc = IsolatedDisc(mpc(0), mpfr(1), 9.0, claimed_root_count=3)
        with pytest.raises(FactorExtractionError):
            extract_factor(p, disc, ctx)

    def test_rejects_empty_disc(self):
        ctx = PrecisionContext(256, 128, 2)
        with ctx.activate():
            p = Polynomial.from_roots([5, 7], ctx)
            disc = IsolatedDisc(mpc(0), mpfr(1), 9.0)
        with pytest.raises(FactorExtractionError):
            extract_factor(p, disc, ctx)

    def test_residual_definition(self):
        # residual = ||p - f*(p div f)||_inf / ||p||_inf at lambda bits
        ctx = PrecisionContext(256, 100, 4)
        with ctx.activate():
            p = Polynomial.from_roots([mpfr("0.4"), mpc(0, mpfr("0.3")), 5, 8], ctx)
            disc = IsolatedDisc(mpc(0), mpfr(1), 9.0)
        fac = extract_factor(p, disc, ctx)
        with ctx.activate():
            assert fac.residual <= mpfr(2) ** (-ctx.ell // 2)

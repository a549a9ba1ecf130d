import math
import random

import gmpy2
from gmpy2 import mpc, mpfr
import pytest

from rootrefine import Polynomial, PrecisionContext
from rootrefine.multipoint import (
    build_tree,
    divide,
    eval_many,
    points_magnitude_bits,
    remainder_loss_bits,
    remainders,
    working_precision_for_points,
)

from conftest import naive_product

CTX = PrecisionContext(256, 128, 2)


class TestBuildTree:
    def test_two_leaf_example(self):
        tree = build_tree([1, 2, 3, 4], 2, CTX)
        assert [c.real for c in tree.levels[0][0].coeffs] == [2, -3, 1]
        assert [c.real for c in tree.levels[0][1].coeffs] == [12, -7, 1]
        assert [c.real for c in tree.root.coeffs] == [24, -50, 35, -10, 1]

    def test_single_point(self):
        tree = build_tree([mpc(2, 1)], 1, CTX)
        assert tree.root.coeffs == (mpc(-2, -1), mpc(1))
        assert tree.m == 1

    def test_matches_naive_sequential_product(self, rng):
        pts = []
        with CTX.activate():
            for _ in range(64):
                a = rng.uniform(0, 2 * math.pi)
                pts.append(mpc(math.cos(a), math.sin(a)))
        tree = build_tree(pts, 1, CTX)
        with CTX.activate():
            reference = naive_product(pts)
            tol = mpfr(2) ** (-CTX.lambda_bits + 30) * max(abs(c) for c in reference)
            for a, b in zip(tree.root.coeffs, reference):
                assert abs(a - b) <= tol

    def test_rho_bounds_points(self):
        tree = build_tree([mpc(1.75, 0), mpc(0, 1)], 1, CTX)
        assert tree.rho == 1
        assert points_magnitude_bits([mpc(0.5, 0.25)]) == 0
        assert points_magnitude_bits([mpc(3, 3)]) == 3
        # rho really bounds every point
        for pts in ([mpc(1.75), mpc(0, 1)], [mpc(3, 3)], [mpc(100, -40)]):
            rho = points_magnitude_bits(pts)
            assert all(abs(z) <= 2**rho for z in pts)


class TestRemainders:
    def test_linear_modulus_is_evaluation(self):
        F = Polynomial([0, 0, 0, 1])  # x^3
        tree = build_tree([2], 1, CTX)
        assert remainders(F, tree, CTX)[0].coeffs[0] == 8

    def test_exact_divisor_gives_zero(self):
        with CTX.activate():
            P1 = Polynomial.from_roots([1, 5], CTX)
            Q = Polynomial([3, 0, 2, 1])
            prod = Polynomial(
                [sum(P1.coeffs[i] * Q.coeffs[k - i]
                     for i in range(max(0, k - Q.degree), min(P1.degree, k) + 1))
                 for k in range(P1.degree + Q.degree + 1)]
            )
        tree = build_tree([1, 5], 2, CTX)
        rem = remainders(prod, tree, CTX)[0]
        with CTX.activate():
            assert all(abs(c) <= mpfr(2) ** (-CTX.lambda_bits + 40) for c in rem.coeffs)

    def test_256_points_match_horner(self, rng):
        ell = 100
        with gmpy2.context(precision=64):
            pts = [mpc(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(256)]
        rho = points_magnitude_bits(pts)
        lam = working_precision_for_points(ell, 0, 256, 1, rho)
        ctx = PrecisionContext(lam, ell, 0)
        with ctx.activate():
            F = Polynomial([mpc(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(256)])
        tree = build_tree(pts, 1, ctx)
        rems = remainders(F, tree, ctx)
        with ctx.activate():
            tol = mpfr(2) ** -ell
            worst = max(
                abs(r.coeffs[0] - F.eval(pt, ctx)) for r, pt in zip(rems, pts)
            )
            assert worst <= tol


class TestEvalMany:
    def test_cubic(self):
        F = Polynomial([0, 0, 0, 1])
        assert [v.real for v in eval_many(F, [1, 2, 3], CTX)] == [1, 8, 27]

    def test_constant(self):
        F = Polynomial([7])
        assert all(v == 7 for v in eval_many(F, [mpc(1), mpc(2, 3)], CTX))

    def test_empty(self):
        assert eval_many(Polynomial([1, 1]), [], CTX) == []

    def test_tree_agrees_with_horner_at_scale(self, rng):
        ell = 100
        with gmpy2.context(precision=64):
            pts = [mpc(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(128)]
        lam = working_precision_for_points(ell, 0, 128, 1, points_magnitude_bits(pts))
        ctx = PrecisionContext(lam, ell, 0)
        with ctx.activate():
            F = Polynomial([mpc(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(128)])
        tree_vals = eval_many(F, pts, ctx, method="tree", guard_bits=0)
        horner_vals = eval_many(F, pts, ctx, method="horner")
        with ctx.activate():
            worst = max(abs(a - b) for a, b in zip(tree_vals, horner_vals))
            assert worst <= mpfr(2) ** -ell

    def test_precision_law_shape(self, rng):
        # error exponent scales no worse than linearly with the headroom
        # over the cascade loss (the ell = lambda - loss contract shape)
        with gmpy2.context(precision=64):
            pts = [mpc(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(64)]
        loss = remainder_loss_bits(0, 64, 1, points_magnitude_bits(pts))
        exps = []
        for headroom in (256, 128):
            ctx = PrecisionContext(loss + headroom, 64, 0)
            with ctx.activate():
                rng2 = random.Random(5)
                F = Polynomial(
                    [mpc(rng2.uniform(-1, 1), rng2.uniform(-1, 1)) for _ in range(64)]
                )
            tree_vals = eval_many(F, pts, ctx, method="tree", guard_bits=0)
            wide = ctx.widened(200)
            true_vals = [F.eval(pt, wide) for pt in pts]
            with wide.activate():
                worst = max(abs(a - b) for a, b in zip(tree_vals, true_vals))
                exps.append(-int(gmpy2.get_exp(worst)) if worst else 10**6)
        assert exps[0] >= exps[1] >= max(1, exps[0] // 2 - 32)

    def test_method_validation(self):
        with pytest.raises(ValueError):
            eval_many(Polynomial([1, 1]), [1], CTX, method="fft")


class TestDivide:
    def test_exact_division(self):
        with CTX.activate():
            p = Polynomial.from_roots([1, 2, 5], CTX)
            f = Polynomial.from_roots([1, 2], CTX)
        q, rem = divide(p, f, CTX)
        assert [c.real for c in q.coeffs] == [-5, 1]
        with CTX.activate():
            assert all(abs(c) <= mpfr(2) ** (-CTX.lambda_bits + 20) for c in rem)

    def test_remainder_has_divisor_degree(self):
        with CTX.activate():
            p = Polynomial([1, 2, 3, 4, 5])
            f = Polynomial([mpc(2), mpc(0), mpc(1)])
        q, rem = divide(p, f, CTX)
        assert q.degree == 2 and len(rem) == 2
        # reconstruct: p == q*f + rem
        with CTX.activate():
            recon = [mpc(0)] * 5
            for i, a in enumerate(q.coeffs):
                for j, b in enumerate(f.coeffs):
                    recon[i + j] += a * b
            for i, r in enumerate(rem):
                recon[i] += r
            assert all(abs(a - b) <= mpfr(2) ** -200 for a, b in zip(recon, p.coeffs))

    def test_requires_monic(self):
        with pytest.raises(ValueError):
            divide(Polynomial([1, 1, 1]), Polynomial([1, 2]), CTX)


def test_loss_schedule_shape():
    assert remainder_loss_bits(0, 512, 1, 1) == math.ceil(4 * (512 + math.log2(512) + 10))
    assert working_precision_for_points(100, 0, 512, 1, 1) == 100 + remainder_loss_bits(0, 512, 1, 1)
    # monotone in each argument
    assert remainder_loss_bits(4, 512, 1, 1) > remainder_loss_bits(0, 512, 1, 1)
    assert remainder_loss_bits(0, 1024, 1, 1) > remainder_loss_bits(0, 512, 1, 1)
    assert remainder_loss_bits(0, 512, 1, 2) > remainder_loss_bits(0, 512, 1, 1)

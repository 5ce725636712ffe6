from fractions import Fraction as F

import pytest

from helpers import all22, e, graph22, FLIP22, CYCLE22

from kgraph import (
    AveragingUnitarySpec,
    CapError,
    CuntzTuple,
    DegreeError,
    Element,
    KGraph,
    ShapeError,
    adjoint,
    alpha_brute,
    alpha_closed,
    averaging_unitary,
    build_intrinsic_unitary,
    check_little_pullback,
    gamma_endo,
    identity,
    multiply,
    omega,
)
from kgraph.averaging import alpha_mixed
from kgraph.sampling import random_core, random_element


def small_words(g):
    return [w for d in [(0, 0), (1, 0), (0, 1), (1, 1)] for w in g.level(d)]


class TestCuntzTuple:
    @pytest.mark.parametrize("shift", [(0, 0), (1, 0), (1, 1)])
    def test_relations(self, cyc22, shift):
        assert CuntzTuple.shifted(cyc22, shift).verify()

    def test_broken_tuple_rejected(self, id22):
        E = CuntzTuple.standard(id22)
        rep = dict(E.rep)
        rep[(0, 0)], rep[(0, 1)] = rep[(0, 1)], rep[(0, 0)].scale(2)
        assert not CuntzTuple(id22, rep).verify()


class TestGamma:
    def test_unital(self, cyc22):
        for p in [(1, 0), (1, 1), (0, 2)]:
            assert gamma_endo(CuntzTuple.standard(cyc22), p, identity(cyc22)) == identity(cyc22)

    def test_unrolled(self, id22):
        g = id22
        a = Element.gen(g, e(g, 1, 1), e(g, 1, 1))
        want = Element(g)
        for w in g.level((1, 0)):
            sw = Element.gen(g, w)
            want = want + sw * a * adjoint(sw)
        assert gamma_endo(CuntzTuple.standard(g), (1, 0), a) == want
        assert want.num_terms() == 2

    def test_fast_matches_generic(self, cyc22, rng):
        fast = CuntzTuple.shifted(cyc22, (1, 0))
        generic = CuntzTuple(cyc22, fast.rep)
        for _ in range(5):
            a = random_element(cyc22, rng, 2)
            assert gamma_endo(fast, (0, 1), a) == gamma_endo(generic, (0, 1), a)

    def test_multiplicative(self, cyc22, rng):
        E = CuntzTuple.standard(cyc22)
        for _ in range(5):
            a, b = random_element(cyc22, rng, 2), random_element(cyc22, rng, 2)
            assert gamma_endo(E, (1, 0), a * b) == gamma_endo(E, (1, 0), a) * gamma_endo(E, (1, 0), b)

    def test_composition(self, id22, rng):
        g = id22
        s, s01 = CuntzTuple.standard(g), CuntzTuple.shifted(g, (0, 1))
        for _ in range(10):
            a = random_core(g, rng)
            assert gamma_endo(s01, (1, 0), gamma_endo(s, (0, 1), a)) == gamma_endo(s, (1, 1), a)


class TestUnitary:
    def test_identity_and_minus(self, id22):
        g = id22
        E = CuntzTuple.standard(g)
        words = g.level((1, 0))
        ident = {w: w for w in words}
        assert averaging_unitary(E, AveragingUnitarySpec((1, 0), {w: 0 for w in words}, ident)) == identity(g)
        assert averaging_unitary(E, AveragingUnitarySpec((1, 0), {w: 1 for w in words}, ident)) == -identity(g)

    def test_transposition(self, id22):
        g = id22
        E = CuntzTuple.standard(g)
        a, b = g.level((1, 0))
        u = averaging_unitary(E, AveragingUnitarySpec((1, 0), {a: 0, b: 0}, {a: b, b: a}))
        assert u == Element.gen(g, b, a) + Element.gen(g, a, b)
        assert u * adjoint(u) == identity(g)


class TestAlpha:
    def test_examples(self, id22):
        g = id22
        E = CuntzTuple.standard(g)
        assert alpha_brute(E, (1, 0), identity(g)) == identity(g)
        assert alpha_brute(E, (1, 0), Element.gen(g, e(g, 1, 1), e(g, 1, 1))) == identity(g).scale(F(1, 2))
        assert alpha_brute(E, (1, 0), Element.gen(g, e(g, 1, 1), e(g, 1, 2))).is_zero()
        assert alpha_closed(E, (1, 1), identity(g)) == identity(g)

    @pytest.mark.parametrize("perm", [(0, 1, 2, 3), FLIP22, CYCLE22, (1, 3, 0, 2)])
    def test_closed_equals_brute(self, perm):
        g = graph22(perm)
        E = CuntzTuple.standard(g)
        words = small_words(g)
        for p in [(1, 0), (0, 1)]:
            for u in words:
                for v in words:
                    a = Element.gen(g, u, v)
                    assert alpha_closed(E, p, a) == alpha_brute(E, p, a)

    def test_shifted_closed_equals_brute(self, cyc22, rng):
        E = CuntzTuple.shifted(cyc22, (0, 1))
        for _ in range(4):
            a = random_element(cyc22, rng, 2)
            assert alpha_closed(E, (1, 0), a) == alpha_brute(E, (1, 0), a)

    def test_mixed_formula_identity(self, id22):
        g = id22
        u, v = e(g, 1, 1), e(g, 2, 1)
        got = alpha_closed(CuntzTuple.standard(g), (1, 1), Element.gen(g, u, v))
        inner = adjoint(Element.gen(g, e(g, 2, 1))) * Element.gen(g, e(g, 1, 1))
        want = gamma_endo(CuntzTuple.standard(g), (1, 1), inner).scale(F(1, 4))
        assert got == want == alpha_mixed(g, (1, 1), u, v)

    def test_mixed_formula_flip(self, flip22):
        g = flip22
        u, v = e(g, 1, 1), e(g, 2, 1)
        assert len(g.lambda_min(u, v)) == 2
        assert alpha_closed(CuntzTuple.standard(g), (1, 1), Element.gen(g, u, v)) == alpha_mixed(g, (1, 1), u, v)

    def test_lpb_single_pair(self):
        for g in all22():
            if not check_little_pullback(g).holds:
                continue
            for u in g.level((1, 0)):
                for v in g.level((0, 1)):
                    assert len(g.lambda_min(u, v)) <= 1

    def test_shape_errors(self, id22):
        g = id22
        E = CuntzTuple.standard(g)
        a = Element.gen(g, e(g, 1, 1), e(g, 1, 1))
        with pytest.raises(ShapeError):
            alpha_closed(E, (1, 1), a, refine=False)
        deep = Element.gen(g, g.level((1, 1))[0], g.level((1, 1))[3])
        assert alpha_closed(E, (1, 1), deep, refine=False) == alpha_closed(E, (1, 1), deep)
        mixed = Element.gen(g, e(g, 1, 2), e(g, 2, 1))
        assert alpha_closed(E, (1, 1), mixed, refine=False) == alpha_closed(E, (1, 1), mixed)

    def test_brute_cap(self, id22):
        with pytest.raises(CapError):
            alpha_brute(CuntzTuple.standard(id22), (2, 1), identity(id22))

    def test_degree_preservation_and_positivity(self, cyc22, rng):
        E = CuntzTuple.standard(cyc22)
        for _ in range(20):
            a = random_element(cyc22, rng, 3)
            out = alpha_closed(E, (1, 1), a)
            assert set(out.degrees()) <= set(a.degrees())
            assert omega(alpha_closed(E, (1, 0), adjoint(a) * a)) >= 0
            assert omega(out) == omega(a)


class TestIntrinsicUnitary:
    def test_zero(self, id22):
        assert build_intrinsic_unitary(id22, (0, 0)).element == identity(id22)

    def test_22(self, id22):
        g = id22
        u = build_intrinsic_unitary(g, (1, -1))
        assert u.element == Element.gen(g, e(g, 1, 1), e(g, 2, 1)) + Element.gen(g, e(g, 1, 2), e(g, 2, 2))
        assert u.element.degree() == (1, -1)

    def test_48(self):
        g = KGraph.identity((4, 8))
        u = build_intrinsic_unitary(g, (3, -2))
        assert u.element.num_terms() == 64 and u.element.degree() == (3, -2)

    def test_not_in_group(self, id23):
        with pytest.raises(DegreeError):
            build_intrinsic_unitary(id23, (1, -1))

    def test_custom_pairing(self, cyc22):
        src, dst = cyc22.level((1, 0)), cyc22.level((0, 1))
        u = build_intrinsic_unitary(cyc22, (1, -1), dict(zip(src, reversed(dst))))
        assert multiply(u.element, adjoint(u.element)) == identity(cyc22)

    def test_fixed_by_modular_flow(self, cyc22):
        from kgraph import modular_action

        u = build_intrinsic_unitary(cyc22, (1, -1)).element
        [(phase, _)] = modular_action(u, "sigma_t")
        assert abs(phase.value(cyc22, 0.37j) - 1) < 1e-12

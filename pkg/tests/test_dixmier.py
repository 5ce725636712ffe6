import json
import random
from fractions import Fraction as F

import pytest

from helpers import e

from kgraph import (
    BudgetError,
    CuntzTuple,
    Element,
    KGraph,
    UnsupportedError,
    check_little_pullback,
    alpha_closed,
    dixmier_average,
    identity,
    limits,
    matrix_model,
    norm_bounds,
    omega,
    replay,
    shrink_offdiagonal,
)
from kgraph.dixmier import Reduced, apply_alpha, audit_schedule
from kgraph.io import dumps
from kgraph.sampling import random_core, random_element, random_kgraph


def direct(g, steps, a):
    """Apply alpha steps with full elements, no reduced coordinates."""
    for st in steps:
        if st["kind"] != "matrix_dixmier":
            a = alpha_closed(CuntzTuple.shifted(g, st["shift"]), st["p"], a)
    return a


class TestShrink:
    def test_zero(self, id22):
        res = shrink_offdiagonal(id22, Element(id22), F(1, 10))
        assert res.schedule.steps == [] and res.result.is_zero()

    def test_example(self, id22):
        g = id22
        a = Element.gen(g, e(g, 1, 1), e(g, 2, 1))
        res = shrink_offdiagonal(g, a, F(1, 10))
        levels = [s for s in res.schedule.steps if s["kind"] == "alpha_p_level"]
        assert len(levels) == 2 and levels[0]["p"] == [1, 1]
        assert res.bound < F(1, 10)
        assert norm_bounds(res.result)[1] < 0.1

    def test_decay(self, id22):
        g = id22
        a = Element.gen(g, e(g, 1, 1), e(g, 2, 1))
        for n in (1, 2, 3):
            res = shrink_offdiagonal(g, a, F(1, 10), levels=n)
            assert res.bound <= F(1, 4**n) * res.coefficient_sum

    def test_engine_matches_direct(self, rng):
        g = random_kgraph((2, 2), rng)
        while not check_little_pullback(g).holds:
            g = random_kgraph((2, 2), rng)
        a = Element.from_terms(g, [(g.level((2, 0))[1], g.level((1, 1))[2], 1), (g.level((2, 0))[3], g.level((1, 1))[0], F(-1, 2))])
        res = shrink_offdiagonal(g, a, F(1, 20))
        assert res.result == direct(g, res.schedule.steps, a)

    def test_requires_lpb(self, flip22):
        with pytest.raises(UnsupportedError):
            shrink_offdiagonal(flip22, Element.gen(flip22, e(flip22, 1, 1)), F(1, 10))

    def test_rejects_core(self, id22):
        from kgraph import DegreeError

        with pytest.raises(DegreeError):
            shrink_offdiagonal(id22, identity(id22), F(1, 10))


class TestApplyAlpha:
    def test_all_regimes(self, cyc22, rng):
        g = cyc22
        for R in [(0, 0), (1, 0), (1, 1), (2, 1)]:
            for p, r in [((1, 0), (0, 0)), ((1, 1), (1, 0)), ((0, 1), (2, 2)), ((1, 1), (0, 1))]:
                x = random_element(g, rng, 2)
                state = apply_alpha(Reduced(R, x), p, r)
                want = alpha_closed(CuntzTuple.shifted(g, r), p, Reduced(R, x).materialize())
                assert state.materialize() == want


class TestDixmier:
    def test_scalar(self, id22):
        lam, sched = dixmier_average(id22, identity(id22).scale(F(2, 3)), F(1, 100))
        assert lam == F(2, 3) and sched.steps == []

    def test_core_element(self, id22, rng):
        level = matrix_model(id22, 1, samples=1)
        a = random_core(id22, rng, depth=0)
        lam, sched = dixmier_average(id22, a, F(1, 100))
        assert lam == level.trace(level.to_matrix(a)) == omega(a)
        assert sched.residual_bound == 0

    def test_mixed(self, id22):
        g = id22
        a = Element.gen(g, e(g, 1, 1), e(g, 2, 1)) + Element.gen(g, e(g, 1, 1), e(g, 1, 1), F(1, 3))
        lam, sched = dixmier_average(g, a, F(1, 100))
        assert lam == F(1, 6) and sched.residual_bound < F(1, 100)

    def test_random_with_replay(self, rng):
        for _ in range(6):
            g = random_kgraph((2, 2), rng)
            if not check_little_pullback(g).holds:
                continue
            a = random_element(g, rng, 3)
            lam, sched = dixmier_average(g, a, F(1, 50))
            assert lam == omega(a)
            rep = replay(json.loads(dumps(sched.to_json())))
            assert rep.confirmed, rep.problems
            assert all(r.get("degree_zero_unitary", True) for r in audit_schedule(sched))

    def test_three_graph(self):
        rng = random.Random(4)
        g = KGraph.identity((2, 2, 2))
        a = random_element(g, rng, 2)
        lam, sched = dixmier_average(g, a, F(1, 10))
        assert lam == omega(a) and sched.residual_bound < F(1, 10)

    def test_tampering_detected(self, id22):
        g = id22
        a = Element.gen(g, e(g, 1, 1), e(g, 2, 1))
        _, sched = dixmier_average(g, a, F(1, 100))
        doc = json.loads(dumps(sched.to_json()))
        doc["residual_bound"] = "1/100000"
        assert not replay(doc).confirmed
        doc = json.loads(dumps(sched.to_json()))
        doc["steps"] = doc["steps"][:-1]
        assert not replay(doc).confirmed
        doc = json.loads(dumps(sched.to_json()))
        doc["scalar"] = "1/3"
        assert not replay(doc).confirmed

    def test_budget_partial(self, id22):
        a = random_element(id22, random.Random(1), 4, spread=2, depth=2)
        old = limits.max_terms
        try:
            limits.max_terms = 2
            with pytest.raises(BudgetError) as info:
                dixmier_average(id22, a, F(1, 100))
            assert info.value.partial is not None and info.value.partial.steps
        finally:
            limits.max_terms = old

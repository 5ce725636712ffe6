import math
import random
from fractions import Fraction as F

import pytest

from kgraph import DomainError, KGraph, classify_type, intrinsic_group, spectrum_generator
from kgraph.lattice import (
    check_cyclic_generator,
    closed_formula_agrees,
    factorize_int,
    prime_exponent_matrix,
    smith_normal_form,
)
from kgraph.averaging import in_group


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def det(M):
    M = [[F(x) for x in r] for r in M]
    n, d = len(M), F(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c]), None)
        if p is None:
            return 0
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return d


class TestNumberTheory:
    @pytest.mark.parametrize("n", [2, 12, 97, 360, 1024, 2 * 3 * 5 * 7 * 11 * 13, 7919 * 7907])
    def test_factorize(self, n):
        f = factorize_int(n)
        assert math.prod(p**e for p, e in f.items()) == n

    def test_prime_exponent_matrix(self):
        pem = prime_exponent_matrix((6, 12, 7))
        assert pem.primes == (2, 3, 7)
        assert pem.reconstruct() == (6, 12, 7)

    def test_snf(self):
        rng = random.Random(3)
        for _ in range(40):
            rows, cols = rng.randint(1, 4), rng.randint(1, 4)
            A = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
            U, S, V = smith_normal_form(A)
            assert matmul(matmul(U, A), V) == S
            assert abs(det(U)) == 1 and abs(det(V)) == 1
            diag = [S[i][i] for i in range(min(rows, cols))]
            assert all(S[i][j] == 0 for i in range(rows) for j in range(cols) if i != j)
            nz = [d for d in diag if d]
            assert all(d > 0 for d in nz)
            assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


class TestIntrinsicGroup:
    @pytest.mark.parametrize(
        "m,rank,basis",
        [((2, 3), 0, ()), ((2, 2), 1, ((1, -1),)), ((4, 8), 1, ((3, -2),)), ((6, 12), 0, ())],
    )
    def test_examples(self, m, rank, basis):
        grp = intrinsic_group(m)
        assert grp.rank == rank and grp.basis == basis

    def test_rejects_one(self):
        with pytest.raises(DomainError):
            intrinsic_group((1, 2))

    def test_invariants(self):
        rng = random.Random(9)
        for _ in range(100):
            m = tuple(rng.randint(2, 30) for _ in range(rng.randint(2, 4)))
            grp = intrinsic_group(m)
            assert 0 <= grp.rank <= len(m) - 1
            for g in grp.basis:
                assert in_group(m, g)
                assert any(x > 0 for x in g) and any(x < 0 for x in g)
            assert grp.rank == len(m) - len(grp.snf_diagonal)


class TestSpectrum:
    @pytest.mark.parametrize(
        "m,kind,base,exp",
        [((2, 4), "Cyclic", 2, 1), ((4, 16), "Cyclic", 2, 2), ((6, 12), "Dense", None, None), ((2, 2), "Cyclic", 2, 1),
         ((8, 4, 16), "Cyclic", 2, 1), ((9, 27, 3), "Cyclic", 3, 1), ((4, 8), "Cyclic", 2, 1)],
    )
    def test_examples(self, m, kind, base, exp):
        spec = spectrum_generator(m)
        assert (spec.kind, spec.base, spec.exp) == (kind, base, exp)

    def test_lambda(self):
        assert spectrum_generator((4, 16)).lam == F(1, 4)
        assert spectrum_generator((6, 12)).lam is None

    def test_bruteforce(self):
        for m in [(2, 4), (4, 16), (8, 8), (4, 8), (9, 27), (4, 8, 16)]:
            assert check_cyclic_generator(m, spectrum_generator(m), box=6)

    def test_k2_formula(self):
        for m1 in range(2, 65):
            for m2 in range(2, 65):
                spec = spectrum_generator((m1, m2))
                if spec.kind == "Cyclic":
                    assert closed_formula_agrees((m1, m2), spec), (m1, m2)

    def test_k3_disagreement(self):
        spec = spectrum_generator((4, 2, 2))
        assert (spec.base, spec.exp) == (2, 1)
        assert closed_formula_agrees((4, 2, 2), spec) is False


class TestClassify:
    def test_23(self, id23):
        rep = classify_type(id23)
        assert rep.rankG == 0 and rep.factor_certified and rep.verdict == "III_1"
        assert rep.to_json()["verdict"] == "III_1"

    def test_identity22(self, id22):
        rep = classify_type(id22)
        assert rep.lpb and rep.aperiodic == "true" and rep.rankG == 1
        assert rep.verdict == "III_lambda" and rep.lam == F(1, 2)
        assert rep.to_json()["verdict"] == {"III_lambda": {"base": 2, "exp": 1}}
        assert rep.lambda_decimal() == "0.5"

    def test_flip(self, flip22):
        rep = classify_type(flip22)
        assert rep.verdict == "NotFactor" and rep.aperiodic == "false" and not rep.factor_certified
        assert rep.witness.verified

    def test_48(self):
        rep = classify_type(KGraph.identity((4, 8)))
        assert rep.lpb and rep.verdict == "III_lambda" and rep.lam == F(1, 2)

    def test_dense(self):
        rep = classify_type(KGraph.identity((6, 12)))
        assert rep.verdict == "III_1" and rep.factor_certified

    def test_unknown(self, cyc22):
        rep = classify_type(cyc22, periodicity_bound=2)
        assert not rep.lpb and rep.aperiodic == "unknown(2)" and not rep.factor_certified
        assert rep.verdict == "III_lambda"

    def test_degenerate(self):
        rep = classify_type(KGraph.identity((1, 1)))
        assert rep.verdict == "NotFactor" and rep.rankG == 2

    def test_json_shape(self, id22):
        doc = classify_type(id22).to_json()
        for key in ["aperiodic", "lpb", "rankG", "basis", "factor_certified", "verdict", "lambda_decimal"]:
            assert key in doc

"""Intrinsic group, multiplicative spectrum and factor type."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction

from .alignment import check_little_pullback
from .averaging import in_group
from .errors import DomainError
from .graph import KGraph
from .periodicity import PeriodicityWitness, check_periodicity


def factorize_int(n: int) -> dict:
    """Prime factorization by trial division."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class PrimeExponentMatrix:
    primes: tuple
    E: tuple  # rows indexed by primes, columns by colours

    def reconstruct(self) -> tuple:
        k = len(self.E[0]) if self.E else 0
        return tuple(math.prod(p ** self.E[r][i] for r, p in enumerate(self.primes)) for i in range(k))


def prime_exponent_matrix(m) -> PrimeExponentMatrix:
    facs = [factorize_int(int(x)) for x in m]
    primes = tuple(sorted({p for f in facs for p in f}))
    E = tuple(tuple(f.get(p, 0) for f in facs) for p in primes)
    return PrimeExponentMatrix(primes, E)


def smith_normal_form(A):
    """``(U, S, V)`` with ``U A V = S`` diagonal, ``U``, ``V`` unimodular."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    S = [list(r) for r in A]
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(M, i, j):
        M[i], M[j] = M[j], M[i]

    def swap_cols(M, i, j):
        for r in M:
            r[i], r[j] = r[j], r[i]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(S[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if S[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        swap_rows(S, t, pi)
        swap_rows(U, t, pi)
        swap_cols(S, t, pj)
        swap_cols(V, t, pj)
        done = False
        while not done:
            done = True
            for i in range(t + 1, rows):
                q = S[i][t] // S[t][t]
                if q:
                    S[i] = [a - q * b for a, b in zip(S[i], S[t])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[t])]
                if S[i][t]:
                    swap_rows(S, t, i)
                    swap_rows(U, t, i)
                    done = False
            for j in range(t + 1, cols):
                q = S[t][j] // S[t][t]
                if q:
                    for r in S:
                        r[j] -= q * r[t]
                    for r in V:
                        r[j] -= q * r[t]
                if S[t][j]:
                    swap_cols(S, t, j)
                    swap_cols(V, t, j)
                    done = False
            if done:
                # divisibility of the remaining block
                bad = [(i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if S[i][j] % S[t][t]]
                if bad:
                    i, _ = bad[0]
                    S[t] = [a + b for a, b in zip(S[t], S[i])]
                    U[t] = [a + b for a, b in zip(U[t], U[i])]
                    done = False
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return U, S, V


def _hnf_rows(vectors: list) -> list:
    """Row Hermite normal form of a lattice basis (pivots positive, entries above reduced)."""
    B = [list(v) for v in vectors]
    if not B:
        return B
    cols = len(B[0])
    r = 0
    for c in range(cols):
        while True:
            nz = [i for i in range(r, len(B)) if B[i][c]]
            if not nz:
                break
            i = min(nz, key=lambda i: abs(B[i][c]))
            B[r], B[i] = B[i], B[r]
            others = [i for i in range(r + 1, len(B)) if B[i][c]]
            if not others:
                break
            for i in others:
                q = B[i][c] // B[r][c]
                B[i] = [a - q * b for a, b in zip(B[i], B[r])]
        if r < len(B) and B[r][c]:
            if B[r][c] < 0:
                B[r] = [-a for a in B[r]]
            for i in range(r):
                q = B[i][c] // B[r][c]
                B[i] = [a - q * b for a, b in zip(B[i], B[r])]
            r += 1
        if r == len(B):
            break
    return [tuple(v) for v in B[:r]]


@dataclass(frozen=True)
class IntrinsicGroup:
    m: tuple
    rank: int
    basis: tuple
    snf_diagonal: tuple


def intrinsic_group(m) -> IntrinsicGroup:
    """``G = {g : m^g = 1}`` as the integer kernel of the prime-exponent matrix."""
    m = tuple(int(x) for x in m)
    if not m or any(x < 2 for x in m):
        raise DomainError("every m_i must be at least 2")
    pem = prime_exponent_matrix(m)
    k = len(m)
    U, S, V = smith_normal_form([list(r) for r in pem.E])
    diag = tuple(S[i][i] for i in range(min(len(S), k)) if S[i][i])
    rank_e = len(diag)
    kernel = [tuple(V[r][j] for r in range(k)) for j in range(rank_e, k)]
    basis = tuple(_hnf_rows(kernel))
    for gvec in basis:
        if not in_group(m, gvec):
            raise ArithmeticError(f"kernel vector {gvec} fails m^g = 1")
    return IntrinsicGroup(m, k - rank_e, basis, diag)


@dataclass(frozen=True)
class Spectrum:
    kind: str  # "Dense" | "Cyclic"
    base: int | None = None
    exp: int | None = None

    @property
    def lam(self) -> Fraction | None:
        if self.kind != "Cyclic":
            return None
        return Fraction(1, self.base**self.exp)


def spectrum_generator(m) -> Spectrum:
    """Generator of ``{m^n}``: dense unless every ``m_i`` is a power of one base ``c``."""
    grp = intrinsic_group(m)
    k = len(grp.m)
    if grp.rank < k - 1:
        return Spectrum("Dense")
    pem = prime_exponent_matrix(grp.m)
    cols = [tuple(row[i] for row in pem.E) for i in range(k)]
    gcds = [math.gcd(*col) for col in cols]
    prim = tuple(x // gcds[0] for x in cols[0])
    c = math.prod(p**e for p, e in zip(pem.primes, prim))
    d = []
    for col in cols:
        nz = next(i for i, x in enumerate(prim) if x)
        d.append(col[nz] // prim[nz])
    return Spectrum("Cyclic", c, math.gcd(*d))


def closed_formula_agrees(m, spec: Spectrum) -> bool | None:
    """Compare with ``lambda = m_1^{-1/(b_2...b_k)}``, ``m_1^{a_j} = m_j^{b_j}`` coprime.

    Agreement means ``(c^g)^{b_2...b_k} = m_1``.
    """
    if spec.kind != "Cyclic" or len(m) < 2:
        return None
    pem = prime_exponent_matrix(m)
    k = len(m)
    cols = [tuple(row[i] for row in pem.E) for i in range(k)]
    nz = next(i for i, x in enumerate(cols[0]) if x)
    prod_b = 1
    for j in range(1, k):
        # m_1^a = m_j^b with a/b = E_j / E_1
        a, b = cols[j][nz], cols[0][nz]
        prod_b *= b // math.gcd(a, b)
    return (spec.base**spec.exp) ** prod_b == m[0]


def spectrum_bruteforce(m, box: int = 6) -> set:
    """All positive values ``m^n`` with ``|n|_inf <= box``."""
    vals = {Fraction(1)}
    for mi in m:
        powers = [Fraction(mi) ** e for e in range(-box, box + 1)]
        vals = {v * p for v in vals for p in powers}
    return vals


def check_cyclic_generator(m, spec: Spectrum, box: int = 6) -> bool:
    """Every enumerated ``m^n`` is a power of ``c^g`` and ``c^{+-g}`` occur."""
    gen = Fraction(spec.base**spec.exp)
    vals = spectrum_bruteforce(m, box)
    if gen not in vals or 1 / gen not in vals:
        return False
    for v in vals:
        num, den = v.numerator, v.denominator
        x = num if num > 1 else den
        if num > 1 and den > 1:
            return False
        while x > 1 and x % gen.numerator == 0:
            x //= gen.numerator
        if x != 1:
            return False
    return True


@dataclass
class TypeReport:
    aperiodic: str  # "true" | "false" | "unknown(B)"
    lpb: bool
    rankG: int
    basis: tuple
    factor_certified: bool
    verdict: str  # "NotFactor" | "III_1" | "III_lambda"
    base: int | None = None
    exp: int | None = None
    witness: PeriodicityWitness | None = None
    closed_formula_agrees: bool | None = None
    extra: dict = field(default_factory=dict)

    @property
    def lam(self) -> Fraction | None:
        if self.verdict != "III_lambda":
            return None
        return Fraction(1, self.base**self.exp)

    def lambda_decimal(self) -> str | None:
        lam = self.lam
        if lam is None:
            return None
        with localcontext() as ctx:
            ctx.prec = 20
            return str(Decimal(lam.numerator) / Decimal(lam.denominator))

    def to_json(self) -> dict:
        if self.verdict == "III_lambda":
            verdict = {"III_lambda": {"base": self.base, "exp": self.exp}}
        else:
            verdict = self.verdict
        out = {
            "aperiodic": self.aperiodic,
            "lpb": self.lpb,
            "rankG": self.rankG,
            "basis": [list(b) for b in self.basis],
            "factor_certified": self.factor_certified,
            "verdict": verdict,
            "lambda": None if self.lam is None else f"{self.lam.numerator}/{self.lam.denominator}",
            "lambda_decimal": self.lambda_decimal(),
            "closed_formula_agrees": self.closed_formula_agrees,
        }
        if self.witness is not None:
            out["witness"] = {"g": list(self.witness.g), "verified": self.witness.verified}
        return out


def _degenerate_report(g: KGraph, periodicity_bound: int) -> TypeReport:
    # some m_i = 1: never aperiodic, so only a witness can settle the verdict
    per = check_periodicity(g, periodicity_bound)
    if not per.periodic:
        raise DomainError(f"m={g.m} has a colour with one edge and no periodicity witness within bound {periodicity_bound}")
    pem = prime_exponent_matrix(g.m)
    k = g.k
    if pem.primes:
        _, S, V = smith_normal_form([list(r) for r in pem.E])
        rank_e = sum(1 for i in range(min(len(S), k)) if S[i][i])
        basis = tuple(_hnf_rows([tuple(V[r][j] for r in range(k)) for j in range(rank_e, k)]))
    else:
        basis = tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
    return TypeReport(
        aperiodic="false",
        lpb=check_little_pullback(g).holds,
        rankG=len(basis),
        basis=basis,
        factor_certified=False,
        verdict="NotFactor",
        witness=per.witness,
        extra={"periodicity_bound": periodicity_bound},
    )


def classify_type(g: KGraph, periodicity_bound: int = 4) -> TypeReport:
    if any(x < 2 for x in g.m):
        return _degenerate_report(g, periodicity_bound)
    grp = intrinsic_group(g.m)
    lpb = check_little_pullback(g).holds
    per = check_periodicity(g, periodicity_bound)
    if per.periodic:
        aperiodic = "false"
    elif grp.rank == 0 or lpb:
        # no candidate degree exists, or LPB forces aperiodicity
        aperiodic = "true"
    else:
        aperiodic = f"unknown({periodicity_bound})"
    spec = spectrum_generator(g.m)
    report = TypeReport(
        aperiodic=aperiodic,
        lpb=lpb,
        rankG=grp.rank,
        basis=grp.basis,
        factor_certified=(not per.periodic) and (grp.rank == 0 or (lpb and aperiodic == "true")),
        verdict="III_1",
        witness=per.witness,
        closed_formula_agrees=closed_formula_agrees(g.m, spec),
        extra={"periodicity_bound": periodicity_bound},
    )
    if per.periodic:
        report.verdict = "NotFactor"
    elif spec.kind == "Cyclic":
        report.verdict = "III_lambda"
        report.base, report.exp = spec.base, spec.exp
    return report


__all__ = [
    "IntrinsicGroup",
    "PrimeExponentMatrix",
    "Spectrum",
    "TypeReport",
    "check_cyclic_generator",
    "classify_type",
    "closed_formula_agrees",
    "factorize_int",
    "intrinsic_group",
    "prime_exponent_matrix",
    "smith_normal_form",
    "spectrum_bruteforce",
    "spectrum_generator",
]

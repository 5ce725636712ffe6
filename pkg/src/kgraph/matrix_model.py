"""Finite matrix levels of the core: ``F_n`` spanned by ``s_u s_v*`` with ``d(u) = d(v) = (n,...,n)``."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Element, multiply, omega
from .errors import CapError, DegreeError
from .graph import KGraph, dle

DEFAULT_DIM_CAP = 4096


def _matmul(a, b):
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols] for row in a]


def _trace(a) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0)) / len(a)


@dataclass
class CoreMatrixLevel:
    graph: KGraph
    n: int
    basis: list
    index: dict = field(repr=False)
    report: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def degree(self):
        return (self.n,) * self.graph.k

    def to_matrix(self, a: Element):
        """Exact matrix of a core element whose refinement depth is at most this level."""
        g = self.graph
        mat = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        if a.is_zero():
            return mat
        if set(a.components) != {g.zero()}:
            raise DegreeError("element is not in the core")
        comp = a.components[g.zero()]
        if not dle(comp.Q, self.degree):
            raise DegreeError(f"element lives deeper than level {self.n}")
        for (u, v), c in a.refined(g.zero(), self.degree).items():
            mat[self.index[u]][self.index[v]] += c
        return mat

    def from_matrix(self, mat) -> Element:
        raw = [
            (self.basis[i], self.basis[j], c)
            for i, row in enumerate(mat)
            for j, c in enumerate(row)
            if c != 0
        ]
        return Element.from_terms(self.graph, raw)

    def unit(self, i: int, j: int) -> Element:
        return Element.gen(self.graph, self.basis[i], self.basis[j])

    def trace(self, mat) -> Fraction:
        """Normalized trace."""
        return _trace(mat)


def matrix_model(
    g: KGraph, n: int, *, samples: int = 20, seed: int = 0, dim_cap: int = DEFAULT_DIM_CAP
) -> CoreMatrixLevel:
    """Build level ``n`` and check it against the symbolic calculus.

    The report records whether matrix products of sampled unit pairs match
    symbolic products (all pairs when ``dim**4`` is small), whether the
    normalized trace matches ``omega``, and whether the unital embedding
    into level ``n + 1`` preserves products and traces on random elements.
    """
    if n < 0:
        raise DegreeError("level must be non-negative")
    deg = (n,) * g.k
    dim = g.size(deg)
    if dim > dim_cap or g.size((n + 1,) * g.k) > dim_cap:
        raise CapError(f"matrix level {n} (or its successor) exceeds dimension cap {dim_cap}")
    basis = g.level(deg)
    level = CoreMatrixLevel(g, n, basis, {u: i for i, u in enumerate(basis)})
    rng = random.Random(seed)

    pairs = [(i, j) for i in range(dim) for j in range(dim)]
    if len(pairs) ** 2 <= 4096:
        checks = [(p, q) for p in pairs for q in pairs]
    else:
        checks = [(rng.choice(pairs), rng.choice(pairs)) for _ in range(samples)]
    products_ok = True
    for (i, j), (a, b) in checks:
        sym = multiply(level.unit(i, j), level.unit(a, b))
        ma, mb = level.to_matrix(level.unit(i, j)), level.to_matrix(level.unit(a, b))
        if level.to_matrix(sym) != _matmul(ma, mb):
            products_ok = False
            break

    trace_ok = all(
        level.trace(level.to_matrix(level.unit(i, i))) == omega(level.unit(i, i)) for i in range(dim)
    )

    nxt = CoreMatrixLevel(g, n + 1, g.level((n + 1,) * g.k), {})
    nxt.index = {u: i for i, u in enumerate(nxt.basis)}
    embed_ok = True
    for _ in range(samples):
        x = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(dim)] for _ in range(dim)]
        y = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(dim)] for _ in range(dim)]
        ex, ey = nxt.to_matrix(level.from_matrix(x)), nxt.to_matrix(level.from_matrix(y))
        if nxt.trace(ex) != level.trace(x) or _matmul(ex, ey) != nxt.to_matrix(level.from_matrix(_matmul(x, y))):
            embed_ok = False
            break

    level.report = {
        "dim": dim,
        "product_checks": len(checks),
        "products_ok": products_ok,
        "trace_ok": trace_ok,
        "embedding_ok": embed_ok,
    }
    return level

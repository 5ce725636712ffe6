"""Operator-norm bounds for elements of the algebraic part.

Inside one degree component the generators ``s_u s_v*`` (fixed bidegree) act
like matrix units between the orthogonal ranges of the ``s_u`` and of the
``s_v``, so the component's norm is the top singular value of its coefficient
matrix.  The matrix splits into the connected blocks of its bipartite support.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .algebra import Component, Element


def _blocks(terms: dict):
    """Connected components of the bipartite support graph (rows u, cols v)."""
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in terms:
        for node in (("r", u), ("c", v)):
            parent.setdefault(node, node)
        a, b = find(("r", u)), find(("c", v))
        if a != b:
            parent[a] = b
    groups = {}
    for u, v in terms:
        groups.setdefault(find(("r", u)), []).append((u, v))
    out = []
    for key in sorted(groups, key=str):
        pairs = groups[key]
        rows = sorted({u for u, _ in pairs})
        cols = sorted({v for _, v in pairs})
        out.append((rows, cols, {p: terms[p] for p in pairs}))
    return out


def _float_norm(rows, cols, terms) -> float:
    if len(terms) == 1:
        return float(abs(next(iter(terms.values()))))
    ri = {u: i for i, u in enumerate(rows)}
    ci = {v: i for i, v in enumerate(cols)}
    mat = np.zeros((len(rows), len(cols)))
    for (u, v), c in terms.items():
        mat[ri[u], ci[v]] = float(c)
    return float(np.linalg.norm(mat, 2))


def component_norm(comp: Component) -> float:
    return max((_float_norm(*b) for b in _blocks(comp.terms)), default=0.0)


def norm_bounds(a: Element) -> tuple:
    """``(lower, upper)``: max and sum of the component norms (floats)."""
    norms = [component_norm(c) for c in a.components.values()]
    if not norms:
        return (0.0, 0.0)
    return (max(norms), math.fsum(norms))


def is_psd(mat) -> bool:
    """Exact positive-semidefiniteness of a symmetric rational matrix (LDL^T)."""
    a = [list(row) for row in mat]
    n = len(a)
    for i in range(n):
        piv = a[i][i]
        if piv < 0:
            return False
        if piv == 0:
            if any(a[i][j] != 0 for j in range(i + 1, n)):
                return False
            continue
        for r in range(i + 1, n):
            f = a[r][i] / piv
            if f == 0:
                continue
            for c in range(i + 1, n):
                a[r][c] -= f * a[i][c]
    return True


def _gram(rows, cols, terms):
    ci = {v: i for i, v in enumerate(cols)}
    by_row = {}
    for (u, v), c in terms.items():
        by_row.setdefault(u, []).append((ci[v], c))
    n = len(cols)
    gram = [[Fraction(0)] * n for _ in range(n)]
    for entries in by_row.values():
        for i, x in entries:
            for j, y in entries:
                gram[i][j] += x * y
    return gram


def block_norm_le(rows, cols, terms, r: Fraction) -> bool:
    """Exactly decide ``||M|| <= r`` via ``r^2 I - M^T M >= 0``."""
    if r < 0:
        return False
    gram = _gram(rows, cols, terms)
    r2 = r * r
    for i in range(len(cols)):
        for j in range(len(cols)):
            gram[i][j] = (r2 if i == j else 0) - gram[i][j]
    return is_psd(gram)


# rational grid used when the float norm is not recognised as an exact value
_GRID = 1 << 20


def certified_block_norm(rows, cols, terms) -> Fraction:
    """A rational ``r`` with ``||M|| <= r``, proved exactly; tight when the norm is rational."""
    if len(terms) == 1:
        return abs(next(iter(terms.values())))
    sigma = _float_norm(rows, cols, terms)
    guess = Fraction(sigma).limit_denominator(10**6)
    if block_norm_le(rows, cols, terms, guess):
        # exact when guess also fails to bound anything smaller
        return guess
    step = Fraction(1, _GRID)
    r = Fraction(math.ceil(sigma * (1 + 1e-9) * _GRID) + 1, _GRID)
    while not block_norm_le(rows, cols, terms, r):
        r += step
        step *= 2
    return r


def certified_component_norm(comp: Component) -> Fraction:
    return max((certified_block_norm(*b) for b in _blocks(comp.terms)), default=Fraction(0))


def certified_upper(a: Element) -> Fraction:
    """Exactly certified rational upper bound: sum of certified component norms."""
    return sum((certified_component_norm(c) for c in a.components.values()), Fraction(0))


def norm_le(a: Element, r) -> bool:
    """Exact test of ``||a|| <= r`` for homogeneous ``a``; sufficient test (triangle) otherwise."""
    r = Fraction(r)
    comps = list(a.components.values())
    if len(comps) <= 1:
        return all(block_norm_le(*b, r) for c in comps for b in _blocks(c.terms))
    return certified_upper(a) <= r

"""Bounded search for periodicity witnesses.

A witness is ``g`` in the intrinsic group with a bijection
``gamma: Lambda^{g+} -> Lambda^{g-}`` making ``W = sum_u s_u s_gamma(u)*``
central.  Comparing ``W* s_e W`` with ``s_e`` at a fixed bidegree shows that
this happens exactly when, for every edge ``e`` and every ``u'``,

    gamma(u) x = e gamma(u')   where   e u' = u x,  d(u) = g+,

which the backtracker uses for propagation in both directions.  Any
bijection it returns is then re-verified by exact multiplication.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import Element, multiply
from .averaging import in_group
from .errors import CapError, DomainError
from .graph import KGraph, negative_part, positive_part

LEVEL_CAP = 1 << 14


@dataclass(frozen=True)
class PeriodicityWitness:
    g: tuple
    gamma: dict
    verified: bool


@dataclass(frozen=True)
class PeriodicityResult:
    periodic: bool
    bound: int
    witness: PeriodicityWitness | None = None
    candidates_checked: int = 0

    @property
    def status(self) -> str:
        return "periodic" if self.periodic else f"unknown({self.bound})"


def candidate_degrees(m, bound: int) -> list:
    """Nonzero ``g`` with ``m^g = 1``, ``|g|_inf <= bound``, first nonzero entry positive."""
    out = []
    rng = range(-bound, bound + 1)
    for gvec in itertools.product(rng, repeat=len(m)):
        nz = [x for x in gvec if x]
        if not nz or nz[0] < 0:
            continue
        if in_group(m, gvec):
            out.append(gvec)
    out.sort(key=lambda v: (max(abs(x) for x in v), sum(abs(x) for x in v), v))
    return out


def _edge_word(g: KGraph, colour: int, index: int):
    return tuple((index,) if c == colour else () for c in range(g.k))


def _search(g: KGraph, a, b):
    """Backtracking search for ``gamma``; returns a dict or ``None``."""
    src, dst = g.level(a), g.level(b)
    if len(src) != len(dst):
        return None
    sidx = {u: i for i, u in enumerate(src)}
    didx = {v: i for i, v in enumerate(dst)}
    edges = [_edge_word(g, c, s) for c, s in g.edges()]
    # constraints (u, x, e, u'): gamma(u) x == e gamma(u')
    by_var = [[] for _ in src]
    cons = []
    for e in edges:
        de = g.degree(e)
        for j, u2 in enumerate(src):
            u, x = g.factorize(g.concat(e, u2), a)
            c = (sidx[u], x, e, de, j)
            cons.append(c)
            by_var[sidx[u]].append(c)
            if sidx[u] != j:
                by_var[j].append(c)

    n = len(src)
    assign = [None] * n
    used = [False] * n

    def setv(i, val, trail):
        if assign[i] is not None:
            return assign[i] == val
        if used[val]:
            return False
        assign[i] = val
        used[val] = True
        trail.append(i)
        return True

    def propagate(start, trail):
        queue = [start]
        while queue:
            i = queue.pop()
            for ui, x, e, de, j in by_var[i]:
                gu, gj = assign[ui], assign[j]
                if gj is not None:
                    head, tail = g.factorize(g.concat(e, dst[gj]), b)
                    if tail != x:
                        return False
                    want = didx[head]
                    if gu is None:
                        if not setv(ui, want, trail):
                            return False
                        queue.append(ui)
                    elif gu != want:
                        return False
                elif gu is not None:
                    head, rest = g.factorize(g.concat(dst[gu], x), de)
                    if head != e:
                        return False
                    if not setv(j, didx[rest], trail):
                        return False
                    queue.append(j)
        return True

    def undo(trail):
        for i in trail:
            used[assign[i]] = False
            assign[i] = None

    def solve():
        try:
            i = assign.index(None)
        except ValueError:
            return True
        for val in range(n):
            if used[val]:
                continue
            trail = []
            setv(i, val, trail)
            if propagate(i, trail) and solve():
                return True
            undo(trail)
        return False

    if solve():
        return {src[i]: dst[assign[i]] for i in range(n)}
    return None


def verify_witness(g: KGraph, gamma: dict) -> bool:
    """Exact check that ``W`` commutes with every generator ``s_e``."""
    w = Element.from_terms(g, [(u, v, 1) for u, v in gamma.items()])
    for c, s in g.edges():
        se = Element.gen(g, _edge_word(g, c, s))
        if multiply(se, w) != multiply(w, se):
            return False
    return True


def check_periodicity(g: KGraph, height_bound: int = 4) -> PeriodicityResult:
    if height_bound < 1:
        raise DomainError("height bound must be at least 1")
    checked = 0
    for gvec in candidate_degrees(g.m, height_bound):
        a, b = positive_part(gvec), negative_part(gvec)
        if g.size(a) > LEVEL_CAP:
            raise CapError(f"candidate {gvec} needs |Lambda^g+| = {g.size(a)} > {LEVEL_CAP}")
        checked += 1
        gamma = _search(g, a, b)
        if gamma is not None and verify_witness(g, gamma):
            return PeriodicityResult(True, height_bound, PeriodicityWitness(gvec, gamma, True), checked)
    return PeriodicityResult(False, height_bound, None, checked)


__all__ = [
    "PeriodicityResult",
    "PeriodicityWitness",
    "candidate_degrees",
    "check_periodicity",
    "verify_witness",
]

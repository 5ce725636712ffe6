"""Single-vertex k-graphs: theta families, validation and word combinatorics.

Conventions used throughout the Python API:

* colours and edge indices are 0-based (the JSON formats are 1-based);
* a theta entry for colours ``i < j`` is a flat permutation ``perm`` of
  ``range(m[i] * m[j])``; ``perm[s * m[j] + t] = s2 * m[j] + t2`` encodes the
  commutation relation ``e^i_s e^j_t = e^j_t2 e^i_s2``;
* a normal word is a tuple of ``k`` blocks, block ``i`` holding the indices of
  the colour-``i`` edges, so colours appear in ascending order.
"""

from __future__ import annotations

import itertools
import math
import random as _random
from typing import Iterable, Sequence

from .errors import CubicViolationError, DegreeError, StructureError

Word = tuple  # tuple[tuple[int, ...], ...]
Degree = tuple  # tuple[int, ...]
Edge = tuple  # (colour, index)

# minimal-extension tables are built by enumerating a whole level; above
# this size lambda_min falls back to per-pair enumeration
MIN_TABLE_CAP = 1 << 16


def join(a: Degree, b: Degree) -> Degree:
    return tuple(max(x, y) for x, y in zip(a, b))


def meet(a: Degree, b: Degree) -> Degree:
    return tuple(min(x, y) for x, y in zip(a, b))


def dadd(a: Degree, b: Degree) -> Degree:
    return tuple(x + y for x, y in zip(a, b))


def dsub(a: Degree, b: Degree) -> Degree:
    return tuple(x - y for x, y in zip(a, b))


def dle(a: Degree, b: Degree) -> bool:
    return all(x <= y for x, y in zip(a, b))


def positive_part(n: Degree) -> Degree:
    return tuple(max(x, 0) for x in n)


def negative_part(n: Degree) -> Degree:
    return tuple(max(-x, 0) for x in n)


def is_zero(n: Degree) -> bool:
    return not any(n)


class KGraph:
    """A single-vertex k-graph given by edge counts ``m`` and a theta family.

    Construction checks that every theta entry is a permutation.  The cubic
    condition is only checked by :func:`validate_kgraph`; ``validated`` records
    whether it was.
    """

    def __init__(self, m: Sequence[int], theta: dict | None = None, *, validated: bool = False):
        self.m = tuple(int(x) for x in m)
        self.k = len(self.m)
        if self.k < 1:
            raise StructureError("k must be at least 1")
        if any(x < 1 for x in self.m):
            raise StructureError(f"edge counts must be >= 1, got {self.m}")
        theta = dict(theta or {})
        perms = {}
        for i in range(self.k):
            for j in range(i + 1, self.k):
                if (i, j) not in theta:
                    raise StructureError(f"theta has no entry for colours ({i + 1},{j + 1})")
                perm = tuple(int(x) for x in theta.pop((i, j)))
                size = self.m[i] * self.m[j]
                if sorted(perm) != list(range(size)):
                    raise StructureError(
                        f"theta entry ({i + 1},{j + 1}) is not a permutation of {size} points"
                    )
                perms[(i, j)] = perm
        if theta:
            raise StructureError(f"unexpected theta keys {sorted(theta)}")
        self.theta = perms
        self.validated = validated
        # forward: (s, t) -> (s', t') ; backward is the inverse
        self._fwd = {}
        self._bwd = {}
        for (i, j), perm in perms.items():
            mj = self.m[j]
            fwd = [divmod(x, mj) for x in perm]
            bwd = [None] * len(perm)
            for src, dst in enumerate(perm):
                bwd[dst] = divmod(src, mj)
            self._fwd[(i, j)] = fwd
            self._bwd[(i, j)] = bwd
        self._concat_cache = {}
        self._factor_cache = {}
        self._level_cache = {}
        self._min_cache = {}
        self._table_cache = {}

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def identity(cls, m: Sequence[int]) -> "KGraph":
        m = tuple(m)
        theta = {
            (i, j): list(range(m[i] * m[j]))
            for i in range(len(m))
            for j in range(i + 1, len(m))
        }
        return validate_kgraph(m, theta)

    @classmethod
    def from_maps(cls, m: Sequence[int], maps: dict, *, check: bool = True) -> "KGraph":
        """Build from ``{(i, j): {(s, t): (s2, t2)}}`` (0-based); missing pairs are identity."""
        m = tuple(m)
        theta = {}
        for i in range(len(m)):
            for j in range(i + 1, len(m)):
                perm = list(range(m[i] * m[j]))
                for (s, t), (s2, t2) in maps.get((i, j), {}).items():
                    perm[s * m[j] + t] = s2 * m[j] + t2
                theta[(i, j)] = perm
        return validate_kgraph(m, theta) if check else cls(m, theta)

    # ------------------------------------------------------------------

    def key(self):
        return (self.m, tuple(self.theta[p] for p in sorted(self.theta)))

    def __eq__(self, other):
        return isinstance(other, KGraph) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"KGraph(m={self.m}, theta={ {k: list(v) for k, v in self.theta.items()} })"

    def size(self, p: Degree) -> int:
        """|Lambda^p| = m^p."""
        return math.prod(mi ** pi for mi, pi in zip(self.m, p))

    def zero(self) -> Degree:
        return (0,) * self.k

    def unit(self, i: int) -> Degree:
        return tuple(1 if c == i else 0 for c in range(self.k))

    def edges(self, colour: int | None = None) -> list:
        cols = range(self.k) if colour is None else [colour]
        return [(c, s) for c in cols for s in range(self.m[c])]

    # ------------------------------------------------------------------
    # elementary swaps

    def swap_down(self, lo: Edge, hi: Edge) -> tuple:
        """Rewrite ``e^i_s e^j_t`` (i < j) as ``e^j_t' e^i_s'``."""
        i, s = lo
        j, t = hi
        s2, t2 = self._fwd[(i, j)][s * self.m[j] + t]
        return (j, t2), (i, s2)

    def swap_up(self, hi: Edge, lo: Edge) -> tuple:
        """Rewrite ``e^j_t' e^i_s'`` (i < j) as ``e^i_s e^j_t``."""
        j, t2 = hi
        i, s2 = lo
        s, t = self._bwd[(i, j)][s2 * self.m[j] + t2]
        return (i, s), (j, t)

    def _swap(self, x: Edge, y: Edge) -> tuple:
        if x[0] < y[0]:
            return self.swap_down(x, y)
        return self.swap_up(x, y)

    def reshape(self, seq: Sequence[Edge], colours: Sequence[int]) -> list:
        """Rewrite an edge sequence into the one whose colour pattern is ``colours``.

        By the factorization property the result is unique when the graph is
        valid.  Same-colour edges never pass each other, so the edge needed at
        each position is the first later edge of that colour.
        """
        seq = list(seq)
        if len(colours) != len(seq):
            raise DegreeError("colour pattern length differs from word length")
        for pos, c in enumerate(colours):
            j = pos
            while j < len(seq) and seq[j][0] != c:
                j += 1
            if j == len(seq):
                raise DegreeError("colour pattern does not match the word's degree")
            for t in range(j - 1, pos - 1, -1):
                seq[t], seq[t + 1] = self._swap(seq[t], seq[t + 1])
        return seq

    # ------------------------------------------------------------------
    # words

    def to_edges(self, w: Word) -> list:
        return [(c, s) for c, block in enumerate(w) for s in block]

    def from_sorted_edges(self, seq: Iterable[Edge]) -> Word:
        blocks = [[] for _ in range(self.k)]
        last = -1
        for c, s in seq:
            if c < last:
                raise DegreeError("edge sequence is not colour-sorted")
            last = c
            blocks[c].append(s)
        return tuple(tuple(b) for b in blocks)

    def empty(self) -> Word:
        return ((),) * self.k

    def degree(self, w: Word) -> Degree:
        return tuple(len(b) for b in w)

    def check_edges(self, seq: Iterable[Edge]) -> list:
        out = []
        for c, s in seq:
            if not (0 <= c < self.k and 0 <= s < self.m[c]):
                raise DegreeError(f"edge ({c + 1},{s + 1}) out of range for m={self.m}")
            out.append((int(c), int(s)))
        return out

    def normalize(self, seq: Sequence[Edge], rng: _random.Random | None = None) -> Word:
        """Colour-ordered normal form of an arbitrary edge sequence.

        With ``rng`` the descending adjacent pair to rewrite is chosen at
        random each time; on a valid graph the result does not depend on it.
        """
        seq = self.check_edges(seq)
        if rng is None:
            return self.from_sorted_edges(self.reshape(seq, sorted(c for c, _ in seq)))
        while True:
            bad = [t for t in range(len(seq) - 1) if seq[t][0] > seq[t + 1][0]]
            if not bad:
                return self.from_sorted_edges(seq)
            t = rng.choice(bad)
            seq[t], seq[t + 1] = self.swap_up(seq[t], seq[t + 1])

    def concat(self, a: Word, b: Word) -> Word:
        """Normal form of the product ``ab`` of two normal words."""
        if not any(b):
            return a
        if not any(a):
            return b
        key = (a, b)
        hit = self._concat_cache.get(key)
        if hit is None:
            seq = self.to_edges(a) + self.to_edges(b)
            hit = self.from_sorted_edges(self.reshape(seq, sorted(c for c, _ in seq)))
            self._concat_cache[key] = hit
        return hit

    def factorize(self, w: Word, p: Degree) -> tuple:
        """Unique ``(mu, nu)`` with ``w = mu nu`` and ``d(mu) = p``."""
        d = self.degree(w)
        if not dle(p, d) or any(x < 0 for x in p):
            raise DegreeError(f"cannot factor a word of degree {d} at {p}")
        if p == d:
            return w, self.empty()
        if not any(p):
            return self.empty(), w
        key = (w, p)
        hit = self._factor_cache.get(key)
        if hit is None:
            rest = dsub(d, p)
            pattern = [c for c in range(self.k) for _ in range(p[c])]
            pattern += [c for c in range(self.k) for _ in range(rest[c])]
            seq = self.reshape(self.to_edges(w), pattern)
            n = sum(p)
            hit = (self.from_sorted_edges(seq[:n]), self.from_sorted_edges(seq[n:]))
            self._factor_cache[key] = hit
        return hit

    def suffix_factor(self, w: Word, q: Degree) -> tuple:
        """``(mu, nu)`` with ``w = mu nu`` and ``d(nu) = q``."""
        return self.factorize(w, dsub(self.degree(w), q))

    def level(self, p: Degree) -> list:
        """All words of degree ``p`` in lexicographic block order."""
        p = tuple(p)
        hit = self._level_cache.get(p)
        if hit is None:
            if any(x < 0 for x in p):
                raise DegreeError(f"negative degree {p}")
            blocks = [list(itertools.product(range(mi), repeat=pi)) for mi, pi in zip(self.m, p)]
            hit = [tuple(ws) for ws in itertools.product(*blocks)]
            self._level_cache[p] = hit
        return hit

    # ------------------------------------------------------------------
    # minimal common extensions

    def lambda_min(self, mu: Word, nu: Word) -> list:
        """All ``(xi, eta)`` with ``mu xi = nu eta`` at degree ``d(mu) v d(nu)``.

        Enumerates ``xi`` over the complementary level and tests whether ``nu``
        is the prefix of ``mu xi``; pairs come out sorted.
        """
        key = (mu, nu)
        hit = self._min_cache.get(key)
        if hit is not None:
            return hit
        a, b = self.degree(mu), self.degree(nu)
        top = join(a, b)
        out = []
        for xi in self.level(dsub(top, a)):
            w = self.concat(mu, xi)
            head, eta = self.factorize(w, b)
            if head == nu:
                out.append((xi, eta))
        self._min_cache[key] = out
        return out

    def min_table(self, a: Degree, b: Degree) -> dict | None:
        """``{mu: [(nu, xi, eta), ...]}`` for all ``d(mu)=a``, ``d(nu)=b``.

        Built by factoring each word of degree ``a v b`` at ``a`` and at ``b``.
        Returns ``None`` if the level is larger than ``MIN_TABLE_CAP``.
        """
        key = (a, b)
        if key in self._table_cache:
            return self._table_cache[key]
        top = join(a, b)
        if self.size(top) > MIN_TABLE_CAP:
            self._table_cache[key] = None
            return None
        table = {}
        for w in self.level(top):
            mu, xi = self.factorize(w, a)
            nu, eta = self.factorize(w, b)
            table.setdefault(mu, []).append((nu, xi, eta))
        self._table_cache[key] = table
        return table


# ----------------------------------------------------------------------
# validation


def _pair_fwd(g: KGraph, i: int, j: int, s: int, t: int) -> tuple:
    return g._fwd[(i, j)][s * g.m[j] + t]


def cubic_violations(g: KGraph) -> list:
    """Every ``(i, j, l, t1, t2, t3)`` on which the two reorderings disagree.

    Starting from ``e^i_t1 e^j_t2 e^l_t3`` (i < j < l), one path swaps
    (j,l), (i,l), (i,j) and the other (i,j), (i,l), (j,l); both end in colour
    order l, j, i and must give the same edges.
    """
    bad = []
    for i, j, l in itertools.combinations(range(g.k), 3):
        for t1, t2, t3 in itertools.product(range(g.m[i]), range(g.m[j]), range(g.m[l])):
            # path A
            a2, a3 = _pair_fwd(g, j, l, t2, t3)
            a1, a3 = _pair_fwd(g, i, l, t1, a3)
            a1, a2 = _pair_fwd(g, i, j, a1, a2)
            # path B
            b1, b2 = _pair_fwd(g, i, j, t1, t2)
            b1, b3 = _pair_fwd(g, i, l, b1, t3)
            b2, b3 = _pair_fwd(g, j, l, b2, b3)
            if (a1, a2, a3) != (b1, b2, b3):
                bad.append((i, j, l, t1, t2, t3))
    return bad


def validate_kgraph(m: Sequence[int], theta: dict) -> KGraph:
    """Return a validated graph or raise.

    Raises :class:`StructureError` for malformed permutations and
    :class:`CubicViolationError` (carrying every violation) for cubic failures.
    """
    g = KGraph(m, theta)
    bad = cubic_violations(g)
    if bad:
        raise CubicViolationError(bad)
    g.validated = True
    return g

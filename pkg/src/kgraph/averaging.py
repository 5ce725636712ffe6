"""Cuntz-type tuples, the endomorphisms gamma_p and the averaging operators alpha_p.

``alpha_p^E`` is the uniform average of ``U A U*`` over the signed permutation
unitaries ``U_(f, sigma) = sum_w (-1)^f(w) E_sigma(w) E_w*``, ``w`` in
``Lambda^p``.  Averaging over the signs kills ``E_w X E_w'*`` for ``w != w'``
and averaging over the permutations then spreads the diagonal, which gives

    alpha_p^E(X) = m^{-p} gamma_p^E( sum_{mu in Lambda^p} E_mu* X E_mu ).

For the tuples ``E = gamma_r(s)`` used in practice this is evaluated term by
term (:func:`alpha_closed`); :func:`alpha_brute` is the literal average and
serves as the oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Element, adjoint, identity, mpow, multiply, refine_terms
from .errors import CapError, DegreeError, GraphMismatchError, ShapeError, StructureError
from .graph import KGraph, Word, dadd, dle, dsub, is_zero, join, meet, negative_part, positive_part

BRUTE_CAP = 1000


def _edge_word(g: KGraph, colour: int, index: int) -> Word:
    return tuple((index,) if c == colour else () for c in range(g.k))


class CuntzTuple:
    """Images ``E^i_s`` of the generators.

    ``shift`` is set for the tuples ``gamma_r(s)`` (``r = shift``), which lets
    the closed forms bypass generic multiplication.
    """

    def __init__(self, graph: KGraph, rep: dict, shift=None):
        self.graph = graph
        self.rep = dict(rep)
        self.shift = None if shift is None else tuple(shift)
        self._words = {}

    @classmethod
    def standard(cls, g: KGraph) -> "CuntzTuple":
        return cls.shifted(g, g.zero())

    @classmethod
    def shifted(cls, g: KGraph, r) -> "CuntzTuple":
        """``gamma_r(s)``: ``E_e = sum_{z in Lambda^r} s_{ze} s_z*``."""
        r = tuple(r)
        rep = {}
        for colour, index in g.edges():
            e = _edge_word(g, colour, index)
            rep[(colour, index)] = Element.from_terms(
                g, [(g.concat(z, e), z, 1) for z in g.level(r)]
            )
        return cls(g, rep, shift=r)

    def word(self, w: Word) -> Element:
        """``E_w`` for a normal word ``w``."""
        hit = self._words.get(w)
        if hit is None:
            g = self.graph
            if self.shift is not None:
                hit = Element.from_terms(
                    g, [(g.concat(z, w), z, 1) for z in g.level(self.shift)]
                )
            else:
                hit = identity(g)
                for edge in g.to_edges(w):
                    hit = multiply(hit, self.rep[edge])
            self._words[w] = hit
        return hit

    def verify(self) -> bool:
        """Exact check of orthogonality, the defect-free sums and the commutation relations."""
        g = self.graph
        one = identity(g)
        for colour in range(g.k):
            total = Element(g)
            for s in range(g.m[colour]):
                es = self.rep[(colour, s)]
                total = total + multiply(es, adjoint(es))
                for t in range(g.m[colour]):
                    prod = multiply(adjoint(es), self.rep[(colour, t)])
                    if prod != (one if s == t else Element(g)):
                        return False
            if total != one:
                return False
        for (i, j) in g.theta:
            for s in range(g.m[i]):
                for t in range(g.m[j]):
                    (_, t2), (_, s2) = g.swap_down((i, s), (j, t))
                    lhs = multiply(self.rep[(i, s)], self.rep[(j, t)])
                    rhs = multiply(self.rep[(j, t2)], self.rep[(i, s2)])
                    if lhs != rhs:
                        return False
        return True


def _same_graph(E: CuntzTuple, a: Element):
    if E.graph != a.graph:
        raise GraphMismatchError("tuple and element live over different graphs")


def gamma_terms(g: KGraph, p, terms: dict, r) -> dict:
    """``gamma_p^{gamma_r(s)}`` on a term map: ``s_{x1 w x2} s_{y1 w y2}*`` with ``d(x1) = d(y1) = r``."""
    out = {}
    words = g.level(p)
    # refine so that both legs reach degree r
    need = {}
    for (x, y), c in terms.items():
        t = join(join(dsub(r, g.degree(x)), dsub(r, g.degree(y))), g.zero())
        need.setdefault(t, {})[(x, y)] = c
    for t, group in need.items():
        for (x, y), c in refine_terms(g, group, t).items():
            x1, x2 = g.factorize(x, r)
            y1, y2 = g.factorize(y, r)
            for w in words:
                key = (g.concat(x1, g.concat(w, x2)), g.concat(y1, g.concat(w, y2)))
                out[key] = out.get(key, 0) + c
    return out


def gamma_endo(E: CuntzTuple, p, a: Element) -> Element:
    """``gamma_p^E(A) = sum_{w in Lambda^p} E_w A E_w*``."""
    _same_graph(E, a)
    g = a.graph
    p = tuple(p)
    if E.shift is not None:
        raw = []
        for n, comp in a.components.items():
            for (u, v), c in gamma_terms(g, p, comp.terms, E.shift).items():
                raw.append((u, v, c))
        return Element.from_terms(g, raw)
    out = Element(g)
    for w in g.level(p):
        ew = E.word(w)
        out = out + multiply(multiply(ew, a), adjoint(ew))
    return out


@dataclass(frozen=True)
class AveragingUnitarySpec:
    p: tuple
    f: dict  # word -> 0/1
    sigma: dict  # word -> word

    def check(self, g: KGraph):
        words = g.level(self.p)
        if sorted(self.sigma) != sorted(words) or sorted(self.sigma.values()) != sorted(words):
            raise StructureError("sigma is not a permutation of Lambda^p")
        if sorted(self.f) != sorted(words) or any(x not in (0, 1) for x in self.f.values()):
            raise StructureError("f must map Lambda^p to {0, 1}")


def averaging_unitary(E: CuntzTuple, spec: AveragingUnitarySpec, verify: bool = True) -> Element:
    """``U_(f, sigma)``; with ``verify`` unitarity is checked exactly."""
    g = E.graph
    spec.check(g)
    u = Element(g)
    for w in g.level(spec.p):
        term = multiply(E.word(spec.sigma[w]), adjoint(E.word(w)))
        u = u + (term if spec.f[w] == 0 else -term)
    if verify:
        one = identity(g)
        if multiply(u, adjoint(u)) != one or multiply(adjoint(u), u) != one:
            raise StructureError("U_(f,sigma) is not unitary; the tuple is not Cuntz-type")
    return u


def alpha_brute(E: CuntzTuple, p, a: Element, cap: int = BRUTE_CAP) -> Element:
    """Literal average over all ``2^{m^p} (m^p)!`` unitaries ``U_(f, sigma)``."""
    _same_graph(E, a)
    g = a.graph
    p = tuple(p)
    words = g.level(p)
    n = len(words)
    count = 2**n * math.factorial(n)
    if count > cap:
        raise CapError(f"alpha_brute needs {count} unitaries (cap {cap}); use alpha_closed")
    total = Element(g)
    for perm in itertools.permutations(words):
        sigma = dict(zip(words, perm))
        for signs in itertools.product((0, 1), repeat=n):
            u = averaging_unitary(E, AveragingUnitarySpec(p, dict(zip(words, signs)), sigma), verify=False)
            total = total + multiply(multiply(u, a), adjoint(u))
    return total.scale(Fraction(1, count))


def alpha_terms(g: KGraph, p, terms: dict, r) -> dict:
    """``alpha_p^{gamma_r(s)}`` on a term map, refining every term to depth ``r + p``.

    With ``x = w mu x2``, ``y = w' mu' y2`` (``d(w) = r``, ``d(mu) = p``) the
    term maps to ``delta_{mu, mu'} m^{-p} sum_lambda s_{w lambda x2} s_{w' lambda y2}*``.
    """
    rp = dadd(r, p)
    scale = Fraction(1, g.size(p))
    kept = {}
    need = {}
    for (x, y), c in terms.items():
        t = join(join(dsub(rp, g.degree(x)), dsub(rp, g.degree(y))), g.zero())
        need.setdefault(t, {})[(x, y)] = c
    for t, group in need.items():
        for (x, y), c in refine_terms(g, group, t).items():
            w, rest = g.factorize(x, r)
            mu, x2 = g.factorize(rest, p)
            w2, rest2 = g.factorize(y, r)
            mu2, y2 = g.factorize(rest2, p)
            if mu == mu2:
                key = (g.concat(w, x2), g.concat(w2, y2))
                kept[key] = kept.get(key, 0) + c * scale
    return gamma_terms(g, p, kept, r)


def _closed_shape(g: KGraph, p, u: Word, v: Word) -> str | None:
    du, dv = g.degree(u), g.degree(v)
    if dle(p, du) and dle(p, dv):
        return "diagonal"
    if is_zero(meet(du, dv)) and dadd(du, dv) == tuple(p):
        return "mixed"
    return None


def alpha_mixed(g: KGraph, p, u: Word, v: Word) -> Element:
    """``alpha_p(s_u s_v*) = m^{-p} sum_{(xi, eta) in Lambda^min(u, v)} gamma_p(s_xi* s_eta)``.

    Valid when ``d(u) ^ d(v) = 0`` and ``p = d(u) + d(v)``.
    """
    if _closed_shape(g, p, u, v) != "mixed":
        raise ShapeError("alpha_mixed needs d(u) ^ d(v) = 0 and p = d(u) + d(v)")
    E = CuntzTuple.standard(g)
    out = Element(g)
    for xi, eta in g.lambda_min(u, v):
        inner = multiply(adjoint(Element.gen(g, xi)), Element.gen(g, eta))
        out = out + gamma_endo(E, p, inner)
    return out.scale(Fraction(1, g.size(p)))


def alpha_closed(E: CuntzTuple, p, a: Element, refine: bool = True) -> Element:
    """Closed-form ``alpha_p^E`` for ``E = gamma_r(s)``.

    With ``refine=False`` every term must already have one of the two shapes
    ``d(u), d(v) >= r + p`` or (for the standard tuple) ``d(u) ^ d(v) = 0``
    with ``p = d(u) + d(v)``; otherwise :class:`ShapeError` is raised.
    """
    _same_graph(E, a)
    if E.shift is None:
        raise ShapeError("closed forms need a tuple of the form gamma_r(s)")
    g = a.graph
    p, r = tuple(p), E.shift
    if not refine:
        pieces = Element(g)
        for n, comp in a.components.items():
            for (u, v), c in comp.terms.items():
                shape = _closed_shape(g, dadd(r, p), u, v)
                if shape == "diagonal":
                    pieces = pieces + Element.from_terms(
                        g, [(x, y, cc) for (x, y), cc in alpha_terms(g, p, {(u, v): c}, r).items()]
                    )
                elif shape == "mixed" and is_zero(r):
                    pieces = pieces + alpha_mixed(g, p, u, v).scale(c)
                else:
                    raise ShapeError(f"term s_{u} s_{v}* does not match a closed-form shape at p={p}")
        return pieces
    raw = []
    for comp in a.components.values():
        for (x, y), c in alpha_terms(g, p, comp.terms, r).items():
            raw.append((x, y, c))
    return Element.from_terms(g, raw)


# ----------------------------------------------------------------------
# intrinsic unitaries


@dataclass(frozen=True)
class IntrinsicUnitary:
    g: tuple
    pairing: dict
    element: Element


def in_group(m, gvec) -> bool:
    num = math.prod(mi**x for mi, x in zip(m, gvec) if x > 0)
    den = math.prod(mi ** (-x) for mi, x in zip(m, gvec) if x < 0)
    return num == den


def build_intrinsic_unitary(g: KGraph, gvec, pairing: dict | None = None) -> IntrinsicUnitary:
    """``U = sum_{u in Lambda^{g+}} s_u s_{j(u)}*``; lexicographic pairing by default."""
    gvec = tuple(gvec)
    if len(gvec) != g.k or not in_group(g.m, gvec):
        raise DegreeError(f"{gvec} is not in the intrinsic group of m={g.m}")
    plus, minus = positive_part(gvec), negative_part(gvec)
    src, dst = g.level(plus), g.level(minus)
    if pairing is None:
        pairing = dict(zip(src, dst))
    if sorted(pairing) != sorted(src) or sorted(pairing.values()) != sorted(dst):
        raise StructureError("pairing is not a bijection Lambda^{g+} -> Lambda^{g-}")
    u = Element.from_terms(g, [(x, pairing[x], 1) for x in src])
    one = identity(g)
    if multiply(u, adjoint(u)) != one or multiply(adjoint(u), u) != one:
        raise StructureError("intrinsic unitary failed the unitarity check")
    return IntrinsicUnitary(gvec, dict(pairing), u)


__all__ = [
    "AveragingUnitarySpec",
    "CuntzTuple",
    "IntrinsicUnitary",
    "alpha_brute",
    "alpha_closed",
    "alpha_mixed",
    "alpha_terms",
    "averaging_unitary",
    "build_intrinsic_unitary",
    "gamma_endo",
    "gamma_terms",
    "in_group",
    "mpow",
]

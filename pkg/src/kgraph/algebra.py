"""Exact calculus on the algebraic part of the k-graph C*-algebra.

An :class:`Element` is a finite combination of generators ``s_u s_v*`` with
rational coefficients, stored per gauge degree ``n = d(u) - d(v)``.  Inside a
degree component every term has the same bidegree ``(P, Q)``; canonicalizing
takes ``Q`` to be the join of the ``d(v)`` present and expands each term with
the defect-free relation ``s_u s_v* = sum_w s_uw s_vw*``.  At a fixed bidegree
the generators are linearly independent, so two elements are equal iff their
components agree after refining both to a common bidegree.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import BudgetError, DegreeError, GraphMismatchError, ModeError
from .graph import KGraph, Word, dadd, dle, dsub, is_zero, join


class Limits:
    """Process-wide resource caps; ``KGRAPH_MAX_TERMS`` overrides the default."""

    def __init__(self):
        self.max_terms = int(os.environ.get("KGRAPH_MAX_TERMS", 10**6))


limits = Limits()


def mpow(g: KGraph, n) -> Fraction:
    """``m^n`` for ``n`` in Z^k, as an exact rational."""
    num = 1
    den = 1
    for mi, ni in zip(g.m, n):
        if ni >= 0:
            num *= mi**ni
        else:
            den *= mi ** (-ni)
    return Fraction(num, den)


@dataclass(frozen=True)
class Component:
    """Degree-``n`` part at bidegree ``(P, Q)``; ``terms`` maps ``(u, v)`` to a coefficient."""

    P: tuple
    Q: tuple
    terms: dict

    @property
    def n(self):
        return dsub(self.P, self.Q)


def _check_budget(count: int):
    if count > limits.max_terms:
        raise BudgetError(count, limits.max_terms)


def refine_terms(g: KGraph, terms: dict, r) -> dict:
    """Expand every ``s_u s_v*`` as ``sum_{w in Lambda^r} s_uw s_vw*``."""
    if is_zero(r):
        return terms
    words = g.level(r)
    _check_budget(len(terms) * len(words))
    out = {}
    for (u, v), c in terms.items():
        for w in words:
            key = (g.concat(u, w), g.concat(v, w))
            out[key] = out.get(key, 0) + c
    return out


def _merge(g: KGraph, parts) -> dict:
    """Sum ``(n, Q, terms)`` pieces into canonical components keyed by ``n``."""
    by_n = {}
    for n, Q, terms in parts:
        if terms:
            by_n.setdefault(n, []).append((Q, terms))
    comps = {}
    for n, pieces in by_n.items():
        top = pieces[0][0]
        for Q, _ in pieces[1:]:
            top = join(top, Q)
        acc = {}
        for Q, terms in pieces:
            for key, c in refine_terms(g, terms, dsub(top, Q)).items():
                acc[key] = acc.get(key, 0) + c
        acc = {key: Fraction(c) for key, c in acc.items() if c != 0}
        if acc:
            comps[n] = Component(dadd(top, n), top, acc)
    return comps


class Element:
    """Immutable element of the dense *-subalgebra spanned by ``s_u s_v*``."""

    __slots__ = ("graph", "_comps")

    def __init__(self, graph: KGraph, comps: dict | None = None):
        self.graph = graph
        self._comps = comps or {}

    # construction -------------------------------------------------------

    @classmethod
    def from_terms(cls, g: KGraph, raw: Iterable) -> "Element":
        """Canonicalize ``(u, v, coeff)`` triples of normal words."""
        parts = []
        for u, v, c in raw:
            if len(u) != g.k or len(v) != g.k:
                raise DegreeError("word has the wrong number of colour blocks")
            for w in (u, v):
                for colour, block in enumerate(w):
                    if any(not 0 <= s < g.m[colour] for s in block):
                        raise DegreeError(f"edge index out of range in {w}")
            du, dv = g.degree(u), g.degree(v)
            parts.append((dsub(du, dv), dv, {(u, v): Fraction(c)}))
        return cls(g, _merge(g, parts))

    @classmethod
    def scalar(cls, g: KGraph, c=1) -> "Element":
        e = g.empty()
        return cls.from_terms(g, [(e, e, c)])

    @classmethod
    def gen(cls, g: KGraph, u: Word, v: Word | None = None, c=1) -> "Element":
        """``c * s_u s_v*`` (``v`` defaults to the empty word)."""
        return cls.from_terms(g, [(u, g.empty() if v is None else v, c)])

    # inspection -----------------------------------------------------------

    @property
    def components(self) -> dict:
        return self._comps

    def degrees(self) -> list:
        return sorted(self._comps)

    def is_zero(self) -> bool:
        return not self._comps

    def is_homogeneous(self) -> bool:
        return len(self._comps) <= 1

    def degree(self):
        """Degree of a nonzero homogeneous element."""
        if len(self._comps) != 1:
            raise DegreeError("element is not homogeneous (or is zero)")
        return next(iter(self._comps))

    def num_terms(self) -> int:
        return sum(len(c.terms) for c in self._comps.values())

    def terms(self):
        """Yield ``(n, u, v, coeff)`` sorted by ``(n, u, v)``."""
        for n in sorted(self._comps):
            comp = self._comps[n]
            for (u, v) in sorted(comp.terms):
                yield n, u, v, comp.terms[(u, v)]

    def coefficient_sum(self) -> Fraction:
        return sum((abs(c) for comp in self._comps.values() for c in comp.terms.values()), Fraction(0))

    def refined(self, n, Q) -> dict:
        """Terms of the degree-``n`` component expanded to v-degree ``Q``."""
        comp = self._comps.get(n)
        if comp is None:
            return {}
        if not dle(comp.Q, Q):
            raise DegreeError(f"cannot refine from {comp.Q} to {Q}")
        return refine_terms(self.graph, comp.terms, dsub(Q, comp.Q))

    # arithmetic -----------------------------------------------------------

    def _same(self, other: "Element"):
        if self.graph != other.graph:
            raise GraphMismatchError("elements live over different graphs")

    def __add__(self, other):
        if not isinstance(other, Element):
            other = Element.scalar(self.graph, other)
        self._same(other)
        parts = [(n, c.Q, c.terms) for n, c in self._comps.items()]
        parts += [(n, c.Q, c.terms) for n, c in other._comps.items()]
        return Element(self.graph, _merge(self.graph, parts))

    __radd__ = __add__

    def scale(self, c) -> "Element":
        c = Fraction(c)
        if c == 0:
            return Element(self.graph)
        comps = {
            n: Component(comp.P, comp.Q, {key: x * c for key, x in comp.terms.items()})
            for n, comp in self._comps.items()
        }
        return Element(self.graph, comps)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, Element):
            other = Element.scalar(self.graph, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Element):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Element.scalar(self.graph, other)
        if not isinstance(other, Element) or self.graph != other.graph:
            return NotImplemented
        if set(self._comps) != set(other._comps):
            return False
        for n, a in self._comps.items():
            b = other._comps[n]
            if a.Q == b.Q:
                if a.terms != b.terms:
                    return False
                continue
            top = join(a.Q, b.Q)
            if self.refined(n, top) != other.refined(n, top):
                return False
        return True

    __hash__ = None

    def adjoint(self) -> "Element":
        return adjoint(self)

    def __repr__(self):
        parts = [f"{c}*s{u}s{v}*" for _, u, v, c in self.terms()]
        return "Element(" + (" + ".join(parts) if parts else "0") + ")"


def canonicalize(g: KGraph, raw: Iterable) -> Element:
    return Element.from_terms(g, raw)


def identity(g: KGraph) -> Element:
    return Element.scalar(g, 1)


def adjoint(a: Element) -> Element:
    comps = {}
    for n, comp in a.components.items():
        neg = tuple(-x for x in n)
        comps[neg] = Component(comp.Q, comp.P, {(v, u): c for (u, v), c in comp.terms.items()})
    return Element(a.graph, comps)


def multiply(a: Element, b: Element) -> Element:
    """Product via ``s_u s_v* s_x s_y* = sum_{(xi,eta) in Lambda^min(v,x)} s_{u xi} s_{y eta}*``."""
    a._same(b)
    g = a.graph
    parts = []
    for n1, c1 in a.components.items():
        for n2, c2 in b.components.items():
            by_x = {}
            for (x, y), coef in c2.terms.items():
                by_x.setdefault(x, []).append((y, coef))
            table = g.min_table(c1.Q, c2.P)
            top = join(c1.Q, c2.P)
            out = {}
            for (u, v), ca in c1.terms.items():
                if table is not None:
                    exts = table.get(v, ())
                else:
                    exts = [(x, xi, eta) for x in by_x for xi, eta in g.lambda_min(v, x)]
                for x, xi, eta in exts:
                    ys = by_x.get(x)
                    if not ys:
                        continue
                    left = g.concat(u, xi)
                    for y, cb in ys:
                        key = (left, g.concat(y, eta))
                        out[key] = out.get(key, 0) + ca * cb
            _check_budget(len(out))
            if out:
                Q = dadd(c2.Q, dsub(top, c2.P))
                parts.append((dadd(n1, n2), Q, out))
    return Element(g, _merge(g, parts))


def spectral_component(a: Element, n) -> Element:
    """Degree-``n`` gauge component (exact on the algebraic part)."""
    n = tuple(n)
    comp = a.components.get(n)
    return Element(a.graph, {n: comp} if comp else {})


def omega(a: Element) -> Fraction:
    """``omega(s_u s_v*) = delta_{u,v} m^{-d(u)}``, extended linearly."""
    g = a.graph
    comp = a.components.get(g.zero())
    if comp is None:
        return Fraction(0)
    total = sum((c for (u, v), c in comp.terms.items() if u == v), Fraction(0))
    return total / g.size(comp.Q)


# ----------------------------------------------------------------------
# modular data


@dataclass(frozen=True)
class ModularPhase:
    """The symbolic factor ``m^{z * exponent}`` carried by a homogeneous piece."""

    exponent: tuple

    def value(self, g: KGraph, z: complex) -> complex:
        return complex(math.prod(complex(mi) ** (z * e) for mi, e in zip(g.m, self.exponent)))


def _rational_sqrt(x: Fraction):
    num, den = x.numerator, x.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def modular_action(a: Element, kind: str, z=None, exact: bool = True):
    """Apply one of the modular maps to ``a``.

    ``sigma_t`` stays symbolic: a list of ``(ModularPhase, component)`` pairs,
    the phase of the degree-``n`` component having exponent ``-n``.
    ``delta_z`` scales degree ``n`` by ``m^{-z n}``; ``tomita_S`` is the adjoint;
    ``tomita_F`` and ``conj_J`` rescale the adjoint by ``m^{n}`` and
    ``m^{n/2}``.  In exact mode an irrational scale raises :class:`ModeError`;
    with ``exact=False`` a dict ``{(n, u, v): float}`` is returned instead.
    """
    g = a.graph
    if kind == "sigma_t":
        return [
            (ModularPhase(tuple(-x for x in n)), spectral_component(a, n)) for n in a.degrees()
        ]
    if kind == "tomita_S":
        return adjoint(a)
    if kind == "tomita_F":
        comps = {}
        for n, comp in a.components.items():
            f = mpow(g, n)
            neg = tuple(-x for x in n)
            comps[neg] = Component(comp.Q, comp.P, {(v, u): c * f for (u, v), c in comp.terms.items()})
        return Element(g, comps)
    if kind == "delta_z":
        if z is None:
            raise ModeError("delta_z needs z")
        if exact and Fraction(z).denominator != 1:
            raise ModeError("delta_z with non-integer z is irrational in general; use exact=False")
        if exact:
            z = int(Fraction(z))
            comps = {}
            for n, comp in a.components.items():
                f = mpow(g, tuple(-z * x for x in n))
                comps[n] = Component(comp.P, comp.Q, {key: c * f for key, c in comp.terms.items()})
            return Element(g, comps)
        out = {}
        for n, u, v, c in a.terms():
            f = math.prod(float(mi) ** (-complex(z).real * x) for mi, x in zip(g.m, n))
            out[(n, u, v)] = float(c) * f
        return out
    if kind == "conj_J":
        if exact:
            comps = {}
            for n, comp in a.components.items():
                f = _rational_sqrt(mpow(g, n))
                if f is None:
                    raise ModeError(f"m^(n/2) is irrational for n={n}")
                neg = tuple(-x for x in n)
                comps[neg] = Component(comp.Q, comp.P, {(v, u): c * f for (u, v), c in comp.terms.items()})
            return Element(g, comps)
        out = {}
        for n, u, v, c in a.terms():
            f = math.sqrt(float(mpow(g, n)))
            out[(tuple(-x for x in n), v, u)] = float(c) * f
        return out
    raise ModeError(f"unknown modular action {kind!r}")


@dataclass(frozen=True)
class KMSResult:
    ok: bool
    violation: tuple | None = None  # (degree of A, degree of B, lhs, rhs)

    def __bool__(self):
        return self.ok


def kms_check(a: Element, b: Element) -> KMSResult:
    """Check ``omega(AB) = m^{d(B)} omega(BA)`` on every pair of homogeneous pieces."""
    g = a.graph
    for na in a.degrees():
        pa = spectral_component(a, na)
        for nb in b.degrees():
            pb = spectral_component(b, nb)
            lhs = omega(multiply(pa, pb))
            rhs = mpow(g, nb) * omega(multiply(pb, pa))
            if lhs != rhs:
                return KMSResult(False, (na, nb, lhs, rhs))
    return KMSResult(True)

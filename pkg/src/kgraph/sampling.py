"""Random words, elements and graphs for property tests and the acceptance suite."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .algebra import Element
from .errors import CubicViolationError
from .graph import KGraph, dadd, negative_part, positive_part, validate_kgraph


def random_word(g: KGraph, d, rng: random.Random):
    return tuple(tuple(rng.randrange(g.m[c]) for _ in range(d[c])) for c in range(g.k))


def random_edge_sequence(g: KGraph, length: int, rng: random.Random) -> list:
    return [(c, rng.randrange(g.m[c])) for c in (rng.randrange(g.k) for _ in range(length))]


def random_coeff(rng: random.Random) -> Fraction:
    c = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
    return c if c else Fraction(1)


def random_homogeneous(g: KGraph, n, rng: random.Random, terms: int = 3, depth: int = 1) -> Element:
    """Random element of degree ``n``: terms at bidegrees ``(n+ + r, n- + r)``, ``r <= depth``."""
    raw = []
    for _ in range(terms):
        r = tuple(rng.randint(0, depth) for _ in range(g.k))
        raw.append((
            random_word(g, dadd(positive_part(n), r), rng),
            random_word(g, dadd(negative_part(n), r), rng),
            random_coeff(rng),
        ))
    return Element.from_terms(g, raw)


def random_degree(k: int, rng: random.Random, spread: int = 1) -> tuple:
    return tuple(rng.randint(-spread, spread) for _ in range(k))


def random_element(g: KGraph, rng: random.Random, terms: int = 4, spread: int = 1, depth: int = 1) -> Element:
    out = Element(g)
    for _ in range(terms):
        out = out + random_homogeneous(g, random_degree(g.k, rng, spread), rng, 1, depth)
    return out


def random_core(g: KGraph, rng: random.Random, terms: int = 3, depth: int = 1) -> Element:
    return random_homogeneous(g, g.zero(), rng, terms, depth)


def random_theta(m, rng: random.Random) -> dict:
    theta = {}
    for i, j in itertools.combinations(range(len(m)), 2):
        perm = list(range(m[i] * m[j]))
        rng.shuffle(perm)
        theta[(i, j)] = perm
    return theta


def random_kgraph(m, rng: random.Random, attempts: int = 100000) -> KGraph:
    """Uniform over valid theta families, by rejection."""
    for _ in range(attempts):
        try:
            return validate_kgraph(m, random_theta(m, rng))
        except CubicViolationError:
            continue
    raise RuntimeError(f"no valid theta found for m={m} in {attempts} attempts")

"""Little pull-back property and single alignment."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graph import KGraph, is_zero


@dataclass(frozen=True)
class AlignmentResult:
    holds: bool
    witness: tuple | None = None  # (mu, nu, extensions) when it fails

    def __bool__(self):
        return self.holds


def check_little_pullback(g: KGraph) -> AlignmentResult:
    """|Lambda^min(e, f)| <= 1 for all edges e, f of distinct colours."""
    for i, j in itertools.combinations(range(g.k), 2):
        for s in range(g.m[i]):
            e = tuple((s,) if c == i else () for c in range(g.k))
            for t in range(g.m[j]):
                f = tuple((t,) if c == j else () for c in range(g.k))
                ext = g.lambda_min(e, f)
                if len(ext) > 1:
                    return AlignmentResult(False, (e, f, tuple(ext)))
    return AlignmentResult(True)


def _degrees_upto(maxdeg):
    return itertools.product(*(range(x + 1) for x in maxdeg))


def check_singly_aligned(g: KGraph, maxdeg) -> AlignmentResult:
    """|Lambda^min(mu, nu)| <= 1 for all words with degrees <= ``maxdeg``.

    Pairs whose degrees overlap reduce to the pair of their tails after the
    common-degree prefix, so only pairs with disjoint degree support are
    enumerated.  For each such degree pair ``(a, b)`` every word of degree
    ``a + b`` is factored at ``a`` and at ``b``; alignment fails exactly when
    two words share both prefixes.
    """
    maxdeg = tuple(maxdeg)
    for a in _degrees_upto(maxdeg):
        if is_zero(a):
            continue
        for b in _degrees_upto(maxdeg):
            if is_zero(b) or any(x and y for x, y in zip(a, b)) or a > b:
                continue
            top = tuple(x + y for x, y in zip(a, b))
            seen = {}
            for w in g.level(top):
                key = (g.factorize(w, a)[0], g.factorize(w, b)[0])
                if key in seen:
                    mu, nu = key
                    return AlignmentResult(False, (mu, nu, (seen[key], w)))
                seen[key] = w
    return AlignmentResult(True)


def is_lpb(g: KGraph) -> bool:
    return check_little_pullback(g).holds


__all__ = ["AlignmentResult", "check_little_pullback", "check_singly_aligned", "is_lpb"]

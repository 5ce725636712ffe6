"""Shared constructors for the test-suite (1-based edge names e^colour_index)."""

import itertools

from kgraph import KGraph

ID22 = (0, 1, 2, 3)
FLIP22 = (0, 2, 1, 3)
# 11 -> 21 -> 12 -> 11 on flat 0-based indices
CYCLE22 = (2, 0, 1, 3)


def graph22(perm):
    return KGraph((2, 2), {(0, 1): list(perm)}, validated=True)


def e(g, colour, index):
    """The edge word e^colour_index, 1-based."""
    return tuple((index - 1,) if c == colour - 1 else () for c in range(g.k))


def word(g, *edges):
    """Normal form of a 1-based edge sequence ``(colour, index), ...``."""
    return g.normalize([(c - 1, s - 1) for c, s in edges])


def all22():
    return [graph22(p) for p in itertools.permutations(range(4))]


# (criterion, passed, detail) lines collected by the acceptance suite
ACCEPTANCE = []

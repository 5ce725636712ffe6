"""Relabelings of k-graphs and isomorphism-canonical forms."""

from __future__ import annotations

import itertools
from collections import defaultdict

from .errors import DomainError
from .graph import KGraph


def relabel(g: KGraph, colour_perm, index_perms) -> KGraph:
    """Transport ``g`` along a relabeling.

    Old edge ``(i, s)`` becomes ``(colour_perm[i], index_perms[i][s])``.  Each
    commutation relation is rewritten in the new names and read back in
    ascending colour order, which inverts it when a pair of colours swaps.
    """
    k = g.k
    new_m = [0] * k
    for i in range(k):
        new_m[colour_perm[i]] = g.m[i]
    new_m = tuple(new_m)
    theta = {}
    for a in range(k):
        for b in range(a + 1, k):
            theta[(a, b)] = [None] * (new_m[a] * new_m[b])
    for (i, j), fwd in g._fwd.items():
        a, b = colour_perm[i], colour_perm[j]
        si, sj = index_perms[i], index_perms[j]
        for flat, (s2, t2) in enumerate(fwd):
            s, t = divmod(flat, g.m[j])
            # e^i_s e^j_t = e^j_t2 e^i_s2
            x, y, x2, y2 = si[s], sj[t], si[s2], sj[t2]
            if a < b:
                theta[(a, b)][x * new_m[b] + y] = x2 * new_m[b] + y2
            else:
                # f^b_y2 f^a_x2 = f^a_x f^b_y
                theta[(b, a)][y2 * new_m[a] + x2] = y * new_m[a] + x
    out = KGraph(new_m, theta)
    out.validated = g.validated
    return out


def _colour_perms(m):
    """Colour permutations that sort ``m`` ascending (all, when entries tie)."""
    k = len(m)
    target = sorted(m)
    for perm in itertools.permutations(range(k)):
        if all(target[perm[i]] == m[i] for i in range(k)):
            yield perm


def relabelings(g: KGraph):
    index_choices = [list(itertools.permutations(range(mi))) for mi in g.m]
    for cp in _colour_perms(g.m):
        for ips in itertools.product(*index_choices):
            yield cp, ips


def serialize(g: KGraph) -> str:
    parts = [str(g.k), ",".join(map(str, g.m))]
    for key in sorted(g.theta):
        parts.append(",".join(map(str, g.theta[key])))
    return "|".join(parts)


def canonical_iso_form(g: KGraph) -> str:
    """Minimal serialization over the relabeling group.

    The group is generated by independent permutations of each colour's edges
    and by colour permutations that keep ``m`` sorted; graphs whose edge
    counts differ only in order therefore share a form.
    """
    best = None
    best_key = None
    for cp, ips in relabelings(g):
        h = relabel(g, cp, ips)
        key = h.key()
        if best_key is None or key < best_key:
            best_key, best = key, h
    return serialize(best)


def orbit_classes(graphs) -> list:
    """Partition graphs into isomorphism classes, ordered by canonical form."""
    graphs = list(graphs)
    if not graphs:
        return []
    sig = (graphs[0].k, tuple(sorted(graphs[0].m)))
    classes = defaultdict(list)
    for g in graphs:
        if (g.k, tuple(sorted(g.m))) != sig:
            raise DomainError("orbit_classes needs graphs with the same k and sorted m")
        classes[canonical_iso_form(g)].append(g)
    return [classes[key] for key in sorted(classes)]

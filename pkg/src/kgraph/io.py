"""JSON formats.  Colours and edge indices are 1-based on disk, 0-based in memory."""

from __future__ import annotations

import json
from fractions import Fraction

from .algebra import Element
from .errors import StructureError
from .graph import KGraph, validate_kgraph


def frac_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    if isinstance(s, bool):
        raise StructureError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    try:
        return Fraction(str(s).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise StructureError(f"not a rational: {s!r}") from exc


def graph_to_json(g: KGraph) -> dict:
    return {
        "k": g.k,
        "m": list(g.m),
        "theta": {f"{i + 1},{j + 1}": list(perm) for (i, j), perm in sorted(g.theta.items())},
    }


def _theta_from_json(spec: dict):
    try:
        k = int(spec["k"])
        m = [int(x) for x in spec["m"]]
        raw = spec.get("theta", {})
    except (KeyError, TypeError, ValueError) as exc:
        raise StructureError(f"malformed graph spec: {exc}") from exc
    if len(m) != k:
        raise StructureError(f"k={k} but m has {len(m)} entries")
    theta = {}
    for key, perm in raw.items():
        try:
            i, j = (int(x) - 1 for x in key.split(","))
        except ValueError as exc:
            raise StructureError(f"bad theta key {key!r}") from exc
        if not (0 <= i < j < k):
            raise StructureError(f"bad theta key {key!r}")
        theta[(i, j)] = perm
    return m, theta


def graph_from_json(spec: dict, validate: bool = True) -> KGraph:
    """Parse a graph spec; missing theta pairs are an error."""
    m, theta = _theta_from_json(spec)
    return validate_kgraph(m, theta) if validate else KGraph(m, theta)


def load_graph(path, validate: bool = True) -> KGraph:
    with open(path) as fh:
        return graph_from_json(json.load(fh), validate)


def word_to_json(g: KGraph, w) -> list:
    return [[c + 1, s + 1] for c, s in g.to_edges(w)]


def edges_from_json(g: KGraph, seq) -> list:
    try:
        edges = [(int(c) - 1, int(s) - 1) for c, s in seq]
    except (TypeError, ValueError) as exc:
        raise StructureError(f"malformed edge list {seq!r}") from exc
    return g.check_edges(edges)


def word_from_json(g: KGraph, seq):
    return g.normalize(edges_from_json(g, seq))


def element_to_json(a: Element, with_graph: bool = True) -> dict:
    g = a.graph
    out = {
        "terms": [
            {"u": word_to_json(g, u), "v": word_to_json(g, v), "coeff": frac_str(c)}
            for _, u, v, c in a.terms()
        ]
    }
    if with_graph:
        out["graph"] = graph_to_json(g)
    return out


def element_from_json(spec: dict, g: KGraph | None = None) -> Element:
    if g is None:
        g = graph_from_json(spec["graph"])
    raw = []
    for term in spec.get("terms", []):
        try:
            raw.append(
                (word_from_json(g, term["u"]), word_from_json(g, term["v"]), parse_frac(term.get("coeff", 1)))
            )
        except KeyError as exc:
            raise StructureError(f"term lacks field {exc}") from exc
    return Element.from_terms(g, raw)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)

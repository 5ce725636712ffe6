"""Exhaustive enumeration and classification of small single-vertex k-graphs."""

from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import CapError, CubicViolationError
from .graph import validate_kgraph
from .iso import canonical_iso_form
from .lattice import TypeReport, classify_type

CANDIDATE_CAP = 10**6
COLUMNS = ["canonical_form", "class_size", "lpb", "periodic", "verdict", "lambda"]


@dataclass
class CensusRow:
    canonical_form: str
    class_size: int
    lpb: bool
    periodic: str  # "yes" | "unknown(B)"
    verdict: str
    lam: str | None
    members: list = field(default_factory=list, repr=False)
    report: TypeReport | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "canonical_form": self.canonical_form,
            "class_size": self.class_size,
            "lpb": self.lpb,
            "periodic": self.periodic,
            "verdict": self.verdict,
            "lambda": self.lam,
        }


@dataclass
class Census:
    k: int
    m: tuple
    candidates: int
    valid: int
    bound: int
    rows: list

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "m": list(self.m),
            "candidates": self.candidates,
            "valid": self.valid,
            "classes": len(self.rows),
            "periodicity_bound": self.bound,
            "rows": [r.to_json() for r in self.rows],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for r in self.rows:
            writer.writerow([r.canonical_form, r.class_size, r.lpb, r.periodic, r.verdict, r.lam or ""])
        return buf.getvalue()


def candidate_count(m) -> int:
    return math.prod(math.factorial(m[i] * m[j]) for i, j in itertools.combinations(range(len(m)), 2))


def iter_valid(m):
    """Yield every validated graph with edge counts ``m`` in lexicographic theta order."""
    pairs = list(itertools.combinations(range(len(m)), 2))
    spaces = [itertools.permutations(range(m[i] * m[j])) for i, j in pairs]
    for perms in itertools.product(*map(list, spaces)):
        try:
            yield validate_kgraph(m, dict(zip(pairs, perms)))
        except CubicViolationError:
            continue


def _classify(args):
    g, bound = args
    return classify_type(g, bound)


def rep_bound(rep: TypeReport) -> int:
    return rep.extra["periodicity_bound"]


def _row(form, members, rep: TypeReport) -> CensusRow:
    verdict = rep.verdict
    lam = None if rep.lam is None else f"{rep.lam.numerator}/{rep.lam.denominator}"
    periodic = "yes" if rep.aperiodic == "false" else f"unknown({rep_bound(rep)})"
    return CensusRow(form, len(members), rep.lpb, periodic, verdict, lam, members, rep)


def enumerate_census(
    k: int, m, periodicity_bound: int = 4, *, workers: int = 1, cap: int = CANDIDATE_CAP,
    classify_members: bool = False,
) -> Census:
    """Enumerate, validate, group by canonical form and classify one representative per class.

    ``periodic`` is ``yes`` when a witness was found and ``unknown(B)``
    otherwise; the verdict column carries the aperiodicity conclusion.  With
    ``classify_members`` every member is classified and stored on the row's
    ``members`` as ``(graph, report)`` pairs.
    """
    m = tuple(int(x) for x in m)
    if len(m) != k:
        from .errors import DomainError

        raise DomainError(f"k={k} but m has {len(m)} entries")
    total = candidate_count(m)
    if total > cap:
        raise CapError(f"{total} theta families exceed the census cap {cap}")
    classes = {}
    valid = 0
    for g in iter_valid(m):
        valid += 1
        classes.setdefault(canonical_iso_form(g), []).append(g)
    forms = sorted(classes)
    targets = [(classes[f][0], periodicity_bound) for f in forms]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_classify, targets))
    else:
        reports = [_classify(t) for t in targets]
    rows = []
    for form, rep in zip(forms, reports):
        members = classes[form]
        if classify_members:
            members = [(g, classify_type(g, periodicity_bound)) for g in members]
        rows.append(_row(form, members, rep))
    return Census(k, m, total, valid, periodicity_bound, rows)

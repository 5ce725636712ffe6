import csv
import io

import pytest

from helpers import CYCLE22, graph22

from kgraph import CapError, DomainError, canonical_iso_form
from kgraph.census import COLUMNS, candidate_count, enumerate_census


@pytest.fixture(scope="module")
def census22():
    return enumerate_census(2, (2, 2), 4, classify_members=True)


def test_counts(census22):
    assert census22.candidates == 24
    assert census22.valid == 24
    assert len(census22.rows) == 9
    assert sum(r.class_size for r in census22.rows) == 24


def test_sorted_rows(census22):
    forms = [r.canonical_form for r in census22.rows]
    assert forms == sorted(forms) and len(set(forms)) == len(forms)


def test_unique_non_lpb_aperiodic(census22):
    rows = [r for r in census22.rows if r.periodic != "yes" and not r.lpb]
    assert len(rows) == 1
    assert rows[0].canonical_form == canonical_iso_form(graph22(CYCLE22))


def test_lpb_classes_aperiodic(census22):
    for r in census22.rows:
        if r.lpb:
            assert r.periodic == "unknown(4)" and r.report.aperiodic == "true"


def test_class_invariance(census22):
    for r in census22.rows:
        keys = {(rep.lpb, rep.aperiodic, rep.verdict) for _, rep in r.members}
        assert len(keys) == 1


def test_periodic_rows(census22):
    periodic = [r for r in census22.rows if r.periodic == "yes"]
    assert len(periodic) == 2
    assert all(r.verdict == "NotFactor" and r.lam is None for r in periodic)


def test_trivial():
    c = enumerate_census(2, (1, 1))
    assert (c.valid, len(c.rows)) == (1, 1)


def test_csv(census22):
    rows = list(csv.reader(io.StringIO(census22.to_csv())))
    assert rows[0] == COLUMNS
    assert len(rows) == 10


def test_json(census22):
    doc = census22.to_json()
    assert doc["classes"] == 9 and doc["valid"] == 24


def test_workers_agree(census22):
    par = enumerate_census(2, (2, 2), 4, workers=2)
    assert par.to_json() == census22.to_json()


def test_three_graph_consistency():
    c = enumerate_census(3, (1, 1, 2))
    assert c.candidates == candidate_count((1, 1, 2)) == 4
    assert sum(r.class_size for r in c.rows) == c.valid


def test_cap():
    with pytest.raises(CapError):
        enumerate_census(2, (3, 3), cap=1000)


def test_mismatch():
    with pytest.raises(DomainError):
        enumerate_census(3, (2, 2))

import pytest
from hypothesis import given, strategies as st

from mereo._mutations import MUTANTS
from mereo.contact import BinaryRelation
from mereo.docs import canonical_key
from mereo.errors import CapacityExceeded, KindMismatch
from mereo.lab import (
    EnumerationSpec,
    composition_suite,
    correspondence_suite,
    enumerate_structures,
    evaluate,
    expand_ids,
    search_implication,
)



def test_expand_ids():
    assert expand_ids(["contact"]) == ("C1", "C2", "C3", "C4")
    assert expand_ids(["C1,C2", "C2"]) == ("C1", "C2")
    assert expand_ids(["connected"], "mvd") == ("CONA",)
    assert expand_ids(["connected"]) == ("CON",)


def test_contact_graph_enumeration():
    e = enumerate_structures(EnumerationSpec("contact_graph", 3))
    assert len(e) == 8
    e = enumerate_structures(EnumerationSpec("contact_graph", 3, ("nca",)))
    assert len(e) == 1
    assert e.items[0].contact == BinaryRelation.overlap(e.items[0].algebra)


def test_mvd_enumeration_two_atoms():
    e = enumerate_structures(EnumerationSpec("mvd", 2, ("mvd",)))
    assert e.summary["candidates"] == 1 << 16
    assert len(e) == 1 and e.items[0].wellinside == BinaryRelation.order(e.items[0].algebra)


def test_search_examples():
    out = search_implication(["C1", "C2", "C3", "C4"], ["C6"], EnumerationSpec("contact_graph", 3))
    assert out.status == "counterexample"
    assert out.witness["structure"]["contact"] == {"atom_edges": [["p", "q"]]}
    c6 = [v for v in out.witness["report"]["verdicts"] if v["axiom"] == "C6"][0]
    assert c6 == {"axiom": "C6", "holds": False, "witness": {"a": "p|r"}}

    out = search_implication(["contact"], ["C3"], EnumerationSpec("contact_graph", 3))
    assert out.status == "exhausted" and out.candidates_tried == 0

    out = search_implication(["mvd"], ["ll7"], EnumerationSpec("mvd", 2))
    assert out.status == "exhausted" and out.candidates_tried == 1 << 16


def test_search_budget():
    spec = EnumerationSpec("contact_graph", 3, budget=1)
    out = search_implication(["contact"], ["C6"], spec)
    assert out.status == "budget_reached" and out.candidates_tried == 1


def test_counterexample_is_reverified():
    out = search_implication(["contact"], ["C5"], EnumerationSpec("contact_graph", 3))
    assert out.status == "counterexample"
    rep = evaluate(out.item, ["contact", "C5"])
    assert not rep["C5"].holds and all(rep[a].holds for a in ("C1", "C2", "C3", "C4"))


def test_sampling_is_deterministic():
    spec = EnumerationSpec("contact_relation", 3, ("C1", "C2"), seed=5, budget=300)
    a = enumerate_structures(spec)
    b = enumerate_structures(spec)
    assert a.json_lines() == b.json_lines()
    assert a.summary["mode"] == "sampled" and a.summary["seed"] == 5
    c = enumerate_structures(EnumerationSpec("contact_relation", 3, ("C1", "C2"), seed=6, budget=300))
    assert c.summary["candidates"] >= 290


def test_enumeration_has_no_duplicates():
    items = enumerate_structures(EnumerationSpec("lca", 2)).items
    keys = [canonical_key(i) for i in items]
    assert len(set(keys)) == len(keys)


def test_other_kinds():
    assert len(enumerate_structures(EnumerationSpec("preorder_space", 3))) == 29
    assert len(enumerate_structures(EnumerationSpec("preorder_space", 3, ("connected",)))) == 19
    assert len(enumerate_structures(EnumerationSpec("hom", 2, m=3))) == 8
    assert len(enumerate_structures(EnumerationSpec("hom", 3, ("injective",), m=2))) == 0
    assert len(enumerate_structures(EnumerationSpec("hom", 2, ("galois",), m=2))) == 4
    ideals = enumerate_structures(EnumerationSpec("ideal", 2, ("BB1", "BB2", "BB3"), include_non_ideals=True))
    assert ideals.summary["candidates"] == 16 and len(ideals) == 4
    tables = enumerate_structures(EnumerationSpec("meet_table", 1, ("DLC1", "DLC2", "DLC3", "DLC4", "DLC5")))
    assert len(tables) == 1


def test_capacity_and_kind_errors():
    with pytest.raises(CapacityExceeded):
        EnumerationSpec("contact_graph", 6)
    with pytest.raises(CapacityExceeded):
        EnumerationSpec("preorder_space", 5)
    with pytest.raises(KindMismatch):
        EnumerationSpec("groups", 2)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_correspondence_suite_small(n):
    rep = correspondence_suite(n)
    assert rep.passed, [r.to_json() for r in rep.failing()]


@pytest.mark.parametrize("name", sorted(MUTANTS))
def test_mutants_are_caught(name):
    rep = correspondence_suite(2, _kappa=MUTANTS[name])
    assert not rep.passed
    row = rep.failing()[0]
    assert row.witness is not None


def test_informational_rows_record_prestructure_gaps():
    rep = correspondence_suite(2)
    row = rep.row("LS <-> LSp on candidate pre-structures")
    assert not row.asserted
    assert row.failures > 0


def test_composition_suite_small():
    rep = composition_suite(2, triples=10)
    assert rep.passed


@given(st.integers(0, 2 ** 16 - 1))
def test_every_relation_is_candidate_once(code):
    # the exhaustive two-atom relation space is indexed by its code
    from mereo.lab import _candidates
    cands = _candidates(EnumerationSpec("contact_relation", 2))
    item = cands.build(code)
    bits = sum(int(v) << k for k, v in enumerate(item.contact.matrix.ravel()))
    assert bits == code

import itertools
import sys

import pytest
from hypothesis import settings, strategies as st

from mereo.algebra import CompleteHomomorphism, make_algebra
from mereo.contact import BinaryRelation, contact_from_atom_graph
from mereo.structures import LocalContactStructure

settings.register_profile("suite", max_examples=60, deadline=None)
settings.load_profile("suite")

ATOMS = "pqrst"


def alg(n, prefix=None):
    if prefix:
        return make_algebra([f"{prefix}{i + 1}" for i in range(n)])
    return make_algebra(list(ATOMS[:n]))


def all_graphs(A):
    pairs = list(itertools.combinations(A.atom_labels, 2))
    for k in range(len(pairs) + 1):
        for edges in itertools.combinations(pairs, k):
            yield contact_from_atom_graph(A, edges)


def overlap_lca(A):
    return LocalContactStructure(A, BinaryRelation.overlap(A), frozenset(A.elements()))


@st.composite
def algebras(draw, lo=0, hi=3):
    return alg(draw(st.integers(lo, hi)))


@st.composite
def atom_graphs(draw, lo=0, hi=4):
    A = draw(algebras(lo, hi))
    pairs = list(itertools.combinations(A.atom_labels, 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return A, contact_from_atom_graph(A, edges)


@st.composite
def homs(draw, hi=3):
    m = draw(st.integers(1, hi))
    k = draw(st.integers(0, hi))
    A, B = alg(m, "a"), alg(k, "b")
    images = draw(st.lists(st.integers(0, m - 1), min_size=k, max_size=k))
    return CompleteHomomorphism(A, B, images)


@st.composite
def relations(draw, A, flavor):
    bits = draw(st.lists(st.booleans(), min_size=A.size ** 2, max_size=A.size ** 2))
    import numpy as np
    return BinaryRelation(A, np.array(bits, dtype=bool).reshape(A.size, A.size), flavor)


@pytest.fixture
def example_hom():
    from mereo.algebra import hom_from_atom_map
    A, B = alg(2, "a"), alg(3, "b")
    return hom_from_atom_map(A, B, {"b1": "a1", "b2": "a1", "b3": "a2"})


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])

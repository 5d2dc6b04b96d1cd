import itertools

import pytest
from hypothesis import given, strategies as st

from mereo.contact import BinaryRelation, check_contact_axioms
from mereo.errors import NotATopology, UnknownPoint
from mereo.equivalence import kappa
from mereo.structures import check_connected
from mereo.topology import (
    SpaceMap,
    closure,
    discrete_space,
    enumerate_maps,
    enumerate_open_families,
    enumerate_spaces,
    has_nontrivial_clopen,
    interior,
    make_space,
    map_properties,
    regular_closed_algebra,
    space_connected,
    standard_contact,
    standard_lca,
    standard_mvd,
)


@pytest.fixture
def vee():
    return make_space(["x", "y", "z"], preorder=[("y", "x"), ("y", "z")])


def test_make_space(vee):
    assert vee.labels(vee.min_open[vee.index("y")]) == ["x", "y", "z"]
    assert vee.labels(vee.min_open[vee.index("x")]) == ["x"]
    D = make_space(["x", "y"], opens=[[], ["x"], ["y"], ["x", "y"]])
    assert D.is_discrete
    with pytest.raises(NotATopology):
        make_space(["x", "y", "z"], opens=[[], ["x"], ["y"], ["x", "y", "z"]])
    with pytest.raises(UnknownPoint):
        closure(vee, ["w"])


def test_closure_interior(vee):
    assert vee.labels(closure(vee, ["x"])) == ["x", "y"]
    assert interior(vee, ["y"]) == 0
    assert closure(vee, []) == 0
    assert interior(vee, vee.full) == vee.full


def test_regular_closed_algebra(vee):
    rca = regular_closed_algebra(vee)
    assert [vee.labels(F) for F in rca.rc_sets] == [[], ["x", "y"], ["y", "z"], ["x", "y", "z"]]
    assert rca.algebra.atom_labels == ("F1", "F2")
    assert vee.labels(rca.point_set("F1")) == ["x", "y"]
    assert regular_closed_algebra(discrete_space(["x", "y"])).algebra.size == 4
    assert regular_closed_algebra(discrete_space(["x"])).algebra.n == 1


def test_standard_contact(vee):
    rca = regular_closed_algebra(vee)
    S = standard_contact(rca)
    A = rca.algebra
    F1, F2 = A.atom("F1"), A.atom("F2")
    assert S.contact.holds(F1, F2)
    assert S.wellinside.holds(F1, A.one)
    assert not S.wellinside.holds(F1, F1)
    assert check_connected(S).holds
    D = regular_closed_algebra(discrete_space(["x", "y"]))
    assert standard_contact(D).contact == BinaryRelation.overlap(D.algebra)


def test_standard_structures():
    D = discrete_space(["x", "y"])
    L = standard_lca(D)
    assert L.is_valid and L.bounded == frozenset(L.algebra.elements())
    M = standard_mvd(D)
    assert M.wellinside == BinaryRelation.order(L.algebra)
    one = discrete_space(["x"])
    assert standard_lca(one).algebra.n == 1


def test_connectedness(vee):
    assert space_connected(vee)
    assert not space_connected(discrete_space(["x", "y"]))
    assert space_connected(discrete_space(["x"]))


def test_sierpinski_map():
    X = discrete_space(["x", "y"])
    S = make_space(["a", "b"], preorder=[("b", "a")])
    f = SpaceMap.from_labels(X, S, {"x": "b", "y": "b"})
    props = map_properties(f)
    assert props.continuous and not props.quasi_open and not props.skeletal


def test_identity_maps_have_every_property():
    for n in range(4):
        for X in enumerate_spaces(n):
            ident = SpaceMap(X, X, tuple(range(n)))
            props = map_properties(ident)
            assert all(props.to_json()[k] for k in ("continuous", "open", "closed", "perfect", "quasi_open", "skeletal"))


def test_enumeration_counts():
    assert [len(enumerate_spaces(n)) for n in range(5)] == [1, 1, 4, 29, 355]
    for n in range(5):
        by_preorder = {frozenset(X.open_sets) for X in enumerate_spaces(n)}
        assert by_preorder == set(enumerate_open_families(n))


@given(st.integers(0, 354))
def test_closure_is_a_closure_operator(k):
    X = enumerate_spaces(4)[k]
    for S in range(1 << X.size):
        c = closure(X, S)
        assert S & ~c == 0 and closure(X, c) == c
        assert interior(X, S) == X.full ^ closure(X, X.full ^ S)
    assert space_connected(X) == (not has_nontrivial_clopen(X))


@given(st.integers(0, 354))
def test_standard_contact_on_four_points(k):
    X = enumerate_spaces(4)[k]
    rca = regular_closed_algebra(X)
    S = standard_contact(rca)
    assert check_contact_axioms(rca.algebra, S.contact, ["C1", "C2", "C3", "C4"]).holds
    assert check_connected(S).holds == space_connected(X)


def test_quasi_open_maps_are_skeletal_small():
    spaces = [X for n in range(3) for X in enumerate_spaces(n)]
    for X, Y in itertools.product(spaces, repeat=2):
        for f in enumerate_maps(X, Y):
            props = map_properties(f)
            assert not props.quasi_open or props.skeletal


def test_discrete_mvd_connectivity():
    for n in range(1, 5):
        D = discrete_space([f"x{i}" for i in range(n)])
        M = standard_mvd(D)
        assert M.wellinside == kappa(standard_lca(D)).wellinside
        assert check_connected(M).holds == space_connected(D)

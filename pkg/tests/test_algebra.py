import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mereo.algebra import (
    CompleteHomomorphism,
    adjoint_apply,
    apply,
    boolean_op,
    check_galois,
    eval_element,
    hom_from_atom_map,
    hom_from_table,
    make_algebra,
)
from mereo.errors import (
    CapacityExceeded,
    DuplicateLabel,
    ExpressionSyntaxError,
    InvalidLabel,
    NotAHomomorphism,
    NotAnAtom,
    UnknownAtom,
)

from conftest import alg, algebras, homs


def test_sizes_and_degenerate_algebra():
    assert make_algebra(["p", "q"]).size == 4
    A = make_algebra([])
    assert A.size == 1 and A.zero == A.one


@pytest.mark.parametrize("labels, exc", [
    (["p", "p"], DuplicateLabel),
    (["p-q"], InvalidLabel),
    ([""], InvalidLabel),
    (["1"], InvalidLabel),
])
def test_bad_labels(labels, exc):
    with pytest.raises(exc):
        make_algebra(labels)


def test_eval_element():
    A = alg(3)
    assert eval_element(A, "p|q").bits == 0b011
    assert eval_element(alg(2), "1").bits == 0b11
    assert eval_element(A, " r | p ").bits == 0b101
    with pytest.raises(UnknownAtom):
        eval_element(A, "p|s")
    with pytest.raises(ExpressionSyntaxError):
        eval_element(A, "p||q")
    with pytest.raises(ExpressionSyntaxError):
        eval_element(A, "p&q")


def test_boolean_ops():
    A = alg(2)
    p, q = A.atom("p"), A.atom("q")
    assert boolean_op("meet", p | q, q) == q
    assert boolean_op("complement", p) == q
    assert boolean_op("leq", p, p | q) is True
    assert boolean_op("join", p, q) == A.one


@given(algebras(0, 4), st.data())
def test_tables_match_set_semantics(A, data):
    a = data.draw(st.integers(0, A.size - 1))
    b = data.draw(st.integers(0, A.size - 1))
    sa = {i for i in range(A.n) if a >> i & 1}
    sb = {i for i in range(A.n) if b >> i & 1}
    as_bits = lambda s: sum(1 << i for i in s)
    assert A.meet_table[a, b] == as_bits(sa & sb)
    assert A.join_table[a, b] == as_bits(sa | sb)
    assert A.complement_table[a] == as_bits(set(range(A.n)) - sa)
    assert A.leq_table[a, b] == (sa <= sb)


def test_example_hom(example_hom):
    phi = example_hom
    A, B = phi.domain, phi.codomain
    assert str(apply(phi, A.atom("a1"))) == "b1|b2"
    assert str(apply(phi, A.atom("a2"))) == "b3"
    assert apply(phi, A.zero) == B.zero and apply(phi, A.one) == B.one
    assert str(adjoint_apply(phi, B.atom("b2"))) == "a1"
    assert adjoint_apply(phi, B.zero) == A.zero
    assert adjoint_apply(phi, eval_element(B, "b1|b3")) == A.one
    assert check_galois(phi).holds


def test_hom_from_table_round_trip(example_hom):
    phi = example_hom
    table = {phi.domain.element(i): phi.codomain.element(int(v)) for i, v in enumerate(phi.table())}
    assert hom_from_table(phi.domain, phi.codomain, table) == phi
    ident = {e: e for e in phi.domain.elements()}
    assert hom_from_table(phi.domain, phi.domain, ident) == CompleteHomomorphism.identity(phi.domain)


def test_hom_from_table_rejects_non_join_preserving():
    A = alg(2)
    table = {e: e for e in A.elements()}
    table[A.one] = A.atom("p")
    with pytest.raises(NotAHomomorphism):
        hom_from_table(A, A, table)
    table = {A.zero: A.zero, A.atom("p"): A.atom("p"), A.atom("q"): A.zero, A.one: A.one}
    with pytest.raises(NotAHomomorphism) as err:
        hom_from_table(A, A, table)
    assert [str(w) for w in err.value.witness] == ["p", "q"]


def test_atom_map_must_name_atoms():
    A, B = alg(2, "a"), alg(1, "b")
    with pytest.raises(NotAnAtom):
        hom_from_atom_map(A, B, {"b1": "a1|a2"})
    assert hom_from_atom_map(A, A, {"a1": "a1", "a2": "a2"}) == CompleteHomomorphism.identity(A)


def _oracle_phi(phi, a):
    # phi(a) = join of the codomain atoms q with g(q) <= a
    return sum(1 << q for q, g in enumerate(phi.atom_map) if a >> g & 1)


def _oracle_adjoint(phi):
    # meet of all a with b <= phi(a), by brute force
    A, B = phi.domain, phi.codomain
    out = []
    for b in range(B.size):
        best = A.top_bits
        for a in range(A.size):
            if b & ~_oracle_phi(phi, a) == 0:
                best &= a
        out.append(best)
    return out


@given(homs())
def test_hom_tables_against_oracle(phi):
    A = phi.domain
    assert list(phi.table()) == [_oracle_phi(phi, a) for a in range(A.size)]
    assert list(phi.adjoint_table()) == _oracle_adjoint(phi)


@given(homs())
def test_hom_laws_and_injectivity(phi):
    P = phi.table()
    A, B = phi.domain, phi.codomain
    assert np.array_equal(P[A.meet_table], P[:, None] & P[None, :])
    assert np.array_equal(P[A.complement_table], B.top_bits ^ P)
    assert phi.is_injective == (len(set(P)) == A.size)
    assert phi.is_surjective == (set(P) == set(range(B.size)))


def test_galois_exhaustive_small():
    for m, k in itertools.product(range(1, 4), range(0, 4)):
        A, B = alg(m, "a"), alg(k, "b")
        for images in itertools.product(range(m), repeat=k):
            phi = CompleteHomomorphism(A, B, images)
            assert check_galois(phi).holds
            for b in B.elements():
                assert adjoint_apply(phi, b).bits == phi.adjoint_table()[b.bits]


def test_galois_detects_wrong_adjoint(example_hom):
    bad = example_hom.adjoint_table().copy()
    bad[1] = example_hom.domain.top_bits
    rep = check_galois(example_hom, adjoint=bad)
    assert not rep.holds and "Lambda" in rep.witnesses


def test_capacity(monkeypatch):
    monkeypatch.setenv("MEREO_MAX_ATOMS", "2")
    with pytest.raises(CapacityExceeded):
        check_galois(CompleteHomomorphism.identity(alg(3)))

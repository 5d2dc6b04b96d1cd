import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mereo.algebra import CompleteHomomorphism, hom_from_atom_map
from mereo.contact import WELLINSIDE, BinaryRelation, contact_from_atom_graph
from mereo.equivalence import kappa
from mereo.errors import AlgebraMismatch, KindMismatch
from mereo.lab import homs_between, meet_preserving_tables
from mereo.morphisms import (
    CATEGORY_PAIRS,
    DLC_AXIOMS,
    L_AXIOMS,
    MVDLC_AXIOMS,
    S_AXIOMS,
    MeetFunctionTable,
    check_function_axioms,
    check_morphism_axiom,
    classify,
    compose_dhlc,
    compose_mvdhlc,
)
from mereo.structures import LocalContactStructure, MvdStructure

from conftest import alg, overlap_lca


# brute-force readings of the axioms


def _phi(phi, a):
    return int(phi.table()[a])


def _adj(phi, b):
    # meet of all a with b <= phi(a)
    A = phi.domain
    out = A.top_bits
    for a in range(A.size):
        if b & ~_phi(phi, a) == 0:
            out &= a
    return out


def _ll(alg_, C, a, b):
    return not C[a, alg_.top_bits ^ b]


def oracle_l(phi, src, dst, axiom):
    A, B = phi.domain, phi.codomain
    rho, eta = src.contact.matrix, dst.contact.matrix
    bd = {e.bits for e in src.bounded}
    bd2 = {e.bits for e in dst.bounded}
    P = lambda a: _phi(phi, a)
    Q = lambda b: _adj(phi, b)
    As = range(A.size)
    if axiom == "L1":
        return all(rho[a, b] for a in As for b in As if eta[P(a), P(b)])
    if axiom == "L1p":
        return all(_ll(B, eta, P(a), P(b)) for a in As for b in As if _ll(A, rho, a, b))
    if axiom == "L2":
        return all(Q(b) in bd for b in bd2)
    if axiom == "L3":
        return all(P(a) in bd2 for a in bd)
    if axiom == "LO":
        return all(eta[b, P(a)] for a in As for b in bd2 if rho[Q(b), a])
    if axiom == "LOalt":
        return all(_ll(A, rho, Q(b), a) for a in As for b in bd2 if _ll(B, eta, b, P(a)))
    if axiom == "LS":
        return all(eta[a, b] for a in bd2 for b in bd2 if rho[Q(a), Q(b)])
    if axiom == "LSp":
        return all(_ll(A, rho, Q(a), A.top_bits ^ Q(B.top_bits ^ b))
                   for a in bd2 for b in bd2 if _ll(B, eta, a, b))
    if axiom == "IS":
        return _ultra(A, B, lambda b, a: rho[Q(b), a], bd, bd2)
    raise KeyError(axiom)


def _ultra(A, B, related, bd, bd2):
    def bounded_atoms(X, bset):
        return [i for i in range(X.n) if any(b >> i & 1 for b in bset)]

    for p in bounded_atoms(A, bd):
        ups_p = [a for a in range(A.size) if a >> p & 1]
        if not any(all(related(b, a) for b in range(B.size) if b >> q & 1 for a in ups_p)
                   for q in bounded_atoms(B, bd2)):
            return False
    return True


def _rho_m(X, W):
    top, comp = X.top_bits, X.complement_table
    return np.array([[any(W[c, top] and not W[c & a, comp[c & b]] for c in range(X.size))
                      for b in range(X.size)] for a in range(X.size)])


def _s1_side(X, W, a, b):
    # for all c << 1: c & a << c* | b
    top = X.top_bits
    return all(W[c & a, (top ^ c) | b] for c in range(X.size) if W[c, top])


def oracle_s(phi, src, dst, axiom):
    A, B = phi.domain, phi.codomain
    W, W2 = src.wellinside.matrix, dst.wellinside.matrix
    P = lambda a: _phi(phi, a)
    Q = lambda b: _adj(phi, b)
    As, Bs = range(A.size), range(B.size)
    ta, tb = A.top_bits, B.top_bits
    if axiom == "S1":
        return all(_s1_side(B, W2, P(a), P(b)) for a in As for b in As if _s1_side(A, W, a, b))
    if axiom == "S2":
        return all(W[Q(b), ta] for b in Bs if W2[b, tb])
    if axiom == "ES1":
        return all(W2[P(a), P(b)] for a in As for b in As if W[a, b])
    if axiom == "S3":
        return all(W2[P(a), tb] for a in As if W[a, ta])
    if axiom == "SO":
        return all(W[Q(b), a] for a in As for b in Bs if W2[b, P(a)])
    if axiom in ("CS", "LSpp"):
        guard = (lambda a, b: W2[a, tb] and W2[b, tb]) if axiom == "LSpp" else (lambda a, b: True)
        return all(W[Q(a), ta ^ Q(tb ^ b)] for a in Bs for b in Bs if W2[a, b] and guard(a, b))
    if axiom == "ISp":
        rho = _rho_m(A, W)
        bd = {a for a in As if W[a, ta]}
        bd2 = {b for b in Bs if W2[b, tb]}
        return _ultra(A, B, lambda b, a: rho[Q(b), a], bd, bd2)
    raise KeyError(axiom)


def _join(vals):
    out = 0
    for v in vals:
        out |= v
    return out


def oracle_dlc(psi, src, dst, axiom):
    A, B = psi.domain, psi.codomain
    f = psi.values
    rho, eta = src.contact.matrix, dst.contact.matrix
    bd = {e.bits for e in src.bounded}
    bd2 = {e.bits for e in dst.bounded}
    As = range(A.size)
    if axiom == "DLC1":
        return f[0] == 0
    if axiom == "DLC2":
        return all(f[a & b] == f[a] & f[b] for a in As for b in As)
    if axiom == "DLC3":
        return all(_ll(B, eta, B.top_bits ^ f[A.top_bits ^ a], f[b])
                   for a in bd for b in As if _ll(A, rho, a, b))
    if axiom == "DLC4":
        return all(any(b & ~f[a] == 0 for a in bd) for b in bd2)
    if axiom == "DLC5":
        return all(f[a] == _join(f[b] for b in bd if _ll(A, rho, b, a)) for a in As)
    raise KeyError(axiom)


def oracle_mvdlc(psi, src, dst, axiom):
    A, B = psi.domain, psi.codomain
    f = psi.values
    W, W2 = src.wellinside.matrix, dst.wellinside.matrix
    ta, tb = A.top_bits, B.top_bits
    As, Bs = range(A.size), range(B.size)
    if axiom == "MVDLC1":
        return f[0] == 0
    if axiom == "MVDLC2":
        return all(f[a & b] == f[a] & f[b] for a in As for b in As)
    if axiom == "MVDLC3":
        return all(W2[(tb ^ f[ta ^ a]) & c, f[b] | (tb ^ c)]
                   for a in As for b in As if W[a, b] for c in Bs if W2[c, tb])
    if axiom == "MVDLC4":
        return all(any(b & ~f[a] == 0 for a in As if W[a, ta]) for b in Bs if W2[b, tb])
    if axiom == "MVDLC5":
        return all(f[a] == _join(f[b] for b in As if W[b, a]) for a in As)
    raise KeyError(axiom)


# strategies over pre-structures (axioms of the objects not required)


@st.composite
def lca_pre(draw, A):
    pairs = list(itertools.combinations(A.atom_labels, 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    mask = draw(st.integers(0, (1 << A.size) - 1))
    bounded = frozenset(A.element(e) for e in range(A.size) if mask >> e & 1)
    return LocalContactStructure(A, contact_from_atom_graph(A, edges), bounded)


@st.composite
def mvd_pre(draw, A):
    bits = draw(st.lists(st.booleans(), min_size=A.size ** 2, max_size=A.size ** 2))
    W = np.array(bits, bool).reshape(A.size, A.size) & A.leq_table
    if draw(st.booleans()):
        W |= A.leq_table & draw(st.booleans())
    return MvdStructure(A, BinaryRelation(A, W, WELLINSIDE))


@st.composite
def hom_case(draw, make):
    m, k = draw(st.integers(1, 2)), draw(st.integers(0, 2))
    A, B = alg(m, "a"), alg(k, "b")
    images = draw(st.lists(st.integers(0, m - 1), min_size=k, max_size=k))
    return CompleteHomomorphism(A, B, images), draw(make(A)), draw(make(B))


@given(hom_case(lca_pre))
def test_l_side_against_oracle(case):
    phi, src, dst = case
    for axiom in L_AXIOMS:
        assert check_morphism_axiom(phi, src, dst, axiom).holds == oracle_l(phi, src, dst, axiom), axiom


@given(hom_case(mvd_pre))
def test_s_side_against_oracle(case):
    phi, src, dst = case
    for axiom in S_AXIOMS:
        assert check_morphism_axiom(phi, src, dst, axiom).holds == oracle_s(phi, src, dst, axiom), axiom


@st.composite
def table_case(draw, make):
    m, k = draw(st.integers(0, 2)), draw(st.integers(0, 2))
    A, B = alg(m, "a"), alg(k, "b")
    vals = draw(st.lists(st.integers(0, B.size - 1), min_size=A.size, max_size=A.size))
    return MeetFunctionTable(A, B, vals), draw(make(A)), draw(make(B))


@given(table_case(lca_pre))
def test_dlc_against_oracle(case):
    psi, src, dst = case
    rep = check_function_axioms(psi, src, dst, DLC_AXIOMS)
    for axiom in DLC_AXIOMS:
        assert rep[axiom].holds == oracle_dlc(psi, src, dst, axiom), axiom


@given(table_case(mvd_pre))
def test_mvdlc_against_oracle(case):
    psi, src, dst = case
    rep = check_function_axioms(psi, src, dst, MVDLC_AXIOMS)
    for axiom in MVDLC_AXIOMS:
        assert rep[axiom].holds == oracle_mvdlc(psi, src, dst, axiom), axiom


# worked examples


def test_identity_examples():
    A = alg(2)
    L = overlap_lca(A)
    ident = CompleteHomomorphism.identity(A)
    assert check_morphism_axiom(ident, L, L, "L1").holds
    assert check_morphism_axiom(ident, L, L, "L2").holds


def test_example_hom_ls_and_lo(example_hom):
    phi = example_hom
    src, dst = overlap_lca(phi.domain), overlap_lca(phi.codomain)
    ls = check_morphism_axiom(phi, src, dst, "LS")["LS"]
    assert not ls.holds
    assert {k: str(v) for k, v in ls.witness.items()} == {"a": "b1", "b": "b2"}
    assert check_morphism_axiom(phi, src, dst, "LO").holds


def test_function_table_examples():
    A = alg(2)
    L = overlap_lca(A)
    rep = check_function_axioms(MeetFunctionTable.identity(A), L, L, DLC_AXIOMS)
    assert rep.holds
    zero = MeetFunctionTable.zero(A, A)
    rep = check_function_axioms(zero, L, L, DLC_AXIOMS)
    assert rep["DLC1"].holds and rep["DLC2"].holds and rep["DLC5"].holds
    assert not rep["DLC4"].holds and str(rep["DLC4"].witness["b"]) == "p"
    # at a = b = 0 the conclusion (psi(1))* << psi(0) reads 1 << 0
    assert not rep["DLC3"].holds
    assert {k: str(v) for k, v in rep["DLC3"].witness.items()} == {"a": "0", "b": "0"}
    vals = list(range(4))
    vals[1] = 3                                    # psi(p) & psi(q) = q but psi(0) = 0
    rep = check_function_axioms(MeetFunctionTable(A, A, vals), L, L, ["DLC2"])
    assert not rep.holds and {str(v) for v in rep["DLC2"].witness.values()} == {"p", "q"}


def test_mismatched_inputs():
    A, B = alg(2), alg(1)
    ident = CompleteHomomorphism.identity(A)
    with pytest.raises(AlgebraMismatch):
        check_morphism_axiom(ident, overlap_lca(A), overlap_lca(B), "L1")
    with pytest.raises(KindMismatch):
        check_morphism_axiom(ident, kappa(overlap_lca(A)), kappa(overlap_lca(A)), "L1")


def test_compose_examples():
    A = alg(2)
    L = overlap_lca(A)
    M = kappa(L)
    ident = MeetFunctionTable.identity(A)
    assert compose_dhlc(ident, ident, L) == ident
    assert compose_dhlc(compose_dhlc(ident, ident, L), ident, L) == ident
    assert compose_mvdhlc(ident, ident, M) == ident
    zero = MeetFunctionTable.zero(A, A)
    for psi in meet_preserving_tables(A, A):
        assert compose_dhlc(psi, zero, L) == zero
        assert compose_mvdhlc(psi, zero, M) == zero


@pytest.mark.parametrize("m, k", [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)])
def test_dlc_valid_tables_on_overlap_are_the_homs(m, k):
    A, B = alg(m, "a"), alg(k, "b")
    L, L2 = overlap_lca(A), overlap_lca(B)
    valid = {t.values for t in meet_preserving_tables(A, B)
             if check_function_axioms(t, L, L2, DLC_AXIOMS).holds}
    homs = {tuple(int(v) for v in phi.table()) for phi in homs_between(A, B)}
    assert valid == homs


def test_meet_preserving_tables_are_complete():
    A, B = alg(2, "a"), alg(1, "b")
    expected = set()
    for vals in itertools.product(range(B.size), repeat=A.size):
        t = MeetFunctionTable(A, B, vals)
        if vals[0] == 0 and all(vals[a & b] == vals[a] & vals[b] for a in range(4) for b in range(4)):
            expected.add(t.values)
    assert {t.values for t in meet_preserving_tables(A, B)} == expected


def test_classify_identity():
    A = alg(2)
    L = overlap_lca(A)
    cm = classify(CompleteHomomorphism.identity(A), L, L)
    for p in CATEGORY_PAIRS:
        lf, sf = cm.pair(p.l_name)
        # the overlap structure on two atoms is not connected
        assert (lf, sf) == ((False, False) if p.connected else (True, True)), p.l_name
    cm2 = classify(CompleteHomomorphism.identity(A), kappa(L), kappa(L))
    assert cm2.flags == cm.flags


def test_classify_example_hom(example_hom):
    phi = example_hom
    cm = classify(phi, overlap_lca(phi.domain), overlap_lca(phi.codomain))
    assert cm.pair("SigmaSKAL") == (False, False)
    assert not cm.l_report["LS"].holds
    out = cm.to_json()
    assert any(v["axiom"] == "LS" and v["witness"] == {"a": "b1", "b": "b2"} for v in out["axioms"]["lca"])


def test_classify_non_injective():
    A, B = alg(3, "a"), alg(3, "b")
    phi = hom_from_atom_map(A, B, {"b1": "a1", "b2": "a1", "b3": "a2"})
    assert not phi.is_injective
    cm = classify(phi, overlap_lca(A), overlap_lca(B))
    for name in ("ISAL", "IOPAL"):
        assert cm.pair(name) == (False, False)


def test_classify_table():
    A = alg(2)
    L = overlap_lca(A)
    cm = classify(MeetFunctionTable.identity(A), L, L)
    assert cm.pair("DHLC") == (True, True)
    assert cm.pair("SKAL") == (None, None)

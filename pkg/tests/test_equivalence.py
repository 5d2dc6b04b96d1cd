import numpy as np
import pytest
from hypothesis import given, strategies as st

from mereo.contact import CONTACT, WELLINSIDE, BinaryRelation
from mereo.docs import canonical_key
from mereo.equivalence import (
    kappa,
    rho_m_existential,
    rho_m_forms_agree,
    rho_m_universal,
    roundtrip_report,
    tau,
)
from mereo.errors import KindMismatch
from mereo.lab import _all_relations, principal_row_family, valid_lcas, valid_mvds
from mereo.structures import LocalContactStructure, MvdStructure, make_lca

from conftest import alg, overlap_lca


def test_kappa_examples():
    A = alg(2)
    assert kappa(overlap_lca(A)).wellinside.matrix.tolist() == A.leq_table.tolist()
    M = kappa(make_lca(A, BinaryRelation.overlap(A), [A.zero]))
    assert [(str(a), str(b)) for a, b in M.wellinside.pairs()] == [("0", b) for b in ("0", "p", "q", "1")]
    A0 = alg(0)
    L0 = LocalContactStructure(A0, BinaryRelation(A0, np.zeros((1, 1), bool), CONTACT), frozenset({A0.zero}))
    assert kappa(L0).wellinside.matrix.tolist() == [[True]]
    # the bounded conjunct still applies when 0 = 1
    L0 = LocalContactStructure(A0, BinaryRelation(A0, np.zeros((1, 1), bool), CONTACT), frozenset())
    assert kappa(L0).wellinside.matrix.tolist() == [[False]]


def test_tau_examples():
    A = alg(2)
    L = tau(MvdStructure(A, BinaryRelation.order(A)))
    assert canonical_key(L) == canonical_key(overlap_lca(A))
    L = tau(MvdStructure(A, BinaryRelation(A, np.zeros((4, 4), bool), WELLINSIDE)))
    assert L.bounded == frozenset() and not L.contact.matrix.any()
    A0 = alg(0)
    L = tau(MvdStructure(A0, BinaryRelation.order(A0)))
    assert L.bounded == frozenset({A0.zero})


def _oracle_rho(A, W):
    # a rho b iff some c << 1 has not (c & a << (c & b)*), by direct loops
    top, comp = A.top_bits, A.complement_table
    out = np.zeros((A.size, A.size), bool)
    for a in range(A.size):
        for b in range(A.size):
            out[a, b] = any(W[c, top] and not W[c & a, comp[c & b]] for c in range(A.size))
    return out


def test_rho_forms_exhaustive_two_atoms():
    A = alg(2)
    W = _all_relations(A)
    u = rho_m_universal(A, W)
    e = rho_m_existential(A, W)
    assert np.array_equal(u, e)
    for k in range(0, len(W), 4099):
        assert np.array_equal(e[k], _oracle_rho(A, W[k]))


def test_rho_forms_sampled_three_atoms():
    A = alg(3)
    rng = np.random.default_rng(7)
    W = rng.random((10_000, 8, 8)) < 0.5
    assert np.array_equal(rho_m_universal(A, W), rho_m_existential(A, W))


@given(st.integers(0, 60749))
def test_rho_oracle_on_family(k):
    A = alg(3)
    W = principal_row_family(A)[k]
    assert np.array_equal(rho_m_existential(A, W), _oracle_rho(A, W))
    ok, w = rho_m_forms_agree(MvdStructure(A, BinaryRelation(A, W, WELLINSIDE)))
    assert ok and w is None


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_round_trips_on_valid_structures(n):
    lcas = valid_lcas(n)
    mvds = valid_mvds(n)
    assert len(lcas) == 1 and len(mvds) == 1
    for L in lcas:
        rep = roundtrip_report(L)
        assert rep.ok and rep.forward_ok and rep.image_valid
        assert canonical_key(kappa(L)) == canonical_key(mvds[0])
    for M in mvds:
        rep = roundtrip_report(M)
        assert rep.ok and rep.backward_ok and rep.image_valid
        assert canonical_key(tau(M)) == canonical_key(lcas[0])


def test_invalid_input_is_informational():
    A = alg(2)
    rep = roundtrip_report(make_lca(A, BinaryRelation.overlap(A), [A.zero, A.atom("p")]))
    assert not rep.guaranteed
    assert rep.to_json()["informational"] is True
    with pytest.raises(KindMismatch):
        roundtrip_report(A)

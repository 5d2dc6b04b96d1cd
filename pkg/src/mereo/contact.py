"""Contact and non-tangential inclusion relations on a finite Boolean algebra.

Relations are stored extensionally as a ``2^n x 2^n`` boolean matrix indexed
by element bit vectors, so relations that break every axiom can still be
checked.  Each checker builds an array of violations over the quantified
variables; the first true entry in C order is the reported witness, which
makes witnesses lexicographically least by bit-vector value.
"""

from __future__ import annotations

from typing import Callable, Iterable

import numpy as np

from .algebra import Element, FiniteBooleanAlgebra
from .errors import AlgebraMismatch, NotAnAtom, WrongFlavor, require_capacity
from .reports import AxiomReport, AxiomResult, bool_matmul, first_true, normalize_axiom_id, verdict

CONTACT = "contact"
WELLINSIDE = "wellinside"


class BinaryRelation:
    """An extensional binary relation tagged as contact or well-inside."""

    __slots__ = ("algebra", "matrix", "flavor")

    def __init__(self, algebra: FiniteBooleanAlgebra, matrix, flavor: str):
        if flavor not in (CONTACT, WELLINSIDE):
            raise ValueError(f"unknown relation flavor {flavor!r}")
        require_capacity(algebra.n, "extensional relations")
        m = np.array(matrix, dtype=bool)
        if m.shape != (algebra.size, algebra.size):
            raise ValueError(f"relation matrix must be {algebra.size}x{algebra.size}, got {m.shape}")
        m.setflags(write=False)
        self.algebra = algebra
        self.matrix = m
        self.flavor = flavor

    @classmethod
    def from_pairs(cls, algebra, pairs: Iterable[tuple], flavor: str) -> "BinaryRelation":
        m = np.zeros((algebra.size, algebra.size), dtype=bool)
        for a, b in pairs:
            m[algebra.element(a).bits, algebra.element(b).bits] = True
        return cls(algebra, m, flavor)

    @classmethod
    def order(cls, algebra: FiniteBooleanAlgebra) -> "BinaryRelation":
        """The well-inside relation equal to the Boolean order."""
        return cls(algebra, algebra.leq_table, WELLINSIDE)

    @classmethod
    def overlap(cls, algebra: FiniteBooleanAlgebra) -> "BinaryRelation":
        """The contact ``a C b`` iff ``a & b != 0``."""
        return cls(algebra, algebra.meet_table != 0, CONTACT)

    def holds(self, a, b) -> bool:
        return bool(self.matrix[self.algebra.element(a).bits, self.algebra.element(b).bits])

    def pairs(self) -> list[tuple[Element, Element]]:
        alg = self.algebra
        return [(Element(alg, int(i)), Element(alg, int(j))) for i, j in np.argwhere(self.matrix)]

    def replace(self, add=(), remove=()) -> "BinaryRelation":
        m = self.matrix.copy()
        for a, b in add:
            m[self.algebra.element(a).bits, self.algebra.element(b).bits] = True
        for a, b in remove:
            m[self.algebra.element(a).bits, self.algebra.element(b).bits] = False
        return BinaryRelation(self.algebra, m, self.flavor)

    def __len__(self) -> int:
        return int(self.matrix.sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryRelation):
            return NotImplemented
        return (
            self.flavor == other.flavor
            and self.algebra == other.algebra
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self) -> int:
        return hash((self.flavor, self.algebra, self.matrix.tobytes()))

    def __repr__(self) -> str:
        return f"BinaryRelation({self.flavor}, n={self.algebra.n}, pairs={len(self)})"


def _require_flavor(rel: BinaryRelation, flavor: str) -> None:
    if rel.flavor != flavor:
        raise WrongFlavor(f"expected a {flavor} relation, got {rel.flavor}")


def _neighbourhoods(algebra: FiniteBooleanAlgebra, edges) -> list[int]:
    nbr = [1 << i for i in range(algebra.n)]
    for edge in edges:
        ends = list(edge)
        if len(ends) == 1:
            ends = ends * 2
        if len(ends) != 2:
            raise NotAnAtom(f"edge {edge!r} must have two endpoints")
        idx = []
        for end in ends:
            e = algebra.element(end)
            if not e.is_atom:
                raise NotAnAtom(f"edge endpoint {e} is not an atom", witness=e)
            idx.append(e.bits.bit_length() - 1)
        i, j = idx
        nbr[i] |= 1 << j
        nbr[j] |= 1 << i
    return nbr


def contact_from_atom_graph(algebra: FiniteBooleanAlgebra, edges) -> BinaryRelation:
    """Contact induced by an undirected graph on atoms (every atom has a loop)."""
    require_capacity(algebra.n, "contact_from_atom_graph")
    nbr = _neighbourhoods(algebra, edges)
    reach = np.zeros(algebra.size, dtype=np.int64)
    for x in range(1, algebra.size):
        low = x & -x
        reach[x] = reach[x ^ low] | nbr[low.bit_length() - 1]
    idx = algebra.indices
    rel = BinaryRelation(algebra, (reach[:, None] & idx[None, :]) != 0, CONTACT)
    if __debug__:
        bad = check_contact_axioms(algebra, rel, ("C1", "C2", "C3", "C4")).failures()
        assert not bad, bad
    return rel


def atom_edges(rel: BinaryRelation) -> list[tuple[int, int]]:
    """Unordered atom pairs ``i < j`` related by ``rel``."""
    n = rel.algebra.n
    return [(i, j) for i in range(n) for j in range(i + 1, n) if rel.matrix[1 << i, 1 << j]]


def _flip_second(rel: BinaryRelation) -> np.ndarray:
    """``out[a, b] = not rel[a, b*]``."""
    return ~rel.matrix[:, rel.algebra.complement_table]


def wellinside_from_contact(C: BinaryRelation) -> BinaryRelation:
    _require_flavor(C, CONTACT)
    return BinaryRelation(C.algebra, _flip_second(C), WELLINSIDE)


def contact_from_wellinside(W: BinaryRelation) -> BinaryRelation:
    _require_flavor(W, WELLINSIDE)
    return BinaryRelation(W.algebra, _flip_second(W), CONTACT)


def is_atom_determined(C: BinaryRelation) -> tuple[bool, dict | None]:
    """Does ``C`` coincide with the graph contact over its own atom pairs?"""
    _require_flavor(C, CONTACT)
    alg = C.algebra
    induced = contact_from_atom_graph(alg, [(alg.atoms[i], alg.atoms[j]) for i, j in atom_edges(C)])
    hit = first_true(induced.matrix != C.matrix)
    if hit is None:
        return True, None
    return False, {"a": Element(alg, hit[0]), "b": Element(alg, hit[1])}


# contact axioms


def _c1(alg, C):
    idx = alg.indices
    return verdict("C1", (idx != 0) & ~C[idx, idx], "a", alg)


def _c2(alg, C):
    idx = alg.indices
    return verdict("C2", C & ((idx[:, None] == 0) | (idx[None, :] == 0)), "ab", alg)


def _c3(alg, C):
    return verdict("C3", C & ~C.T, "ab", alg)


def _c4(alg, C):
    lhs = C[:, alg.join_table]
    rhs = C[:, :, None] | C[:, None, :]
    return verdict("C4", lhs != rhs, "abc", alg)


def _c5(alg, C):
    # exists c: a(-C)c and b(-C)c*
    separated = bool_matmul(~C, _notc_comp(alg, C).T)
    return verdict("C5", ~C & ~separated, "ab", alg)


def _notc_comp(alg, C):
    return ~C[:, alg.complement_table]


def _c6(alg, C):
    idx = alg.indices
    exists = (~C[1:, :]).any(axis=0)
    return verdict("C6", (idx != alg.top_bits) & ~exists, "a", alg)


def _con(alg, C):
    idx = alg.indices
    nontrivial = (idx != 0) & (idx != alg.top_bits)
    return verdict("CON", nontrivial & ~C[idx, alg.complement_table], "a", alg)


CONTACT_CHECKS: dict[str, Callable] = {
    "C1": _c1, "C2": _c2, "C3": _c3, "C4": _c4, "C5": _c5, "C6": _c6, "CON": _con,
}


# well-inside axioms


def _mirror(alg, W):
    """``out[a, b] = W[b*, a*]``."""
    comp = alg.complement_table
    return W[comp][:, comp].T


def _ll1(alg, W):
    return verdict("ll1", W & ~alg.leq_table, "ab", alg)


def _ll2(alg, W):
    return verdict("ll2", np.bool_(not W[0, 0]), (), alg)


def _ll2p(alg, W):
    return verdict("ll2p", np.bool_(not W[alg.top_bits, alg.top_bits]), (), alg)


def _ll3(alg, W):
    leq = alg.leq_table
    # forced[b, t]: some c with b << c <= t
    forced = bool_matmul(W, leq)
    bad_ab = leq & bool_matmul(~W, forced.T)
    hit = first_true(bad_ab)
    if hit is None:
        return AxiomResult("ll3", True)
    a, b = hit
    missing = ~W[a]
    c = first_true(W[b] & (leq & missing[None, :]).any(axis=1))[0]
    t = first_true(leq[c] & missing)[0]
    return AxiomResult("ll3", False, {k: Element(alg, v) for k, v in zip("abct", (a, b, c, t))})


def _ll4(alg, W):
    viol = W[:, None, :] & W[None, :, :] & ~W[alg.join_table]
    return verdict("ll4", viol, "abc", alg)


def _ll4star(alg, W):
    idx = alg.indices
    viol = W[:, :, None] & W[:, None, :] & ~W[idx[:, None, None], alg.meet_table[None, :, :]]
    return verdict("ll4star", viol, "abc", alg)


def _ll5(alg, W):
    return verdict("ll5", W & ~bool_matmul(W, W), (("a", alg), ("c", alg)))


def _ll6(alg, W):
    idx = alg.indices
    return verdict("ll6", (idx != 0) & ~W[1:, :].any(axis=0), "a", alg)


def _ll7(alg, W):
    return verdict("ll7", W & ~_mirror(alg, W), "ab", alg)


def _mvd(alg, W):
    viol = W[:, alg.top_bits][:, None] & _mirror(alg, W) & ~W
    return verdict("MVD", viol, "ab", alg)


def _cona(alg, W):
    idx = alg.indices
    nontrivial = (idx != 0) & (idx != alg.top_bits)
    # rows a, columns c: c & a << a | c*
    inner = W[alg.meet_table, alg.join_table[:, alg.complement_table]]
    exists = (W[:, alg.top_bits][None, :] & ~inner).any(axis=1)
    return verdict("CONA", nontrivial & ~exists, "a", alg)


WELLINSIDE_CHECKS: dict[str, Callable] = {
    "ll1": _ll1, "ll2": _ll2, "ll3": _ll3, "ll4": _ll4, "ll5": _ll5, "ll6": _ll6, "ll7": _ll7,
    "ll2p": _ll2p, "ll4star": _ll4star, "MVD": _mvd, "CONA": _cona,
}

CONTACT_AXIOMS = ("C1", "C2", "C3", "C4", "C5", "C6", "CON")
WELLINSIDE_AXIOMS = ("ll1", "ll2", "ll3", "ll4", "ll5", "ll6", "ll7", "ll2p", "ll4star", "MVD")


def _run(checks, algebra, rel, which, default, what):
    require_capacity(algebra.n, what)
    if rel.algebra != algebra:
        raise AlgebraMismatch("relation belongs to a different algebra")
    ids = default if which is None else [normalize_axiom_id(w) for w in which]
    results = []
    for axiom in ids:
        try:
            fn = checks[axiom]
        except KeyError:
            raise KeyError(f"unknown axiom {axiom!r} for {what}") from None
        results.append(fn(algebra, rel.matrix))
    return AxiomReport(tuple(results))


def check_contact_axioms(algebra: FiniteBooleanAlgebra, C: BinaryRelation, which=None) -> AxiomReport:
    _require_flavor(C, CONTACT)
    return _run(CONTACT_CHECKS, algebra, C, which, CONTACT_AXIOMS, "check_contact_axioms")


def check_wellinside_axioms(algebra: FiniteBooleanAlgebra, W: BinaryRelation, which=None) -> AxiomReport:
    _require_flavor(W, WELLINSIDE)
    return _run(WELLINSIDE_CHECKS, algebra, W, which, WELLINSIDE_AXIOMS, "check_wellinside_axioms")

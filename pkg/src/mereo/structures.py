"""Contact algebras, local contact algebras and MVD-algebras.

Structures are built from raw data and never validated on construction:
validity is a report, so pre-structures that break some axioms are first
class values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .algebra import Element, FiniteBooleanAlgebra
from .contact import (
    CONTACT,
    WELLINSIDE,
    BinaryRelation,
    check_contact_axioms,
    check_wellinside_axioms,
    wellinside_from_contact,
)
from .errors import AlgebraMismatch, KindMismatch, WrongFlavor, require_capacity
from .reports import AxiomReport, bool_matmul, verdict

CA_AXIOMS = ("C1", "C2", "C3", "C4")
NCA_AXIOMS = CA_AXIOMS + ("C5", "C6")
LCA_AXIOMS = CA_AXIOMS + ("BB1", "BB2", "BB3", "BC1", "BC2", "BC3")
MVD_AXIOMS = ("ll1", "ll2", "ll3", "ll4", "ll5", "ll6", "ll4star", "MVD")


def _check_relation(algebra, rel, flavor):
    if rel.algebra != algebra:
        raise AlgebraMismatch("relation belongs to a different algebra")
    if rel.flavor != flavor:
        raise WrongFlavor(f"expected a {flavor} relation, got {rel.flavor}")


@dataclass(frozen=True)
class ContactStructure:
    algebra: FiniteBooleanAlgebra
    contact: BinaryRelation

    def __post_init__(self):
        _check_relation(self.algebra, self.contact, CONTACT)

    @cached_property
    def report(self) -> AxiomReport:
        return check_contact_axioms(self.algebra, self.contact, CA_AXIOMS)

    @property
    def is_valid(self) -> bool:
        return self.report.holds

    @cached_property
    def is_normal(self) -> bool:
        return check_contact_axioms(self.algebra, self.contact, ("C5", "C6")).holds

    @cached_property
    def is_connected(self) -> bool:
        return check_contact_axioms(self.algebra, self.contact, ("CON",)).holds

    @cached_property
    def wellinside(self) -> BinaryRelation:
        return wellinside_from_contact(self.contact)


@dataclass(frozen=True)
class LocalContactStructure:
    """A triple ``(B, rho, bounded)``; ``bounded`` is stored extensionally."""

    algebra: FiniteBooleanAlgebra
    contact: BinaryRelation
    bounded: frozenset

    def __post_init__(self):
        _check_relation(self.algebra, self.contact, CONTACT)
        members = frozenset(self.algebra.element(b) for b in self.bounded)
        object.__setattr__(self, "bounded", members)

    @classmethod
    def with_generator(cls, algebra, contact, generator) -> "LocalContactStructure":
        """Bounded elements = the principal down-set of ``generator``."""
        g = algebra.element(generator)
        return cls(algebra, contact, frozenset(e for e in algebra.elements() if e <= g))

    @cached_property
    def bounded_vector(self) -> np.ndarray:
        vec = np.zeros(self.algebra.size, dtype=bool)
        for e in self.bounded:
            vec[e.bits] = True
        vec.setflags(write=False)
        return vec

    @cached_property
    def wellinside(self) -> BinaryRelation:
        return wellinside_from_contact(self.contact)

    def bounded_generator(self) -> Element | None:
        """The generator ``g`` when ``bounded`` is exactly the down-set of ``g``."""
        bits = 0
        for e in self.bounded:
            bits |= e.bits
        g = Element(self.algebra, bits)
        down = {e for e in self.algebra.elements() if e <= g}
        return g if down == self.bounded else None

    @property
    def bounded_is_improper(self) -> bool:
        """Informational: every element is bounded."""
        return len(self.bounded) == self.algebra.size

    @cached_property
    def report(self) -> AxiomReport:
        return check_lca_axioms(self)

    @property
    def is_valid(self) -> bool:
        return self.report.holds

    @cached_property
    def is_connected(self) -> bool:
        return check_connected(self).holds


@dataclass(frozen=True)
class MvdStructure:
    algebra: FiniteBooleanAlgebra
    wellinside: BinaryRelation

    def __post_init__(self):
        _check_relation(self.algebra, self.wellinside, WELLINSIDE)

    @cached_property
    def report(self) -> AxiomReport:
        return check_mvd_axioms(self)

    @property
    def is_valid(self) -> bool:
        return self.report.holds

    @cached_property
    def is_connected(self) -> bool:
        return check_connected(self).holds


@dataclass(frozen=True)
class Ultrafilter:
    """The principal ultrafilter of an atom."""

    principal_atom: Element
    bounded: bool

    def __contains__(self, element: Element) -> bool:
        return self.principal_atom <= element


def _bb1(alg, B):
    return verdict("BB1", np.bool_(not B[0]), (), alg)


def _bb2(alg, B):
    return verdict("BB2", alg.leq_table & B[None, :] & ~B[:, None], "ab", alg)


def _bb3(alg, B):
    return verdict("BB3", B[:, None] & B[None, :] & ~B[alg.join_table], "ab", alg)


def _bc1(alg, B, W):
    # exists b in bounded with a << b << c
    through = bool_matmul(W & B[None, :], W)
    return verdict("BC1", B[:, None] & W & ~through, (("a", alg), ("c", alg)))


def _bc2(alg, B, C):
    # rows a, b; axis c: a rho (c & b)
    reach = C[:, alg.meet_table.T] & B[None, None, :]
    return verdict("BC2", C & ~reach.any(axis=2), "ab", alg)


def _bc3(alg, B, W):
    idx = alg.indices
    candidates = B & (idx != 0)
    exists = (W & candidates[:, None]).any(axis=0)
    return verdict("BC3", (idx != 0) & ~exists, "a", alg)


def check_lca_axioms(L: LocalContactStructure, which=None) -> AxiomReport:
    alg = L.algebra
    require_capacity(alg.n, "check_lca_axioms")
    ids = LCA_AXIOMS if which is None else tuple(which)
    B, C, W = L.bounded_vector, L.contact.matrix, L.wellinside.matrix
    lca_checks = {
        "BB1": lambda: _bb1(alg, B),
        "BB2": lambda: _bb2(alg, B),
        "BB3": lambda: _bb3(alg, B),
        "BC1": lambda: _bc1(alg, B, W),
        "BC2": lambda: _bc2(alg, B, C),
        "BC3": lambda: _bc3(alg, B, W),
    }
    contact_ids = [i for i in ids if i not in lca_checks]
    contact_report = check_contact_axioms(alg, L.contact, contact_ids) if contact_ids else AxiomReport()
    by_id = {e.axiom: e for e in contact_report}
    return AxiomReport(tuple(by_id[i] if i in by_id else lca_checks[i]() for i in ids))


def check_mvd_axioms(M: MvdStructure, which=None) -> AxiomReport:
    return check_wellinside_axioms(M.algebra, M.wellinside, MVD_AXIOMS if which is None else which)


def check_connected(S) -> AxiomReport:
    """CON for contact-based structures, CONA for MVD structures."""
    if isinstance(S, MvdStructure):
        return check_wellinside_axioms(S.algebra, S.wellinside, ("CONA",))
    if isinstance(S, (ContactStructure, LocalContactStructure)):
        return check_contact_axioms(S.algebra, S.contact, ("CON",))
    raise KindMismatch(f"cannot check connectedness of {type(S).__name__}")


def bounded_ultrafilters(L: LocalContactStructure) -> list[Ultrafilter]:
    """Atoms whose principal ultrafilter meets the bounded set."""
    out = []
    for p in L.algebra.atoms:
        if any(p <= b for b in L.bounded):
            out.append(Ultrafilter(p, True))
    return out


def _element_permutation(n: int, perm: tuple[int, ...]) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    for i, j in enumerate(perm):
        out |= ((idx >> i) & 1) << j
    return out


def structures_isomorphic(X, Y, kind: str = "CA") -> dict[str, str] | None:
    """Search atom permutations for an isomorphism; returns ``label -> label``.

    ``kind`` is ``"CA"`` (contact only) or ``"LCA"`` (contact and bounded set).
    """
    kind = kind.upper()
    if kind not in ("CA", "LCA"):
        raise KindMismatch(f"unknown isomorphism kind {kind!r}")
    if kind == "LCA" and not (isinstance(X, LocalContactStructure) and isinstance(Y, LocalContactStructure)):
        raise KindMismatch("LCA isomorphism needs two local contact structures")
    n = X.algebra.n
    if Y.algebra.n != n:
        return None
    require_capacity(n, "structures_isomorphic", cap=6)
    CX, CY = X.contact.matrix, Y.contact.matrix
    for perm in itertools.permutations(range(n)):
        m = _element_permutation(n, perm)
        if not np.array_equal(CY[np.ix_(m, m)], CX):
            continue
        if kind == "LCA" and not np.array_equal(Y.bounded_vector[m], X.bounded_vector):
            continue
        return {X.algebra.atom_labels[i]: Y.algebra.atom_labels[j] for i, j in enumerate(perm)}
    return None


def make_lca(algebra: FiniteBooleanAlgebra, contact: BinaryRelation, bounded: Iterable | None = None,
             generator=None) -> LocalContactStructure:
    """Convenience constructor accepting either an element list or a generator."""
    if generator is not None:
        return LocalContactStructure.with_generator(algebra, contact, generator)
    return LocalContactStructure(algebra, contact, frozenset(bounded or ()))

"""Finite Boolean algebras, complete homomorphisms and their lower adjoints.

A finite Boolean algebra is the powerset of its atoms, so an element is a
bit vector over the atoms: bit ``i`` is set iff atom ``i`` lies below the
element.  A complete homomorphism ``phi: A -> B`` is encoded by its atom
map ``g``, which sends every atom ``q`` of ``B`` to the unique atom of ``A``
whose image lies above ``q``; then ``phi(a)`` is the join of the atoms
``q`` with ``g(q) <= a``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    HARD_CEILING,
    AlgebraMismatch,
    DuplicateLabel,
    ExpressionSyntaxError,
    InternalMismatch,
    InvalidLabel,
    NotAHomomorphism,
    NotAnAtom,
    NotComplete,
    TooManyAtoms,
    UnknownAtom,
    pair_cap,
    require_capacity,
)

_LABEL = re.compile(r"[A-Za-z0-9_]+\Z")
_RESERVED = frozenset({"0", "1"})


@dataclass(frozen=True)
class FiniteBooleanAlgebra:
    """The Boolean algebra of all subsets of ``atom_labels``."""

    atom_labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.atom_labels)
        object.__setattr__(self, "atom_labels", labels)
        if len(labels) > HARD_CEILING:
            raise TooManyAtoms(f"at most {HARD_CEILING} atoms are supported, got {len(labels)}")
        seen = set()
        for label in labels:
            if not isinstance(label, str) or not _LABEL.match(label):
                raise InvalidLabel(f"atom label {label!r} must match [A-Za-z0-9_]+")
            if label in _RESERVED:
                raise InvalidLabel(f"atom label {label!r} collides with the constants 0 and 1")
            if label in seen:
                raise DuplicateLabel(f"atom label {label!r} occurs twice")
            seen.add(label)

    @property
    def n(self) -> int:
        return len(self.atom_labels)

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def top_bits(self) -> int:
        return self.size - 1

    @cached_property
    def _index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.atom_labels)}

    def atom_index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownAtom(f"unknown atom {label!r}", witness=label) from None

    # elements

    def element(self, value: "Element | str | int") -> "Element":
        """Coerce an expression, a bit vector or an element of this algebra."""
        if isinstance(value, Element):
            if value.algebra != self:
                raise AlgebraMismatch(f"{value} belongs to a different algebra")
            return value
        if isinstance(value, str):
            return eval_element(self, value)
        return Element(self, int(value))

    @property
    def zero(self) -> "Element":
        return Element(self, 0)

    @property
    def one(self) -> "Element":
        return Element(self, self.top_bits)

    @property
    def atoms(self) -> list["Element"]:
        return [Element(self, 1 << i) for i in range(self.n)]

    def atom(self, label: str) -> "Element":
        return Element(self, 1 << self.atom_index(label))

    def elements(self) -> Iterator["Element"]:
        for bits in range(self.size):
            yield Element(self, bits)

    def format_bits(self, bits: int) -> str:
        if bits == 0:
            return "0"
        if bits == self.top_bits:
            return "1"
        return "|".join(label for i, label in enumerate(self.atom_labels) if bits >> i & 1)

    # lookup tables for vectorized checks; only built when pairs are enumerable

    @cached_property
    def indices(self) -> np.ndarray:
        require_capacity(self.n, "element tables")
        return np.arange(self.size, dtype=np.int64)

    @cached_property
    def meet_table(self) -> np.ndarray:
        idx = self.indices
        return idx[:, None] & idx[None, :]

    @cached_property
    def join_table(self) -> np.ndarray:
        idx = self.indices
        return idx[:, None] | idx[None, :]

    @cached_property
    def complement_table(self) -> np.ndarray:
        return self.top_bits ^ self.indices

    @cached_property
    def leq_table(self) -> np.ndarray:
        idx = self.indices
        return (idx[:, None] & idx[None, :]) == idx[:, None]


@dataclass(frozen=True)
class Element:
    algebra: FiniteBooleanAlgebra
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < self.algebra.size:
            raise ValueError(f"bit vector {self.bits:#x} out of range for {self.algebra.n} atoms")

    def _same(self, other: "Element") -> None:
        if not isinstance(other, Element):
            raise TypeError(f"expected an Element, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise AlgebraMismatch(f"{self} and {other} belong to different algebras")

    def __and__(self, other: "Element") -> "Element":
        self._same(other)
        return Element(self.algebra, self.bits & other.bits)

    def __or__(self, other: "Element") -> "Element":
        self._same(other)
        return Element(self.algebra, self.bits | other.bits)

    def __invert__(self) -> "Element":
        return Element(self.algebra, self.algebra.top_bits ^ self.bits)

    def __le__(self, other: "Element") -> bool:
        self._same(other)
        return self.bits & other.bits == self.bits

    def __ge__(self, other: "Element") -> bool:
        return other <= self

    @property
    def is_zero(self) -> bool:
        return self.bits == 0

    @property
    def is_one(self) -> bool:
        return self.bits == self.algebra.top_bits

    @property
    def is_atom(self) -> bool:
        return self.bits != 0 and self.bits & (self.bits - 1) == 0

    def atom_labels(self) -> list[str]:
        return [lab for i, lab in enumerate(self.algebra.atom_labels) if self.bits >> i & 1]

    def __str__(self) -> str:
        return self.algebra.format_bits(self.bits)

    def __repr__(self) -> str:
        return f"Element({self})"


def make_algebra(atom_labels: Iterable[str]) -> FiniteBooleanAlgebra:
    return FiniteBooleanAlgebra(tuple(atom_labels))


def eval_element(algebra: FiniteBooleanAlgebra, expr: str) -> Element:
    """Parse ``"0" | "1" | atom ("|" atom)*`` into an element."""
    if not isinstance(expr, str):
        raise ExpressionSyntaxError(f"element expression must be a string, got {expr!r}")
    text = expr.strip()
    if text == "0":
        return algebra.zero
    if text == "1":
        return algebra.one
    bits = 0
    for term in text.split("|"):
        label = term.strip()
        if not label:
            raise ExpressionSyntaxError(f"empty term in element expression {expr!r}")
        if not _LABEL.match(label) or label in _RESERVED:
            raise ExpressionSyntaxError(f"bad term {label!r} in element expression {expr!r}")
        bits |= 1 << algebra.atom_index(label)
    return Element(algebra, bits)


def boolean_op(kind: str, a: Element, b: Element | None = None):
    """Apply ``meet``, ``join``, ``complement`` or ``leq``."""
    if kind == "complement":
        if b is not None:
            raise TypeError("complement takes one operand")
        return ~a
    if b is None:
        raise TypeError(f"{kind} takes two operands")
    if kind == "meet":
        return a & b
    if kind == "join":
        return a | b
    if kind == "leq":
        return a <= b
    raise ValueError(f"unknown boolean operation {kind!r}")


def _bits_of(algebra: FiniteBooleanAlgebra, value) -> int:
    return algebra.element(value).bits


@dataclass(frozen=True)
class CompleteHomomorphism:
    """A complete Boolean homomorphism ``domain -> codomain``.

    ``atom_map[q]`` is the index of the domain atom assigned to codomain
    atom ``q``.
    """

    domain: FiniteBooleanAlgebra
    codomain: FiniteBooleanAlgebra
    atom_map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "atom_map", tuple(int(g) for g in self.atom_map))
        if len(self.atom_map) != self.codomain.n:
            raise NotAnAtom(f"atom map has {len(self.atom_map)} entries, codomain has {self.codomain.n} atoms")
        for q, g in enumerate(self.atom_map):
            if not 0 <= g < self.domain.n:
                raise NotAnAtom(f"image of {self.codomain.atom_labels[q]} is not an atom of the domain")

    @classmethod
    def identity(cls, algebra: FiniteBooleanAlgebra) -> "CompleteHomomorphism":
        return cls(algebra, algebra, tuple(range(algebra.n)))

    def apply_bits(self, bits: int) -> int:
        out = 0
        for q, g in enumerate(self.atom_map):
            if bits >> g & 1:
                out |= 1 << q
        return out

    def adjoint_bits(self, bits: int) -> int:
        out = 0
        for q, g in enumerate(self.atom_map):
            if bits >> q & 1:
                out |= 1 << g
        return out

    def __call__(self, a: Element) -> Element:
        return apply(self, a)

    @property
    def is_injective(self) -> bool:
        return set(self.atom_map) == set(range(self.domain.n))

    @property
    def is_surjective(self) -> bool:
        return len(set(self.atom_map)) == len(self.atom_map)

    def table(self) -> np.ndarray:
        """``phi`` on every domain element, indexed by bit vector."""
        idx = self.domain.indices
        out = np.zeros(self.domain.size, dtype=np.int64)
        for q, g in enumerate(self.atom_map):
            out |= ((idx >> g) & 1) << q
        return out

    def adjoint_table(self) -> np.ndarray:
        idx = self.codomain.indices
        out = np.zeros(self.codomain.size, dtype=np.int64)
        for q, g in enumerate(self.atom_map):
            out |= ((idx >> q) & 1) << g
        return out

    def atom_map_labels(self) -> dict[str, str]:
        return {self.codomain.atom_labels[q]: self.domain.atom_labels[g] for q, g in enumerate(self.atom_map)}


def _verify_hom_laws(phi: CompleteHomomorphism) -> None:
    A, B = phi.domain, phi.codomain
    if phi.apply_bits(0) != 0 or phi.apply_bits(A.top_bits) != B.top_bits:
        raise InternalMismatch("atom-map homomorphism does not preserve bounds")
    if A.n + B.n <= 8:
        pairs: Iterable[tuple[int, int]] = ((x, y) for x in range(A.size) for y in range(A.size))
    else:
        rng = random.Random(0)
        pairs = [(rng.randrange(A.size), rng.randrange(A.size)) for _ in range(256)]
    for x, y in pairs:
        fx, fy = phi.apply_bits(x), phi.apply_bits(y)
        if (
            phi.apply_bits(x | y) != fx | fy
            or phi.apply_bits(x & y) != fx & fy
            or phi.apply_bits(A.top_bits ^ x) != B.top_bits ^ fx
        ):
            raise InternalMismatch("atom-map homomorphism broke a Boolean law", witness=(x, y))


def hom_from_atom_map(
    A: FiniteBooleanAlgebra,
    B: FiniteBooleanAlgebra,
    g: Mapping[str, "Element | str"] | Sequence[int],
) -> CompleteHomomorphism:
    """Build ``phi: A -> B`` from the images of the atoms of ``B``.

    ``g`` maps atom labels of ``B`` to atoms of ``A`` (labels, expressions
    or elements), or is a sequence of domain atom indices.
    """
    if isinstance(g, Mapping):
        images = []
        for label in B.atom_labels:
            if label not in g:
                raise NotAnAtom(f"atom map gives no image for {label!r}")
            target = A.element(g[label])
            if not target.is_atom:
                raise NotAnAtom(f"image {target} of {label!r} is not an atom of the domain", witness=label)
            images.append(target.bits.bit_length() - 1)
        extra = set(g) - set(B.atom_labels)
        if extra:
            raise UnknownAtom(f"atom map mentions unknown codomain atoms {sorted(extra)}")
    else:
        images = list(g)
    phi = CompleteHomomorphism(A, B, tuple(images))
    _verify_hom_laws(phi)
    return phi


def _table_array(A, B, table) -> np.ndarray:
    if isinstance(table, Mapping):
        out = np.full(A.size, -1, dtype=np.int64)
        for key, value in table.items():
            out[_bits_of(A, key)] = _bits_of(B, value)
        missing = np.flatnonzero(out < 0)
        if missing.size:
            raise NotAHomomorphism(f"table has no entry for {A.format_bits(int(missing[0]))}")
        return out
    values = list(table)
    if len(values) != A.size:
        raise NotAHomomorphism(f"table has {len(values)} entries, domain has {A.size} elements")
    return np.array([_bits_of(B, v) for v in values], dtype=np.int64)


def _first_index(mask: np.ndarray) -> tuple[int, ...] | None:
    if not mask.any():
        return None
    return tuple(int(i) for i in np.unravel_index(int(np.argmax(mask)), mask.shape))


def hom_from_table(A: FiniteBooleanAlgebra, B: FiniteBooleanAlgebra, table) -> CompleteHomomorphism:
    """Validate an extensional table and return its canonical atom-map form."""
    require_capacity(A.n, "hom_from_table")
    T = _table_array(A, B, table)
    if T[0] != 0:
        raise NotAHomomorphism("0 is not preserved", witness=(A.zero,))
    if T[A.top_bits] != B.top_bits:
        raise NotAHomomorphism("1 is not preserved", witness=(A.one,))
    checks = (
        ("join", T[A.join_table] != (T[:, None] | T[None, :])),
        ("meet", T[A.meet_table] != (T[:, None] & T[None, :])),
    )
    for name, bad in checks:
        hit = _first_index(bad)
        if hit is not None:
            x, y = (A.element(i) for i in hit)
            raise NotAHomomorphism(f"{name} of {x} and {y} is not preserved", witness=(x, y))
    hit = _first_index(T[A.complement_table] != (B.top_bits ^ T))
    if hit is not None:
        x = A.element(hit[0])
        raise NotAHomomorphism(f"complement of {x} is not preserved", witness=(x,))
    images = []
    for q in range(B.n):
        above = [i for i in range(A.n) if T[1 << i] >> q & 1]
        if not above:
            raise NotComplete(f"atom {B.atom_labels[q]} lies below no image of an atom")
        if len(above) > 1:
            raise NotAHomomorphism(f"atom {B.atom_labels[q]} lies below several atom images")
        images.append(above[0])
    phi = CompleteHomomorphism(A, B, tuple(images))
    if not np.array_equal(phi.table(), T):
        raise InternalMismatch("recovered atom map does not reproduce the table")
    return phi


def apply(phi: CompleteHomomorphism, a: Element) -> Element:
    if a.algebra != phi.domain:
        raise AlgebraMismatch(f"{a} is not in the domain of the homomorphism")
    return Element(phi.codomain, phi.apply_bits(a.bits))


def _adjoint_by_definition(phi: CompleteHomomorphism, b: int) -> int:
    """Meet of all ``a`` with ``b <= phi(a)``."""
    A = phi.domain
    if A.n <= pair_cap():
        out = A.top_bits
        for a in range(A.size):
            if b & phi.apply_bits(a) == b:
                out &= a
        return out
    # The set {a : b <= phi(a)} is an up-set containing 1, so atom x lies
    # below its meet iff the coatom 1 - x is not in it.
    out = 0
    for i in range(A.n):
        coatom = A.top_bits ^ (1 << i)
        if b & phi.apply_bits(coatom) != b:
            out |= 1 << i
    return out


def adjoint_apply(phi: CompleteHomomorphism, b: Element) -> Element:
    """The lower adjoint, computed by the image and the definitional formula."""
    if b.algebra != phi.codomain:
        raise AlgebraMismatch(f"{b} is not in the codomain of the homomorphism")
    by_image = phi.adjoint_bits(b.bits)
    by_definition = _adjoint_by_definition(phi, b.bits)
    if by_image != by_definition:
        raise InternalMismatch(
            f"lower adjoint formulas disagree at {b}: "
            f"{phi.domain.format_bits(by_image)} vs {phi.domain.format_bits(by_definition)}",
            witness=(b,),
        )
    return Element(phi.domain, by_image)


@dataclass(frozen=True)
class GaloisReport:
    lambda_holds: bool
    lambda1_holds: bool
    lambda2_holds: bool
    l2rave_holds: bool
    witnesses: dict

    @property
    def holds(self) -> bool:
        return self.lambda_holds and self.lambda1_holds and self.lambda2_holds and self.l2rave_holds

    def verdicts(self) -> list[tuple[str, bool, dict | None]]:
        return [
            (name, ok, self.witnesses.get(name))
            for name, ok in (
                ("Lambda", self.lambda_holds),
                ("Lambda1", self.lambda1_holds),
                ("Lambda2", self.lambda2_holds),
                ("L2rave", self.l2rave_holds),
            )
        ]


def check_galois(phi: CompleteHomomorphism, *, adjoint: np.ndarray | None = None) -> GaloisReport:
    """Exhaustively check the Galois-connection laws of ``phi`` and its adjoint.

    ``adjoint`` replaces the computed adjoint table; it exists so the checker
    can be fed a deliberately wrong adjoint.
    """
    A, B = phi.domain, phi.codomain
    require_capacity(max(A.n, B.n), "check_galois")
    PHI = phi.table()
    ADJ = phi.adjoint_table() if adjoint is None else np.asarray(adjoint, dtype=np.int64)
    leq_a, leq_b = A.leq_table, B.leq_table
    witnesses = {}

    def record(name, mask, names_algebras):
        hit = _first_index(mask)
        if hit is None:
            return True
        witnesses[name] = {nm: alg.element(i) for (nm, alg), i in zip(names_algebras, hit)}
        return False

    ab = (("a", A), ("b", B))
    # rows a, columns b
    lam = record("Lambda", leq_b[:, PHI].T != leq_a[ADJ, :].T, ab)
    lam1 = record("Lambda1", ~leq_b[B.indices, PHI[ADJ]], (("b", B),))
    lam2 = record("Lambda2", ~leq_a[ADJ[PHI], A.indices], (("a", A),))
    lhs = ADJ[PHI[:, None] & B.indices[None, :]]
    rhs = A.indices[:, None] & ADJ[None, :]
    rave = record("L2rave", lhs != rhs, ab)
    return GaloisReport(lam, lam1, lam2, rave, witnesses)

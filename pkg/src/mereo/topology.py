"""Finite topological spaces and their regular closed algebras.

A finite space is a preorder: each point ``x`` has a smallest open
neighbourhood ``min_open(x)``.  Point sets are int bit masks over the
space's point order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .algebra import Element, FiniteBooleanAlgebra, make_algebra
from .contact import CONTACT, WELLINSIDE, BinaryRelation, check_contact_axioms
from .equivalence import kappa
from .errors import CapacityExceeded, InternalMismatch, NotATopology, UnknownPoint
from .structures import ContactStructure, LocalContactStructure, MvdStructure

MAX_POINTS = 12


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class FiniteSpace:
    points: tuple[str, ...]
    min_open: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "min_open", tuple(int(m) for m in self.min_open))
        if len(set(self.points)) != len(self.points):
            raise NotATopology("duplicate point label")
        if len(self.min_open) != len(self.points):
            raise NotATopology("need one minimal open set per point")
        for x, m in enumerate(self.min_open):
            if not m >> x & 1:
                raise NotATopology(f"{self.points[x]} is missing from its own minimal open set")
            for y in _bits(m):
                if self.min_open[y] & ~m:
                    raise NotATopology(
                        f"minimal open sets are not transitive at {self.points[x]}, {self.points[y]}",
                        witness=(self.points[x], self.points[y]),
                    )

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    @cached_property
    def _index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    def index(self, point: str) -> int:
        try:
            return self._index[point]
        except KeyError:
            raise UnknownPoint(f"unknown point {point!r}") from None

    def mask(self, points: Iterable[str]) -> int:
        out = 0
        for p in points:
            out |= 1 << self.index(p)
        return out

    def labels(self, mask: int) -> list[str]:
        return [self.points[i] for i in _bits(mask)]

    def is_open(self, mask: int) -> bool:
        return all(self.min_open[x] & ~mask == 0 for x in _bits(mask))

    @cached_property
    def open_sets(self) -> tuple[int, ...]:
        if self.size > MAX_POINTS:
            raise CapacityExceeded(f"open-set enumeration needs at most {MAX_POINTS} points")
        return tuple(m for m in range(1 << self.size) if self.is_open(m))

    @property
    def is_discrete(self) -> bool:
        return all(m == 1 << x for x, m in enumerate(self.min_open))

    @property
    def is_regular(self) -> bool:
        """Finite regular spaces: the specialization preorder is symmetric."""
        return all(self.min_open[y] >> x & 1 for x, m in enumerate(self.min_open) for y in _bits(m))

    def preorder_pairs(self) -> list[tuple[str, str]]:
        return [(self.points[x], self.points[y]) for x, m in enumerate(self.min_open) for y in _bits(m) if y != x]


def _from_preorder(points: Sequence[str], pairs) -> list[int]:
    idx = {p: i for i, p in enumerate(points)}
    n = len(points)
    reach = [1 << i for i in range(n)]
    for pair in pairs:
        x, y = pair
        for p in (x, y):
            if p not in idx:
                raise UnknownPoint(f"unknown point {p!r}")
        reach[idx[x]] |= 1 << idx[y]
    # transitive closure
    changed = True
    while changed:
        changed = False
        for i in range(n):
            r = reach[i]
            for j in _bits(r):
                r |= reach[j]
            if r != reach[i]:
                reach[i] = r
                changed = True
    return reach


def _from_opens(points: Sequence[str], opens) -> list[int]:
    idx = {p: i for i, p in enumerate(points)}
    full = (1 << len(points)) - 1
    family = set()
    for U in opens:
        m = 0
        for p in U:
            if p not in idx:
                raise UnknownPoint(f"unknown point {p!r}")
            m |= 1 << idx[p]
        family.add(m)
    labels = lambda m: [points[i] for i in _bits(m)]
    if 0 not in family:
        raise NotATopology("the empty set must be open")
    if full not in family:
        raise NotATopology("the whole space must be open")
    for U, V in itertools.combinations(sorted(family), 2):
        if U | V not in family:
            raise NotATopology("opens are not closed under union", witness=(labels(U), labels(V)))
        if U & V not in family:
            raise NotATopology("opens are not closed under intersection", witness=(labels(U), labels(V)))
    out = []
    for x in range(len(points)):
        m = full
        for U in family:
            if U >> x & 1:
                m &= U
        out.append(m)
    return out


def make_space(points: Sequence[str], preorder=None, opens=None) -> FiniteSpace:
    """Build a space from preorder pairs ``(x, y)`` (``y`` lies in every open
    set around ``x``) or from a complete list of open sets."""
    points = tuple(points)
    if len(points) > MAX_POINTS:
        raise CapacityExceeded(f"spaces are limited to {MAX_POINTS} points")
    if (preorder is None) == (opens is None):
        raise NotATopology("give exactly one of preorder or opens")
    if preorder is not None:
        return FiniteSpace(points, _from_preorder(points, preorder))
    return FiniteSpace(points, _from_opens(points, opens))


def discrete_space(points: Sequence[str]) -> FiniteSpace:
    return FiniteSpace(tuple(points), tuple(1 << i for i in range(len(points))))


def _check_subset(space: FiniteSpace, S) -> int:
    if isinstance(S, int):
        if S & ~space.full:
            raise UnknownPoint("point mask outside the space")
        return S
    return space.mask(S)


def closure(space: FiniteSpace, S) -> int:
    m = _check_subset(space, S)
    return sum(1 << x for x, mo in enumerate(space.min_open) if mo & m)


def interior(space: FiniteSpace, S) -> int:
    m = _check_subset(space, S)
    return sum(1 << x for x, mo in enumerate(space.min_open) if mo & ~m == 0)


def space_connected(space: FiniteSpace) -> bool:
    """Connectedness of the symmetrized specialization graph."""
    if space.size == 0:
        return True
    seen = 1
    frontier = [0]
    while frontier:
        x = frontier.pop()
        nbrs = space.min_open[x]
        nbrs |= sum(1 << y for y, m in enumerate(space.min_open) if m >> x & 1)
        new = nbrs & ~seen
        seen |= new
        frontier.extend(_bits(new))
    return seen == space.full


def has_nontrivial_clopen(space: FiniteSpace) -> bool:
    opens = set(space.open_sets)
    return any(U not in (0, space.full) and (space.full ^ U) in opens for U in opens)


@dataclass(frozen=True)
class RegularClosedAlgebra:
    space: FiniteSpace
    rc_sets: tuple[int, ...]           # sorted point masks
    algebra: FiniteBooleanAlgebra
    embedding: tuple[int, ...]         # element bits -> point mask

    def point_set(self, e) -> int:
        return self.embedding[self.algebra.element(e).bits]

    def element_of(self, mask: int) -> Element:
        try:
            return Element(self.algebra, self.embedding.index(mask))
        except ValueError:
            raise InternalMismatch(f"{self.space.labels(mask)} is not regular closed") from None

    @cached_property
    def masks(self) -> np.ndarray:
        return np.asarray(self.embedding, dtype=np.int64)


def regular_closed_sets(space: FiniteSpace) -> list[int]:
    return sorted({closure(space, U) for U in space.open_sets})


def _verify_rc_formulas(rca: RegularClosedAlgebra) -> None:
    sp, alg, emb = rca.space, rca.algebra, rca.embedding
    for F in rca.rc_sets:
        if closure(sp, interior(sp, F)) != F:
            raise InternalMismatch(f"{sp.labels(F)} is not regular closed")
    if emb[0] != 0 or emb[alg.top_bits] != sp.full:
        raise InternalMismatch("bounds of the regular closed algebra are not the empty set and the space")
    for a in range(alg.size):
        F = emb[a]
        if emb[alg.top_bits ^ a] != closure(sp, sp.full ^ F):
            raise InternalMismatch(f"complement formula fails at {sp.labels(F)}")
        for b in range(a, alg.size):
            G = emb[b]
            if emb[a | b] != F | G:
                raise InternalMismatch(f"join formula fails at {sp.labels(F)}, {sp.labels(G)}")
            if emb[a & b] != closure(sp, interior(sp, F & G)):
                raise InternalMismatch(f"meet formula fails at {sp.labels(F)}, {sp.labels(G)}")
    # families: the join of any family is cl(union), the meet cl(int(intersection))
    for a in range(alg.size):
        fam = [emb[1 << i] for i in _bits(a)]
        union = 0
        inter = sp.full
        for F in fam:
            union |= F
            inter &= F
        if emb[a] != closure(sp, union):
            raise InternalMismatch("join of a family of atoms is not the closure of its union")
        meet_bits = alg.top_bits
        for i in _bits(a):
            meet_bits &= 1 << i
        if emb[meet_bits] != closure(sp, interior(sp, inter)):
            raise InternalMismatch("meet of a family of atoms is not cl(int(intersection))")


def regular_closed_algebra(space: FiniteSpace) -> RegularClosedAlgebra:
    if space.size > MAX_POINTS:
        raise CapacityExceeded(f"regular closed algebras need at most {MAX_POINTS} points")
    rc = regular_closed_sets(space)
    nonzero = [F for F in rc if F]
    atoms = sorted(F for F in nonzero if not any(G != F and G & ~F == 0 for G in nonzero))
    alg = make_algebra([f"F{i + 1}" for i in range(len(atoms))])
    emb = []
    for bits in range(1 << len(atoms)):
        m = 0
        for i in _bits(bits):
            m |= atoms[i]
        emb.append(m)
    if sorted(emb) != rc:
        raise InternalMismatch("regular closed sets are not the unions of the atoms")
    rca = RegularClosedAlgebra(space, tuple(rc), alg, tuple(emb))
    _verify_rc_formulas(rca)
    return rca


def standard_contact(rca: RegularClosedAlgebra) -> ContactStructure:
    alg, sp = rca.algebra, rca.space
    m = rca.masks
    C = BinaryRelation(alg, (m[:, None] & m[None, :]) != 0, CONTACT)
    bad = check_contact_axioms(alg, C, ("C1", "C2", "C3", "C4")).failures()
    if bad:
        raise InternalMismatch(f"standard contact breaks {bad[0].axiom}")
    S = ContactStructure(alg, C)
    interiors = np.array([interior(sp, int(g)) for g in m], dtype=np.int64)
    by_interior = (m[:, None] & ~interiors[None, :]) == 0
    if not np.array_equal(S.wellinside.matrix, by_interior):
        raise InternalMismatch("derived well-inside relation differs from inclusion in the interior")
    return S


def standard_lca(space: FiniteSpace) -> LocalContactStructure:
    """``(RC(X), rho_X, CR(X))``; every regular closed set is compact here."""
    rca = regular_closed_algebra(space)
    C = standard_contact(rca)
    return LocalContactStructure(rca.algebra, C.contact, frozenset(rca.algebra.elements()))


def standard_mvd_formula(space: FiniteSpace) -> MvdStructure:
    """``F << G`` iff ``F`` is compact and ``F`` lies inside ``int(G)``."""
    rca = regular_closed_algebra(space)
    m = rca.masks
    interiors = np.array([interior(space, int(g)) for g in m], dtype=np.int64)
    compact = np.ones(len(m), dtype=bool)
    rel = compact[:, None] & ((m[:, None] & ~interiors[None, :]) == 0)
    return MvdStructure(rca.algebra, BinaryRelation(rca.algebra, rel, WELLINSIDE))


def standard_mvd(space: FiniteSpace) -> MvdStructure:
    M = kappa(standard_lca(space))
    if space.is_discrete:
        direct = standard_mvd_formula(space)
        if direct.wellinside != M.wellinside:
            raise InternalMismatch("standard MVD relation differs from the kappa image")
    return M


# maps


@dataclass(frozen=True)
class SpaceMap:
    source: FiniteSpace
    target: FiniteSpace
    point_map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "point_map", tuple(int(v) for v in self.point_map))
        if len(self.point_map) != self.source.size:
            raise UnknownPoint("the map must send every source point somewhere")
        if any(not 0 <= v < self.target.size for v in self.point_map):
            raise UnknownPoint("the map sends a point outside the target")

    @classmethod
    def from_labels(cls, source, target, mapping: Mapping[str, str]) -> "SpaceMap":
        missing = [p for p in source.points if p not in mapping]
        if missing:
            raise UnknownPoint(f"no image for point {missing[0]!r}")
        for p in mapping:
            source.index(p)
        return cls(source, target, tuple(target.index(mapping[p]) for p in source.points))

    def image(self, mask: int) -> int:
        out = 0
        for x in _bits(mask):
            out |= 1 << self.point_map[x]
        return out

    def preimage(self, mask: int) -> int:
        return sum(1 << x for x, y in enumerate(self.point_map) if mask >> y & 1)


@dataclass(frozen=True)
class MapProperties:
    continuous: bool
    open: bool
    closed: bool
    perfect: bool
    quasi_open: bool
    skeletal: bool

    def to_json(self) -> dict:
        return {
            "continuous": self.continuous, "open": self.open, "closed": self.closed,
            "perfect": self.perfect, "quasi_open": self.quasi_open, "skeletal": self.skeletal,
            "note": "perfect coincides with closed on finite spaces",
        }


def map_properties(f: SpaceMap) -> MapProperties:
    X, Y = f.source, f.target
    opens_x, opens_y = X.open_sets, set(Y.open_sets)
    continuous = all(X.is_open(f.preimage(V)) for V in opens_y)
    images = [f.image(U) for U in opens_x]
    open_ = continuous and all(V in opens_y for V in images)
    closed = continuous and all(
        (Y.full ^ f.image(X.full ^ U)) in opens_y for U in opens_x
    )
    nonempty = [V for U, V in zip(opens_x, images) if U]
    quasi_open = continuous and all(interior(Y, V) for V in nonempty)
    skeletal = all(interior(Y, closure(Y, V)) for V in nonempty)
    return MapProperties(continuous, open_, closed, closed, quasi_open, skeletal)


# enumeration


def default_points(n: int) -> tuple[str, ...]:
    base = ("x", "y", "z", "w")
    return base[:n] if n <= len(base) else tuple(f"x{i}" for i in range(n))


def enumerate_spaces(n: int, points: Sequence[str] | None = None) -> list[FiniteSpace]:
    """All topologies on ``n`` labelled points, via transitive reflexive relations."""
    if n > 5:
        raise CapacityExceeded("space enumeration is limited to 5 points")
    points = tuple(points) if points is not None else default_points(n)
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    out = []
    for code in range(1 << len(off)):
        reach = [1 << i for i in range(n)]
        for k, (i, j) in enumerate(off):
            if code >> k & 1:
                reach[i] |= 1 << j
        if all(reach[j] & ~reach[i] == 0 for i in range(n) for j in _bits(reach[i])):
            out.append(FiniteSpace(points, tuple(reach)))
    return out


def enumerate_open_families(n: int) -> list[frozenset[int]]:
    """Brute force: every family of subsets closed under union and intersection
    that contains the empty set and the whole set."""
    if n > 4:
        raise CapacityExceeded("open-family enumeration is limited to 4 points")
    full = (1 << n) - 1
    middle = [m for m in range(1, full)]
    out = []
    for code in range(1 << len(middle)):
        fam = {0, full} | {m for k, m in enumerate(middle) if code >> k & 1}
        if all(U | V in fam and U & V in fam for U in fam for V in fam):
            out.append(frozenset(fam))
    return out


def enumerate_maps(X: FiniteSpace, Y: FiniteSpace) -> Iterator[SpaceMap]:
    for images in itertools.product(range(Y.size), repeat=X.size):
        yield SpaceMap(X, Y, images)

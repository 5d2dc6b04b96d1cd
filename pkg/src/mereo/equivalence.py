"""The kappa and tau transforms between local contact and MVD structures."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import Element, FiniteBooleanAlgebra
from .contact import CONTACT, WELLINSIDE, BinaryRelation, wellinside_from_contact
from .errors import KindMismatch, require_capacity
from .reports import first_true
from .structures import LocalContactStructure, MvdStructure


def kappa_matrix(alg: FiniteBooleanAlgebra, contact: np.ndarray, bounded: np.ndarray) -> np.ndarray:
    """``a << b`` iff ``a`` is bounded and ``a <<_rho b``."""
    w_rho = ~contact[:, alg.complement_table]
    return bounded[:, None] & w_rho


def kappa(L: LocalContactStructure) -> MvdStructure:
    alg = L.algebra
    m = kappa_matrix(alg, L.contact.matrix, L.bounded_vector)
    return MvdStructure(alg, BinaryRelation(alg, m, WELLINSIDE))


def bounded_from_wellinside(alg: FiniteBooleanAlgebra, W: np.ndarray) -> np.ndarray:
    return W[..., :, alg.top_bits].copy()


def wellinside_rho_m(alg: FiniteBooleanAlgebra, W: np.ndarray) -> np.ndarray:
    """``a <<_{rho_m} b`` iff for all ``c << 1``: ``(c & a) << (c* | b)``.

    ``W`` may carry leading batch axes.
    """
    meet = alg.meet_table                               # [c, a]
    comp_join = alg.join_table[alg.complement_table]    # [c, b] = c* | b
    # inner[..., c, a, b] = W[c & a, c* | b]
    inner = W[..., meet[:, :, None], comp_join[:, None, :]]
    guard = W[..., :, alg.top_bits]                     # [..., c]
    ok = inner | ~guard[..., :, None, None]
    return ok.all(axis=-3)


def rho_m_universal(alg: FiniteBooleanAlgebra, W: np.ndarray) -> np.ndarray:
    """``a rho_m b`` iff not ``a <<_{rho_m} b*``."""
    return ~wellinside_rho_m(alg, W)[..., alg.complement_table]


def rho_m_existential(alg: FiniteBooleanAlgebra, W: np.ndarray) -> np.ndarray:
    """``a rho_m b`` iff some ``c << 1`` has ``(c & a)`` not well inside ``(c & b)*``."""
    meet = alg.meet_table
    comp = alg.complement_table
    # inner[..., c, a, b] = W[c & a, (c & b)*]
    inner = W[..., meet[:, :, None], comp[meet][:, None, :]]
    guard = W[..., :, alg.top_bits]
    return (~inner & guard[..., :, None, None]).any(axis=-3)


def tau(M: MvdStructure) -> LocalContactStructure:
    alg = M.algebra
    W = M.wellinside.matrix
    rho = BinaryRelation(alg, rho_m_universal(alg, W), CONTACT)
    bvec = bounded_from_wellinside(alg, W)
    bounded = frozenset(Element(alg, int(i)) for i in np.flatnonzero(bvec))
    return LocalContactStructure(alg, rho, bounded)


def rho_m_forms_agree(M: MvdStructure) -> tuple[bool, dict | None]:
    alg = M.algebra
    require_capacity(alg.n, "rho_m_forms_agree")
    W = M.wellinside.matrix
    hit = first_true(rho_m_universal(alg, W) != rho_m_existential(alg, W))
    if hit is None:
        return True, None
    return False, {"a": Element(alg, hit[0]), "b": Element(alg, hit[1])}


@dataclass(frozen=True)
class EquivalenceReport:
    source_kind: str
    source_valid: bool
    forward_ok: bool | None       # tau(kappa(L)) == L
    backward_ok: bool | None      # kappa(tau(M)) == M
    forms_agree: bool
    image_valid: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def guaranteed(self) -> bool:
        """Round-trip outcomes are only guaranteed for valid inputs."""
        return self.source_valid

    @property
    def ok(self) -> bool:
        trips = [v for v in (self.forward_ok, self.backward_ok) if v is not None]
        return all(trips) and self.forms_agree and (self.image_valid or not self.source_valid)

    def to_json(self) -> dict:
        return {
            "source_kind": self.source_kind,
            "source_valid": self.source_valid,
            "forward_ok": self.forward_ok,
            "backward_ok": self.backward_ok,
            "forms_agree": self.forms_agree,
            "image_valid": self.image_valid,
            "informational": not self.source_valid,
            "witnesses": {k: {n: str(e) for n, e in w.items()} for k, w in self.witnesses.items()},
        }


def _first_diff(alg, x: np.ndarray, y: np.ndarray, names="ab") -> dict | None:
    hit = first_true(x != y)
    if hit is None:
        return None
    return {n: Element(alg, i) for n, i in zip(names, hit)}


def _lca_diff(L: LocalContactStructure, L2: LocalContactStructure) -> dict | None:
    d = _first_diff(L.algebra, L.contact.matrix, L2.contact.matrix)
    if d is not None:
        return d
    return _first_diff(L.algebra, L.bounded_vector, L2.bounded_vector, names="bounded")


def roundtrip_report(S) -> EquivalenceReport:
    witnesses = {}
    if isinstance(S, LocalContactStructure):
        M = kappa(S)
        back = tau(M)
        diff = _lca_diff(S, back)
        if diff:
            witnesses["forward"] = diff
        agree, w = rho_m_forms_agree(M)
        if w:
            witnesses["forms"] = w
        return EquivalenceReport("lca", S.is_valid, diff is None, None, agree, M.is_valid, witnesses)
    if isinstance(S, MvdStructure):
        L = tau(S)
        back = kappa(L)
        diff = _first_diff(S.algebra, S.wellinside.matrix, back.wellinside.matrix)
        if diff:
            witnesses["backward"] = diff
        agree, w = rho_m_forms_agree(S)
        if w:
            witnesses["forms"] = w
        return EquivalenceReport("mvd", S.is_valid, None, diff is None, agree, L.is_valid, witnesses)
    raise KindMismatch(f"round trip needs an LCA or MVD structure, got {type(S).__name__}")


def derived_wellinside(L: LocalContactStructure) -> BinaryRelation:
    """``<<_rho`` of the contact, before restricting to bounded elements."""
    return wellinside_from_contact(L.contact)

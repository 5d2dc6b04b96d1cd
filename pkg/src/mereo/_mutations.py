"""Deliberately broken translations, used to show the suites can fail."""

from __future__ import annotations

from .contact import WELLINSIDE, BinaryRelation, wellinside_from_contact
from .structures import LocalContactStructure, MvdStructure


def kappa_ignoring_bounded(L: LocalContactStructure) -> MvdStructure:
    """The well-inside relation of the contact alone, with no boundedness guard."""
    return MvdStructure(L.algebra, wellinside_from_contact(L.contact))


def kappa_uncomplemented(L: LocalContactStructure) -> MvdStructure:
    """Drops the complement: a << b iff a bounded and a not in contact with b."""
    alg = L.algebra
    W = L.bounded_vector[:, None] & ~L.contact.matrix
    return MvdStructure(alg, BinaryRelation(alg, W, WELLINSIDE))


MUTANTS = {
    "ignore_bounded": kappa_ignoring_bounded,
    "uncomplemented": kappa_uncomplemented,
}

"""Exception hierarchy and capacity limits."""

from __future__ import annotations

import os

#: Largest atom count an algebra may have (one machine word per element).
HARD_CEILING = 24

#: Default cap for operations that materialize all element pairs.
DEFAULT_PAIR_CAP = 8


class MereoError(ValueError):
    """Base class for every error raised by the workbench.

    ``witness`` carries the offending values when there are any, ``path``
    the document field an input error was found at.
    """

    def __init__(self, message: str, *, witness=None, path: str | None = None):
        if path:
            message = f"{path}: {message}"
        super().__init__(message)
        self.witness = witness
        self.path = path


class DuplicateLabel(MereoError):
    pass


class InvalidLabel(MereoError):
    pass


class TooManyAtoms(MereoError):
    pass


class UnknownAtom(MereoError):
    pass


class ExpressionSyntaxError(MereoError):
    pass


class AlgebraMismatch(MereoError):
    pass


class NotAnAtom(MereoError):
    pass


class NotAHomomorphism(MereoError):
    pass


class NotComplete(MereoError):
    pass


class InternalMismatch(MereoError):
    """Two computation paths that must agree did not. Always a bug."""


class WrongFlavor(MereoError):
    pass


class KindMismatch(MereoError):
    pass


class CapacityExceeded(MereoError):
    pass


class NotATopology(MereoError):
    pass


class UnknownPoint(MereoError):
    pass


class DocumentError(MereoError):
    pass


def pair_cap() -> int:
    """Atom cap for pair-enumerating operations (``MEREO_MAX_ATOMS`` overrides)."""
    raw = os.environ.get("MEREO_MAX_ATOMS")
    if not raw:
        return DEFAULT_PAIR_CAP
    try:
        value = int(raw)
    except ValueError:
        raise MereoError(f"MEREO_MAX_ATOMS must be an integer, got {raw!r}") from None
    return max(0, min(value, HARD_CEILING))


def require_capacity(n: int, what: str, cap: int | None = None) -> None:
    limit = pair_cap() if cap is None else cap
    if n > limit:
        raise CapacityExceeded(f"{what} needs n <= {limit}, got n = {n}")

"""Axiom verdicts with counterexample witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .algebra import Element, FiniteBooleanAlgebra

_ALIASES = {
    "≪1": "ll1", "≪2": "ll2", "≪3": "ll3", "≪4": "ll4", "≪5": "ll5", "≪6": "ll6", "≪7": "ll7",
    "≪2′": "ll2p", "≪2'": "ll2p", "ll2'": "ll2p",
    "≪4*": "ll4star", "ll4*": "ll4star",
    "L1′": "L1p", "L1'": "L1p",
    "LS′": "LSp", "LS'": "LSp", "LS″": "LSpp", "LS''": "LSpp",
    "IS′": "ISp", "IS'": "ISp",
}


def normalize_axiom_id(axiom: str) -> str:
    """Map Unicode spellings (``≪4*``, ``LS′``...) to the ASCII identifiers."""
    axiom = axiom.strip()
    return _ALIASES.get(axiom, axiom)


def _jsonable(value):
    if isinstance(value, Element):
        return str(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass(frozen=True)
class AxiomResult:
    axiom: str
    holds: bool
    witness: dict | None = None
    note: str | None = None

    def to_json(self) -> dict:
        out = {"axiom": self.axiom, "holds": self.holds, "witness": _jsonable(self.witness)}
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class AxiomReport:
    entries: tuple[AxiomResult, ...] = field(default_factory=tuple)

    @property
    def holds(self) -> bool:
        return all(e.holds for e in self.entries)

    def __iter__(self) -> Iterator[AxiomResult]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, axiom: str) -> AxiomResult:
        axiom = normalize_axiom_id(axiom)
        for e in self.entries:
            if e.axiom == axiom:
                return e
        raise KeyError(axiom)

    def __contains__(self, axiom: str) -> bool:
        axiom = normalize_axiom_id(axiom)
        return any(e.axiom == axiom for e in self.entries)

    def failures(self) -> list[AxiomResult]:
        return [e for e in self.entries if not e.holds]

    def merged(self, *others: "AxiomReport") -> "AxiomReport":
        entries = list(self.entries)
        for other in others:
            entries.extend(other.entries)
        return AxiomReport(tuple(entries))

    def to_json(self) -> dict:
        return {"verdicts": [e.to_json() for e in self.entries]}


def first_true(mask: np.ndarray) -> tuple[int, ...] | None:
    """Index of the lexicographically first true entry, or None."""
    mask = np.asarray(mask)
    if not mask.any():
        return None
    if mask.ndim == 0:
        return ()
    return tuple(int(i) for i in np.unravel_index(int(np.argmax(mask)), mask.shape))


def verdict(
    axiom: str,
    violations: np.ndarray,
    names: Sequence[tuple[str, FiniteBooleanAlgebra]] | Sequence[str],
    algebra: FiniteBooleanAlgebra | None = None,
) -> AxiomResult:
    """Turn a violation array into a result; axes are named by ``names``."""
    hit = first_true(violations)
    if hit is None:
        return AxiomResult(axiom, True)
    witness = {}
    for spec, i in zip(names, hit):
        if isinstance(spec, str):
            name, alg = spec, algebra
        else:
            name, alg = spec
        witness[name] = Element(alg, i)
    return AxiomResult(axiom, False, witness)


def report(results: Iterable[AxiomResult]) -> AxiomReport:
    return AxiomReport(tuple(results))


def bool_matmul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Boolean matrix product: ``out[i, j] = any_k x[i, k] and y[k, j]``."""
    return (x.astype(np.float64) @ y.astype(np.float64)) > 0.5

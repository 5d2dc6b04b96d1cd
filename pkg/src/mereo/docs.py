"""JSON documents for structures, maps and spaces.

Canonical form: one top-level key per line in a fixed order per document
type, values written compactly, pairs sorted by bit value, elements written
as canonical expressions.  ``parse(serialize(x)) == x`` for every value and
``serialize(parse(text)) == text`` for every canonical text.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .algebra import CompleteHomomorphism, Element, FiniteBooleanAlgebra, eval_element, hom_from_atom_map, hom_from_table, make_algebra
from .contact import CONTACT, WELLINSIDE, BinaryRelation, atom_edges, contact_from_atom_graph, is_atom_determined
from .errors import DocumentError, MereoError
from .morphisms import MeetFunctionTable
from .structures import ContactStructure, LocalContactStructure, MvdStructure
from .topology import FiniteSpace, SpaceMap, make_space

KEY_ORDER = {
    "contact": ("type", "atoms", "contact"),
    "lca": ("type", "atoms", "contact", "bounded"),
    "mvd": ("type", "atoms", "wellinside"),
    "hom": ("type", "domain", "codomain", "atom_map"),
    "meetmap": ("type", "domain", "codomain", "table"),
    "space": ("type", "points", "preorder"),
    "map": ("type", "src", "dst", "points"),
}


def _located(path: str, fn, *args):
    """Run ``fn`` and prefix any workbench error with the document path."""
    try:
        return fn(*args)
    except MereoError as exc:
        if exc.path:
            raise
        raise type(exc)(str(exc), witness=exc.witness, path=path) from None


def _field(doc: dict, key: str, path: str):
    if key not in doc:
        raise DocumentError(f"missing field {key!r}", path=path or "$")
    return doc[key]


def _labels(value, path: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise DocumentError("expected a list of labels", path=path)
    return value


def _algebra(labels, path) -> FiniteBooleanAlgebra:
    return _located(path, make_algebra, _labels(labels, path))


def _expr(alg, value, path) -> Element:
    if not isinstance(value, str):
        raise DocumentError("expected an element expression", path=path)
    return _located(path, eval_element, alg, value)


def _pairs(alg, value, path) -> list[tuple[Element, Element]]:
    if not isinstance(value, list):
        raise DocumentError("expected a list of pairs", path=path)
    out = []
    for i, pair in enumerate(value):
        if not isinstance(pair, list) or len(pair) != 2:
            raise DocumentError("expected a pair", path=f"{path}[{i}]")
        out.append((_expr(alg, pair[0], f"{path}[{i}][0]"), _expr(alg, pair[1], f"{path}[{i}][1]")))
    return out


def _contact(alg, value, path) -> BinaryRelation:
    if isinstance(value, dict):
        if set(value) == {"atom_edges"}:
            edges = value["atom_edges"]
            if not isinstance(edges, list):
                raise DocumentError("expected a list of edges", path=f"{path}.atom_edges")
            for i, e in enumerate(edges):
                if not isinstance(e, list) or len(e) != 2:
                    raise DocumentError("expected an edge of two atoms", path=f"{path}.atom_edges[{i}]")
                for j, end in enumerate(e):
                    _expr(alg, end, f"{path}.atom_edges[{i}][{j}]")
            return _located(f"{path}.atom_edges", contact_from_atom_graph, alg, edges)
        if set(value) == {"pairs"}:
            value = value["pairs"]
            path = f"{path}.pairs"
        else:
            raise DocumentError("contact must be a pair list, {'pairs': ...} or {'atom_edges': ...}", path=path)
    return BinaryRelation.from_pairs(alg, _pairs(alg, value, path), CONTACT)


def _bounded(alg, value, path) -> frozenset:
    if isinstance(value, dict):
        if set(value) != {"generator"}:
            raise DocumentError("bounded must be a list or {'generator': expr}", path=path)
        g = _expr(alg, value["generator"], f"{path}.generator")
        return frozenset(e for e in alg.elements() if e <= g)
    if not isinstance(value, list):
        raise DocumentError("bounded must be a list or {'generator': expr}", path=path)
    return frozenset(_expr(alg, v, f"{path}[{i}]") for i, v in enumerate(value))


def _space(doc, path) -> FiniteSpace:
    if not isinstance(doc, dict):
        raise DocumentError("expected a space object", path=path)
    points = _labels(_field(doc, "points", path), f"{path}.points")
    if "preorder" in doc and "opens" in doc:
        raise DocumentError("give either preorder or opens", path=path)
    if "opens" in doc:
        opens = doc["opens"]
        if not isinstance(opens, list):
            raise DocumentError("expected a list of point sets", path=f"{path}.opens")
        return _located(f"{path}.opens", make_space, points, None, opens)
    pairs = _field(doc, "preorder", path)
    if not isinstance(pairs, list) or not all(isinstance(p, list) and len(p) == 2 for p in pairs):
        raise DocumentError("expected a list of point pairs", path=f"{path}.preorder")
    return _located(f"{path}.preorder", make_space, points, [tuple(p) for p in pairs])


def from_document(doc: dict, path: str = "") -> Any:
    if not isinstance(doc, dict):
        raise DocumentError("a document must be a JSON object", path=path or "$")
    kind = _field(doc, "type", path)
    p = (lambda k: f"{path}.{k}" if path else k)
    if kind == "contact":
        alg = _algebra(_field(doc, "atoms", path), p("atoms"))
        return ContactStructure(alg, _contact(alg, _field(doc, "contact", path), p("contact")))
    if kind == "lca":
        alg = _algebra(_field(doc, "atoms", path), p("atoms"))
        C = _contact(alg, _field(doc, "contact", path), p("contact"))
        return LocalContactStructure(alg, C, _bounded(alg, _field(doc, "bounded", path), p("bounded")))
    if kind == "mvd":
        alg = _algebra(_field(doc, "atoms", path), p("atoms"))
        W = BinaryRelation.from_pairs(alg, _pairs(alg, _field(doc, "wellinside", path), p("wellinside")), WELLINSIDE)
        return MvdStructure(alg, W)
    if kind in ("hom", "meetmap"):
        A = _algebra(_field(doc, "domain", path), p("domain"))
        B = _algebra(_field(doc, "codomain", path), p("codomain"))
        if kind == "hom" and "atom_map" in doc:
            amap = doc["atom_map"]
            if not isinstance(amap, dict):
                raise DocumentError("expected an object codomain atom -> domain atom", path=p("atom_map"))
            return _located(p("atom_map"), hom_from_atom_map, A, B, amap)
        table = _field(doc, "table", path)
        if not isinstance(table, dict):
            raise DocumentError("expected an object element -> element", path=p("table"))
        parsed = {}
        for k, v in table.items():
            parsed[_expr(A, k, f"{p('table')}[{k!r}]").bits] = _expr(B, v, f"{p('table')}[{k!r}]")
        if kind == "hom":
            return _located(p("table"), hom_from_table, A, B, {A.element(k): v for k, v in parsed.items()})
        missing = [i for i in range(A.size) if i not in parsed]
        if missing:
            raise DocumentError(f"no entry for {A.format_bits(missing[0])}", path=p("table"))
        return MeetFunctionTable(A, B, tuple(parsed[i].bits for i in range(A.size)))
    if kind == "space":
        return _space(doc, path or "$")
    if kind == "map":
        X = _space(_field(doc, "src", path), p("src"))
        Y = _space(_field(doc, "dst", path), p("dst"))
        points = _field(doc, "points", path)
        if not isinstance(points, dict):
            raise DocumentError("expected an object point -> point", path=p("points"))
        return _located(p("points"), SpaceMap.from_labels, X, Y, points)
    raise DocumentError(f"unknown document type {kind!r}", path=p("type"))


def parse(text: str) -> Any:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc.msg}", path=f"line {exc.lineno} column {exc.colno}") from None
    return from_document(doc)


# serialization


def _sorted_pairs(rel: BinaryRelation) -> list[list[str]]:
    alg = rel.algebra
    return [[alg.format_bits(int(a)), alg.format_bits(int(b))] for a, b in np.argwhere(rel.matrix)]


def _contact_doc(C: BinaryRelation):
    determined, _ = is_atom_determined(C)
    if determined:
        labels = C.algebra.atom_labels
        return {"atom_edges": [[labels[i], labels[j]] for i, j in atom_edges(C)]}
    return _sorted_pairs(C)


def _bounded_doc(L: LocalContactStructure):
    g = L.bounded_generator()
    if g is not None:
        return {"generator": str(g)}
    return [str(e) for e in sorted(L.bounded, key=lambda e: e.bits)]


def _space_doc(X: FiniteSpace) -> dict:
    return {"type": "space", "points": list(X.points), "preorder": [list(p) for p in X.preorder_pairs()]}


def to_document(value) -> dict:
    if isinstance(value, LocalContactStructure):
        return {"type": "lca", "atoms": list(value.algebra.atom_labels),
                "contact": _contact_doc(value.contact), "bounded": _bounded_doc(value)}
    if isinstance(value, ContactStructure):
        return {"type": "contact", "atoms": list(value.algebra.atom_labels), "contact": _contact_doc(value.contact)}
    if isinstance(value, MvdStructure):
        return {"type": "mvd", "atoms": list(value.algebra.atom_labels), "wellinside": _sorted_pairs(value.wellinside)}
    if isinstance(value, CompleteHomomorphism):
        return {"type": "hom", "domain": list(value.domain.atom_labels), "codomain": list(value.codomain.atom_labels),
                "atom_map": value.atom_map_labels()}
    if isinstance(value, MeetFunctionTable):
        return {"type": "meetmap", "domain": list(value.domain.atom_labels),
                "codomain": list(value.codomain.atom_labels), "table": value.as_dict()}
    if isinstance(value, FiniteSpace):
        return _space_doc(value)
    if isinstance(value, SpaceMap):
        return {"type": "map", "src": _space_doc(value.source), "dst": _space_doc(value.target),
                "points": {p: value.target.points[value.point_map[i]] for i, p in enumerate(value.source.points)}}
    raise DocumentError(f"cannot serialize {type(value).__name__}")


def dumps_compact(value) -> str:
    return json.dumps(value, ensure_ascii=False, separators=(", ", ": "))


def serialize(value) -> str:
    doc = to_document(value)
    lines = [f"  {json.dumps(k)}: {dumps_compact(doc[k])}" for k in KEY_ORDER[doc["type"]]]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def canonical_key(value) -> str:
    """One-line canonical form, used as a dedup key."""
    doc = to_document(value)
    return json.dumps({k: doc[k] for k in KEY_ORDER[doc["type"]]}, separators=(",", ":"))


def same_value(x, y) -> bool:
    return canonical_key(x) == canonical_key(y)

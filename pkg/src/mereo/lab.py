"""Enumeration, implication search and the correspondence suites.

Candidates of a kind are produced in a fixed canonical order (ascending
canonical code, see ``_Candidates``), filtered by axiom sets, and searched
for counterexamples.  Relation-valued kinds are filtered with the batch
predicates; every reported counterexample is re-verified with the
per-structure checkers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import batch
from .algebra import CompleteHomomorphism, FiniteBooleanAlgebra, check_galois, make_algebra
from .contact import (
    CONTACT,
    CONTACT_CHECKS,
    WELLINSIDE,
    WELLINSIDE_CHECKS,
    BinaryRelation,
    check_contact_axioms,
    check_wellinside_axioms,
    contact_from_atom_graph,
    contact_from_wellinside,
    wellinside_from_contact,
)
from .docs import canonical_key, to_document
from .equivalence import kappa, tau
from .errors import CapacityExceeded, InternalMismatch, KindMismatch
from .morphisms import (
    CATEGORY_PAIRS,
    DLC_AXIOMS,
    MVDLC_AXIOMS,
    MeetFunctionTable,
    check_function_axioms,
    check_morphism_axiom,
    compose_dhlc,
    compose_mvdhlc,
)
from .reports import AxiomReport, AxiomResult, normalize_axiom_id
from .structures import (
    CA_AXIOMS,
    LCA_AXIOMS,
    MVD_AXIOMS,
    NCA_AXIOMS,
    ContactStructure,
    LocalContactStructure,
    MvdStructure,
    check_lca_axioms,
)
from .topology import FiniteSpace, enumerate_spaces, space_connected, standard_lca

KINDS = (
    "contact_graph", "contact_relation", "wellinside_relation", "ideal",
    "lca", "mvd", "preorder_space", "hom", "meet_table",
)

CAPS = {
    "contact_graph": 5, "contact_relation": 3, "wellinside_relation": 3, "ideal": 4,
    "lca": 4, "mvd": 3, "preorder_space": 4, "hom": 3, "meet_table": 3,
}

SUITES = {
    "contact": CA_AXIOMS,
    "nca": NCA_AXIOMS,
    "lca": LCA_AXIOMS,
    "mvd": MVD_AXIOMS,
    "galois": ("galois",),
}

SPACE_PREDICATES = ("connected", "discrete", "regular")
HOM_PREDICATES = ("galois", "injective", "surjective")

DEFAULT_SAMPLE = 10_000
DEFAULT_TABLE_SAMPLE = 1_000


def expand_ids(ids: Iterable[str], kind: str | None = None) -> tuple[str, ...]:
    out: list[str] = []
    for raw in ids:
        for part in str(raw).split(","):
            part = normalize_axiom_id(part)
            if not part:
                continue
            if part == "connected":
                if kind in ("mvd", "wellinside_relation"):
                    expanded = ("CONA",)
                elif kind in ("preorder_space",):
                    expanded = ("connected",)
                else:
                    expanded = ("CON",)
            else:
                expanded = SUITES.get(part, (part,))
            for e in expanded:
                if e not in out:
                    out.append(e)
    return tuple(out)


@dataclass(frozen=True)
class EnumerationSpec:
    kind: str
    n: int
    filters: tuple[str, ...] = ()
    seed: int = 0
    budget: int | None = None
    m: int | None = None                  # codomain atom count for hom / meet_table
    include_non_ideals: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise KindMismatch(f"unknown enumeration kind {self.kind!r}")
        object.__setattr__(self, "filters", expand_ids(self.filters, self.kind))
        if self.n < 0 or (self.m is not None and self.m < 0):
            raise ValueError("atom and point counts must be non-negative")
        cap = CAPS[self.kind]
        for count in (self.n, self.m if self.m is not None else self.n):
            if count > cap:
                raise CapacityExceeded(f"{self.kind} enumeration is limited to n <= {cap}, got {count}")

    @property
    def sampled(self) -> bool:
        if self.kind in ("contact_relation", "wellinside_relation"):
            return self.n > 2
        if self.kind == "meet_table":
            return max(self.n, self.codomain_n) > 2
        return False

    @property
    def codomain_n(self) -> int:
        return self.n if self.m is None else self.m


def atoms_for(n: int) -> tuple[str, ...]:
    base = "pqrstuvw"
    return tuple(base[:n]) if n <= len(base) else tuple(f"a{i}" for i in range(n))


# candidate generation


@dataclass
class _Candidates:
    """Candidates in canonical order.

    ``matrices`` holds the relation stack for relation kinds (flavor given
    by ``flavor``) so filters can run in batch; ``build(i)`` materializes
    candidate ``i``.
    """

    count: int
    build: Callable[[int], object]
    algebra: FiniteBooleanAlgebra | None = None
    matrices: np.ndarray | None = None
    flavor: str | None = None


def _graph_matrices(alg: FiniteBooleanAlgebra) -> tuple[list, np.ndarray]:
    n = alg.n
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rels = []
    for code in range(1 << len(pairs)):
        edges = [(alg.atoms[i], alg.atoms[j]) for k, (i, j) in enumerate(pairs) if code >> k & 1]
        rels.append(contact_from_atom_graph(alg, edges))
    mats = np.stack([r.matrix for r in rels]) if rels else np.zeros((0, alg.size, alg.size), bool)
    return rels, mats


def _relation_codes_to_matrices(codes: np.ndarray, size: int) -> np.ndarray:
    shifts = np.arange(size * size, dtype=np.uint64)
    bits = (codes[:, None].astype(np.uint64) >> shifts[None, :]) & np.uint64(1)
    return bits.astype(bool).reshape(len(codes), size, size)


def _matrix_codes(mats: np.ndarray) -> np.ndarray:
    N, s, _ = mats.shape
    weights = np.left_shift(np.uint64(1), np.arange(s * s, dtype=np.uint64))
    return (mats.reshape(N, s * s).astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)


def _all_relations(alg) -> np.ndarray:
    size = alg.size
    codes = np.arange(1 << (size * size), dtype=np.uint64)
    return _relation_codes_to_matrices(codes, size)


def _sampled_relations(alg, seed: int, budget: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    mats = rng.random((budget, alg.size, alg.size)) < 0.5
    codes = _matrix_codes(mats)
    _, first = np.unique(codes, return_index=True)
    return mats[np.sort(first)][np.argsort(codes[np.sort(first)], kind="stable")]


def principal_row_family(alg: FiniteBooleanAlgebra) -> np.ndarray:
    """Relations whose rows are empty or a principal filter above an
    element over the row index.  Contains every relation satisfying
    ll1, ll3 and ll4star."""
    size = alg.size
    leq = alg.leq_table
    options = []
    for a in range(size):
        rows = [np.zeros(size, dtype=bool)]
        rows += [leq[f].copy() for f in range(size) if leq[a, f]]
        options.append(np.stack(rows))
    grids = np.meshgrid(*[np.arange(len(o)) for o in options], indexing="ij")
    choice = np.stack([g.ravel() for g in grids], axis=1)
    mats = np.stack([options[a][choice[:, a]] for a in range(size)], axis=1)
    order = np.argsort(_matrix_codes(mats), kind="stable")
    return mats[order]


def meet_preserving_tables(A: FiniteBooleanAlgebra, B: FiniteBooleanAlgebra) -> list[MeetFunctionTable]:
    """All tables with ``psi(0) = 0`` that preserve meets.

    Each codomain atom ``q`` picks the nonzero generator of the filter
    ``{a : q <= psi(a)}`` or no filter at all.
    """
    idx = A.indices
    out = []
    for gens in itertools.product([None, *range(1, A.size)], repeat=B.n):
        vals = np.zeros(A.size, dtype=np.int64)
        for q, g in enumerate(gens):
            if g is not None:
                vals |= ((idx & g) == g).astype(np.int64) << q
        out.append(MeetFunctionTable(A, B, tuple(vals)))
    out.sort(key=lambda t: t.values)
    return out


def _random_tables(A, B, seed: int, budget: int, dedupe: bool = True) -> list[MeetFunctionTable]:
    """Half arbitrary functions, half meet-preserving ones with ``psi(0) = 0``."""
    rng = np.random.default_rng(seed)
    seen = {}
    drawn = []
    idx = A.indices
    for k in range(budget):
        if k % 2 == 0:
            vals = rng.integers(0, B.size, size=A.size)
        else:
            vals = np.zeros(A.size, dtype=np.int64)
            for q in range(B.n):
                g = int(rng.integers(0, A.size))
                if g:
                    vals |= ((idx & g) == g).astype(np.int64) << q
        t = MeetFunctionTable(A, B, tuple(int(v) for v in vals))
        drawn.append(t)
        seen.setdefault(t.values, t)
    if not dedupe:
        return drawn
    return [seen[key] for key in sorted(seen)]


def _candidates(spec: EnumerationSpec) -> _Candidates:
    kind, n = spec.kind, spec.n
    alg = make_algebra(atoms_for(n))
    if kind == "contact_graph":
        rels, mats = _graph_matrices(alg)
        return _Candidates(len(rels), lambda i: ContactStructure(alg, rels[i]), alg, mats, CONTACT)
    if kind in ("contact_relation", "wellinside_relation", "mvd"):
        flavor = CONTACT if kind == "contact_relation" else WELLINSIDE
        if kind == "mvd" and n == 3:
            mats = principal_row_family(alg)
        elif n <= 2:
            mats = _all_relations(alg)
        else:
            mats = _sampled_relations(alg, spec.seed, spec.budget or DEFAULT_SAMPLE)
        wrap = ContactStructure if flavor == CONTACT else MvdStructure
        return _Candidates(len(mats), lambda i: wrap(alg, BinaryRelation(alg, mats[i], flavor)), alg, mats, flavor)
    if kind == "ideal":
        overlap = BinaryRelation.overlap(alg)
        if spec.include_non_ideals:
            if n > 3:
                raise CapacityExceeded("non-ideal bounded sets are enumerated for n <= 3 only")
            subsets = list(range(1 << alg.size))
            build = lambda i: LocalContactStructure(
                alg, overlap, frozenset(alg.element(e) for e in range(alg.size) if subsets[i] >> e & 1))
            return _Candidates(len(subsets), build, alg)
        return _Candidates(alg.size, lambda i: LocalContactStructure.with_generator(alg, overlap, i), alg)
    if kind == "lca":
        rels, _ = _graph_matrices(alg)
        if spec.include_non_ideals:
            if n > 2:
                raise CapacityExceeded("non-ideal bounded sets are enumerated for n <= 2 only")
            per = 1 << alg.size
            build = lambda i: LocalContactStructure(
                alg, rels[i // per], frozenset(alg.element(e) for e in range(alg.size) if (i % per) >> e & 1))
            return _Candidates(len(rels) * per, build, alg)
        per = alg.size
        return _Candidates(len(rels) * per, lambda i: LocalContactStructure.with_generator(alg, rels[i // per], i % per), alg)
    if kind == "preorder_space":
        spaces = enumerate_spaces(n)
        return _Candidates(len(spaces), spaces.__getitem__)
    if kind in ("hom", "meet_table"):
        A = make_algebra([f"a{i + 1}" for i in range(n)])
        B = make_algebra([f"b{i + 1}" for i in range(spec.codomain_n)])
        if kind == "hom":
            if A.n == 0 and B.n > 0:
                return _Candidates(0, lambda i: None, A)
            maps = list(itertools.product(range(A.n), repeat=B.n))
            return _Candidates(len(maps), lambda i: CompleteHomomorphism(A, B, maps[i]), A)
        if spec.sampled:
            tables = _random_tables(A, B, spec.seed, spec.budget or DEFAULT_TABLE_SAMPLE)
        else:
            tables = [MeetFunctionTable(A, B, vals) for vals in itertools.product(range(B.size), repeat=A.size)]
        return _Candidates(len(tables), tables.__getitem__, A)
    raise KindMismatch(kind)


# predicates


def _unit_structures(A: FiniteBooleanAlgebra):
    """The valid local contact and MVD structures every algebra carries."""
    L = LocalContactStructure(A, BinaryRelation.overlap(A), frozenset(A.elements()))
    M = MvdStructure(A, BinaryRelation.order(A))
    return L, M


def evaluate(item, ids: Sequence[str]) -> AxiomReport:
    """Per-item checker for every predicate id the lab knows."""
    ids = expand_ids(ids, _kind_of(item))
    results: list[AxiomResult] = []
    for axiom in ids:
        results.extend(_evaluate_one(item, axiom).entries)
    return AxiomReport(tuple(results))


def _kind_of(item) -> str | None:
    if isinstance(item, MvdStructure):
        return "mvd"
    if isinstance(item, FiniteSpace):
        return "preorder_space"
    return None


def _evaluate_one(item, axiom: str) -> AxiomReport:
    if isinstance(item, LocalContactStructure):
        if axiom in WELLINSIDE_CHECKS:
            return check_wellinside_axioms(item.algebra, wellinside_from_contact(item.contact), (axiom,))
        return check_lca_axioms(item, (axiom,))
    if isinstance(item, ContactStructure):
        if axiom in CONTACT_CHECKS:
            return check_contact_axioms(item.algebra, item.contact, (axiom,))
        return check_wellinside_axioms(item.algebra, item.wellinside, (axiom,))
    if isinstance(item, MvdStructure):
        if axiom in WELLINSIDE_CHECKS:
            return check_wellinside_axioms(item.algebra, item.wellinside, (axiom,))
        return check_contact_axioms(item.algebra, contact_from_wellinside(item.wellinside), (axiom,))
    if isinstance(item, CompleteHomomorphism):
        if axiom == "galois":
            rep = check_galois(item)
            return AxiomReport(tuple(AxiomResult(name, ok, w) for name, ok, w in rep.verdicts()))
        if axiom == "injective":
            return AxiomReport((AxiomResult("injective", item.is_injective),))
        if axiom == "surjective":
            return AxiomReport((AxiomResult("surjective", item.is_surjective),))
        raise KeyError(f"unknown predicate {axiom!r} for homomorphisms")
    if isinstance(item, MeetFunctionTable):
        LA, MA = _unit_structures(item.domain)
        LB, MB = _unit_structures(item.codomain)
        if axiom in DLC_AXIOMS:
            return check_function_axioms(item, LA, LB, (axiom,))
        if axiom in MVDLC_AXIOMS:
            return check_function_axioms(item, MA, MB, (axiom,))
        raise KeyError(f"unknown predicate {axiom!r} for function tables")
    if isinstance(item, FiniteSpace):
        if axiom == "connected":
            return AxiomReport((AxiomResult("connected", space_connected(item)),))
        if axiom == "discrete":
            return AxiomReport((AxiomResult("discrete", item.is_discrete),))
        if axiom == "regular":
            return AxiomReport((AxiomResult("regular", item.is_regular),))
        if axiom in CONTACT_CHECKS or axiom in LCA_AXIOMS:
            return check_lca_axioms(standard_lca(item), (axiom,))
        raise KeyError(f"unknown predicate {axiom!r} for spaces")
    raise KindMismatch(f"cannot evaluate {type(item).__name__}")


def _batch_holds(cands: _Candidates, axiom: str) -> np.ndarray | None:
    if cands.matrices is None:
        return None
    alg, mats = cands.algebra, cands.matrices
    comp = alg.complement_table
    flipped = ~mats[:, :, comp]
    if cands.flavor == CONTACT:
        if axiom in CONTACT_CHECKS:
            return batch.contact_holds(alg, mats, axiom)
        if axiom in WELLINSIDE_CHECKS:
            return batch.wellinside_holds(alg, flipped, axiom)
    else:
        if axiom in WELLINSIDE_CHECKS:
            return batch.wellinside_holds(alg, mats, axiom)
        if axiom in CONTACT_CHECKS:
            return batch.contact_holds(alg, flipped, axiom)
    return None


def _holds_vector(cands: _Candidates, axiom: str, subset: np.ndarray | None = None) -> np.ndarray:
    """Holds-flags for ``axiom`` on the candidates listed in ``subset``."""
    sel = np.arange(cands.count) if subset is None else subset
    if cands.matrices is not None:
        sub = _Candidates(len(sel), cands.build, cands.algebra, cands.matrices[sel], cands.flavor)
        vec = _batch_holds(sub, axiom)
        if vec is not None:
            return vec
    return np.array([evaluate(cands.build(int(i)), (axiom,)).holds for i in sel], dtype=bool)


@dataclass
class Enumeration:
    spec: EnumerationSpec
    items: list
    summary: dict

    def __iter__(self):
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def json_lines(self) -> list[str]:
        import json
        lines = [canonical_key(item) for item in self.items]
        lines.append(json.dumps({"summary": self.summary}, separators=(",", ":")))
        return lines


def enumerate_structures(spec: EnumerationSpec) -> Enumeration:
    cands = _candidates(spec)
    keep = np.ones(cands.count, dtype=bool)
    per_filter = {}
    for axiom in spec.filters:
        vec = _holds_vector(cands, axiom)
        per_filter[axiom] = int(vec.sum())
        keep &= vec
    chosen = np.flatnonzero(keep)
    items = [cands.build(int(i)) for i in chosen]
    summary = {
        "kind": spec.kind, "n": spec.n, "candidates": cands.count,
        "per_filter": per_filter, "matched": len(items),
        "mode": "sampled" if spec.sampled else "exhaustive",
    }
    if spec.sampled:
        summary["seed"] = spec.seed
    if spec.m is not None:
        summary["m"] = spec.m
    return Enumeration(spec, items, summary)


@dataclass(frozen=True)
class SearchOutcome:
    status: str                           # counterexample | exhausted | budget_reached
    candidates_tried: int
    witness: dict | None = None
    item: object = None
    report: AxiomReport | None = None
    note: str | None = None

    def to_json(self) -> dict:
        out = {"status": self.status, "candidates_tried": self.candidates_tried}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        return out


def search_implication(hypothesis: Iterable[str], conclusion: Iterable[str], spec: EnumerationSpec) -> SearchOutcome:
    """First candidate satisfying every hypothesis but some conclusion."""
    hyp = expand_ids(hypothesis, spec.kind)
    concl = expand_ids(conclusion, spec.kind)
    if set(concl) <= set(hyp):
        return SearchOutcome("exhausted", 0, note="every conclusion is part of the hypothesis")
    if spec.kind in ("ideal", "lca") and any(c.startswith("BB") for c in concl) and not spec.include_non_ideals:
        spec = EnumerationSpec(spec.kind, spec.n, spec.filters, spec.seed, spec.budget, spec.m, True)
    cands = _candidates(spec)
    limit = cands.count
    if spec.budget is not None and not spec.sampled:
        limit = min(limit, spec.budget)
    alive = np.arange(limit)
    for axiom in hyp:
        if alive.size == 0:
            break
        alive = alive[_holds_vector(cands, axiom, alive)]
    bad = np.zeros(alive.size, dtype=bool)
    for axiom in concl:
        if alive.size == 0:
            break
        bad |= ~_holds_vector(cands, axiom, alive)
    hits = alive[bad]
    if hits.size == 0:
        status = "exhausted" if limit == cands.count and not spec.sampled else "budget_reached"
        return SearchOutcome(status, int(limit))
    first = int(hits[0])
    item = cands.build(first)
    report = evaluate(item, hyp + tuple(c for c in concl if c not in hyp))
    if not all(report[h].holds for h in hyp) or all(report[c].holds for c in concl):
        raise InternalMismatch("batch and per-structure checkers disagree on a counterexample")
    witness = {"structure": to_document(item), "report": report.to_json()}
    return SearchOutcome("counterexample", first + 1, witness, item, report)


# correspondence suite


@dataclass
class SuiteRow:
    name: str
    asserted: bool
    checked: int = 0
    failures: int = 0
    witness: dict | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, witness: Callable[[], dict]) -> None:
        self.checked += 1
        if not ok:
            self.failures += 1
            if self.witness is None:
                self.witness = witness()

    def to_json(self) -> dict:
        return {"row": self.name, "asserted": self.asserted, "passed": self.passed,
                "checked": self.checked, "failures": self.failures, "witness": self.witness}


@dataclass
class SuiteReport:
    rows: list[SuiteRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows if r.asserted)

    def row(self, name: str) -> SuiteRow:
        for r in self.rows:
            if r.name == name:
                return r
        raise KeyError(name)

    def failing(self) -> list[SuiteRow]:
        return [r for r in self.rows if r.asserted and not r.passed]

    def to_json(self) -> dict:
        return {"passed": self.passed, "rows": [r.to_json() for r in self.rows]}


def valid_lcas(n: int) -> list[LocalContactStructure]:
    return enumerate_structures(EnumerationSpec("lca", n, ("lca",))).items


def valid_mvds(n: int) -> list[MvdStructure]:
    return enumerate_structures(EnumerationSpec("mvd", n, ("mvd",))).items


def homs_between(A: FiniteBooleanAlgebra, B: FiniteBooleanAlgebra):
    if A.n == 0 and B.n > 0:
        return
    for images in itertools.product(range(A.n), repeat=B.n):
        yield CompleteHomomorphism(A, B, images)


def _with_algebra(S, labels):
    """Relabel a structure's atoms (so source and target algebras differ)."""
    alg = make_algebra(labels)
    if isinstance(S, LocalContactStructure):
        return LocalContactStructure(alg, BinaryRelation(alg, S.contact.matrix, CONTACT),
                                     frozenset(alg.element(e.bits) for e in S.bounded))
    return MvdStructure(alg, BinaryRelation(alg, S.wellinside.matrix, WELLINSIDE))


def _endpoint_pairs(structs_by_n: dict[int, list]):
    for m, srcs in structs_by_n.items():
        for k, dsts in structs_by_n.items():
            for S in srcs:
                for T in dsts:
                    S1 = _with_algebra(S, [f"a{i + 1}" for i in range(m)])
                    T1 = _with_algebra(T, [f"b{i + 1}" for i in range(k)])
                    yield S1, T1


def _flag(report: dict, ids, side_ok: bool, conn_ok: bool) -> bool:
    return side_ok and conn_ok and all(report[a] for a in ids)


def _morphism_witness(phi, src, dst, **extra):
    out = {"map": to_document(phi), "src": to_document(src), "dst": to_document(dst)}
    out.update(extra)
    return out


def correspondence_suite(n: int, *, _kappa: Callable = kappa, tables_seed: int = 0,
                         table_samples: int = DEFAULT_TABLE_SAMPLE) -> SuiteReport:
    """Check the LCA/MVD morphism correspondences on every valid structure
    with at most ``n`` atoms.  ``_kappa`` is a test hook for mutation runs."""
    if n > 3:
        raise CapacityExceeded(f"correspondence_suite is limited to n <= 3, got {n}")
    report = SuiteReport()
    rows = {}

    def row(name, asserted=True):
        r = SuiteRow(name, asserted)
        report.rows.append(r)
        rows[name] = r
        return r

    lcas = {k: valid_lcas(k) for k in range(n + 1)}
    mvds = {k: valid_mvds(k) for k in range(n + 1)}

    # object level
    r_valid = row("kappa image of a candidate is valid iff the candidate is")
    for k in range(n + 1):
        for L in enumerate_structures(EnumerationSpec("lca", k)).items:
            M = _kappa(L)
            r_valid.record(M.is_valid == L.is_valid, lambda: {"structure": to_document(L),
                                                            "image": to_document(M)})
    r_inv = row("tau(kappa(L)) = L and kappa(tau(M)) = M")
    for k in range(n + 1):
        for L in lcas[k]:
            back = tau(_kappa(L))
            r_inv.record(canonical_key(back) == canonical_key(L), lambda: {"structure": to_document(L)})
        for M in mvds[k]:
            back = _kappa(tau(M))
            r_inv.record(canonical_key(back) == canonical_key(M), lambda: {"structure": to_document(M)})

    # axiom equivalences on the same structures
    equiv = [("L1", "L1p"), ("LS", "LSp"), ("LO", "LOalt")]
    eq_rows = {pair: row(f"{pair[0]} <-> {pair[1]}") for pair in equiv}
    pair_rows = {p.l_name: row(f"{p.l_name} <-> {p.s_name}") for p in CATEGORY_PAIRS if not p.functions and p.l_name in _CORRESPONDENCE}
    r_es1 = row("ES1 and S2 imply S1")

    l_ids = ("L1", "L1p", "L2", "L3", "LO", "LOalt", "LS", "LSp", "IS")
    s_ids = ("S1", "S2", "ES1", "S3", "SO", "CS", "LSpp", "ISp")
    for L, L2 in _endpoint_pairs(lcas):
        M, M2 = _kappa(L), _kappa(L2)
        conn_l = L.is_connected and L2.is_connected
        conn_s = M.is_connected and M2.is_connected
        for phi in homs_between(L.algebra, L2.algebra):
            lv = {a: check_morphism_axiom(phi, L, L2, a)[a] for a in l_ids}
            sv = {a: check_morphism_axiom(phi, M, M2, a)[a] for a in s_ids}
            lh = {a: r.holds for a, r in lv.items()}
            sh = {a: r.holds for a, r in sv.items()}
            for x, y in equiv:
                eq_rows[(x, y)].record(lh[x] == lh[y], lambda: _morphism_witness(
                    phi, L, L2, **{x: lv[x].to_json(), y: lv[y].to_json()}))
            for p in CATEGORY_PAIRS:
                if p.l_name not in pair_rows:
                    continue
                side_ok = {None: True, "injective": phi.is_injective, "surjective": phi.is_surjective}[p.side]
                fl = _flag(lh, p.l_axioms, side_ok, conn_l or not p.connected)
                fs = _flag(sh, p.s_axioms, side_ok, conn_s or not p.connected)
                pair_rows[p.l_name].record(fl == fs, lambda: _morphism_witness(
                    phi, L, L2, lca_member=fl, mvd_member=fs,
                    lca_axioms={a: lv[a].to_json() for a in p.l_axioms},
                    mvd_axioms={a: sv[a].to_json() for a in p.s_axioms}))

    for M, M2 in _endpoint_pairs(mvds):
        for phi in homs_between(M.algebra, M2.algebra):
            es1 = check_morphism_axiom(phi, M, M2, "ES1")["ES1"].holds
            s2 = check_morphism_axiom(phi, M, M2, "S2")["S2"].holds
            s1 = check_morphism_axiom(phi, M, M2, "S1")["S1"]
            r_es1.record(not (es1 and s2) or s1.holds, lambda: _morphism_witness(phi, M, M2, S1=s1.to_json()))

    # function tables
    r_dlc = row("DLC1-5 <-> MVDLC1-5")
    r_dlc_each = row("DLCi <-> MVDLCi for each i", asserted=False)
    for L, L2, tables in _table_instances(lcas, n, tables_seed, table_samples):
        M, M2 = _kappa(L), _kappa(L2)
        for psi in tables:
            d = check_function_axioms(psi, L, L2, DLC_AXIOMS)
            v = check_function_axioms(psi, M, M2, MVDLC_AXIOMS)
            r_dlc.record(d.holds == v.holds, lambda: {"table": to_document(psi), "src": to_document(L),
                                                      "dst": to_document(L2), "dlc": d.to_json(), "mvdlc": v.to_json()})
            same = all(a.holds == b.holds for a, b in zip(d, v))
            r_dlc_each.record(same, lambda: {"table": to_document(psi), "dlc": d.to_json(), "mvdlc": v.to_json()})

    # pre-structures: reported, not asserted
    pre = {k: enumerate_structures(EnumerationSpec("lca", k)).items for k in range(min(n, 2) + 1)}
    pre_rows = {pair: row(f"{pair[0]} <-> {pair[1]} on candidate pre-structures", asserted=False) for pair in equiv}
    for L, L2 in _endpoint_pairs(pre):
        for phi in homs_between(L.algebra, L2.algebra):
            for x, y in equiv:
                hx = check_morphism_axiom(phi, L, L2, x)[x].holds
                hy = check_morphism_axiom(phi, L, L2, y)[y].holds
                pre_rows[(x, y)].record(hx == hy, lambda: _morphism_witness(phi, L, L2))
    return report


_CORRESPONDENCE = (
    "SKAL", "SAL", "OAL", "OPAL", "SigmaSKAL", "ISKAL", "ISAL", "SigmaSAL",
    "IOPAL", "SigmaOPAL", "IOAL", "SigmaOAL", "SALC", "OPALC",
)


def _table_instances(lcas, n, seed, samples):
    """(src, dst, tables): all tables up to 2 atoms, sampled and all
    meet-preserving tables at 3 atoms."""
    small = {k: v for k, v in lcas.items() if k <= 2}
    for L, L2 in _endpoint_pairs(small):
        A, B = L.algebra, L2.algebra
        tables = [MeetFunctionTable(A, B, vals) for vals in itertools.product(range(B.size), repeat=A.size)]
        yield L, L2, tables
    if n >= 3:
        for L in lcas[3]:
            for L2 in lcas[3]:
                S = _with_algebra(L, ["a1", "a2", "a3"])
                T = _with_algebra(L2, ["b1", "b2", "b3"])
                tables = _random_tables(S.algebra, T.algebra, seed, samples, dedupe=False)
                yield S, T, tables
                yield S, T, meet_preserving_tables(S.algebra, T.algebra)


# compositions


def dlc_valid_tables(L: LocalContactStructure, L2: LocalContactStructure) -> list[MeetFunctionTable]:
    """Every table satisfying DLC1-5 (found among the meet-preserving ones)."""
    return [t for t in meet_preserving_tables(L.algebra, L2.algebra)
            if check_function_axioms(t, L, L2, DLC_AXIOMS).holds]


def mvdlc_valid_tables(M: MvdStructure, M2: MvdStructure) -> list[MeetFunctionTable]:
    return [t for t in meet_preserving_tables(M.algebra, M2.algebra)
            if check_function_axioms(t, M, M2, MVDLC_AXIOMS).holds]


def composition_suite(n: int = 3, *, seed: int = 0, triples: int = 50) -> SuiteReport:
    """Category laws of the two table compositions on valid structures."""
    report = SuiteReport()
    closed = SuiteRow("composite of valid tables is valid", True)
    neutral = SuiteRow("identity tables are neutral", True)
    assoc = SuiteRow("composition is associative", True)
    agree = SuiteRow("both compositions agree under kappa", True)
    mclosed = SuiteRow("MVD composite of valid tables is valid", True)
    mneutral = SuiteRow("identity tables are neutral for the MVD composite", True)
    massoc = SuiteRow("MVD composition is associative", True)
    report.rows.extend([closed, neutral, assoc, agree, mclosed, mneutral, massoc])

    objects = []
    for k in range(1, n + 1):
        for i, L in enumerate(valid_lcas(k)):
            objects.append(_with_algebra(L, [f"{c}{k}{i}" for c in atoms_for(k)]))
    mvd_of = {id(L): kappa(L) for L in objects}
    homs = {(i, j): dlc_valid_tables(objects[i], objects[j]) for i in range(len(objects)) for j in range(len(objects))}
    mhoms = {(i, j): mvdlc_valid_tables(mvd_of[id(objects[i])], mvd_of[id(objects[j])])
             for i in range(len(objects)) for j in range(len(objects))}
    # kappa transport matches hom-sets
    for key in homs:
        agree.record([t.values for t in homs[key]] == [t.values for t in mhoms[key]],
                     lambda: {"src": to_document(objects[key[0]]), "dst": to_document(objects[key[1]])})

    for i, L in enumerate(objects):
        M = mvd_of[id(L)]
        ident = MeetFunctionTable.identity(L.algebra)
        for j, L2 in enumerate(objects):
            M2 = mvd_of[id(L2)]
            ident2 = MeetFunctionTable.identity(L2.algebra)
            for psi in homs[(i, j)]:
                neutral.record(compose_dhlc(psi, ident, L) == psi and compose_dhlc(ident2, psi, L) == psi,
                               lambda: {"table": to_document(psi)})
                mneutral.record(compose_mvdhlc(psi, ident, M) == psi and compose_mvdhlc(ident2, psi, M) == psi,
                                lambda: {"table": to_document(psi)})
            for k2, L3 in enumerate(objects):
                M3 = mvd_of[id(L3)]
                for p1 in homs[(i, j)]:
                    for p2 in homs[(j, k2)]:
                        c = compose_dhlc(p2, p1, L)
                        closed.record(check_function_axioms(c, L, L3, DLC_AXIOMS).holds,
                                      lambda: {"first": to_document(p1), "second": to_document(p2)})
                        mc = compose_mvdhlc(p2, p1, M)
                        mclosed.record(check_function_axioms(mc, M, M3, MVDLC_AXIOMS).holds,
                                       lambda: {"first": to_document(p1), "second": to_document(p2)})
                        agree.record(c == mc, lambda: {"first": to_document(p1), "second": to_document(p2)})

    rng = np.random.default_rng(seed)
    chains = [(i, j, k2, l) for i in range(len(objects)) for j in range(len(objects))
              for k2 in range(len(objects)) for l in range(len(objects))
              if homs[(i, j)] and homs[(j, k2)] and homs[(k2, l)]]
    for _ in range(triples):
        i, j, k2, l = chains[int(rng.integers(len(chains)))]
        p1 = homs[(i, j)][int(rng.integers(len(homs[(i, j)])))]
        p2 = homs[(j, k2)][int(rng.integers(len(homs[(j, k2)])))]
        p3 = homs[(k2, l)][int(rng.integers(len(homs[(k2, l)])))]
        L1, L2 = objects[i], objects[j]
        left = compose_dhlc(compose_dhlc(p3, p2, L2), p1, L1)
        right = compose_dhlc(p3, compose_dhlc(p2, p1, L1), L1)
        witness = lambda: {"tables": [to_document(p) for p in (p1, p2, p3)]}
        assoc.record(left == right, witness)
        M1, M2 = mvd_of[id(L1)], mvd_of[id(L2)]
        mleft = compose_mvdhlc(compose_mvdhlc(p3, p2, M2), p1, M1)
        mright = compose_mvdhlc(p3, compose_mvdhlc(p2, p1, M1), M1)
        massoc.record(mleft == mright, witness)
        agree.record(left == mleft, witness)
    return report

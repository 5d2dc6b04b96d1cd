"""Morphism axioms, compositions of function tables, category membership.

A homomorphism ``phi: A -> B`` goes between two structures of the same
kind.  Axioms written with a contact symbol take local contact structures,
axioms written with ``<<`` take MVD structures.  Every check is vectorized
over the quantified variables and reports the first violation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .algebra import CompleteHomomorphism, Element, FiniteBooleanAlgebra, _table_array
from .equivalence import kappa, rho_m_existential, tau, wellinside_rho_m
from .errors import AlgebraMismatch, KindMismatch, require_capacity
from .reports import AxiomReport, AxiomResult, bool_matmul, first_true, normalize_axiom_id, verdict
from .structures import LocalContactStructure, MvdStructure

L_AXIOMS = ("L1", "L1p", "L2", "L3", "LO", "LOalt", "LS", "LSp", "IS")
S_AXIOMS = ("S1", "S2", "ES1", "S3", "SO", "CS", "LSpp", "ISp")
DLC_AXIOMS = ("DLC1", "DLC2", "DLC3", "DLC4", "DLC5")
MVDLC_AXIOMS = ("MVDLC1", "MVDLC2", "MVDLC3", "MVDLC4", "MVDLC5")


@dataclass(frozen=True)
class MeetFunctionTable:
    """An arbitrary function ``A -> B`` stored by bit vector."""

    domain: FiniteBooleanAlgebra
    codomain: FiniteBooleanAlgebra
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if len(vals) != self.domain.size:
            raise ValueError(f"table needs {self.domain.size} entries, got {len(vals)}")
        if any(not 0 <= v <= self.codomain.top_bits for v in vals):
            raise ValueError("table value outside the codomain")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_mapping(cls, A, B, table: Mapping | Sequence) -> "MeetFunctionTable":
        return cls(A, B, tuple(_table_array(A, B, table)))

    @classmethod
    def identity(cls, A: FiniteBooleanAlgebra) -> "MeetFunctionTable":
        return cls(A, A, tuple(range(A.size)))

    @classmethod
    def zero(cls, A: FiniteBooleanAlgebra, B: FiniteBooleanAlgebra) -> "MeetFunctionTable":
        return cls(A, B, (0,) * A.size)

    @classmethod
    def from_hom(cls, phi: CompleteHomomorphism) -> "MeetFunctionTable":
        return cls(phi.domain, phi.codomain, tuple(phi.table()))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.int64)

    def __call__(self, a) -> Element:
        a = self.domain.element(a)
        return Element(self.codomain, self.values[a.bits])

    def as_dict(self) -> dict[str, str]:
        return {self.domain.format_bits(i): self.codomain.format_bits(v) for i, v in enumerate(self.values)}


def _require(kind, *structures):
    for s in structures:
        if not isinstance(s, kind):
            raise KindMismatch(f"expected {kind.__name__}, got {type(s).__name__}")


def _require_algebras(f, src, dst):
    if f.domain != src.algebra:
        raise AlgebraMismatch("map domain differs from the source structure's algebra")
    if f.codomain != dst.algebra:
        raise AlgebraMismatch("map codomain differs from the target structure's algebra")


def _w(alg, contact):
    return ~contact[:, alg.complement_table]


def _bounded_atoms(alg, bounded: np.ndarray) -> np.ndarray:
    """``out[i]``: the principal ultrafilter of atom ``i`` meets ``bounded``."""
    ups = alg.leq_table[[1 << i for i in range(alg.n)]]
    return (ups & bounded[None, :]).any(axis=1)


def _ultrafilter_search(axiom, A, B, related: np.ndarray, bounded_a, bounded_b) -> AxiomResult:
    """For every bounded ``up(p)`` some bounded ``up(q)`` has ``related[b, a]``
    for all ``b >= q`` and ``a >= p``."""
    ups_a = A.leq_table[[1 << i for i in range(A.n)]].reshape(A.n, A.size)
    ups_b = B.leq_table[[1 << j for j in range(B.n)]].reshape(B.n, B.size)
    broken = bool_matmul(bool_matmul(ups_b, ~related), ups_a.T)   # [q, p]
    good = ~broken & _bounded_atoms(B, bounded_b)[:, None]
    bad = _bounded_atoms(A, bounded_a) & ~good.any(axis=0)
    hit = first_true(bad)
    if hit is None:
        return AxiomResult(axiom, True)
    return AxiomResult(axiom, False, {"u": Element(A, 1 << hit[0])}, note="no bounded ultrafilter v qualifies")


# L-side: (A, rho, bounded) -> (B, eta, bounded')


def _l_side(phi: CompleteHomomorphism, src: LocalContactStructure, dst: LocalContactStructure, axiom: str):
    A, B = phi.domain, phi.codomain
    P, Q = phi.table(), phi.adjoint_table()
    rho, eta = src.contact.matrix, dst.contact.matrix
    bd, bd2 = src.bounded_vector, dst.bounded_vector
    ab = (("a", A), ("b", A))
    ab_cod = (("a", B), ("b", B))
    if axiom == "L1":
        return verdict("L1", eta[np.ix_(P, P)] & ~rho, ab)
    if axiom == "L1p":
        return verdict("L1p", _w(A, rho) & ~_w(B, eta)[np.ix_(P, P)], ab)
    if axiom == "L2":
        return verdict("L2", bd2 & ~bd[Q], (("b", B),))
    if axiom == "L3":
        return verdict("L3", bd & ~bd2[P], (("a", A),))
    if axiom == "LO":
        viol = bd2[None, :] & rho[Q][:, :].T & ~eta[:, P].T
        return verdict("LO", viol, (("a", A), ("b", B)))
    if axiom == "LOalt":
        viol = bd2[None, :] & _w(B, eta)[:, P].T & ~_w(A, rho)[Q].T
        return verdict("LOalt", viol, (("a", A), ("b", B)))
    if axiom == "LS":
        both = bd2[:, None] & bd2[None, :]
        return verdict("LS", both & rho[np.ix_(Q, Q)] & ~eta, ab_cod)
    if axiom == "LSp":
        both = bd2[:, None] & bd2[None, :]
        target = A.complement_table[Q[B.complement_table]]     # (phiL(b*))*
        return verdict("LSp", both & _w(B, eta) & ~_w(A, rho)[np.ix_(Q, target)], ab_cod)
    if axiom == "IS":
        related = rho[Q]                                         # [b, a]: phiL(b) rho a
        return _ultrafilter_search("IS", A, B, related, bd, bd2)
    raise KeyError(f"unknown L-side axiom {axiom!r}")


# S-side: (A, <<) -> (B, <<')


def _cs(phi, W, W2, axiom, bounded_hyp):
    A, B = phi.domain, phi.codomain
    Q = phi.adjoint_table()
    target = A.complement_table[Q[B.complement_table]]
    viol = W2 & ~W[np.ix_(Q, target)]
    if bounded_hyp:
        top = W2[:, B.top_bits]
        viol = viol & top[:, None] & top[None, :]
    return verdict(axiom, viol, (("a", B), ("b", B)))


def _s_side(phi: CompleteHomomorphism, src: MvdStructure, dst: MvdStructure, axiom: str):
    A, B = phi.domain, phi.codomain
    P, Q = phi.table(), phi.adjoint_table()
    W, W2 = src.wellinside.matrix, dst.wellinside.matrix
    ab = (("a", A), ("b", A))
    if axiom == "S1":
        lhs = wellinside_rho_m(A, W)
        rhs = wellinside_rho_m(B, W2)[np.ix_(P, P)]
        return verdict("S1", lhs & ~rhs, ab)
    if axiom == "S2":
        return verdict("S2", W2[:, B.top_bits] & ~W[Q, A.top_bits], (("b", B),))
    if axiom == "ES1":
        return verdict("ES1", W & ~W2[np.ix_(P, P)], ab)
    if axiom == "S3":
        return verdict("S3", W[:, A.top_bits] & ~W2[P, B.top_bits], (("a", A),))
    if axiom == "SO":
        viol = W2[:, P].T & ~W[Q].T                                # [a, b]
        return verdict("SO", viol, (("a", A), ("b", B)))
    if axiom == "CS":
        return _cs(phi, W, W2, "CS", bounded_hyp=False)
    if axiom == "LSpp":
        return _cs(phi, W, W2, "LSpp", bounded_hyp=True)
    if axiom == "ISp":
        related = rho_m_existential(A, W)[Q]                       # [b, a]
        return _ultrafilter_search("ISp", A, B, related, W[:, A.top_bits], W2[:, B.top_bits])
    raise KeyError(f"unknown S-side axiom {axiom!r}")


def check_morphism_axiom(phi: CompleteHomomorphism, src, dst, axiom: str) -> AxiomReport:
    axiom = normalize_axiom_id(axiom)
    require_capacity(max(phi.domain.n, phi.codomain.n), "check_morphism_axiom")
    if axiom in L_AXIOMS:
        _require(LocalContactStructure, src, dst)
        _require_algebras(phi, src, dst)
        return AxiomReport((_l_side(phi, src, dst, axiom),))
    if axiom in S_AXIOMS:
        _require(MvdStructure, src, dst)
        _require_algebras(phi, src, dst)
        return AxiomReport((_s_side(phi, src, dst, axiom),))
    if axiom in DLC_AXIOMS or axiom in MVDLC_AXIOMS:
        return check_function_axioms(MeetFunctionTable.from_hom(phi), src, dst, (axiom,))
    raise KeyError(f"unknown morphism axiom {axiom!r}")


def check_morphism_axioms(phi, src, dst, which: Sequence[str]) -> AxiomReport:
    entries = []
    for axiom in which:
        entries.extend(check_morphism_axiom(phi, src, dst, axiom).entries)
    return AxiomReport(tuple(entries))


# function tables


def _join_over(values: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """``out[a] = OR of values[b] over mask[b, a]``."""
    return np.bitwise_or.reduce(np.where(mask, values[:, None], 0), axis=0)


def _function_axiom(psi: MeetFunctionTable, src, dst, axiom: str) -> AxiomResult:
    A, B = psi.domain, psi.codomain
    T = psi.array
    ab = (("a", A), ("b", A))
    number = axiom[-1]
    if number == "1":
        if T[0] == 0:
            return AxiomResult(axiom, True)
        return AxiomResult(axiom, False, {"a": Element(A, 0)})
    if number == "2":
        return verdict(axiom, T[A.meet_table] != (T[:, None] & T[None, :]), ab)
    # (psi(a*))* for every a
    co = B.complement_table[T[A.complement_table]]
    if axiom.startswith("DLC"):
        rho, eta = src.contact.matrix, dst.contact.matrix
        bd, bd2 = src.bounded_vector, dst.bounded_vector
        w_rho, w_eta = _w(A, rho), _w(B, eta)
        if number == "3":
            return verdict(axiom, bd[:, None] & w_rho & ~w_eta[np.ix_(co, T)], ab)
        if number == "4":
            covered = (B.leq_table[:, T] & bd[None, :]).any(axis=1)
            return verdict(axiom, bd2 & ~covered, (("b", B),))
        if number == "5":
            return verdict(axiom, T != _join_over(T, bd[:, None] & w_rho), (("a", A),))
    else:
        W, W2 = src.wellinside.matrix, dst.wellinside.matrix
        guard = W2[:, B.top_bits]
        if number == "3":
            # [a, b, c]: (psi(a*))* & c <<' psi(b) | c*
            lhs = B.meet_table[co][:, None, :]                     # [a, 1, c]
            rhs = B.join_table[T][:, B.complement_table][None, :, :]  # [1, b, c]
            viol = W[:, :, None] & guard[None, None, :] & ~W2[lhs, rhs]
            return verdict(axiom, viol, (("a", A), ("b", A), ("c", B)))
        if number == "4":
            covered = (B.leq_table[:, T] & W[:, A.top_bits][None, :]).any(axis=1)
            return verdict(axiom, guard & ~covered, (("b", B),))
        if number == "5":
            return verdict(axiom, T != _join_over(T, W), (("a", A),))
    raise KeyError(f"unknown function axiom {axiom!r}")


def check_function_axioms(psi: MeetFunctionTable, src, dst, which: Sequence[str] | None = None) -> AxiomReport:
    require_capacity(max(psi.domain.n, psi.codomain.n), "check_function_axioms")
    if which is None:
        which = DLC_AXIOMS if isinstance(src, LocalContactStructure) else MVDLC_AXIOMS
    ids = [normalize_axiom_id(w) for w in which]
    for axiom in ids:
        if axiom in DLC_AXIOMS:
            _require(LocalContactStructure, src, dst)
        elif axiom in MVDLC_AXIOMS:
            _require(MvdStructure, src, dst)
        else:
            raise KeyError(f"unknown function axiom {axiom!r}")
    _require_algebras(psi, src, dst)
    return AxiomReport(tuple(_function_axiom(psi, src, dst, a) for a in ids))


def _chain(psi2: MeetFunctionTable, psi1: MeetFunctionTable, src):
    if psi1.codomain != psi2.domain:
        raise AlgebraMismatch("tables do not chain: codomain of the first is not the domain of the second")
    if src.algebra != psi1.domain:
        raise AlgebraMismatch("structure does not live on the first table's domain")
    return psi2.array[psi1.array]


def compose_dhlc(psi2: MeetFunctionTable, psi1: MeetFunctionTable, src: LocalContactStructure) -> MeetFunctionTable:
    """``a -> OR{psi2(psi1(b)) : b bounded, b <<_rho a}`` in ``src`` (psi1's domain)."""
    _require(LocalContactStructure, src)
    composite = _chain(psi2, psi1, src)
    mask = src.bounded_vector[:, None] & _w(src.algebra, src.contact.matrix)
    return MeetFunctionTable(psi1.domain, psi2.codomain, tuple(_join_over(composite, mask)))


def compose_mvdhlc(psi2: MeetFunctionTable, psi1: MeetFunctionTable, src: MvdStructure) -> MeetFunctionTable:
    """``a -> OR{psi2(psi1(b)) : b << a}`` in ``src`` (psi1's domain)."""
    _require(MvdStructure, src)
    composite = _chain(psi2, psi1, src)
    return MeetFunctionTable(psi1.domain, psi2.codomain, tuple(_join_over(composite, src.wellinside.matrix)))


# categories


@dataclass(frozen=True)
class CategoryPair:
    l_name: str
    s_name: str
    l_axioms: tuple[str, ...]
    s_axioms: tuple[str, ...]
    side: str | None = None       # "injective" | "surjective"
    connected: bool = False
    functions: bool = False       # morphisms are arbitrary function tables


CATEGORY_PAIRS: tuple[CategoryPair, ...] = (
    CategoryPair("SKAL", "IKA", ("L1", "L2"), ("S1", "S2")),
    CategoryPair("SAL", "IA", ("L1", "L2", "L3"), ("ES1", "S2", "S3")),
    CategoryPair("OAL", "IOA", ("L1", "L2", "LO"), ("S1", "S2", "SO")),
    CategoryPair("OPAL", "IPA", ("L1", "L2", "L3", "LO"), ("ES1", "S2", "S3", "SO")),
    CategoryPair("SigmaSKAL", "ISigmaSKAL", ("L1", "L2", "LS"), ("S1", "S2", "LSpp")),
    CategoryPair("ISKAL", "IISKAL", ("L1", "L2", "IS"), ("S1", "S2", "ISp")),
    CategoryPair("ISAL", "IIA", ("L1", "L2", "L3"), ("ES1", "S2", "S3"), side="injective"),
    CategoryPair("SigmaSAL", "SigmaIA", ("L1", "L2", "L3", "LS"), ("ES1", "S2", "S3", "CS")),
    CategoryPair("IOPAL", "IIPA", ("L1", "L2", "L3", "LO"), ("ES1", "S2", "S3", "SO"), side="injective"),
    CategoryPair("SigmaOPAL", "SigmaIPA", ("L1", "L2", "L3", "LO"), ("ES1", "S2", "S3", "SO"), side="surjective"),
    CategoryPair("IOAL", "IIOAL", ("L1", "L2", "IS", "LO"), ("S1", "S2", "ISp", "SO")),
    CategoryPair("SigmaOAL", "ISigmaOAL", ("L1", "L2", "LO"), ("S1", "S2", "SO"), side="surjective"),
    CategoryPair("SALC", "IAC", ("L1", "L2", "L3"), ("ES1", "S2", "S3"), connected=True),
    CategoryPair("OPALC", "IPAC", ("L1", "L2", "L3", "LO"), ("ES1", "S2", "S3", "SO"), connected=True),
    CategoryPair("SKALC", "IKAC", ("L1", "L2"), ("S1", "S2"), connected=True),
    CategoryPair("OALC", "IOAC", ("L1", "L2", "LO"), ("S1", "S2", "SO"), connected=True),
    CategoryPair("DHLC", "MVDHLC", DLC_AXIOMS, MVDLC_AXIOMS, functions=True),
)

#: The pairs whose isomorphism the correspondence suite checks.
CORRESPONDENCE_PAIRS = tuple(p.l_name for p in CATEGORY_PAIRS[:14])


@dataclass(frozen=True)
class CategoryMembership:
    flags: dict                   # l_name -> (l_flag, s_flag); None = not applicable
    l_report: AxiomReport
    s_report: AxiomReport
    injective: bool | None = None
    surjective: bool | None = None
    connected: dict = field(default_factory=dict)

    def pair(self, l_name: str) -> tuple[bool | None, bool | None]:
        return self.flags[l_name]

    def to_json(self) -> dict:
        names = {p.l_name: p.s_name for p in CATEGORY_PAIRS}
        return {
            "pairs": [
                {"lca_category": k, "mvd_category": names[k], "lca_member": l, "mvd_member": s}
                for k, (l, s) in self.flags.items()
            ],
            "injective": self.injective,
            "surjective": self.surjective,
            "connected": self.connected,
            "axioms": {"lca": self.l_report.to_json()["verdicts"], "mvd": self.s_report.to_json()["verdicts"]},
        }


def _pair_flag(report: AxiomReport, ids, side_ok: bool, conn_ok: bool) -> bool:
    return side_ok and conn_ok and all(report[a].holds for a in ids)


def classify(f, src, dst) -> CategoryMembership:
    """Evaluate every category flag for ``f`` (a homomorphism or a table).

    Local contact endpoints are transported by kappa for the MVD side, MVD
    endpoints by tau for the local contact side.
    """
    if isinstance(src, LocalContactStructure) and isinstance(dst, LocalContactStructure):
        L_src, L_dst, M_src, M_dst = src, dst, kappa(src), kappa(dst)
    elif isinstance(src, MvdStructure) and isinstance(dst, MvdStructure):
        L_src, L_dst, M_src, M_dst = tau(src), tau(dst), src, dst
    else:
        raise KindMismatch("classify needs two local contact structures or two MVD structures")
    conn_l = L_src.is_connected and L_dst.is_connected
    conn_s = M_src.is_connected and M_dst.is_connected
    connected = {"lca": conn_l, "mvd": conn_s}

    if isinstance(f, CompleteHomomorphism):
        table = MeetFunctionTable.from_hom(f)
        l_rep = check_morphism_axioms(f, L_src, L_dst, L_AXIOMS).merged(
            check_function_axioms(table, L_src, L_dst, DLC_AXIOMS))
        s_rep = check_morphism_axioms(f, M_src, M_dst, S_AXIOMS).merged(
            check_function_axioms(table, M_src, M_dst, MVDLC_AXIOMS))
        inj, surj = f.is_injective, f.is_surjective
        flags = {}
        for p in CATEGORY_PAIRS:
            side_ok = {None: True, "injective": inj, "surjective": surj}[p.side]
            flags[p.l_name] = (
                _pair_flag(l_rep, p.l_axioms, side_ok, conn_l or not p.connected),
                _pair_flag(s_rep, p.s_axioms, side_ok, conn_s or not p.connected),
            )
        return CategoryMembership(flags, l_rep, s_rep, inj, surj, connected)

    if isinstance(f, MeetFunctionTable):
        l_rep = check_function_axioms(f, L_src, L_dst, DLC_AXIOMS)
        s_rep = check_function_axioms(f, M_src, M_dst, MVDLC_AXIOMS)
        flags = {}
        for p in CATEGORY_PAIRS:
            if p.functions:
                flags[p.l_name] = (l_rep.holds, s_rep.holds)
            else:
                flags[p.l_name] = (None, None)
        return CategoryMembership(flags, l_rep, s_rep, None, None, connected)
    raise KindMismatch(f"cannot classify {type(f).__name__}")

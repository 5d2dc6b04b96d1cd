"""Vectorized axiom predicates over stacks of relation matrices.

These only answer "does the axiom hold" for each matrix in a batch of shape
``(N, 2^n, 2^n)``; the per-structure checkers in ``contact`` produce the
witnesses.  The two are kept independent so each cross-checks the other.
"""

from __future__ import annotations

import numpy as np

from .algebra import FiniteBooleanAlgebra


def _any(x, axes):
    return x.any(axis=axes)


def _bmm(x, y):
    return np.matmul(x.astype(np.float32), y.astype(np.float32)) > 0.5


def contact_holds(alg: FiniteBooleanAlgebra, C: np.ndarray, axiom: str) -> np.ndarray:
    idx, comp = alg.indices, alg.complement_table
    if axiom == "C1":
        diag = C[:, idx, idx]
        return ~(~diag & (idx != 0)).any(axis=1)
    if axiom == "C2":
        return ~(C[:, 0, :].any(axis=1) | C[:, :, 0].any(axis=1))
    if axiom == "C3":
        return (C == C.transpose(0, 2, 1)).all(axis=(1, 2))
    if axiom == "C4":
        lhs = C[:, :, alg.join_table]                 # [N, a, b, c] = C[a, b|c]
        rhs = C[:, :, :, None] | C[:, :, None, :]
        return (lhs == rhs).all(axis=(1, 2, 3))
    if axiom == "C5":
        notc = ~C
        sep = _bmm(notc, notc[:, :, comp].transpose(0, 2, 1))
        return ~(notc & ~sep).any(axis=(1, 2))
    if axiom == "C6":
        ok = (~C[:, 1:, :]).any(axis=1)
        return (ok | (idx == alg.top_bits)).all(axis=1)
    if axiom == "CON":
        nontrivial = (idx != 0) & (idx != alg.top_bits)
        return (C[:, idx, comp] | ~nontrivial).all(axis=1)
    raise KeyError(axiom)


def wellinside_holds(alg: FiniteBooleanAlgebra, W: np.ndarray, axiom: str) -> np.ndarray:
    idx, comp, leq = alg.indices, alg.complement_table, alg.leq_table
    top = alg.top_bits
    if axiom == "ll1":
        return ~(W & ~leq).any(axis=(1, 2))
    if axiom == "ll2":
        return W[:, 0, 0].copy()
    if axiom == "ll2p":
        return W[:, top, top].copy()
    if axiom == "ll3":
        # rows shrink as a grows, rows are up-sets
        up = _bmm(W, leq) == W
        # [N, a, b, t]: a <= b and b << t imply a << t
        down = (W[:, :, None, :] | ~W[:, None, :, :] | ~leq[None, :, :, None]).all(axis=3)
        return up.all(axis=(1, 2)) & down.all(axis=(1, 2))
    if axiom == "ll4":
        bad = W[:, :, None, :] & W[:, None, :, :] & ~W[:, alg.join_table, :]
        return ~bad.any(axis=(1, 2, 3))
    if axiom == "ll4star":
        bad = W[:, :, :, None] & W[:, :, None, :] & ~W[:, idx[:, None, None], alg.meet_table[None, :, :]]
        return ~bad.any(axis=(1, 2, 3))
    if axiom == "ll5":
        return ~(W & ~_bmm(W, W)).any(axis=(1, 2))
    if axiom == "ll6":
        ok = W[:, 1:, :].any(axis=1)
        return (ok | (idx == 0)).all(axis=1)
    if axiom == "ll7":
        mirror = W[:, comp][:, :, comp].transpose(0, 2, 1)
        return ~(W & ~mirror).any(axis=(1, 2))
    if axiom == "MVD":
        mirror = W[:, comp][:, :, comp].transpose(0, 2, 1)
        return ~(W[:, :, top][:, :, None] & mirror & ~W).any(axis=(1, 2))
    if axiom == "CONA":
        nontrivial = (idx != 0) & (idx != top)
        inner = W[:, alg.meet_table, alg.join_table[:, comp]]       # [N, a, c]
        exists = (W[:, :, top][:, None, :] & ~inner).any(axis=2)
        return (exists | ~nontrivial).all(axis=1)
    raise KeyError(axiom)

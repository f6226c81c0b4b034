"""Dense exact linear algebra over the prime field F_p.

Matrices are numpy int64 arrays with entries normalized to [0, p).  Bases of
subspaces are stored as matrices whose *rows* span the subspace; linear maps
act on column vectors (shape = target_dim x source_dim).  Everything is exact
integer arithmetic; p is small enough (2, 3, 5, ...) that int64 never wraps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def normalize(a, p: int) -> np.ndarray:
    """Copy `a` into an int64 array with entries reduced mod p."""
    m = np.array(a, dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    return np.mod(m, p)


def modinv(a: int, p: int) -> int:
    a = a % p
    if a == 0:
        raise ZeroDivisionError("no inverse of 0 mod %d" % p)
    return pow(a, p - 2, p)


@dataclass(frozen=True)
class RrefResult:
    matrix: np.ndarray
    pivots: tuple
    rank: int


def rref(a, p: int) -> RrefResult:
    """Reduced row echelon form with deterministic leftmost pivoting.

    Scans columns left to right and picks the first nonzero entry at or below
    the current row, so identical inputs always produce identical output.
    """
    m = normalize(a, p)
    nrows, ncols = m.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        below = np.nonzero(m[r:, c])[0]
        if below.size == 0:
            continue
        i = r + int(below[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = (m[r] * modinv(int(m[r, c]), p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return RrefResult(m, tuple(pivots), r)


def rank(a, p: int) -> int:
    return rref(a, p).rank


def kernel_basis(a, p: int) -> np.ndarray:
    """Rows spanning {x : a @ x = 0}, in echelon order of the free columns."""
    m = normalize(a, p)
    nrows, ncols = m.shape
    r = rref(m, p)
    free = [c for c in range(ncols) if c not in r.pivots]
    out = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for row, c in enumerate(r.pivots):
            out[k, c] = (-int(r.matrix[row, f])) % p
    return out


def solve(a, b, p: int):
    """One solution x of a @ x = b, or None.  b may be a vector or matrix."""
    m = normalize(a, p)
    rhs = np.mod(np.array(b, dtype=np.int64), p)
    vec = rhs.ndim == 1
    if vec:
        rhs = rhs.reshape(-1, 1)
    aug = np.hstack([m, rhs])
    r = rref(aug, p)
    ncols = m.shape[1]
    for row in range(r.rank):
        if r.pivots[row] >= ncols:
            return None  # inconsistent
    x = np.zeros((ncols, rhs.shape[1]), dtype=np.int64)
    for row, c in enumerate(r.pivots):
        x[c] = r.matrix[row, ncols:]
    return x[:, 0] if vec else x


def inv(a, p: int) -> np.ndarray:
    m = normalize(a, p)
    n = m.shape[0]
    if m.shape[1] != n:
        raise ValueError("inverse of non-square matrix")
    x = solve(m, np.eye(n, dtype=np.int64), p)
    if x is None or rank(m, p) != n:
        raise ValueError("matrix is singular mod %d" % p)
    return x


# ---------------------------------------------------------------------------
# subspaces: rows span, canonical form = nonzero rows of the rref


def span_rref(rows, p: int) -> np.ndarray:
    r = rref(rows, p)
    return r.matrix[: r.rank].copy()


def subspace_sum(a, b, p: int) -> np.ndarray:
    return span_rref(np.vstack([normalize(a, p), normalize(b, p)]), p)


def intersect(a, b, p: int) -> np.ndarray:
    """Canonical basis of (row span of a) ∩ (row span of b)."""
    a = normalize(a, p)
    b = normalize(b, p)
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64)
    stacked = np.vstack([a, (-b) % p])
    left = kernel_basis(stacked.T, p)  # rows (c | d) with c@a = d@b
    vecs = np.mod(left[:, : a.shape[0]] @ a, p)
    return span_rref(vecs, p)


def in_span(rows, v, p: int) -> bool:
    rows = normalize(rows, p)
    v = normalize(v, p)
    return rank(rows, p) == rank(np.vstack([rows, v]), p)


def coords_in_span(rows, v, p: int):
    """Coefficients c with c @ rows = v, or None if v is outside the span."""
    rows = normalize(rows, p)
    v = np.mod(np.array(v, dtype=np.int64), p)
    return solve(rows.T, v.T if v.ndim > 1 else v, p)


def complement_pivots(rows, p: int, ambient_dim: int) -> list:
    """Indices of standard basis vectors spanning a complement of the span."""
    rows = normalize(rows, p)
    if rows.shape[0] == 0:
        return list(range(ambient_dim))
    piv = rref(rows, p).pivots
    return [c for c in range(ambient_dim) if c not in piv]


def quotient_reps(sub, total, p: int) -> np.ndarray:
    """Rows of `total` representing a basis of span(total)/span(sub).

    Picks the deterministic subset of rows of `total` that extend a basis of
    the subspace, scanning in order.
    """
    sub = normalize(sub, p)
    total = normalize(total, p)
    cur = span_rref(sub, p) if sub.shape[0] else sub
    keep = []
    cur_rank = cur.shape[0]
    work = cur
    for i in range(total.shape[0]):
        cand = np.vstack([work, total[i : i + 1]])
        if rank(cand, p) > cur_rank:
            keep.append(i)
            work = span_rref(cand, p)
            cur_rank += 1
    return total[keep].copy() if keep else np.zeros((0, total.shape[1]), dtype=np.int64)

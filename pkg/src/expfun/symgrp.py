"""Symmetric group homology dimensions from the admissible-tuple basis.

H_i(S_d, V^{tensor d}) is the weight-d slice of a product of explicitly known
factors: a polynomial factor on V itself and, for each twist level k, a free
graded-commutative factor on generators indexed by admissible tuples.  The
dimensions are therefore coefficients of a product of Poincare series in
(degree, weight).  A normalized-bar oracle recomputes the same numbers from
scratch at tiny sizes.
"""

from __future__ import annotations

import itertools
from collections import namedtuple
from math import comb

import numpy as np

from . import fplinalg as fpl

NakaokaTuple = namedtuple("NakaokaTuple", ["entries", "degree", "level"])


def nakaoka_tuples(p, k, degree_bound):
    """Admissible generating tuples (j_1, ..., j_k) with degree <= bound.

    Conditions: every entry is 0 or -1 mod 2(p-1); j_l <= p*j_{l+1} for each
    adjacent pair; and j_1 > (p-1)*(j_2 + ... + j_k).  At p = 2 the congruence
    is vacuous and the last condition reads j_1 > j_2 + ... + j_k.
    """
    if k < 1:
        raise ValueError("twist level k must be at least 1")
    period = 2 * (p - 1)
    out = []
    for entries in itertools.product(range(1, degree_bound + 1), repeat=k):
        if sum(entries) > degree_bound:
            continue
        if any(j % period not in (0, period - 1) for j in entries):
            continue
        if any(entries[t] > p * entries[t + 1] for t in range(k - 1)):
            continue
        if entries[0] <= (p - 1) * sum(entries[1:]):
            continue
        out.append(NakaokaTuple(entries, sum(entries), k))
    return out


def _convolve(table, powers, i_bound, w_bound):
    grown = {}
    for (d, w), cnt in table.items():
        for dd, ww, c in powers:
            if d + dd > i_bound or w + ww > w_bound:
                continue
            key = (d + dd, w + ww)
            grown[key] = grown.get(key, 0) + cnt * c
    return grown


def _factor_powers(kind, j, w, mult, i_bound, w_bound):
    """Poincare series of one free factor with `mult` generators at (j, w)."""
    powers = []
    a = 0
    while a * j <= i_bound and a * w <= w_bound:
        if kind == "S":
            powers.append((a * j, a * w, comb(mult + a - 1, a)))
        else:
            if a > mult:
                break
            powers.append((a * j, a * w, comb(mult, a)))
        a += 1
    return powers


def symgroup_homology_dims(p, d, dimV, i_bound):
    """dim H_i(S_d, V^{tensor d}) for i = 0..i_bound, dim V = dimV.

    Assembles the weight-d coefficient of the predicted product: a polynomial
    factor on dimV weight-1 generators in degree 0, and for each k with
    p**k <= d one generator of weight p**k per admissible tuple, repeated
    dimV times, polynomial for even degree and exterior for odd degree at odd
    p, polynomial throughout at p = 2.  Plain integer counts, no reduction.
    """
    factors = [("S", 0, 1, dimV)]
    k = 1
    while p ** k <= d:
        for t in nakaoka_tuples(p, k, i_bound):
            kind = "S" if (p == 2 or t.degree % 2 == 0) else "Lambda"
            factors.append((kind, t.degree, p ** k, dimV))
        k += 1
    table = {(0, 0): 1}
    for kind, j, w, mult in factors:
        table = _convolve(table, _factor_powers(kind, j, w, mult, i_bound, d),
                          i_bound, d)
    return {i: table.get((i, d), 0) for i in range(i_bound + 1)}


# ---------------------------------------------------------------------------
# brute-force oracle


def _perm_compose(a, b):
    return tuple(a[b[t]] for t in range(len(b)))


def _trivial_homology(p, m, i_bound):
    """H_i(S_m, F_p) from the normalized bar resolution, i <= i_bound."""
    if m == 1:
        return {i: (1 if i == 0 else 0) for i in range(i_bound + 1)}
    elems = [tuple(s) for s in itertools.permutations(range(m))]
    ident = tuple(range(m))
    nonid = [g for g in elems if g != ident]
    words = {0: [()]}
    for n in range(1, i_bound + 2):
        words[n] = [w + (g,) for w in words[n - 1] for g in nonid]
    index = {n: {w: t for t, w in enumerate(words[n])} for n in words}

    mats = {}
    for n in range(1, i_bound + 2):
        m_d = np.zeros((len(words[n - 1]), len(words[n])), dtype=np.int64)
        for col, w in enumerate(words[n]):
            faces = [w[1:]]                       # drop first
            for t in range(n - 1):
                g = _perm_compose(w[t], w[t + 1])
                faces.append(None if g == ident
                             else w[:t] + (g,) + w[t + 2:])
            faces.append(w[:-1])                  # drop last
            for t, face in enumerate(faces):
                if face is None:
                    continue
                sign = -1 if t % 2 else 1
                m_d[index[n - 1][face], col] = \
                    (m_d[index[n - 1][face], col] + sign) % p
        mats[n] = m_d

    out = {}
    for i in range(i_bound + 1):
        dim_c = len(words[i])
        r_in = fpl.rank(mats[i], p) if i >= 1 else 0
        r_out = fpl.rank(mats[i + 1], p)
        out[i] = dim_c - r_in - r_out
    return out


def brute_group_homology(p, d, dimV, i_bound):
    """Oracle for H_i(S_d, V^{tensor d}) with the place-permutation action.

    The permutation module splits over the orbits of basis tuples; each orbit
    is induced from the Young stabilizer of its sorted representative, so the
    homology is a sum over orbits of Kunneth products of trivial-coefficient
    symmetric group homologies.
    """
    if d > 3 or dimV > 2 or i_bound > 4:
        raise ValueError("size cap exceeded")
    base = {}
    for m in range(1, d + 1):
        base[m] = _trivial_homology(p, m, i_bound)
    out = {i: 0 for i in range(i_bound + 1)}
    for rep in itertools.combinations_with_replacement(range(dimV), d):
        counts = [rep.count(v) for v in sorted(set(rep))]
        table = {0: 1}
        for c in counts:
            grown = {}
            for i, cnt in table.items():
                for i2 in range(i_bound + 1 - i):
                    if base[c][i2]:
                        grown[i + i2] = grown.get(i + i2, 0) + cnt * base[c][i2]
            table = grown
        for i in range(i_bound + 1):
            out[i] += table.get(i, 0)
    return out

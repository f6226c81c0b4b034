"""Reduced bar construction, Tor tables, and their closed-form answers.

Chains of the reduced bar complex of an augmented algebra are words
(a1|...|as) in the non-unit basis elements.  A word has homological degree s,
internal degree the sum of the letter degrees, and weight the sum of the
letter weights.  The differential merges adjacent letters, so it drops s by
one and preserves internal degree and weight; homology per (internal, weight)
column is the Tor table.  The shuffle product and deconcatenation coproduct
turn the homology into a Hopf algebra again, which is what makes the iterated
computation possible: identify the homology as a tensor product of catalogue
generators, rebuild that model, and bar it once more.
"""

from __future__ import annotations

import itertools
from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np

from . import catalogue
from . import fplinalg as fpl
from . import hopf as hc


class BarBoundsError(ValueError):
    """A block or product needed by the computation falls outside the window."""


class IdentificationError(ValueError):
    """A homology stage could not be matched with a cofree model."""


@dataclass
class BarComplex:
    base: hc.HopfPresentation
    degree_bound: int          # cap on total degree s + internal
    weight_bound: int | None
    blocks: dict               # (s, internal, weight) -> list of words
    index: dict                # word -> position inside its block
    diff: dict                 # block key -> matrix into the (s-1, ...) block

    @property
    def p(self) -> int:
        return self.base.p

    def block_dim(self, key) -> int:
        return len(self.blocks.get(tuple(key), ()))


def reduced_bar(a: hc.HopfPresentation, degree_bound=None,
                weight_bound=None) -> BarComplex:
    """Enumerate bar words within the bounds and build the differential.

    Every non-unit basis element is a letter; a letter contributes its degree
    plus one (the suspension) to the total degree, so enumeration terminates
    even for letters of internal degree zero.  d**2 = 0 is checked blockwise
    on construction.
    """
    if a.modulus is not None or a.weight_modulus is not None:
        raise ValueError("bar construction needs an N-graded algebra")
    if degree_bound is None:
        degree_bound = a.degree_bound + 1
    if weight_bound is None:
        weight_bound = a.weight_bound
    letters = []
    for k in range(a.dim):
        if k == a.unit:
            continue
        b = a.basis[k]
        if b.weight < 1:
            raise ValueError("augmentation ideal element %r has weight 0" % b.label)
        letters.append((k, b.degree, b.weight))

    blocks = {(0, 0, 0): [()]}
    frontier = [((), 0, 0)]
    while frontier:
        grown = []
        for word, n, w in frontier:
            s = len(word)
            for k, dk, wk in letters:
                n2, w2 = n + dk, w + wk
                if s + 1 + n2 > degree_bound:
                    continue
                if weight_bound is not None and w2 > weight_bound:
                    continue
                word2 = word + (k,)
                blocks.setdefault((s + 1, n2, w2), []).append(word2)
                grown.append((word2, n2, w2))
        frontier = grown

    index = {}
    for key, words in blocks.items():
        for t, word in enumerate(words):
            index[word] = t

    p = a.p
    diff = {}
    for key in sorted(blocks):
        s, n, w = key
        if s == 0:
            continue
        tgt = blocks.get((s - 1, n, w), ())
        m = np.zeros((len(tgt), len(blocks[key])), dtype=np.int64)
        for col, word in enumerate(blocks[key]):
            eps = 0
            for t in range(s - 1):
                eps += a.basis[word[t]].degree + 1
                entry = a.mu_entry(word[t], word[t + 1])
                if entry is None:
                    raise BarBoundsError(
                        "bound too small to close the product %s*%s" %
                        (a.basis[word[t]].label, a.basis[word[t + 1]].label))
                if not entry:
                    continue
                sign = -1 if eps % 2 else 1
                for k2, c in entry.items():
                    row = index[word[:t] + (k2,) + word[t + 2:]]
                    m[row, col] = (m[row, col] + sign * c) % p
        diff[key] = m

    for key in sorted(diff):
        s, n, w = key
        m1 = diff.get((s - 1, n, w))
        if m1 is None or m1.size == 0 or diff[key].size == 0:
            continue
        if ((m1 @ diff[key]) % p).any():
            raise AssertionError("bar differential fails d*d = 0 at %s" % (key,))

    return BarComplex(a, degree_bound, weight_bound, blocks, index, diff)


# ---------------------------------------------------------------------------
# homology


@dataclass
class TorTable:
    """Dimension table of Tor, indexed by (homological s, internal, weight)."""

    dims: dict
    level: int = 1
    degree_bound: int = 0
    weight_bound: int | None = None
    stages: tuple = ()

    def totals(self) -> dict:
        """Collapsed (total degree, weight) view."""
        out = {}
        for (s, n, w), d in self.dims.items():
            key = (s + n, w)
            out[key] = out.get(key, 0) + d
        return out

    def rows(self):
        return sorted(self.dims.items())


def _incoming(c: BarComplex, key):
    s, n, w = key
    if s == 0:
        return np.zeros((0, len(c.blocks[key])), dtype=np.int64)
    return c.diff[key]


def homology_table(c: BarComplex) -> TorTable:
    """Per-block homology dims.

    Blocks at total degree exactly c.degree_bound are chain-complete but
    their incoming boundaries from one degree higher are not enumerated, so
    the table stops one short of the enumeration bound.
    """
    p = c.p
    dims = {}
    for key in sorted(c.blocks):
        s, n, w = key
        if s + n >= c.degree_bound:
            continue
        r_in = fpl.rank(_incoming(c, key), p)
        up = c.diff.get((s + 1, n, w))
        r_out = fpl.rank(up, p) if up is not None else 0
        h = len(c.blocks[key]) - r_in - r_out
        if h:
            dims[key] = h
    return TorTable(dims, 1, c.degree_bound - 1, c.weight_bound)


def euler_per_weight(c: BarComplex, w: int) -> int:
    """Alternating sum sum_s (-1)^s dim of the weight-w chain column.

    Only valid when the column is fully enumerated: every weight-w word must
    fit under the degree bound, which holds when w*(ratio+1) <= bound where
    ratio is the worst degree/weight ratio among letters of weight <= w.
    """
    if w == 0:
        return 1
    if c.weight_bound is not None and w > c.weight_bound:
        raise BarBoundsError("weight %d outside the enumerated window" % w)
    ratio = 0
    for k in range(c.base.dim):
        b = c.base.basis[k]
        if k != c.base.unit and b.weight <= w:
            ratio = max(ratio, -(-b.degree // b.weight))
    if w * (ratio + 1) > c.degree_bound:
        raise BarBoundsError("degree bound %d may truncate the weight-%d column"
                             % (c.degree_bound, w))
    total = 0
    for (s, n, ww), words in c.blocks.items():
        if ww == w:
            total += len(words) if s % 2 == 0 else -len(words)
    return total


# ---------------------------------------------------------------------------
# the Hopf structure on homology


@dataclass
class _BlockHomology:
    reps: np.ndarray       # rows: cycle representatives of the classes
    proj: np.ndarray       # chain vector -> class coordinates


def _block_homology(c: BarComplex, key) -> _BlockHomology:
    p = c.p
    dim = len(c.blocks[key])
    s, n, w = key
    m_in = _incoming(c, key)
    up = c.diff.get((s + 1, n, w))
    cycles = fpl.kernel_basis(m_in, p)
    if up is not None and up.size:
        bnd = fpl.span_rref(up.T, p)
    else:
        bnd = np.zeros((0, dim), dtype=np.int64)
    reps = fpl.quotient_reps(bnd, cycles, p)
    r = fpl.rref(m_in, p)
    anti = np.zeros((len(r.pivots), dim), dtype=np.int64)
    for t, cidx in enumerate(r.pivots):
        anti[t, cidx] = 1
    full = np.vstack([reps, bnd, anti])
    proj = fpl.inv(full.T, p)[:len(reps)]
    return _BlockHomology(reps, proj)


def _shuffles(word1, word2, degs):
    """Yield (merged word, sign) over all interleavings, with Koszul signs on
    the suspended degrees."""
    s1, s2 = len(word1), len(word2)
    for pick in itertools.combinations(range(s1 + s2), s1):
        merged = [None] * (s1 + s2)
        for t, pos in enumerate(pick):
            merged[pos] = word1[t]
        rest = iter(word2)
        inv = 0
        for pos in range(s1 + s2):
            if merged[pos] is None:
                merged[pos] = next(rest)
        # parity: each pair (x from word1, y from word2) with y placed first
        pickset = set(pick)
        others = [pos for pos in range(s1 + s2) if pos not in pickset]
        for t, pos in enumerate(pick):
            for u, pos2 in enumerate(others):
                if pos2 < pos:
                    inv += (degs[word1[t]] + 1) * (degs[word2[u]] + 1)
        yield tuple(merged), (-1 if inv % 2 else 1)


def tor_hopf(c: BarComplex, verify: bool = True) -> hc.HopfPresentation:
    """Hopf presentation of the bar homology: shuffle product projected back
    to homology representatives, deconcatenation coproduct."""
    p = c.p
    hom = {}
    for key in sorted(c.blocks):
        if key[0] + key[1] >= c.degree_bound:
            continue        # boundaries from one degree higher are missing
        bh = _block_homology(c, key)
        if len(bh.reps):
            hom[key] = bh

    order = sorted(hom, key=lambda k: (k[0] + k[1], k[2], k[0]))
    basis, locate = [], {}
    for key in order:
        s, n, w = key
        count = len(hom[key].reps)
        for j in range(count):
            if key == (0, 0, 0):
                label = "1"
            elif count == 1:
                label = "h%dd%dw%d" % (s, n, w)
            else:
                label = "h%dd%dw%d_%d" % (s, n, w, j)
            locate[(key, j)] = len(basis)
            basis.append(hc.BasisElement(label, s + n, w))

    degs = [c.base.basis[k].degree for k in range(c.base.dim)]
    entries = []            # (key, j, basis index) in basis order
    for key in order:
        for j in range(len(hom[key].reps)):
            entries.append((key, j, locate[(key, j)]))

    def class_words(key, j):
        """Sparse rep of class j in block key as {word: coeff}."""
        out = {}
        row = hom[key].reps[j]
        for t, coeff in enumerate(row):
            if coeff % p:
                out[c.blocks[key][t]] = int(coeff % p)
        return out

    mu = {}
    dbound, wbound = c.degree_bound - 1, c.weight_bound
    for key1, j1, i1 in entries:
        for key2, j2, i2 in entries:
            t1, t2 = key1[0] + key1[1], key2[0] + key2[1]
            w1, w2 = key1[2], key2[2]
            if t1 + t2 > dbound:
                continue
            if wbound is not None and w1 + w2 > wbound:
                continue
            if i1 == locate[((0, 0, 0), 0)]:
                mu[(i1, i2)] = {i2: 1}
                continue
            if i2 == locate[((0, 0, 0), 0)]:
                mu[(i1, i2)] = {i1: 1}
                continue
            tk = (key1[0] + key2[0], key1[1] + key2[1], w1 + w2)
            if tk not in c.blocks:
                mu[(i1, i2)] = {}
                continue
            vec = np.zeros(len(c.blocks[tk]), dtype=np.int64)
            for word1, c1 in class_words(key1, j1).items():
                for word2, c2 in class_words(key2, j2).items():
                    for merged, sign in _shuffles(word1, word2, degs):
                        vec[c.index[merged]] += sign * c1 * c2
            vec %= p
            if ((_incoming(c, tk) @ vec) % p).any():
                raise BarBoundsError(
                    "shuffle product left the cycles at block %s" % (tk,))
            out = {}
            if tk in hom:
                coords = (hom[tk].proj @ vec) % p
                for j3, coeff in enumerate(coords):
                    if coeff:
                        out[locate[(tk, j3)]] = int(coeff)
            mu[(i1, i2)] = out

    delta = {}
    for key, j, i1 in entries:
        s, n, w = key
        out = {}
        for word, coeff in class_words(key, j).items():
            for t in range(s + 1):
                left, right = word[:t], word[t:]
                kl = (t, sum(degs[x] for x in left),
                      sum(c.base.basis[x].weight for x in left))
                kr = (s - t, n - kl[1], w - kl[2])
                if kl not in hom or kr not in hom:
                    continue
                pl = (hom[kl].proj[:, c.index[left]]) % p
                pr = (hom[kr].proj[:, c.index[right]]) % p
                for a, ca in enumerate(pl):
                    if not ca:
                        continue
                    for b, cb in enumerate(pr):
                        if not cb:
                            continue
                        pair = (locate[(kl, a)], locate[(kr, b)])
                        out[pair] = (out.get(pair, 0) + coeff * ca * cb) % p
        delta[i1] = {pair: v for pair, v in out.items() if v}

    h = hc.HopfPresentation(p, basis, mu, delta, dbound,
                            weight_bound=wbound,
                            provenance=("tor", c.base.provenance))
    if verify:
        rep = hc.verify_axioms(h)
        if not rep.ok:
            raise AssertionError("homology Hopf algebra failed axioms: %s"
                                 % (rep.failures,))
    return h


# ---------------------------------------------------------------------------
# cofree identification and the iterated computation


GeneratorSpec = namedtuple("GeneratorSpec", ["kind", "degree", "weight"])


@dataclass
class CofreeReport:
    ok: bool
    generators: tuple
    mismatch: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def identify_cofree(h: hc.HopfPresentation, degree_bound=None,
                    weight_bound=None) -> CofreeReport:
    """Match h against the free divided-power/exterior model on its primitives.

    Each primitive of odd degree contributes an exterior factor, each of even
    degree a divided-power factor; success means the block dimension tables
    agree throughout the window.
    """
    dbound = h.degree_bound if degree_bound is None else degree_bound
    wbound = h.weight_bound if weight_bound is None else weight_bound
    gens = []
    prim = hc.primitives(h)
    for (d, w) in sorted(prim):
        kind = "lambda" if d % 2 else "gamma"
        gens.extend([GeneratorSpec(kind, d, w)] * len(prim[(d, w)]))

    model = {(0, 0): 1}
    for g in gens:
        if g.kind == "lambda":
            powers = [(0, 0), (g.degree, g.weight)]
        else:
            powers = []
            k = 0
            while k * g.degree <= dbound and \
                    (wbound is None or k * g.weight <= wbound):
                powers.append((k * g.degree, k * g.weight))
                k += 1
        grown = {}
        for (d, w), cnt in model.items():
            for dd, ww in powers:
                d2, w2 = d + dd, w + ww
                if d2 > dbound or (wbound is not None and w2 > wbound):
                    continue
                grown[(d2, w2)] = grown.get((d2, w2), 0) + cnt
        model = grown

    actual = {}
    for (d, w), cnt in h.block_dims().items():
        if d <= dbound and (wbound is None or w <= wbound):
            actual[(d, w)] = cnt
    if model == actual:
        return CofreeReport(True, tuple(gens))
    bad = next(k for k in sorted(set(model) | set(actual))
               if model.get(k, 0) != actual.get(k, 0))
    return CofreeReport(False, tuple(gens), bad)


def _weight_exponent(w: int, p: int) -> int:
    r = 0
    while w > 1 and w % p == 0:
        w //= p
        r += 1
    if w != 1:
        raise IdentificationError("generator weight is not a power of %d" % p)
    return r


def rebuild_model(gens, p, degree_bound, weight_bound=None):
    """Tensor product of catalogue algebras matching a generator list."""
    if not gens:
        raise IdentificationError("cannot rebuild an empty generator list")
    parts = []
    for g in gens:
        r = _weight_exponent(g.weight, p)
        kind = "Gamma" if g.kind == "gamma" else "Lambda"
        parts.append(catalogue.make(kind, p, degree_bound, r=r, i=g.degree,
                                    weight_bound=weight_bound))
    out = parts[0]
    for extra in parts[1:]:
        out = hc.tensor_product(out, extra)
    return out


def tor_iterated(a: hc.HopfPresentation, j: int, degree_bound=None,
                 weight_bound=None) -> TorTable:
    """Iterate bar homology via stagewise cofree identification."""
    if j < 1:
        raise ValueError("iteration level must be at least 1")
    stages = []
    h = a
    for level in range(1, j + 1):
        c = reduced_bar(h, degree_bound=degree_bound,
                        weight_bound=weight_bound)
        if level == j:
            t = homology_table(c)
            t.level = j
            t.stages = tuple(stages)
            return t
        rep = identify_cofree(tor_hopf(c))
        if not rep.ok:
            raise IdentificationError(
                "stage %d homology is not cofree: block %s mismatches"
                % (level, rep.mismatch))
        stages.append(rep.generators)
        h = rebuild_model(rep.generators, a.p, c.degree_bound - 1,
                          weight_bound=weight_bound)
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# closed-form tables


def _gamma_input_factors(p, r, i, bound):
    """Factors of Tor over a divided power algebra on a degree-i generator.

    At p = 2 every stage contributes one divided-power class; at odd p each
    stage contributes an exterior class and the next transpotence."""
    if i < 1:
        raise ValueError("divided power input needs a positive generator degree")
    facs = []
    k = 0
    while p ** k * i + 1 <= bound:
        if p == 2:
            facs.append(("gamma", 1, 2 ** k * i, 2 ** (r + k)))
        else:
            facs.append(("lambda", 1, p ** k * i, p ** (r + k)))
            if p ** (k + 1) * i + 2 <= bound:
                facs.append(("gamma", 2, p ** (k + 1) * i, p ** (r + k + 1)))
        k += 1
    return facs


def _tor_factors(kind, p, r, i, n, j, bound):
    w = p ** r
    if kind == "T":
        kind, n = "S_n", 1
    if kind == "Lambda" and p == 2:
        kind, n = "S_n", 1
    if j == 1:
        if kind == "S":
            return [("lambda", 1, i, w)]
        if kind == "Lambda":
            return [("gamma", 1, i, w)]
        if kind == "S_n":
            if p == 2 and n == 1:
                return [("gamma", 1, i, w)]
            return [("lambda", 1, i, w),
                    ("gamma", 2, p ** n * i, w * p ** n)]
        if kind == "Gamma":
            return _gamma_input_factors(p, r, i, bound)
    if j == 2:
        if kind == "S":
            return [("gamma", 1, i + 1, w)]
        if kind == "Lambda" or (kind == "S_n" and p == 2 and n == 1):
            return _gamma_input_factors(p, r, i + 1, bound)
        if kind == "S_n":
            return [("gamma", 1, i + 1, w)] + \
                _gamma_input_factors(p, r + n, p ** n * i + 2, bound)
    raise ValueError("no closed form for kind=%r, j=%r" % (kind, j))


def _expand_refined(facs, dbound, wbound):
    dims = {(0, 0, 0): 1}
    for growth, s0, t0, w0 in facs:
        if growth == "lambda":
            powers = [(0, 0, 0), (s0, t0, w0)]
        else:
            powers = []
            k = 0
            while k * (s0 + t0) <= dbound and \
                    (wbound is None or k * w0 <= wbound):
                powers.append((k * s0, k * t0, k * w0))
                k += 1
        grown = {}
        for (s, n, w), cnt in dims.items():
            for ds, dn, dw in powers:
                s2, n2, w2 = s + ds, n + dn, w + dw
                if s2 + n2 > dbound:
                    continue
                if wbound is not None and w2 > wbound:
                    continue
                key = (s2, n2, w2)
                grown[key] = grown.get(key, 0) + cnt
        dims = grown
    return dims


def expected_tor(kind, p, r, i, j=1, n=None, degree_bound=None,
                 weight_bound=None) -> TorTable:
    """Closed-form Tor table for a one-generator catalogue algebra.

    The divided-power class over a height-p**n truncated polynomial generator
    of degree i sits in total degree p**n * i + 2 (homological degree 2 plus
    the internal degree of x | x**(p**n - 1)).
    """
    if degree_bound is None:
        raise ValueError("degree bound required")
    facs = _tor_factors(kind, p, r, i, n, j, degree_bound)
    dims = _expand_refined(facs, degree_bound, weight_bound)
    return TorTable(dims, j, degree_bound, weight_bound)


def expected_E(x, input_kind, p, r, n=None, degree_bound=None,
               weight_bound=None) -> dict:
    """Regraded two-sided tables: x names the functor argument ("Lambda" for
    the single bar, "S" for the double bar); input is "S" or "S_n" with twist
    r.  Returns {(degree, weight): dim}."""
    if degree_bound is None:
        raise ValueError("degree bound required")
    q = p ** r
    if input_kind == "T":
        input_kind, n = "S_n", 1
    if input_kind not in ("S", "S_n"):
        raise ValueError("no closed form for input %r" % (input_kind,))
    if input_kind == "S_n" and (n is None or n < 1):
        raise ValueError("n >= 1 required")
    gens = []
    if x == "Lambda":
        if input_kind == "S":
            gens = [("lambda", 2 * q - 1, q)]
        elif p == 2 and n == 1:
            gens = [("gamma", 2 * q - 1, q)]
        else:
            gens = [("lambda", 2 * q - 1, q),
                    ("gamma", 2 * p ** (r + n) - 2, p ** (r + n))]
    elif x == "S":
        if input_kind == "S":
            gens = [("gamma", 2 * q - 2, q)]
        elif p == 2 and n == 1:
            k = 0
            while 2 * 2 ** (r + k) - 2 ** k - 1 <= degree_bound:
                gens.append(("gamma", 2 * 2 ** (r + k) - 2 ** k - 1,
                             2 ** (r + k)))
                k += 1
        elif p == 2:
            gens = [("gamma", 2 * q - 2, q)]
            k = 0
            while 2 * 2 ** (r + n + k) - 2 ** (k + 1) - 1 <= degree_bound:
                gens.append(("gamma", 2 * 2 ** (r + n + k) - 2 ** (k + 1) - 1,
                             2 ** (r + n + k)))
                k += 1
        else:
            gens = [("gamma", 2 * q - 2, q)]
            k = 0
            while 2 * p ** (r + n + k) - 2 * p ** k - 1 <= degree_bound:
                gens.append(("lambda", 2 * p ** (r + n + k) - 2 * p ** k - 1,
                             p ** (r + n + k)))
                if 2 * p ** (r + n + k + 1) - 2 * p ** k - 2 <= degree_bound:
                    gens.append(("gamma",
                                 2 * p ** (r + n + k + 1) - 2 * p ** k - 2,
                                 p ** (r + n + k + 1)))
                k += 1
    else:
        raise ValueError("x must be 'Lambda' or 'S'")

    if weight_bound is None and any(g[0] == "gamma" and g[1] == 0 for g in gens):
        raise ValueError("degree-0 divided power factor needs a weight bound")
    dims = {(0, 0): 1}
    for growth, d0, w0 in gens:
        if growth == "lambda":
            powers = [(0, 0), (d0, w0)]
        else:
            powers = []
            k = 0
            while k * d0 <= degree_bound and \
                    (weight_bound is None or k * w0 <= weight_bound):
                powers.append((k * d0, k * w0))
                k += 1
        grown = {}
        for (d, w), cnt in dims.items():
            for dd, ww in powers:
                d2, w2 = d + dd, w + ww
                if d2 > degree_bound:
                    continue
                if weight_bound is not None and w2 > weight_bound:
                    continue
                grown[(d2, w2)] = grown.get((d2, w2), 0) + cnt
        dims = grown
    return dims


def regrade_E(t: TorTable, x=None) -> dict:
    """Send a Tor class of (total degree m, weight k) to degree 2k - m.

    With x given, checks the iteration level matches the convention (level 1
    feeds the exterior side, level 2 the symmetric side)."""
    if x == "Lambda" and t.level != 1:
        raise ValueError("exterior-side regrading expects a level-1 table")
    if x == "S" and t.level != 2:
        raise ValueError("symmetric-side regrading expects a level-2 table")
    out = {}
    for (s, n, w), d in t.dims.items():
        deg = 2 * w - (s + n)
        if deg < 0:
            raise ValueError("negative regraded degree at block %s"
                             % ((s, n, w),))
        out[(deg, w)] = out.get((deg, w), 0) + d
    return out

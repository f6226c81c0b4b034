"""Graded modules with Frobenius/Verschiebung operators and their strings.

A module here is a finite window of F_p-spaces M^0, .., M^S with operators
F_i : M^i -> M^{i+1} and V_i : M^{i+1} -> M^i subject to F_i V_i = 0 and
V_i F_i = 0.  Every such module is a direct sum of *string* modules: one
dimension per slot along a contiguous interval, with each consecutive pair
of slots joined by either an identity F-edge or an identity V-edge.

The bridge to Hopf algebras: slot s collects the weight-p^s information.
For a primitively generated algebra the slots are the primitive blocks and
F is the p-th power map (V = 0); divided-power and mixed catalogue algebras
are matched to their known string shapes instead.  ``recover_PQ`` reads the
primitive and indecomposable profiles back off the module.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np
import sympy

from . import fplinalg as fpl
from . import hopf as hp

LETTERS = ("F", "V")


@dataclass(frozen=True)
class StringSpec:
    """A string shape: start slot ``r``, finite ``word`` over {F, V}, and an
    optional infinite tail letter (``"F"`` or ``"V"``) repeated to the window
    edge."""

    r: int
    word: str = ""
    tail: str | None = None

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("start slot must be >= 0")
        if any(c not in LETTERS for c in self.word):
            raise ValueError("word letters must be F or V")
        if self.tail is not None and self.tail not in LETTERS:
            raise ValueError("tail letter must be F or V")

    def letters(self, degree_bound):
        """The word seen inside slots 0..degree_bound, tail expanded."""
        out = list(self.word[: max(0, degree_bound - self.r)])
        if self.tail is not None:
            while self.r + len(out) < degree_bound:
                out.append(self.tail)
        return out


@dataclass
class DieudonneModule:
    p: int
    dims: tuple
    F: tuple      # F[i] maps slot i to slot i+1, shape dims[i+1] x dims[i]
    V: tuple      # V[i] maps slot i+1 to slot i, shape dims[i] x dims[i+1]

    @property
    def degree_bound(self):
        return len(self.dims) - 1

    @property
    def total_dim(self):
        return int(sum(self.dims))


@dataclass(frozen=True)
class ModuleReport:
    ok: bool
    message: str = ""


def zero_module(p, degree_bound):
    dims = (0,) * (degree_bound + 1)
    zs = tuple(np.zeros((0, 0), dtype=np.int64) for _ in range(degree_bound))
    return DieudonneModule(p, dims, zs, zs)


def validate(m: DieudonneModule) -> ModuleReport:
    """Check matrix shapes and the relations F_i V_i = 0 = V_i F_i."""
    n = m.degree_bound
    if len(m.F) != n or len(m.V) != n:
        return ModuleReport(False, "operator count does not match slots")
    for i in range(n):
        if m.F[i].shape != (m.dims[i + 1], m.dims[i]):
            return ModuleReport(False, "F_%d has shape %s" % (i, m.F[i].shape))
        if m.V[i].shape != (m.dims[i], m.dims[i + 1]):
            return ModuleReport(False, "V_%d has shape %s" % (i, m.V[i].shape))
        if np.any(m.F[i] @ m.V[i] % m.p):
            return ModuleReport(False, "F_%d V_%d != 0" % (i, i))
        if np.any(m.V[i] @ m.F[i] % m.p):
            return ModuleReport(False, "V_%d F_%d != 0" % (i, i))
    return ModuleReport(True)


def make_string(s: StringSpec, p, degree_bound) -> DieudonneModule:
    """The one-dimensional-per-slot module of a string spec, clipped to the
    window 0..degree_bound."""
    letters = s.letters(degree_bound)
    lo, hi = s.r, s.r + len(letters)
    if lo > degree_bound:
        return zero_module(p, degree_bound)
    dims = tuple(1 if lo <= i <= hi else 0 for i in range(degree_bound + 1))
    F, V = [], []
    for i in range(degree_bound):
        f = np.zeros((dims[i + 1], dims[i]), dtype=np.int64)
        v = np.zeros((dims[i], dims[i + 1]), dtype=np.int64)
        if lo <= i < hi:
            if letters[i - lo] == "F":
                f[0, 0] = 1
            else:
                v[0, 0] = 1
        F.append(f)
        V.append(v)
    return DieudonneModule(p, dims, tuple(F), tuple(V))


def direct_sum(a: DieudonneModule, b: DieudonneModule) -> DieudonneModule:
    if a.p != b.p or a.degree_bound != b.degree_bound:
        raise ValueError("summands must share prime and window")
    dims = tuple(x + y for x, y in zip(a.dims, b.dims))

    def blk(x, y):
        out = np.zeros((x.shape[0] + y.shape[0], x.shape[1] + y.shape[1]),
                       dtype=np.int64)
        out[: x.shape[0], : x.shape[1]] = x
        out[x.shape[0]:, x.shape[1]:] = y
        return out

    F = tuple(blk(x, y) for x, y in zip(a.F, b.F))
    V = tuple(blk(x, y) for x, y in zip(a.V, b.V))
    return DieudonneModule(a.p, dims, F, V)


def conjugate(m: DieudonneModule, mats) -> DieudonneModule:
    """Change basis slotwise: slot i of the result carries g_i . v for the
    given invertible matrices g_i."""
    p = m.p
    gs = [np.asarray(g, dtype=np.int64) % p for g in mats]
    ginv = [fpl.inv(g, p) for g in gs]
    F = tuple(gs[i + 1] @ m.F[i] @ ginv[i] % p for i in range(m.degree_bound))
    V = tuple(gs[i] @ m.V[i] @ ginv[i + 1] % p for i in range(m.degree_bound))
    return DieudonneModule(p, m.dims, F, V)


# ---------------------------------------------------------------------------
# from Hopf presentations

_WORD_SHAPES = {
    "S": lambda n: ("", "F"),
    "Gamma": lambda n: ("", "V"),
    "Lambda": lambda n: ("", None),
    "S_n": lambda n: ("F" * (n - 1), None),
    "Gamma_n": lambda n: ("V" * (n - 1), None),
    "G_n": lambda n: ("V" * n, "F"),
}


class UnsupportedAlgebra(ValueError):
    """Raised when no exact module is known for the given presentation."""


def _slot_bound(h: hp.HopfPresentation):
    wmax = 0
    for b in h.basis:
        wmax = max(wmax, b.weight)
    s = 0
    while h.p ** (s + 1) <= wmax:
        s += 1
    return s


def _string_of_provenance(prov):
    """StringSpec for a single catalogue tag, or None when not recognized."""
    kind = prov[0]
    if kind not in _WORD_SHAPES:
        return None
    r = prov[1]
    n = prov[3] if len(prov) > 3 else None
    word, tail = _WORD_SHAPES[kind](n)
    return StringSpec(r, word, tail)


def dieudonne_of(h: hp.HopfPresentation, degree_bound=None) -> DieudonneModule:
    """The module of a supported Hopf presentation.

    Catalogue algebras (and their tensor products, twists and duals) go
    through the known string shapes; any other presentation must be
    primitively generated, which is machine-checked by computing the
    Verschiebung, and then slot s is the weight-p^s primitive block with F
    the p-th power map.
    """
    if degree_bound is None:
        degree_bound = _slot_bound(h)
    built = _of_provenance(h.provenance, h.p, degree_bound)
    if built is not None:
        return built
    return _of_primitively_generated(h, degree_bound)


def _of_provenance(prov, p, bound):
    if prov is None:
        return None
    kind = prov[0]
    if kind == "Morava":
        raise UnsupportedAlgebra(
            "cyclically graded algebra has no module in this window formalism")
    if kind == "tensor":
        a = _of_provenance(prov[1], p, bound)
        b = _of_provenance(prov[2], p, bound)
        if a is None or b is None:
            return None
        return direct_sum(a, b)
    if kind == "dual":
        base = _of_provenance(prov[1], p, bound)
        if base is None:
            return None
        # duality transposes the operators and swaps their roles
        F = tuple(v.T.copy() for v in base.V)
        V = tuple(f.T.copy() for f in base.F)
        return DieudonneModule(p, base.dims, F, V)
    if kind == "twist":
        inner = _of_provenance(prov[1], p, bound)
        if inner is None:
            return None
        return _shift_slots(inner, prov[2], bound)
    spec = _string_of_provenance(prov)
    if spec is None:
        return None
    return make_string(spec, p, bound)


def _shift_slots(m: DieudonneModule, r, bound):
    out = zero_module(m.p, bound)
    dims = list(out.dims)
    F = list(out.F)
    V = list(out.V)
    for i, d in enumerate(m.dims):
        if i + r <= bound:
            dims[i + r] = d
    for i in range(m.degree_bound):
        if i + r + 1 <= bound:
            F[i + r] = m.F[i].copy()
            V[i + r] = m.V[i].copy()
    # re-shape the empty boundary operators
    for i in range(bound):
        if F[i].shape != (dims[i + 1], dims[i]):
            F[i] = np.zeros((dims[i + 1], dims[i]), dtype=np.int64)
        if V[i].shape != (dims[i], dims[i + 1]):
            V[i] = np.zeros((dims[i], dims[i + 1]), dtype=np.int64)
    return DieudonneModule(m.p, tuple(dims), tuple(F), tuple(V))


def _of_primitively_generated(h, bound):
    p = h.p
    wrep = hp.validate_weight_decomposition(h)
    if not wrep.ok:
        raise UnsupportedAlgebra("weight decomposition invalid: %s"
                                 % (wrep.failures[:1],))
    ver = hp.verschiebung(h)
    if np.any(ver.matrix % p):
        raise UnsupportedAlgebra(
            "not primitively generated (nonzero Verschiebung) and not a "
            "recognized catalogue construction")
    prims = hp.primitives(h)
    slots = []          # per slot: rows in full-space coordinates
    for s in range(bound + 1):
        rows = [hp.embed_block(h, key, block_rows)
                for key, block_rows in sorted(prims.items())
                if key[1] == p ** s and block_rows.shape[0]]
        slots.append(np.vstack(rows) if rows else
                     np.zeros((0, h.dim), dtype=np.int64))
    dims = tuple(v.shape[0] for v in slots)
    F, V = [], []
    for s in range(bound):
        f = np.zeros((dims[s + 1], dims[s]), dtype=np.int64)
        for col in range(dims[s]):
            vec = _vec_power(h, slots[s][col], p)
            if vec is None:
                raise UnsupportedAlgebra(
                    "window too small to close a p-th power at slot %d" % s)
            if np.any(vec):
                coords = fpl.coords_in_span(slots[s + 1], vec, p)
                if coords is None:
                    raise UnsupportedAlgebra(
                        "p-th power of a primitive is not primitive")
                f[:, col] = coords
        F.append(f)
        V.append(np.zeros((dims[s], dims[s + 1]), dtype=np.int64))
    return DieudonneModule(p, dims, tuple(F), tuple(V))


def _vec_power(h, row, k):
    """k-th power of a full-coordinate vector, or None when truncated."""
    out = hp.unit_vector(h)
    sparse = {int(i): int(c) for i, c in enumerate(row) if c}
    for _ in range(k):
        out = hp.mu_vec(h, out, sparse)
        if out is None:
            return None
    dense = np.zeros(h.dim, dtype=np.int64)
    for i, c in out.items():
        dense[i] = c
    return dense


def recover_PQ(m: DieudonneModule):
    """Primitive and indecomposable slot profiles of the module.

    Slot k >= 1 of the P-profile is dim ker V_{k-1}; of the Q-profile,
    dim coker F_{k-1}.  Slot 0 of both is the full slot dimension.
    """
    p = m.p
    P, Q = {}, {}
    if m.dims[0]:
        P[0] = m.dims[0]
        Q[0] = m.dims[0]
    for k in range(1, m.degree_bound + 1):
        kerv = m.dims[k] - fpl.rank(m.V[k - 1], p)
        cokf = m.dims[k] - fpl.rank(m.F[k - 1], p)
        if kerv:
            P[k] = kerv
        if cokf:
            Q[k] = cokf
    return P, Q


# ---------------------------------------------------------------------------
# decomposition into strings

class DecompositionError(RuntimeError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial if partial is not None else Counter()


def endomorphism_basis(m: DieudonneModule):
    """Basis of slotwise maps commuting with all F_i and V_i; each element
    is a tuple of square blocks, one per slot."""
    p = m.p
    sizes = [d * d for d in m.dims]
    offs = np.concatenate(([0], np.cumsum(sizes))).astype(int)
    total = int(offs[-1])
    eqs = []
    for i in range(m.degree_bound):
        a, b = m.dims[i], m.dims[i + 1]
        # T_{i+1} F_i - F_i T_i = 0, one equation per (row, col) entry
        rows = np.zeros((b * a, total), dtype=np.int64)
        for r in range(b):
            for c in range(a):
                e = rows[r * a + c]
                for k in range(b):
                    e[offs[i + 1] + r * b + k] += m.F[i][k, c]
                for k in range(a):
                    e[offs[i] + k * a + c] -= m.F[i][r, k]
        if rows.size:
            eqs.append(rows % p)
        # T_i V_i - V_i T_{i+1} = 0
        rows = np.zeros((a * b, total), dtype=np.int64)
        for r in range(a):
            for c in range(b):
                e = rows[r * b + c]
                for k in range(b):
                    e[offs[i + 1] + k * b + c] -= m.V[i][r, k]
                for k in range(a):
                    e[offs[i] + r * a + k] += m.V[i][k, c]
        if rows.size:
            eqs.append(rows % p)
    if eqs:
        system = np.vstack(eqs) % p
    else:
        system = np.zeros((0, total), dtype=np.int64)
    basis = fpl.kernel_basis(system, p)
    out = []
    for row in basis:
        blocks = []
        for i, d in enumerate(m.dims):
            blocks.append(row[offs[i]:offs[i + 1]].reshape(d, d).copy())
        out.append(tuple(blocks))
    return out


def _apply_poly(coeffs, blocks, p):
    """Evaluate a monic-or-not polynomial (ascending coeffs) at a slotwise
    endomorphism."""
    out = []
    for t in blocks:
        d = t.shape[0]
        acc = np.zeros((d, d), dtype=np.int64)
        power = np.eye(d, dtype=np.int64)
        for c in coeffs:
            if c:
                acc = (acc + c * power) % p
            power = power @ t % p
        out.append(acc)
    return out


def _min_poly(blocks, p):
    """Ascending coefficients of the minimal polynomial of a slotwise map."""
    if sum(b.size for b in blocks) == 0:
        return [0, 1]
    eye = tuple(np.eye(b.shape[0], dtype=np.int64) for b in blocks)
    vecs = [np.concatenate([b.ravel() for b in eye])]
    cur = blocks
    while True:
        v = np.concatenate([b.ravel() for b in cur])
        sol = fpl.solve(np.array(vecs, dtype=np.int64).T, v, p)
        if sol is not None:
            coeffs = [(-int(c)) % p for c in sol] + [1]
            return coeffs
        vecs.append(v)
        cur = tuple(a @ b % p for a, b in zip(cur, blocks))


def _factor_minpoly(coeffs, p):
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(coeffs)), x, modulus=p)
    _, factors = poly.factor_list()
    out = []
    for f, e in factors:
        cs = [int(c) % p for c in reversed(f.all_coeffs())]
        out.append((cs, e))
    return out


def _poly_power(coeffs, e, p):
    out = [1]
    for _ in range(e):
        new = [0] * (len(out) + len(coeffs) - 1)
        for i, a in enumerate(out):
            if not a:
                continue
            for j, b in enumerate(coeffs):
                new[i + j] = (new[i + j] + a * b) % p
        out = new
    return out


def _restrict(m: DieudonneModule, rows_per_slot):
    p = m.p
    dims = tuple(r.shape[0] for r in rows_per_slot)
    F, V = [], []
    for i in range(m.degree_bound):
        src, tgt = rows_per_slot[i], rows_per_slot[i + 1]
        f = fpl.solve(tgt.T, m.F[i] @ src.T % p, p)
        v = fpl.solve(src.T, m.V[i] @ tgt.T % p, p)
        if f is None or v is None:
            raise DecompositionError("slot spans are not operator-invariant")
        F.append(f.reshape(dims[i + 1], dims[i]) if f.size else
                 np.zeros((dims[i + 1], dims[i]), dtype=np.int64))
        V.append(v.reshape(dims[i], dims[i + 1]) if v.size else
                 np.zeros((dims[i], dims[i + 1]), dtype=np.int64))
    return DieudonneModule(p, dims, tuple(F), tuple(V))


def _identify_string(m: DieudonneModule):
    support = [i for i, d in enumerate(m.dims) if d]
    if not support:
        return None
    lo, hi = support[0], support[-1]
    if support != list(range(lo, hi + 1)) or any(m.dims[i] != 1 for i in support):
        raise DecompositionError("indecomposable candidate is not a string")
    word = []
    for i in range(lo, hi):
        fz = bool(np.any(m.F[i] % m.p))
        vz = bool(np.any(m.V[i] % m.p))
        if fz == vz:
            raise DecompositionError("string edge %d is ambiguous" % i)
        word.append("F" if fz else "V")
    return StringSpec(lo, "".join(word))


def decompose(m: DieudonneModule, seed=0, budget=200) -> Counter:
    """The multiset of string specs whose direct sum is isomorphic to m.

    Splitting walks the endomorphism algebra: basis elements first, then
    seeded pseudo-random combinations; each non-primary minimal polynomial
    yields a pair of complementary invariant summands to recurse on.
    """
    rep = validate(m)
    if not rep.ok:
        raise ValueError("invalid module: %s" % rep.message)
    rng = np.random.default_rng(seed)
    out = Counter()
    _decompose_into(m, rng, budget, out)
    return out


def _decompose_into(m, rng, budget, out):
    p = m.p
    if m.total_dim == 0:
        return
    if m.total_dim == 1:
        out[_identify_string(m)] += 1
        return
    basis = endomorphism_basis(m)
    if len(basis) == 1:
        # one-dimensional endomorphism algebra: already indecomposable
        out[_identify_string(m)] += 1
        return
    candidates = list(basis)
    tried = 0
    while True:
        if tried < len(candidates):
            t = candidates[tried]
        elif tried < budget:
            coeffs = rng.integers(0, p, size=len(basis))
            t = tuple(sum(int(c) * b[i] for c, b in zip(coeffs, basis)) % p
                      for i in range(len(m.dims)))
        else:
            try:
                spec = _identify_string(m)
            except DecompositionError:
                raise DecompositionError(
                    "idempotent search budget exhausted", partial=out)
            out[spec] += 1
            return
        tried += 1
        mp = _min_poly(t, p)
        factors = _factor_minpoly(mp, p)
        if len(factors) < 2:
            continue
        f1, e1 = factors[0]
        part1 = _poly_power(f1, e1, p)
        part2 = [1]
        for f, e in factors[1:]:
            part2 = _poly_multiply(part2, _poly_power(f, e, p), p)
        rows1 = [fpl.kernel_basis(b, p) for b in _apply_poly(part1, t, p)]
        rows2 = [fpl.kernel_basis(b, p) for b in _apply_poly(part2, t, p)]
        if sum(r.shape[0] for r in rows1) == 0 or \
                sum(r.shape[0] for r in rows2) == 0:
            continue
        sub1 = _restrict(m, rows1)
        sub2 = _restrict(m, rows2)
        if sub1.total_dim + sub2.total_dim != m.total_dim:
            raise DecompositionError("primary components do not fill the module")
        _decompose_into(sub1, rng, budget, out)
        _decompose_into(sub2, rng, budget, out)
        return


def _poly_multiply(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


# ---------------------------------------------------------------------------
# brute-force oracle on tiny modules

def _all_subspaces(dim, p):
    """Row-reduced bases of every subspace of F_p^dim (dim <= 4 intended)."""
    spaces = [np.zeros((0, dim), dtype=np.int64)]
    seen = {spaces[0].tobytes()}
    vectors = []
    for num in range(1, p ** dim):
        v = np.array([(num // p ** i) % p for i in range(dim)], dtype=np.int64)
        vectors.append(v)
    # grow spaces by adding one vector at a time
    frontier = list(spaces)
    while frontier:
        nxt = []
        for sp in frontier:
            for v in vectors:
                if fpl.in_span(sp, v, p):
                    continue
                cand = fpl.span_rref(np.vstack([sp, v[None, :]]), p)
                key = cand.tobytes()
                if key not in seen:
                    seen.add(key)
                    spaces.append(cand)
                    nxt.append(cand)
        frontier = nxt
    return spaces


def _is_submodule(m, rows_per_slot):
    p = m.p
    for i in range(m.degree_bound):
        src, tgt = rows_per_slot[i], rows_per_slot[i + 1]
        if src.size:
            for v in (src @ m.F[i].T) % p:
                if not fpl.in_span(tgt, v, p):
                    return False
        if tgt.size:
            for v in (tgt @ m.V[i].T) % p:
                if not fpl.in_span(src, v, p):
                    return False
    return True


def brute_decompose(m: DieudonneModule) -> Counter:
    """Exhaustive decomposition by enumerating complementary submodule pairs;
    only sensible for total dimension <= 4."""
    if m.total_dim > 4:
        raise ValueError("oracle restricted to total dimension <= 4")
    p = m.p
    if m.total_dim == 0:
        return Counter()
    per_slot = [_all_subspaces(d, p) for d in m.dims]
    subs = [[]]
    for options in per_slot:
        subs = [s + [o] for s in subs for o in options]
    submodules = [s for s in subs if _is_submodule(m, s)]

    def dim_of(rows):
        return sum(r.shape[0] for r in rows)

    for a in submodules:
        da = dim_of(a)
        if da == 0 or da == m.total_dim:
            continue
        for b in submodules:
            if dim_of(b) != m.total_dim - da:
                continue
            if any(fpl.intersect(x, y, p).shape[0] for x, y in zip(a, b)):
                continue
            left = brute_decompose(_restrict(m, a))
            right = brute_decompose(_restrict(m, b))
            return left + right
    return Counter({_identify_string(m): 1})


# ---------------------------------------------------------------------------
# signatures and fake truncations

def _norm_profile(prof):
    if isinstance(prof, dict):
        items = prof.items()
    else:
        items = prof
    return tuple(sorted((int(k), int(v)) for k, v in items if v))


def _norm_pair(pair):
    return (_norm_profile(pair[0]), _norm_profile(pair[1]))


def signature_of(summands) -> Counter:
    """Multiset of (P-profile, Q-profile) pairs, profiles as sorted tuples of
    (slot, multiplicity)."""
    out = Counter()
    for pair in summands:
        key = _norm_pair(pair)
        if key != ((), ()):
            out[key] += 1
    return out


def _truncate_profile(prof, k):
    return tuple((s, c) for s, c in prof if s <= k)


def _component(prof, k):
    for s, c in prof:
        if s == k:
            return c
    return 0


def fake_truncation(sigma: Counter, k) -> Counter:
    """Keep the pairs alive in slot k, truncated to slots <= k."""
    out = Counter()
    for pair, mult in sigma.items():
        a, b = _norm_pair(pair)
        if _component(a, k) or _component(b, k):
            out[(_truncate_profile(a, k), _truncate_profile(b, k))] += mult
    return out


def reconstruct_from_phi(phis, support_bound=None) -> Counter:
    """Rebuild a signature from its fake truncations phi_0 .. phi_K.

    Works slot by slot: the pairs alive in slot k are exactly phi_k, and the
    remaining pairs truncate at k the same way they truncated at k-1.
    Raises ValueError when the sequence is not consistent with any signature.
    """
    if support_bound is None:
        support_bound = len(phis) - 1
    if support_bound >= len(phis):
        raise ValueError("phi sequence shorter than the support bound")
    acc = Counter()
    for k in range(support_bound + 1):
        phik = Counter()
        for pair, mult in phis[k].items():
            phik[_norm_pair(pair)] += mult
        # pairs alive in slot k were already accumulated in their slot-(k-1)
        # truncated form (unless that form was zero); swap those shadows out
        retired = Counter()
        for pair, mult in phik.items():
            prev = (_truncate_profile(pair[0], k - 1),
                    _truncate_profile(pair[1], k - 1))
            if prev != ((), ()):
                retired[prev] += mult
        if retired - acc:
            raise ValueError("phi sequence is inconsistent at slot %d" % k)
        acc = acc - retired + phik
    # every given truncation must be reproduced by the reconstruction
    for k in range(len(phis)):
        given = Counter()
        for pair, mult in phis[k].items():
            given[_norm_pair(pair)] += mult
        if fake_truncation(acc, k) != given:
            raise ValueError("phi sequence is inconsistent at slot %d" % k)
    return acc

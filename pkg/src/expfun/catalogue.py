"""Standard one-generator Hopf algebras over F_p and their variants.

Every constructor produces a :class:`~expfun.hopf.HopfPresentation` whose
generator sits in degree ``i`` and weight ``p**r``; the basis element that is
the k-th power (or k-th divided power) of the generator has degree ``k*i`` and
weight ``k * p**r``.  At odd p the degree ``i`` must be even except for the
exterior algebra, whose generator must be odd.

Kinds:

* ``S``       polynomial algebra on a primitive generator
* ``Lambda``  exterior algebra on a primitive generator
* ``Gamma``   divided power algebra, deconcatenation coproduct
* ``S_n``     polynomial truncated at height p**n (alias ``T`` for n=1)
* ``Gamma_n`` divided powers t_0 .. t_{p**n - 1}
* ``G_n``     extension with basis t_a y^j: divided powers t_a below height
  p**n and a polynomial generator y of degree p**n * i whose coproduct picks
  up the correction sum of t_k (x) t_{p**n - k}
* ``Morava``  the Z/2(p^2-1)-graded algebra with basis a_0 .. a_{p^2-1},
  deconcatenation coproduct, (a_p)^p = a_1 and (a_1)^p = 0
"""

from __future__ import annotations

from math import comb, factorial

from . import fplinalg as fpl
from .hopf import BasisElement, HopfPresentation, tensor_product, verify_axioms

KINDS = ("S", "Lambda", "Gamma", "S_n", "Gamma_n", "G_n", "Morava", "T")


def make(kind, p, degree_bound, r=0, i=None, n=None, multiplicity=1,
         weight_bound=None, verify=None):
    """Build a catalogue algebra; ``multiplicity`` tensors that many copies."""
    if kind == "T":
        kind, n = "S_n", 1
    if kind not in KINDS:
        raise ValueError("unknown kind %r" % (kind,))
    if p < 2:
        raise ValueError("p must be a prime")
    if kind == "Morava":
        h = _morava(p, verify=True if verify is None else verify)
    else:
        if i is None or i < 0:
            raise ValueError("generator degree i required")
        if p > 2:
            if kind == "Lambda" and i % 2 == 0:
                raise ValueError("exterior generator must sit in odd degree at odd p")
            if kind != "Lambda" and i % 2 == 1:
                raise ValueError("generator degree must be even at odd p")
        if i == 0 and weight_bound is None:
            raise ValueError("degree-0 generator needs a weight bound")
        if kind in ("S_n", "Gamma_n") and (n is None or n < 1):
            raise ValueError("n >= 1 required")
        if kind == "G_n" and (n is None or n < 0):
            raise ValueError("n >= 0 required")
        builder = {"S": _poly, "Lambda": _exterior, "Gamma": _divided,
                   "S_n": _poly_trunc, "Gamma_n": _divided_trunc, "G_n": _gext}[kind]
        h = builder(p, degree_bound, r, i, n, weight_bound)
        if verify or (verify is None and kind == "G_n"):
            rep = verify_axioms(h)
            if not rep.ok:
                raise AssertionError("catalogue %s failed axioms: %s" % (kind, rep.failures))
    for _ in range(multiplicity - 1):
        h = tensor_product(h, make(kind, p, degree_bound, r=r, i=i, n=n,
                                   weight_bound=weight_bound, verify=False))
    return h


def _power_range(p, bound, r, i, wbound, cap=None):
    w = p ** r
    ks = []
    k = 0
    while True:
        if cap is not None and k >= cap:
            break
        if i > 0 and k * i > bound:
            break
        if i == 0 and k * w > wbound:
            break
        if wbound is not None and k * w > wbound:
            break
        ks.append(k)
        k += 1
    return ks


def _plabel(stem, k):
    if k == 0:
        return "1"
    if k == 1:
        return stem
    return "%s%d" % (stem, k)


def _one_generator(p, bound, r, i, wbound, ks, mu_coeff, prov, stem):
    """Shared assembly: basis x^k for k in ks, product given by mu_coeff(a, b)
    (None above the truncation height), deconcatenation-flavoured coproduct
    with coefficient delta_coeff built from mu_coeff-consistent binomials."""
    w = p ** r
    basis = [BasisElement(_plabel(stem, k), k * i, k * w) for k in ks]
    kset = set(ks)
    mu = {}
    for a in ks:
        for b in ks:
            d, wt = (a + b) * i, (a + b) * w
            if d > bound or (wbound is not None and wt > wbound):
                continue
            c = mu_coeff(a, b)
            if c is None:
                # closed-for-other-reasons zero (height truncation)
                mu[(a, b)] = {}
            else:
                c %= p
                if c and (a + b) not in kset:
                    raise AssertionError("window bookkeeping broke")
                mu[(a, b)] = {a + b: c} if c else {}
    return basis, mu


def _poly(p, bound, r, i, n, wbound):
    ks = _power_range(p, bound, r, i, wbound)
    basis, mu = _one_generator(p, bound, r, i, wbound, ks, lambda a, b: 1,
                               None, "x")
    delta = {k: {(a, k - a): comb(k, a) % p for a in range(k + 1)
                 if comb(k, a) % p} for k in ks}
    return HopfPresentation(p, basis, mu, delta, bound, weight_bound=wbound,
                            provenance=("S", r, i))


def _exterior(p, bound, r, i, n, wbound):
    ks = [0] + ([1] if i <= bound and (wbound is None or p ** r <= wbound) else [])
    if p == 2:
        coeff = lambda a, b: 0 if a + b > 1 else 1
    else:
        coeff = lambda a, b: 1 if a + b <= 1 else None  # sign rule kills x*x
    basis, mu = _one_generator(p, bound, r, i, wbound, ks, coeff, None, "x")
    if p > 2 and (1, 1) in mu:
        mu[(1, 1)] = {}
    delta = {0: {(0, 0): 1}}
    if 1 in ks:
        delta[1] = {(0, 1): 1, (1, 0): 1}
    return HopfPresentation(p, basis, mu, delta, bound, weight_bound=wbound,
                            provenance=("Lambda", r, i))


def _divided(p, bound, r, i, n, wbound):
    ks = _power_range(p, bound, r, i, wbound)
    basis, mu = _one_generator(p, bound, r, i, wbound, ks,
                               lambda a, b: comb(a + b, a), None, "g")
    delta = {k: {(a, k - a): 1 for a in range(k + 1)} for k in ks}
    return HopfPresentation(p, basis, mu, delta, bound, weight_bound=wbound,
                            provenance=("Gamma", r, i))


def _poly_trunc(p, bound, r, i, n, wbound):
    ks = _power_range(p, bound, r, i, wbound, cap=p ** n)
    coeff = lambda a, b: None if a + b >= p ** n else 1
    basis, mu = _one_generator(p, bound, r, i, wbound, ks, coeff, None, "x")
    delta = {k: {(a, k - a): comb(k, a) % p for a in range(k + 1)
                 if comb(k, a) % p} for k in ks}
    return HopfPresentation(p, basis, mu, delta, bound, weight_bound=wbound,
                            provenance=("S_n", r, i, n))


def _divided_trunc(p, bound, r, i, n, wbound):
    ks = _power_range(p, bound, r, i, wbound, cap=p ** n)
    # heights at or above p**n force a carry, so the binomial vanishes anyway
    coeff = lambda a, b: None if a + b >= p ** n else comb(a + b, a)
    basis, mu = _one_generator(p, bound, r, i, wbound, ks, coeff, None, "g")
    delta = {k: {(a, k - a): 1 for a in range(k + 1)} for k in ks}
    return HopfPresentation(p, basis, mu, delta, bound, weight_bound=wbound,
                            provenance=("Gamma_n", r, i, n))


def _glabel(a, j):
    if a == 0 and j == 0:
        return "1"
    t = "" if a == 0 else ("t%d" % a)
    y = "" if j == 0 else ("y" if j == 1 else "y%d" % j)
    return t + y


def _gext(p, bound, r, i, n, wbound):
    q = p ** n
    w = p ** r

    def ok(a, j):
        d, wt = (a + j * q) * i, (a + j * q) * w
        if i == 0:
            return wt <= wbound
        return d <= bound and (wbound is None or wt <= wbound)

    pairs = []
    j = 0
    while ok(0, j) or j == 0:
        row = [(a, j) for a in range(q) if ok(a, j)]
        if not row and j > 0:
            break
        pairs.extend(row)
        j += 1
    pairs.sort(key=lambda aj: (aj[0] + aj[1] * q, aj))
    pos = {aj: t for t, aj in enumerate(pairs)}

    basis = [BasisElement(_glabel(a, j), (a + j * q) * i, (a + j * q) * w)
             for (a, j) in pairs]

    def pair_mul(x, y):
        """product on index pairs: ((a,j),(b,k)) -> coeff, (a+b, j+k) or zero"""
        (a, j), (b, k) = x, y
        if a + b >= q:
            return 0, None
        return comb(a + b, a) % p, (a + b, j + k)

    mu = {}
    for s, x in enumerate(pairs):
        for t, y in enumerate(pairs):
            height = (x[0] + x[1] * q) + (y[0] + y[1] * q)
            if i > 0 and height * i > bound:
                continue
            if wbound is not None and height * w > wbound:
                continue
            c, out = pair_mul(x, y)
            if out is None or c == 0:
                mu[(s, t)] = {}
            else:
                mu[(s, t)] = {pos[out]: c}

    # coproduct: delta(t_a) by deconcatenation, delta(y) with correction terms,
    # extended multiplicatively; two-leg states are dicts ((a,j),(b,k)) -> coeff
    dy = {((0, 1), (0, 0)): 1, ((0, 0), (0, 1)): 1}
    for k in range(1, q):
        dy[((k, 0), (q - k, 0))] = 1

    def state_mult(s1, s2):
        out = {}
        for (x1, y1), c1 in s1.items():
            for (x2, y2), c2 in s2.items():
                cl, left = pair_mul(x1, x2)
                cr, right = pair_mul(y1, y2)
                c = c1 * c2 * cl * cr % p
                if c and left is not None and right is not None:
                    key = (left, right)
                    out[key] = (out.get(key, 0) + c) % p
        return {k2: v for k2, v in out.items() if v}

    delta = {}
    for s, (a, j) in enumerate(pairs):
        state = {((u, 0), (a - u, 0)): 1 for u in range(a + 1)}
        for _ in range(j):
            state = state_mult(state, dy)
        delta[s] = {(pos[x], pos[y]): c for (x, y), c in state.items()}

    return HopfPresentation(p, basis, mu, delta, bound if i else 0,
                            weight_bound=wbound, provenance=("G_n", r, i, n))


def gext_triples(p, n, i, degree_bound):
    """The two short exact sequences of Hopf algebras through ``G_n``.

    Returns a pair of 5-tuples ``(left, mid, right, f, g)`` where ``f`` maps
    left into mid and ``g`` maps mid onto right (matrices act on column
    vectors of basis coordinates):

    * ``Gamma_n -> G_n -> S^{(n)}``: gamma_a goes to t_a, and t_a y^j maps
      to x^j when a = 0 and to zero otherwise;
    * ``S^{(n+1)} -> G_n -> Gamma_{n+1}``: x^k goes to y^{pk}, and t_a y^j
      maps to j! gamma_{a + j p^n} for j < p and to zero otherwise.
    """
    import numpy as np

    q = p ** n

    def mk(kind, **kw):
        return make(kind, p, degree_bound, i=kw.pop("i", i), **kw)

    out = []

    left = mk("Gamma_n", n=n)
    mid = mk("G_n", n=n)
    right = mk("S", r=n, i=i * q)
    f = np.zeros((mid.dim, left.dim), dtype=np.int64)
    for a_idx, b in enumerate(left.basis):
        f[mid.index_of(_glabel(b.weight, 0)), a_idx] = 1
    g = np.zeros((right.dim, mid.dim), dtype=np.int64)
    for m_idx, b in enumerate(mid.basis):
        if b.weight % q == 0:
            lbl = _plabel("x", b.weight // q)
            if lbl in right.labels():
                g[right.index_of(lbl), m_idx] = 1
    out.append((left, mid, right, f, g))

    left = mk("S", r=n + 1, i=i * p * q)
    right = mk("Gamma_n", n=n + 1)
    f = np.zeros((mid.dim, left.dim), dtype=np.int64)
    for k_idx, b in enumerate(left.basis):
        f[mid.index_of(_glabel(0, b.weight // q)), k_idx] = 1
    g = np.zeros((right.dim, mid.dim), dtype=np.int64)
    for m_idx, b in enumerate(mid.basis):
        a, j = b.weight % q, b.weight // q
        if j < p and a + j * q < p * q:
            lbl = _plabel("g", a + j * q)
            if lbl in right.labels():
                g[right.index_of(lbl), m_idx] = factorial(j) % p
    out.append((left, mid, right, f, g))
    return out


def _morava(p, verify=True):
    pp = p * p
    N = 2 * (pp - 1)

    def swap(m):
        qd, rd = divmod(m, p)
        return rd * p + qd

    fact_inv = [fpl.modinv(factorial(t) % p, p) if factorial(t) % p else None
                for t in range(p)]
    exps = [swap(m) for m in range(pp)]   # y-exponent of a_m
    coeff = []                            # a_m = coeff[m] * y^{exps[m]}
    for m in range(pp):
        qd, rd = divmod(m, p)
        coeff.append(fpl.modinv(factorial(qd) * factorial(rd) % p, p))
    ypow_val = [None] * pp                # y^s = ypow_val[s] * a_{swap(s)}
    for s in range(pp):
        u, v = s % p, s // p
        ypow_val[s] = factorial(u) * factorial(v) % p

    basis = [BasisElement("a%d" % m, (2 * m) % N, m) for m in range(pp)]
    mu = {}
    for m1 in range(pp):
        for m2 in range(pp):
            s = exps[m1] + exps[m2]
            if s >= pp:
                mu[(m1, m2)] = {}
                continue
            c = coeff[m1] * coeff[m2] * ypow_val[s] % p
            mu[(m1, m2)] = {swap(s): c} if c else {}

    # coproduct of y, written in y-powers, then propagated multiplicatively
    dy = {}
    for k in range(p + 1):
        e1, e2 = p * k, p * (p - k)
        if k == p:
            e1, e2 = 1, 0
        if k == 0:
            e1, e2 = 0, 1
        c = 1
        if 0 < k < p:
            c = fact_inv[k] * fact_inv[p - k] % p
        dy[(e1, e2)] = c

    def ymul(s1, s2):
        out = {}
        for (x1, y1), c1 in s1.items():
            for (x2, y2), c2 in s2.items():
                if x1 + x2 >= pp or y1 + y2 >= pp:
                    continue
                key = (x1 + x2, y1 + y2)
                out[key] = (out.get(key, 0) + c1 * c2) % p
        return {k: v for k, v in out.items() if v}

    ydelta = [{(0, 0): 1}]
    for _ in range(pp - 1):
        ydelta.append(ymul(ydelta[-1], dy))

    delta = {}
    for m in range(pp):
        state = ydelta[exps[m]]
        out = {}
        for (s, t), c in state.items():
            val = coeff[m] * c * ypow_val[s] * ypow_val[t] % p
            if val:
                out[(swap(s), swap(t))] = val
        delta[m] = out

    h = HopfPresentation(p, basis, mu, delta, N - 1, modulus=N,
                         weight_modulus=pp - 1, provenance=("Morava",))
    # the a-basis coproduct must come out as plain deconcatenation
    for m in range(pp):
        expected = {(k, m - k): 1 for k in range(m + 1)}
        if h.delta[m] != expected:
            raise AssertionError("deconcatenation failed at a%d" % m)
    if verify:
        rep = verify_axioms(h)
        if not rep.ok:
            raise AssertionError("Morava axioms failed: %s" % (rep.failures,))
    return h


def twist_regrade(h: HopfPresentation, r: int, coefficient_variant: bool = False):
    """Regrade by r twists: weights multiply by p**r.

    With ``coefficient_variant`` the degrees are multiplied instead, the
    regrading that acts on the underlying coefficient spaces.
    """
    if r == 0:
        return h
    f = h.p ** r
    if coefficient_variant:
        if h.modulus:
            basis = [BasisElement(b.label, (b.degree * f) % h.modulus, b.weight)
                     for b in h.basis]
            bound = h.degree_bound
        else:
            basis = [BasisElement(b.label, b.degree * f, b.weight) for b in h.basis]
            bound = h.degree_bound * f
        wbound = h.weight_bound
    else:
        basis = [BasisElement(b.label, b.degree, b.weight * f) for b in h.basis]
        bound = h.degree_bound
        wbound = None if h.weight_bound is None else h.weight_bound * f
    prov = _twist_provenance(h.provenance, r)
    wm = h.weight_modulus
    if wm is not None and not coefficient_variant:
        wm = wm * f
    return HopfPresentation(h.p, basis, dict(h.mu), dict(h.delta), bound,
                            modulus=h.modulus, weight_bound=wbound,
                            weight_modulus=wm, provenance=prov)


def _twist_provenance(prov, r):
    if prov is None:
        return None
    kind = prov[0]
    if kind in ("S", "Lambda", "Gamma"):
        return (kind, prov[1] + r, prov[2])
    if kind in ("S_n", "Gamma_n", "G_n"):
        return (kind, prov[1] + r, prov[2], prov[3])
    if kind == "tensor":
        return ("tensor", _twist_provenance(prov[1], r), _twist_provenance(prov[2], r))
    return ("twist", prov, r)

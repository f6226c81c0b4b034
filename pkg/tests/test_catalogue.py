"""The builtin family of Hopf algebra presentations."""

import numpy as np
import pytest

from expfun import catalogue as cat
from expfun import hopf


def test_polynomial_products():
    s = cat.make("S", 3, 8, i=2)
    assert [b.label for b in s.basis] == ["1", "x", "x2", "x3", "x4"]
    assert s.mu[(1, 2)] == {3: 1}
    assert s.mu[(2, 2)] == {4: 1}
    assert hopf.verify_axioms(s).ok


def test_divided_power_binomials():
    g = cat.make("Gamma", 3, 12, i=2)
    # gamma_1 gamma_1 = 2 gamma_2, gamma_1 gamma_2 = 3 gamma_3 = 0
    assert g.mu[(1, 1)] == {2: 2}
    assert g.mu[(1, 2)] == {}
    assert hopf.verify_axioms(g).ok


def test_mod2_divided_square_vanishes():
    g = cat.make("Gamma_n", 2, 8, i=2, n=2)
    labels = [b.label for b in g.basis]
    i1 = labels.index("g")
    assert g.mu[(i1, i1)] == {}  # C(2,1) = 0 mod 2
    assert hopf.verify_axioms(g).ok


def test_parity_guards():
    with pytest.raises(ValueError, match="odd degree"):
        cat.make("Lambda", 3, 8, i=2)
    with pytest.raises(ValueError, match="even"):
        cat.make("S", 3, 9, i=3)
    # no parity constraint mod 2
    assert cat.make("Lambda", 2, 8, i=2).dim == 2


def test_unknown_kind_and_missing_arguments():
    with pytest.raises(ValueError, match="unknown kind"):
        cat.make("Bogus", 2, 4)
    with pytest.raises(ValueError, match="generator degree"):
        cat.make("S", 2, 4)
    with pytest.raises(ValueError, match="weight bound"):
        cat.make("S_n", 2, 0, i=0, n=1)


def test_truncated_polynomial():
    h = cat.make("S_n", 2, 10, i=2, n=2)
    assert [b.label for b in h.basis] == ["1", "x", "x2", "x3"]
    assert h.mu[(2, 2)] == {}  # x^4 = 0
    assert h.mu[(1, 3)] == {}
    assert hopf.verify_axioms(h).ok


def test_height_one_alias():
    a = cat.make("T", 2, 10, i=2)
    b = cat.make("S_n", 2, 10, i=2, n=1)
    assert [x.label for x in a.basis] == [x.label for x in b.basis]
    assert a.mu == b.mu and a.delta == b.delta


def test_twist_scales_weights():
    t = cat.make("S", 3, 8, r=1, i=2)
    assert (t.basis[1].degree, t.basis[1].weight) == (2, 3)
    assert (t.basis[2].degree, t.basis[2].weight) == (4, 6)
    plain = cat.make("S", 3, 8, r=0, i=2)
    assert [b.degree for b in t.basis] == [b.degree for b in plain.basis]


def test_multiplicity_counts():
    h = cat.make("S", 2, 6, i=2, multiplicity=2)
    dims = {}
    for b in h.basis:
        dims[b.degree] = dims.get(b.degree, 0) + 1
    assert dims == {0: 1, 2: 2, 4: 3, 6: 4}
    assert hopf.verify_axioms(h).ok


def test_degree_zero_weighted_polynomial():
    h = cat.make("S", 3, 0, r=0, i=0, weight_bound=4)
    weights = sorted(b.weight for b in h.basis)
    assert weights == [0, 1, 2, 3, 4]
    assert all(b.degree == 0 for b in h.basis)


def test_gauge_algebra_basis():
    h = cat.make("G_n", 2, 8, i=2, n=1)
    assert [(b.label, b.degree, b.weight) for b in h.basis] == [
        ("1", 0, 0), ("t1", 2, 1), ("y", 4, 2), ("t1y", 6, 3), ("y2", 8, 4)]
    assert hopf.verify_axioms(h).ok
    labels = [b.label for b in h.basis]
    y = labels.index("y")
    t1 = labels.index("t1")
    # t_1^2 = C(2,1) t_2 = 0 (t_2 does not exist at q = 2)
    assert h.mu[(t1, t1)] == {}
    # y is not primitive: Delta(y) has the cross term t_1 (x) t_1
    assert h.delta[y][(t1, t1)] % 2 == 1


def test_gauge_algebra_odd_p():
    h = cat.make("G_n", 3, 18, i=2, n=1)
    labels = [b.label for b in h.basis]
    y = labels.index("y")
    # y^3 is again a basis vector (the algebra is polynomial on y over the t's)
    assert hopf.mu_power(h, y, 3) == {labels.index("y3"): 1}
    assert hopf.verify_axioms(h).ok


def test_morava_presentation():
    h = cat.make("Morava", 3, None)
    assert h.dim == 9
    assert h.modulus == 16
    assert h.weight_modulus == 8
    assert h.basis[3].label == "a3"
    assert h.basis[3].degree == 6
    assert h.mu[(3, 3)] == {6: 2}
    # coproduct is deconcatenation of the a's
    assert h.delta[4] == {(4, 0): 1, (3, 1): 1, (2, 2): 1, (1, 3): 1, (0, 4): 1}
    assert hopf.verify_axioms(h).ok


def test_gauge_extension_maps():
    for (p, n) in [(2, 1), (3, 1)]:
        triples = cat.gext_triples(p, n, 2, 2 * p ** (n + 1))
        assert len(triples) == 2
        for left, mid, right, f, g in triples:
            assert f.shape == (mid.dim, left.dim)
            assert g.shape == (right.dim, mid.dim)
            assert hopf.is_hopf_morphism(f, left, mid)
            assert hopf.is_hopf_morphism(g, mid, right)
            comp = g @ f % p
            # composite kills the augmentation ideal
            assert not np.any(comp[1:, 1:])

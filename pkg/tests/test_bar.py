"""Reduced bar construction, Tor tables, and the closed-form comparisons."""

import pytest

from expfun import bar, catalogue, hopf


def test_bar_needs_room_for_the_window():
    with pytest.raises(bar.BarBoundsError):
        bar.reduced_bar(catalogue.make("S", 2, 4, i=2), degree_bound=9)


def test_exterior_tor_is_divided_powers():
    lam = catalogue.make("Lambda", 3, 13, i=3)
    c = bar.reduced_bar(lam, degree_bound=13)
    t = bar.homology_table(c)
    assert t.degree_bound == 12
    assert sorted(t.totals().items()) == [
        ((0, 0), 1), ((4, 1), 1), ((8, 2), 1), ((12, 3), 1)]


def test_tor_hopf_structure():
    lam = catalogue.make("Lambda", 3, 13, i=3)
    c = bar.reduced_bar(lam, degree_bound=13)
    h = bar.tor_hopf(c)
    assert [b.label for b in h.basis] == ["1", "h1d3w1", "h2d6w2", "h3d9w3"]
    g = 1
    assert (h.basis[g].degree, h.basis[g].weight) == (4, 1)
    # a divided power algebra: g . g = 2 g_2
    assert h.mu[(g, g)] == {2: 2}
    assert hopf.verify_axioms(h).ok


def test_homology_of_polynomial_algebra():
    got = bar.homology_table(
        bar.reduced_bar(catalogue.make("S", 2, 12, i=2), degree_bound=13))
    assert got.totals() == {(0, 0): 1, (3, 1): 1}
    want = bar.expected_tor("S", 2, r=0, i=2, degree_bound=12)
    assert got.totals() == want.totals()


def test_identify_cofree_names_the_exterior_generator():
    c = bar.reduced_bar(catalogue.make("S", 3, 16, i=2), degree_bound=17)
    rep = bar.identify_cofree(bar.tor_hopf(c))
    assert rep.ok
    assert rep.generators == (bar.GeneratorSpec(kind="lambda", degree=3, weight=1),)


def test_rebuild_model_block_dims():
    c = bar.reduced_bar(catalogue.make("S", 3, 16, i=2), degree_bound=17)
    h = bar.tor_hopf(c)
    rep = bar.identify_cofree(h)
    model = bar.rebuild_model(rep.generators, 3, h.degree_bound)
    assert model.block_dims() == h.block_dims()


def test_iterated_tor_records_stages():
    t = bar.tor_iterated(catalogue.make("S", 2, 12, i=2), 2, degree_bound=13)
    assert t.level == 2
    # one intermediate cofree identification between the two applications
    assert t.stages == ((bar.GeneratorSpec(kind="lambda", degree=3, weight=1),),)
    want = bar.expected_tor("S", 2, r=0, i=2, j=2, degree_bound=12)
    assert t.totals() == want.totals()


def test_euler_characteristic_per_weight():
    h = catalogue.make("S_n", 3, 0, r=0, i=0, n=2, weight_bound=9)
    c = bar.reduced_bar(h, degree_bound=10, weight_bound=9)
    assert [bar.euler_per_weight(c, w) for w in (0, 1, 3, 9)] == [1, -1, 0, 1]


def test_regrade_checks_the_level():
    e = catalogue.make("S", 2, 0, r=0, i=0, weight_bound=6)
    t = bar.homology_table(bar.reduced_bar(e, degree_bound=13, weight_bound=6))
    with pytest.raises(ValueError, match="level-2"):
        bar.regrade_E(t, x="S")  # the S-form needs a second application
    got = {k: v for k, v in bar.regrade_E(t, x="Lambda").items() if k[0] <= 8}
    assert got == bar.expected_E("Lambda", "S", 2, 0, degree_bound=8,
                                 weight_bound=6)


def test_expected_tables_tensor_over_multiplicity():
    one = bar.expected_tor("S", 2, r=0, i=2, degree_bound=12).totals()
    assert one == {(0, 0): 1, (3, 1): 1}

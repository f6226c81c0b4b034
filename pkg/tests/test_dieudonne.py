"""Filtered F/V modules: strings, decomposition, and the truncation calculus."""

from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from expfun import catalogue, dieudonne as dd
from expfun import fplinalg as fpl


def test_string_module_layout():
    m = dd.make_string(dd.StringSpec(1, "FV"), 3, 5)
    assert m.dims == (0, 1, 1, 1, 0, 0)
    assert m.F[1].tolist() == [[1]]
    assert m.V[2].tolist() == [[1]]  # the V arrow points down into slot 2
    assert m.F[2].tolist() == [[0]]
    assert dd.validate(m).ok


def test_string_with_tail():
    m = dd.make_string(dd.StringSpec(0, "", "F"), 2, 3)
    assert m.dims == (1, 1, 1, 1)
    assert all(f.tolist() == [[1]] for f in m.F)


def test_validate_rejects_bad_relations():
    m = dd.make_string(dd.StringSpec(0, "F"), 2, 2)
    bad = dd.DieudonneModule(2, m.dims, m.F, m.F)  # V := F breaks FV = 0
    rep = dd.validate(bad)
    assert not rep.ok
    assert "V" in rep.message


def test_recover_PQ_of_string():
    m = dd.make_string(dd.StringSpec(0, "FV"), 2, 4)
    P, Q = dd.recover_PQ(m)
    assert P == {0: 1, 1: 1}
    assert Q == {0: 1, 2: 1}


def test_dieudonne_of_polynomial_algebra():
    h = catalogue.make("S", 2, 8, i=2)
    m = dd.dieudonne_of(h)
    assert m.dims == (1, 1, 1)
    assert [f.tolist() for f in m.F] == [[[1]], [[1]]]
    assert [v.tolist() for v in m.V] == [[[0]], [[0]]]


def test_morava_is_not_supported():
    with pytest.raises(dd.UnsupportedAlgebra):
        dd.dieudonne_of(catalogue.make("Morava", 3, None))


def test_decompose_recovers_conjugated_sum():
    p = 3
    specs = [dd.StringSpec(0, "FV"), dd.StringSpec(1, "V"), dd.StringSpec(2, "F")]
    m = dd.make_string(specs[0], p, 5)
    for s in specs[1:]:
        m = dd.direct_sum(m, dd.make_string(s, p, 5))
    rng = np.random.default_rng(7)
    mats = []
    for d in m.dims:
        while True:
            a = rng.integers(0, p, size=(d, d))
            if d == 0 or fpl.rank(a, p) == d:
                mats.append(a.astype(np.int64))
                break
    twisted = dd.conjugate(m, mats)
    assert dd.validate(twisted).ok
    assert dd.decompose(twisted, seed=5) == Counter(specs)


def test_brute_decompose_matches_fast_path():
    p = 2
    m = dd.direct_sum(dd.make_string(dd.StringSpec(0, "F"), p, 3),
                      dd.make_string(dd.StringSpec(1, "V"), p, 3))
    assert dd.brute_decompose(m) == dd.decompose(m, seed=0)


def test_signature_and_truncations_worked_example():
    sigma = dd.signature_of([({0: 1, 1: 1}, {0: 1}), ({3: 1}, {0: 1, 3: 1})])
    pair1 = (((0, 1), (1, 1)), ((0, 1),))
    pair2 = (((3, 1),), ((0, 1), (3, 1)))
    assert sigma == Counter({pair1: 1, pair2: 1})
    phi0 = dd.fake_truncation(sigma, 0)
    assert phi0 == Counter({(((0, 1),), ((0, 1),)): 1, ((), ((0, 1),)): 1})
    assert dd.fake_truncation(sigma, 1) == Counter({pair1: 1})
    assert dd.fake_truncation(sigma, 2) == Counter()
    assert dd.fake_truncation(sigma, 3) == Counter({pair2: 1})
    phis = [dd.fake_truncation(sigma, k) for k in range(5)]
    assert dd.reconstruct_from_phi(phis) == sigma


def test_inconsistent_phi_rejected():
    sigma = dd.signature_of([({0: 1, 1: 1}, {0: 1})])
    phis = [dd.fake_truncation(sigma, k) for k in range(3)]
    phis[0] = Counter()  # slot-0 truncation of a slot-0-alive pair cannot vanish
    with pytest.raises(ValueError, match="inconsistent"):
        dd.reconstruct_from_phi(phis)


@st.composite
def string_multisets(draw):
    p = draw(st.sampled_from([2, 3]))
    k = draw(st.integers(1, 4))
    specs = []
    for _ in range(k):
        r = draw(st.integers(0, 2))
        word = draw(st.text(alphabet="FV", min_size=0, max_size=3))
        specs.append(dd.StringSpec(r, word))
    return p, specs


@given(string_multisets())
@settings(max_examples=60, deadline=None)
def test_phi_round_trip(case):
    p, specs = case
    bound = 3 + max(s.r + len(s.word) for s in specs)
    pairs = [dd.recover_PQ(dd.make_string(s, p, bound)) for s in specs]
    sigma = dd.signature_of(pairs)
    phis = [dd.fake_truncation(sigma, k) for k in range(bound + 1)]
    assert dd.reconstruct_from_phi(phis) == sigma

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from builders import a3, kronecker
from qlab.algebra import GradedDims, graded_dims, trivial_extension
from qlab.errors import NotLoewyBounded, ValidationError
from qlab.linalg import transpose
from qlab.loewy import (
    classify,
    complexity_probe,
    gk_estimate,
    is_negative,
    iterate_levels,
    loewy_matrix,
)
from qlab.mckay import relations_sr
from qlab.quiver import BoundQuiver, Quiver


def _loewy(bq, n):
    gd, _ = graded_dims(bq, n + 2)
    return loewy_matrix(gd, n)


def test_hand_assembled_two_cycle():
    gd = GradedDims(("1", "2"), [[[1, 0], [0, 1]], [[0, 1], [1, 0]], [[1, 0], [0, 1]], [[0, 0], [0, 0]]], 3)
    L = loewy_matrix(gd, 1)
    assert L.matrix == [[0, 1, -1, 0], [1, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]
    assert L.v0 == [[1, 0], [0, 1], [0, 0], [0, 0]]


def test_mckay_loewy_blocks():
    gd, _ = graded_dims(relations_sr(4, 4), 4)
    L = loewy_matrix(gd, 2)
    assert L.size == 48
    a1 = gd.matrices[1]
    col = [row[:16] for row in L.matrix]
    assert col[:16] == a1
    assert col[16:32] == transpose(a1)
    assert col[32:] == [[int(i == j) for j in range(16)] for i in range(16)]


def test_loewy_rejections():
    semisimple = BoundQuiver(Quiver(["1", "2"], []), [])
    gd, _ = graded_dims(semisimple, 4)
    with pytest.raises(NotLoewyBounded):
        loewy_matrix(gd, 2)
    gd, _ = graded_dims(a3(relations=False), 3)
    with pytest.raises(NotLoewyBounded):
        loewy_matrix(gd, 0)


def test_iterate_levels():
    L = _loewy(trivial_extension(a3()), 1)
    v = [1, 0, 0, 0, 0, 0]
    assert iterate_levels(L, v, 0) == v
    assert [s for s in range(1, 8) if is_negative(iterate_levels(L, v, s))] == [4, 5, 6, 7]
    with pytest.raises(ValidationError):
        iterate_levels(L, v, -1)


def test_classify_n1_trichotomy():
    fin = classify(_loewy(trivial_extension(a3()), 1))
    assert fin.verdict == "Finite" and fin.h <= 6
    assert fin.multiplicity_of_one == 0
    tame = classify(_loewy(trivial_extension(kronecker(2)), 1))
    assert tame.label() == "Tame(d=2)"
    wild = classify(_loewy(trivial_extension(kronecker(3)), 1))
    assert wild.verdict == "Wild"
    assert wild.rho == pytest.approx((3 + math.sqrt(5)) / 2, rel=1e-9)


def test_classify_mckay_is_tame_three():
    rep = classify(_loewy(relations_sr(4, 4), 2))
    assert rep.label() == "Tame(d=3)"
    assert abs(rep.char_poly[0]) == 1
    assert gk_estimate(rep) == 3


def test_gk_estimate_values():
    assert gk_estimate(classify(_loewy(trivial_extension(a3()), 1))) == 0
    assert gk_estimate(classify(_loewy(trivial_extension(kronecker(3)), 1))) == math.inf


def test_spectral_radius_at_least_one():
    for bq in (trivial_extension(a3()), trivial_extension(kronecker(2)), trivial_extension(kronecker(3))):
        rep = classify(_loewy(bq, 1))
        if rep.verdict != "Finite":
            assert rep.rho >= 1


def test_classify_rejects_bad_hmax():
    with pytest.raises(ValidationError):
        classify(_loewy(trivial_extension(a3()), 1), h_max=0)


def _permuted(gd, perm):
    vs = tuple(gd.vertices[p] for p in perm)
    mats = [[[m[perm[r]][perm[c]] for c in range(len(perm))] for r in range(len(perm))] for m in gd.matrices]
    return GradedDims(vs, mats, gd.vanishes_from)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["a3", "k2", "k3"]), st.permutations(range(3)))
def test_classify_invariant_under_relabeling(which, perm):
    bq = {"a3": trivial_extension(a3()), "k2": trivial_extension(kronecker(2)), "k3": trivial_extension(kronecker(3))}[which]
    gd, _ = graded_dims(bq, 3)
    perm = [p for p in perm if p < len(gd.vertices)]
    base = classify(loewy_matrix(gd, 1))
    other = classify(loewy_matrix(_permuted(gd, perm), 1))
    assert base.label() == other.label()
    assert base.char_poly == other.char_poly


def test_probe_polynomial_growth_for_mckay():
    L = _loewy(relations_sr(4, 4), 2)
    seed = [int(r == 0) for r in range(L.size)]
    rep = complexity_probe(L, seed, 100)
    assert rep.regime == "polynomial"
    assert 1.7 <= rep.poly_degree <= 2.3


def test_probe_periodic_for_dynkin():
    L = _loewy(trivial_extension(a3()), 1)
    rep = complexity_probe(L, [1, 0, 0, 0, 0, 0], 20)
    assert rep.regime == "periodic"
    assert rep.stopped_at is not None


def test_probe_exponential_rate_for_wild():
    bq = trivial_extension(kronecker(3))
    L = _loewy(bq, 1)
    rho = classify(L).rho
    rep = complexity_probe(L, [1, 0, 0, 0], 60)
    assert rep.regime == "exponential"
    assert rep.exp_rate == pytest.approx(math.log(rho), rel=0.05)
    with pytest.raises(ValidationError):
        complexity_probe(L, [1, 0, 0, 0], 7)

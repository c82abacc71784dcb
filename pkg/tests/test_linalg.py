import math
import random
from fractions import Fraction
from itertools import permutations

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from qlab.errors import NonUnitConstantTerm
from qlab.linalg import (
    char_poly,
    cyclotomic,
    identity,
    jordan_degree,
    kernel_basis,
    mat_mul,
    mat_vec,
    poly_mul,
    orth_complement,
    poly_eval_matrix,
    rank,
    rref,
    span_equal,
    spectral_radius_one_certificate,
)


def bareiss_rank(m):
    """Fraction-free elimination over the integers (scaled copy of m)."""
    rows = [list(r) for r in m]
    den = 1
    for r in rows:
        for x in r:
            den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    a = [[int(Fraction(x) * den) for x in r] for r in rows]
    nr, nc = len(a), len(a[0]) if a else 0
    prev, r = 1, 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nr):
            for j in range(c + 1, nc):
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
    return r


def det_cofactor(m):
    n = len(m)
    if n == 0:
        return 1
    total = 0
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod *= m[i][perm[i]]
        total += -prod if inv % 2 else prod
    return total


def char_poly_cofactor(m):
    """Interpolate det(xI - m) at n+1 integer points (sympy does the solve)."""
    n = len(m)
    x = sympy.Symbol("x")
    pts = []
    for k in range(n + 1):
        shifted = [[(k if i == j else 0) - m[i][j] for j in range(n)] for i in range(n)]
        pts.append((k, det_cofactor(shifted)))
    poly = sympy.interpolate(pts, x)
    return [int(c) for c in reversed(sympy.Poly(poly, x).all_coeffs())]


def test_rref_identity():
    r, piv, rk = rref(identity(3))
    assert r == identity(3)
    assert piv == [0, 1, 2]
    assert rk == 3


def test_rref_dependent_rows():
    r, piv, rk = rref([[1, 2], [2, 4]])
    assert r == [[1, 2], [0, 0]]
    assert rk == 1


def test_rref_rank_matches_bareiss():
    rnd = random.Random(6)
    for _ in range(40):
        m = [[Fraction(rnd.randint(-4, 4), rnd.randint(1, 4)) for _ in range(6)] for _ in range(6)]
        if rnd.random() < 0.5:
            m[5] = [a + 2 * b for a, b in zip(m[0], m[1])]
        assert rank(m) == bareiss_rank(m)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=1, max_size=5))
def test_rref_idempotent(m):
    r, _, _ = rref(m)
    assert rref(r)[0] == r


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=5, max_size=5), min_size=1, max_size=4))
def test_kernel_property(m):
    ker = kernel_basis(m)
    for v in ker:
        assert all(x == 0 for x in mat_vec(m, v))
    assert len(ker) + rank(m) == 5
    if ker:
        assert rank(ker) == len(ker)


def test_kernel_examples():
    assert kernel_basis(identity(2)) == []
    assert len(kernel_basis([[0, 0, 0], [0, 0, 0]])) == 3
    (v,) = kernel_basis([[1, 1, 0], [0, 1, 1]])
    assert v == [1, -1, 1]


def test_orth_complement_examples():
    assert orth_complement([], 4) == identity(4)
    assert orth_complement(identity(3), 3) == []
    c = Fraction(5, 3)
    (w,) = orth_complement([[1, -c]], 2)
    assert w[0] * 1 == w[1] * c  # proportional to (c, 1)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=0, max_size=4))
def test_orth_complement_twice(rows):
    back = orth_complement(orth_complement(rows, 4), 4)
    assert span_equal(back, rows, 4)


def test_char_poly_small():
    assert char_poly(identity(2)) == [1, -2, 1]
    assert char_poly([[0, 1], [1, 0]]) == [-1, 0, 1]


def test_char_poly_matches_cofactor_oracle():
    rnd = random.Random(11)
    for n in range(1, 6):
        for _ in range(6):
            m = [[rnd.randint(-3, 3) for _ in range(n)] for _ in range(n)]
            assert char_poly(m) == char_poly_cofactor(m)


def test_cayley_hamilton():
    rnd = random.Random(5)
    for n in range(1, 7):
        m = [[rnd.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        z = poly_eval_matrix(char_poly(m), m)
        assert all(x == 0 for row in z for x in row)


def test_cyclotomic_against_sympy():
    x = sympy.Symbol("x")
    for k in range(1, 40):
        want = [int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(k, x), x).all_coeffs())]
        assert list(cyclotomic(k)) == want


def test_certificate_examples():
    cert = spectral_radius_one_certificate([-1, 3, -3, 1])
    assert cert.kind == "ExactlyOne" and cert.multiplicity == 3
    cert = spectral_radius_one_certificate([1, -3, 1])
    assert cert.kind == "GreaterThanOne"
    assert cert.rho == pytest.approx((3 + 5**0.5) / 2, rel=1e-9)
    with pytest.raises(NonUnitConstantTerm):
        spectral_radius_one_certificate([2, 0, 1])


def _unimodular(rnd, n):
    m = identity(n)
    for _ in range(rnd.randint(1, 3 * n)):
        i, j = rnd.sample(range(n), 2)
        e = identity(n)
        e[i][j] = Fraction(rnd.choice([-2, -1, 1, 2]))
        m = mat_mul(m, e)
        if rnd.random() < 0.3:
            k = rnd.randrange(n)
            m = [[-x if r == k else x for x in row] for r, row in enumerate(m)]
    perm = list(range(n))
    rnd.shuffle(perm)
    return [[int(m[perm[r]][c]) for c in range(n)] for r in range(n)]


def test_certificate_agrees_with_float_eigenvalues():
    rnd = random.Random(2024)
    mpmath.mp.dps = 60
    seen = set()
    for _ in range(100):
        m = _unimodular(rnd, rnd.randint(2, 5))
        p = char_poly(m)
        assert abs(p[0]) == 1
        cert = spectral_radius_one_certificate(p)
        ev = mpmath.eig(mpmath.matrix(m), left=False, right=False)
        rho = max(abs(z) for z in ev)
        seen.add(cert.kind)
        if cert.kind == "ExactlyOne":
            assert abs(rho - 1) < 1e-6
        else:
            assert rho > 1 + 1e-9
            assert abs(cert.rho - float(rho)) < 1e-6
    assert seen == {"ExactlyOne", "GreaterThanOne"}


def test_certificate_against_sympy_factorisation():
    rnd = random.Random(7)
    x = sympy.Symbol("x")
    for _ in range(60):
        deg = rnd.randint(1, 8)
        if rnd.random() < 0.5:
            p = [1]
            while len(p) - 1 < deg:
                k = rnd.randint(1, 12)
                p = poly_mul(p, list(cyclotomic(k)))
        else:
            p = [rnd.choice([1, -1])] + [rnd.randint(-3, 3) for _ in range(deg - 1)] + [1]
        cert = spectral_radius_one_certificate(p)
        expr = sum(c * x**k for k, c in enumerate(p))
        _, factors = sympy.factor_list(expr)
        all_cyc = all(sympy.Poly(f, x).is_cyclotomic for f, _ in factors)
        assert cert.exactly_one == all_cyc


def test_jordan_degree():
    assert jordan_degree(identity(3)) == 1
    assert jordan_degree([[1, 1, 0], [0, 1, 1], [0, 0, 1]]) == 3
    assert jordan_degree([[0, 1], [1, 0]]) == 1
    assert jordan_degree([[2, 0], [0, 3]]) == 0

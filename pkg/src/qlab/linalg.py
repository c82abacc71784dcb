"""Exact rational linear algebra and integer-polynomial spectral certificates.

Matrices are lists of rows; entries are ``fractions.Fraction`` (ints are
accepted on input).  Nothing here mutates its arguments.  Polynomials with
integer coefficients are lists of ints, lowest degree first.

Floating point appears only in the witness attached to a
``GreaterThanOne`` certificate; verdicts never depend on it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import numpy as np

from .errors import NonUnitConstantTerm, ValidationError

Matrix = list  # list[list[Fraction]]
IntPoly = list  # list[int], lowest degree first


def to_fractions(m):
    return [[Fraction(x) for x in row] for row in m]


def zeros(rows, cols):
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n):
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def transpose(m, cols=None):
    if not m:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*m)]


def mat_mul(a, b):
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * cols
        for k in range(inner):
            x = row[k]
            if x:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        acc[j] += x * bk[j]
        out.append(acc)
    return out


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v) if x and y) for row in a]


def _integer_row(row):
    """The row scaled by the lcm of its denominators, as ints."""
    row = [x if isinstance(x, (int, Fraction)) else Fraction(x) for x in row]
    den = lcm(*[x.denominator for x in row]) if row else 1
    return [x.numerator * (den // x.denominator) for x in row]


def _primitive(row):
    g = gcd(*row) if row else 0
    return [x // g for x in row] if g > 1 else row


def rref(m, cols=None):
    """Reduced row echelon form.

    Returns ``(R, pivots, rank)``.  ``R`` has the shape of ``m``; zero rows
    sit at the bottom.  Pivoting takes the first column with a nonzero entry
    and, within it, the smallest row index, so the output is reproducible.

    Elimination runs on integer rows (denominators cleared, content removed
    after each update) and the pivots are scaled to 1 at the end; the result
    is the unique rref over the rationals.
    """
    rows = [_primitive(_integer_row(row)) for row in m]
    ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        a = prow[c]
        nz = [j for j in range(c, ncols) if prow[j] != 0]
        for i in range(nrows):
            if i != r:
                b = rows[i][c]
                if b != 0:
                    g = gcd(a, b)
                    fa, fb = a // g, b // g
                    row = [fa * x for x in rows[i]] if fa != 1 else list(rows[i])
                    for j in nz:
                        row[j] -= fb * prow[j]
                    rows[i] = _primitive(row)
        pivots.append(c)
        r += 1
    zero = Fraction(0)
    out = []
    for k, row in enumerate(rows):
        if k < r:
            a = row[pivots[k]]
            out.append([Fraction(x, a) if x else zero for x in row])
        else:
            out.append([zero] * len(row))
    return out, pivots, len(pivots)


def rank(m, cols=None):
    return rref(m, cols)[2]


def row_basis(vectors, dim):
    """Canonical basis of the span: the nonzero rows of the rref."""
    if not vectors:
        return []
    r, _, k = rref(vectors, dim)
    return r[:k]


def kernel_basis(m, cols=None):
    """Basis of ``{v : m v = 0}``, one vector per free column.

    The vector for free column ``f`` has a 1 in position ``f``, zeros in the
    other free positions, and is determined on the pivot positions.
    """
    ncols = cols if cols is not None else (len(m[0]) if m else 0)
    if not m:
        return [[Fraction(int(i == f)) for i in range(ncols)] for f in range(ncols)]
    r, pivots, k = rref(m, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            v[pc] = -r[row_idx][f]
        basis.append(v)
    return basis


def orth_complement(rows, dim):
    """Basis of the orthogonal complement under the standard pairing.

    The coordinate basis is its own dual basis, so the complement of the
    span of ``rows`` is the null space of the matrix they form.  The result
    is returned in rref-canonical form.
    """
    for v in rows:
        if len(v) != dim:
            raise ValidationError("vector length does not match dimension", v)
    return row_basis(kernel_basis(list(rows), dim), dim)


def span_equal(a, b, dim):
    """Equal row spans; the rref is canonical, so compare the row bases."""
    return row_basis(list(a), dim) == row_basis(list(b), dim)


def in_span(v, vectors, dim):
    if not vectors:
        return all(x == 0 for x in v)
    return rank(list(vectors) + [v], dim) == rank(vectors, dim)


def is_integral(m):
    return all(Fraction(x).denominator == 1 for row in m for x in row)


# ---------------------------------------------------------------------------
# characteristic polynomial


def char_poly(m):
    """Monic characteristic polynomial ``det(xI - m)`` of an integer matrix.

    Computed by exact reduction to upper Hessenberg form followed by the
    standard determinant recurrence on leading principal submatrices.
    """
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValidationError("char_poly needs a square matrix")
    if not is_integral(m):
        raise ValidationError("char_poly needs an integer matrix")
    h = to_fractions(m)
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if h[i][j] != 0), None)
        if piv is None:
            continue
        if piv != j + 1:
            h[piv], h[j + 1] = h[j + 1], h[piv]
            for row in h:
                row[piv], row[j + 1] = row[j + 1], row[piv]
        p = h[j + 1][j]
        for i in range(j + 2, n):
            f = h[i][j] / p
            if f == 0:
                continue
            ri, rp = h[i], h[j + 1]
            for k in range(n):
                if rp[k]:
                    ri[k] -= f * rp[k]
            for row in h:
                if row[i]:
                    row[j + 1] += f * row[i]
    # polys[k] = char poly of leading k x k block, as Fraction lists
    polys = [[Fraction(1)]]
    for k in range(1, n + 1):
        hk = h[k - 1][k - 1]
        prev = polys[k - 1]
        cur = [Fraction(0)] * (k + 1)
        for d, c in enumerate(prev):
            cur[d + 1] += c
            cur[d] -= hk * c
        prod = Fraction(1)
        for i in range(k - 1, 0, -1):
            prod *= h[i][i - 1]
            if prod == 0:
                break
            coef = h[i - 1][k - 1] * prod
            if coef:
                for d, c in enumerate(polys[i - 1]):
                    cur[d] -= coef * c
        polys.append(cur)
    out = polys[n]
    assert all(c.denominator == 1 for c in out)
    return [int(c) for c in out]


def poly_trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim(out)


def poly_divmod(a, b):
    """Division of integer polynomials by a monic divisor."""
    a = poly_trim(a)
    b = poly_trim(b)
    if b[-1] != 1:
        raise ValueError("divisor must be monic")
    if len(a) < len(b):
        return [0], a
    rem = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = rem[k + len(b) - 1]
        q[k] = c
        if c:
            for j, y in enumerate(b):
                rem[k + j] -= c * y
    return poly_trim(q), poly_trim(rem[: len(b) - 1] or [0])


def poly_eval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_eval_matrix(p, m):
    n = len(m)
    acc = zeros(n, n)
    for c in reversed(p):
        acc = mat_mul(acc, m)
        for i in range(n):
            acc[i][i] += c
    return acc


def totient(k):
    result, n, p = k, k, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def _mobius(k):
    n, p, sign = k, 2, 1
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            sign = -sign
        p += 1
    if n > 1:
        sign = -sign
    return sign


@lru_cache(maxsize=None)
def cyclotomic(k):
    """The k-th cyclotomic polynomial as a tuple of ints."""
    num, den = [1], [1]
    for d in range(1, k + 1):
        if k % d:
            continue
        mu = _mobius(k // d)
        if mu == 0:
            continue
        xd = [-1] + [0] * (d - 1) + [1]
        if mu == 1:
            num = poly_mul(num, xd)
        else:
            den = poly_mul(den, xd)
    # den is monic up to sign; normalise
    if den[-1] == -1:
        den = [-c for c in den]
        num = [-c for c in num]
    q, r = poly_divmod(num, den)
    assert r == [0]
    return tuple(q)


def cyclotomic_indices(max_degree):
    """All k with deg Phi_k = phi(k) <= max_degree."""
    bound = max(2, 2 * max_degree * max_degree)
    return [k for k in range(1, bound + 1) if totient(k) <= max_degree]


@dataclass(frozen=True)
class SpectralCertificate:
    """Outcome of the unit-spectral-radius test on an integer polynomial.

    ``kind`` is ``"ExactlyOne"`` (every root is a root of unity) or
    ``"GreaterThanOne"``.  ``multiplicity`` is the multiplicity of the root 1;
    ``cyclotomic_factors`` lists ``(k, multiplicity)`` for the cyclotomic
    factors divided out; ``remainder`` is what is left after removing them
    (``[1]`` exactly when the kind is ``ExactlyOne``).
    """

    kind: str
    multiplicity: int
    cyclotomic_factors: tuple
    remainder: tuple
    rho: float = 1.0
    degree: int | None = None
    notes: tuple = field(default=())

    @property
    def exactly_one(self):
        return self.kind == "ExactlyOne"

    def to_json(self):
        return {
            "kind": self.kind,
            "multiplicity_of_one": self.multiplicity,
            "degree": self.degree if self.degree is not None else self.multiplicity,
            "cyclotomic_factors": [list(f) for f in self.cyclotomic_factors],
            "remainder": list(self.remainder),
            "rho": self.rho,
        }


def _max_root_modulus(p):
    coeffs = np.array([float(c) for c in reversed(poly_trim(p))])
    if len(coeffs) <= 1:
        return 0.0
    roots = np.roots(coeffs)
    z = complex(roots[np.argmax(np.abs(roots))])
    # Newton polish on the exact-integer polynomial
    dp = [k * c for k, c in enumerate(p)][1:] or [0]
    for _ in range(50):
        fz = poly_eval(p, z)
        dfz = poly_eval(dp, z)
        if dfz == 0:
            break
        step = fz / dfz
        z -= step
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            break
    return abs(z)


def spectral_radius_one_certificate(p):
    """Decide exactly whether all roots of ``p`` lie in the closed unit disk.

    ``p`` must be monic with constant term +-1.  By Kronecker's theorem the
    roots then all lie in the closed disk iff they are all roots of unity,
    i.e. iff ``p`` is a product of cyclotomic polynomials.  Every cyclotomic
    polynomial of degree <= deg p is divided out with multiplicity; the
    remainder is 1 exactly in the unit case.
    """
    p = poly_trim([int(c) for c in p])
    if p[-1] != 1:
        raise ValidationError("polynomial must be monic", p)
    if abs(p[0]) != 1:
        raise NonUnitConstantTerm(f"constant term {p[0]} is not +-1")
    rem = p
    factors = []
    for k in cyclotomic_indices(len(p) - 1):
        phi = list(cyclotomic(k))
        if len(phi) > len(rem):
            continue
        mult = 0
        while len(rem) >= len(phi):
            q, r = poly_divmod(rem, phi)
            if r != [0]:
                break
            rem = q
            mult += 1
        if mult:
            factors.append((k, mult))
        if len(rem) == 1:
            break
    ones = dict(factors).get(1, 0)
    if rem == [1]:
        return SpectralCertificate("ExactlyOne", ones, tuple(factors), (1,), 1.0)
    if rem == [-1]:  # cannot happen for monic input, kept for safety
        return SpectralCertificate("ExactlyOne", ones, tuple(factors), (-1,), 1.0)
    rho = _max_root_modulus(rem)
    return SpectralCertificate("GreaterThanOne", ones, tuple(factors), tuple(rem), rho)


def jordan_degree(m, eigenvalue=1):
    """Size of the largest Jordan block of ``eigenvalue`` (0 if absent).

    This is the least ``k`` with ``rank((m - e)^k) == rank((m - e)^(k+1))``.
    """
    n = len(m)
    a = to_fractions(m)
    for i in range(n):
        a[i][i] -= eigenvalue
    power = a
    prev = n
    k = 0
    while True:
        r = rank(power, n)
        if r == prev:
            return k
        prev = r
        k += 1
        power = mat_mul(power, a)


def float_spectral_radius(m):
    arr = np.array([[float(x) for x in row] for row in m])
    if arr.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(arr))))


def primitive_integer_vector(v):
    """Scale a rational vector to a primitive integer vector (first nonzero > 0)."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    return ints if first > 0 else [-x for x in ints]

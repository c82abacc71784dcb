"""Loewy matrices, level dimension vectors and the finite/tame/wild verdict.

For a stable n-translation algebra with graded pieces A_1, ..., A_{n+1} the
Loewy matrix is the (n+1)m x (n+1)m integer matrix

    [ A_1     -E              ]
    [ A_2          -E         ]
    [ ...               ...   ]
    [ A_n                 -E  ]
    [ A_{n+1}                 ]

and V_0 = [E; 0; ...; 0].  A level vector stacks the dimension vectors of
n+1 consecutive degrees of a graded module.  For a module M generated in
its lowest degree, L applied to the level vector of M gives the level
vector of its first syzygy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotLoewyBounded, ValidationError
from .linalg import char_poly, jordan_degree, spectral_radius_one_certificate


@dataclass
class LoewyMatrix:
    n: int
    m: int
    blocks: list  # A_1 .. A_{n+1}
    matrix: list
    v0: list

    @property
    def size(self):
        return (self.n + 1) * self.m


def loewy_matrix(gd, n):
    """Assemble L from GradedDims computed at least to degree n+2."""
    mats = gd.matrices
    m = len(gd.vertices)
    if n < 0:
        raise ValidationError("n must be non-negative", n)
    if len(mats) < n + 2:
        raise NotLoewyBounded(f"graded dimensions only known to degree {len(mats) - 1}")
    beyond = mats[n + 2] if len(mats) > n + 2 else None
    if beyond is None and (gd.vanishes_from is None or gd.vanishes_from > n + 2):
        raise NotLoewyBounded(f"degree {n + 2} is not known to vanish")
    if beyond is not None and any(any(row) for row in beyond):
        raise NotLoewyBounded(f"Lambda_{n + 2} is nonzero")
    if any(any(row) for row in mats[n + 1]) is False and n > 0:
        raise NotLoewyBounded(f"Lambda_{n + 1} vanishes; the declared n is too large")
    size = (n + 1) * m
    L = [[0] * size for _ in range(size)]
    blocks = [mats[t] for t in range(1, n + 2)]
    for b, A in enumerate(blocks):
        for r in range(m):
            for c in range(m):
                L[b * m + r][c] = A[r][c]
        if b < n:
            for r in range(m):
                L[b * m + r][(b + 1) * m + r] = -1
    v0 = [[int(r == c) if r < m else 0 for c in range(m)] for r in range(size)]
    return LoewyMatrix(n, m, blocks, L, v0)


def _matvec(L, v):
    return [sum(x * y for x, y in zip(row, v) if x) for row in L]


def iterate_levels(L, v, s):
    """L^s v for a vector, or column by column for a list of columns."""
    mat = L.matrix if isinstance(L, LoewyMatrix) else L
    if s < 0:
        raise ValidationError("s must be non-negative", s)
    out = list(v)
    for _ in range(s):
        out = _matvec(mat, out)
    return out


def _columns(m):
    return [list(c) for c in zip(*m)]


def is_negative(vec):
    """-vec is positive: no entry above 0 and some entry below 0."""
    return all(x <= 0 for x in vec) and any(x < 0 for x in vec)


@dataclass
class ClassificationReport:
    verdict: str  # "Finite", "Tame" or "Wild"
    h: int | None = None
    d: int | None = None
    rho: float | None = None
    multiplicity_of_one: int | None = None
    char_poly: list = field(default_factory=list)
    certificate: dict = field(default_factory=dict)
    h_max: int = 0
    notes: list = field(default_factory=list)

    def label(self):
        if self.verdict == "Finite":
            return f"Finite(h={self.h})"
        if self.verdict == "Tame":
            return f"Tame(d={self.d})"
        return f"Wild(rho~{self.rho:.6f})"

    def to_json(self):
        return {
            "verdict": self.verdict,
            "label": self.label(),
            "h": self.h,
            "d": self.d,
            "rho": self.rho,
            "multiplicity_of_one": self.multiplicity_of_one,
            "char_poly": self.char_poly,
            "certificate": self.certificate,
            "h_max": self.h_max,
            "gk_estimate": _gk_json(gk_estimate(self)),
            "notes": self.notes,
        }


def _gk_json(x):
    return "inf" if x == math.inf else x


def default_h_max(L):
    return 2 * (L.n + 1) * L.m + 16


def classify(L, h_max=None):
    """Finite if some L^h V_0 is negative, otherwise Tame or Wild by the
    exact unit-spectral-radius certificate on the characteristic polynomial.

    In the Tame case ``d`` is the size of the largest Jordan block of the
    eigenvalue 1; the multiplicity of the root 1 is reported alongside.
    """
    h_max = default_h_max(L) if h_max is None else h_max
    if h_max < 1:
        raise ValidationError("h_max must be at least 1", h_max)
    cp = char_poly(L.matrix)
    if abs(cp[0]) != 1:
        raise AssertionError(f"constant term of the characteristic polynomial is {cp[0]}")
    cert = spectral_radius_one_certificate(cp)
    cols = _columns(L.v0)
    h_found = None
    for h in range(1, h_max + 1):
        cols = [_matvec(L.matrix, c) for c in cols]
        flat = [x for c in cols for x in c]
        if is_negative(flat):
            h_found = h
            break
    report = ClassificationReport(
        verdict="",
        multiplicity_of_one=cert.multiplicity,
        char_poly=cp,
        certificate=cert.to_json(),
        h_max=h_max,
    )
    if h_found is not None:
        # a negative vector forces L^h V_0 to have no fixed direction, so the
        # root 1 cannot occur together with a finite-type witness
        assert cert.multiplicity == 0, "finite witness together with eigenvalue 1"
        report.verdict = "Finite"
        report.h = h_found
        return report
    if cert.exactly_one:
        report.verdict = "Tame"
        report.d = jordan_degree(L.matrix, 1)
        report.rho = 1.0
        report.certificate["degree"] = report.d
        if report.d == 0:
            report.notes.append(
                "all eigenvalues are roots of unity other than 1 but no negative "
                f"L^h V_0 was found for h <= {h_max}; the finite scan may be too short"
            )
        return report
    report.verdict = "Wild"
    report.rho = cert.rho
    return report


def gk_estimate(report):
    if report.verdict == "Finite":
        return 0
    if report.verdict == "Tame":
        return report.d
    return math.inf


@dataclass
class GrowthReport:
    norms: list
    regime: str
    poly_degree: float | None = None
    poly_residual: float | None = None
    exp_rate: float | None = None
    exp_residual: float | None = None
    stopped_at: int | None = None


def complexity_probe(L, v, s_max):
    """Least-squares growth fit of ||L^s v||_1 over the tail half of s.

    Diagnostic only.  Stops at the first s where L^s v has a negative entry
    and reports the periodic regime.
    """
    if s_max < 8:
        raise ValidationError("s_max must be at least 8", s_max)
    mat = L.matrix if isinstance(L, LoewyMatrix) else L
    cur = list(v)
    norms = []
    for s in range(1, s_max + 1):
        cur = _matvec(mat, cur)
        if any(x < 0 for x in cur):
            return GrowthReport(norms, "periodic", stopped_at=s)
        norms.append(sum(cur))
    xs = np.arange(1, s_max + 1, dtype=float)
    ys = np.array([math.log(max(x, 1)) for x in norms])
    tail = slice(s_max // 2, s_max)
    px, py = np.log(xs[tail]), ys[tail]
    pcoef, pres = np.polyfit(px, py, 1, full=True)[:2]
    ecoef, eres = np.polyfit(xs[tail], py, 1, full=True)[:2]
    pr = float(pres[0]) if len(pres) else 0.0
    er = float(eres[0]) if len(eres) else 0.0
    regime = "polynomial" if pr <= er else "exponential"
    return GrowthReport(norms, regime, float(pcoef[0]), pr, float(ecoef[0]), er)

"""Minimal graded projective resolutions of the simple modules.

Everything happens inside a finite-dimensional graded algebra (a
``GradedAlgebra`` whose top degree has been reached).  A graded left module
is kept as a submodule of a free module

    F = sum_s Lambda e_{i_s} <d_s>,

stored as one subspace per (degree, vertex).  A coordinate of F is a pair
(s, x) with x a standard monomial starting at i_s; it lives in degree
d_s + len(x) at the vertex where x ends.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ValidationError
from .linalg import kernel_basis, rref


class FreeModule:
    def __init__(self, alg, gens):
        """``gens`` is a list of (vertex, degree)."""
        self.alg = alg
        self.gens = list(gens)
        self._coords = {}

    def coords(self, deg, vertex):
        key = (deg, vertex)
        if key not in self._coords:
            out = []
            for s, (i, d) in enumerate(self.gens):
                for x in self.alg.basis(deg - d, i, vertex):
                    out.append((s, x))
            self._coords[key] = out
        return self._coords[key]

    def degrees(self):
        top = self.alg.vanishes_from - 1
        if not self.gens:
            return range(0)
        lo = min(d for _, d in self.gens)
        hi = max(d for _, d in self.gens) + top
        return range(lo, hi + 1)


class SubModule:
    """Subspaces K[(deg, vertex)] of a free module, as rref row lists."""

    def __init__(self, free, spaces):
        self.free = free
        self.spaces = spaces  # (deg, vertex) -> list of rows (lists)

    def dim(self, deg, vertex):
        return len(self.spaces.get((deg, vertex), []))

    def nonzero_degrees(self):
        return sorted({d for (d, _), rows in self.spaces.items() if rows})

    def dim_vector(self, deg, vertices):
        return [self.dim(deg, v) for v in vertices]


def _arrow_action(free, arrow, deg, vec):
    """arrow * vec, where vec is a coordinate vector in degree ``deg`` at arrow.source."""
    alg = free.alg
    src = free.coords(deg, arrow.source)
    tgt = free.coords(deg + 1, arrow.target)
    pos = {c: k for k, c in enumerate(tgt)}
    out = [Fraction(0)] * len(tgt)
    ap = alg.q.path(arrow.id)
    for (s, x), c in zip(src, vec):
        if c:
            for y, v in alg.nf(ap * x).items():
                out[pos[(s, y)]] += c * v
    return out


def minimal_generators(sub):
    """Homogeneous elements generating ``sub`` minimally: list of (vertex, degree, vector)."""
    free = sub.free
    q = free.alg.q
    gens = []
    for deg in free.degrees():
        for v in q.vertices:
            rows = sub.spaces.get((deg, v), [])
            if not rows:
                continue
            ncols = len(free.coords(deg, v))
            lower = []
            for a in q.in_arrows[v]:
                for w in sub.spaces.get((deg - 1, a.source), []):
                    lower.append(_arrow_action(free, a, deg - 1, w))
            span = [r for r in lower if any(r)]
            base_rank = rref(span, ncols)[2] if span else 0
            for r in rows:
                trial = span + [r]
                rk = rref(trial, ncols)[2]
                if rk > base_rank:
                    span = trial
                    base_rank = rk
                    gens.append((v, deg, r))
    return gens


def cover_kernel(sub, gens):
    """Kernel of the projective cover P -> sub determined by ``gens``.

    Returns the free module P and the kernel as a SubModule of P.
    """
    free = sub.free
    alg = free.alg
    p = FreeModule(alg, [(v, d) for v, d, _ in gens])
    spaces = {}
    for deg in p.degrees():
        for k in alg.q.vertices:
            dom = p.coords(deg, k)
            if not dom:
                continue
            tgt = free.coords(deg, k)
            pos = {c: j for j, c in enumerate(tgt)}
            cols = []
            for g, x in dom:
                v, d, vec = gens[g]
                img = [Fraction(0)] * len(tgt)
                src = free.coords(d, v)
                for (s, y), c in zip(src, vec):
                    if c:
                        for z, w in alg.nf(x * y).items():
                            img[pos[(s, z)]] += c * w
                cols.append(img)
            mat = [list(r) for r in zip(*cols)] if tgt else []
            ker = kernel_basis(mat, len(dom))
            if ker:
                spaces[(deg, k)] = rref(ker, len(dom))[0][: len(ker)]
    return p, SubModule(p, spaces)


def radical_of_projective(alg, i, deg=0):
    free = FreeModule(alg, [(i, deg)])
    spaces = {}
    for d in free.degrees():
        if d == deg:
            continue
        for v in alg.q.vertices:
            n = len(free.coords(d, v))
            if n:
                spaces[(d, v)] = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    return SubModule(free, spaces)


@dataclass
class SimpleResolution:
    vertex: str
    generator_degrees: list  # per step t: sorted generator degrees of P^t
    kernels: list  # kernels[t] = ker f_t as SubModule
    q: int | None = None
    terminated: bool = False


def resolve_simple(alg, i, t_max):
    """Resolve the simple at ``i`` through P^{t_max}.

    ``kernels[t]`` is ker f_t, the (t+1)-st syzygy.  Resolution stops early
    when a kernel vanishes.
    """
    if alg.vanishes_from is None:
        raise ValidationError("the algebra must be finite dimensional")
    p = alg.vanishes_from - 1
    degs = [[0]]
    kernels = []
    k = radical_of_projective(alg, i)
    res = SimpleResolution(i, degs, kernels)
    for t in range(t_max + 1):
        kernels.append(k)
        nz = k.nonzero_degrees()
        if not nz:
            res.terminated = True
            break
        if res.q is None and nz == [t + p] and all(ds == [s] * len(ds) for s, ds in enumerate(degs)):
            res.q = t
        if t == t_max:
            break
        gens = minimal_generators(k)
        degs.append(sorted(d for _, d, _ in gens))
        _, k = cover_kernel(k, gens)
    return res


@dataclass
class KoszulProfile:
    p: int
    t_max: int
    generator_degrees: list  # per step: sorted degrees over all simples
    linear_through: int
    q: int | None
    per_vertex_q: dict = field(default_factory=dict)
    resolutions: dict = field(default_factory=dict)

    @property
    def koszul_up_to(self):
        return self.linear_through if self.q is None else None

    def summary(self):
        if self.q is not None:
            return f"finite q = {self.q}: ker f_{self.q} concentrated in degree {self.q + self.p}"
        return f"linear up to {self.linear_through}"

    def level_vector(self, i, s, n):
        """Stacked dimension vectors of Omega^s S_i in degrees s .. s+n."""
        if s == 0:
            vs = self.resolutions[i].kernels[0].free.alg.q.vertices
            return [int(v == i) for v in vs] + [0] * (n * len(vs))
        k = self.resolutions[i].kernels[s - 1]
        vs = k.free.alg.q.vertices
        out = []
        for d in range(s, s + n + 1):
            out.extend(k.dim_vector(d, vs))
        return out

    def to_json(self):
        return {
            "p": self.p,
            "t_max": self.t_max,
            "generator_degrees": self.generator_degrees,
            "linear_through": self.linear_through,
            "q": self.q,
            "per_vertex_q": self.per_vertex_q,
            "summary": self.summary(),
        }


def koszul_profile(alg, t_max, vertices=None):
    """Resolve every simple through step ``t_max`` and summarise.

    ``linear_through`` is the largest t such that every P^s, s <= t, is
    generated in degree s.  ``q`` is set when every simple reaches a kernel
    concentrated in degree q + p after linear steps (p is the top degree).
    """
    vertices = list(alg.q.vertices if vertices is None else vertices)
    p = alg.vanishes_from - 1
    res = {i: resolve_simple(alg, i, t_max) for i in vertices}
    steps = max(len(r.generator_degrees) for r in res.values())
    degs = []
    for t in range(steps):
        ds = []
        for r in res.values():
            if t < len(r.generator_degrees):
                ds.extend(r.generator_degrees[t])
        degs.append(sorted(ds))
    linear = -1
    for t, ds in enumerate(degs):
        if all(d == t for d in ds):
            linear = t
        else:
            break
    qs = {i: r.q for i, r in res.items()}
    q = None
    if all(v is not None for v in qs.values()) and len(set(qs.values())) == 1:
        q = next(iter(qs.values()))
    return KoszulProfile(p, t_max, degs, linear, q, qs, res)

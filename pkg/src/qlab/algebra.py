"""Graded components of kQ/(rho) and the structural predicates built on them.

The degree-t part of the ideal is computed pair by pair as

    I_t = Q_1 I_{t-1} + I_{t-1} Q_1 + span(rho_t)

inside the coordinate space of paths of length t.  We keep its rref; the
paths that are not pivots (the standard monomials) form a basis of Lambda_t
and reducing a path modulo the ideal is one row subtraction.
"""
from __future__ import annotations

import os
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegreeCapExceeded, NonQuadratic, NotProperlyGraded, ValidationError
from .linalg import kernel_basis, row_basis, rref
from .quiver import Arrow, BoundQuiver, Path, Quiver, make_relation


def _add(acc, vec, scale=1):
    for k, c in vec.items():
        v = acc.get(k, 0) + scale * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
    return acc


class GradedAlgebra:
    """kQ/(rho) for homogeneous rho, materialised up to degree ``t_max``.

    Computation stops early when a whole degree vanishes, since the algebra
    is generated in degree 1 and every later degree then vanishes as well.
    """

    def __init__(self, bq, t_max):
        if t_max < 0:
            raise ValidationError("t_max must be non-negative", t_max)
        self.bq = bq
        self.q = bq.quiver
        self.t_max = t_max
        # per degree: {(i, j): {pivot path: row dict}}
        self._pivot_rows = []
        # per degree: {(i, j): [standard monomials]}
        self._basis = []
        self.vanishes_from = None
        rels = defaultdict(list)
        for r in bq.relations:
            rels[(r.length, r.source, r.target)].append({p: c for c, p in r.terms})
        self._rels = rels
        for t in range(t_max + 1):
            self._build_degree(t)
            if t > 0 and not any(self._basis[t].values()):
                self.vanishes_from = t
                break

    # -- construction -----------------------------------------------------

    def _ideal_generators(self, t, i, j):
        gens = list(self._rels.get((t, i, j), []))
        if t == 0:
            return gens
        q = self.q
        prev = t - 1
        # left multiplication by an arrow k -> j
        for a in q.in_arrows[j]:
            for row in self._ideal_rows(prev, i, a.source):
                gens.append({Path(i, j, (a.id,) + p.arrows): c for p, c in row.items()})
        # right multiplication by an arrow i -> h
        for a in q.out_arrows[i]:
            for row in self._ideal_rows(prev, a.target, j):
                gens.append({Path(i, j, p.arrows + (a.id,)): c for p, c in row.items()})
        return gens

    def _ideal_rows(self, t, i, j):
        return list(self._pivot_rows[t].get((i, j), {}).values())

    def _build_degree(self, t):
        q = self.q
        pivots_t = {}
        basis_t = {}
        for i in q.vertices:
            by_target = defaultdict(list)
            for p in q.paths_from(i, t):
                by_target[p.target].append(p)
            for j, paths in by_target.items():
                gens = self._ideal_generators(t, i, j)
                if not gens:
                    basis_t[(i, j)] = paths
                    continue
                pos = {p: k for k, p in enumerate(paths)}
                mat = []
                for g in gens:
                    v = [0] * len(paths)
                    for p, c in g.items():
                        v[pos[p]] += c
                    mat.append(v)
                r, piv, rk = rref(mat, len(paths))
                rows = {}
                for k in range(rk):
                    rows[paths[piv[k]]] = {paths[c]: x for c, x in enumerate(r[k]) if x}
                pivots_t[(i, j)] = rows
                pivset = set(piv)
                basis_t[(i, j)] = [p for k, p in enumerate(paths) if k not in pivset]
        self._pivot_rows.append(pivots_t)
        self._basis.append(basis_t)

    # -- queries ----------------------------------------------------------

    @property
    def computed_degree(self):
        return len(self._basis) - 1

    def _check_degree(self, t):
        if t > self.computed_degree and self.vanishes_from is None:
            raise ValidationError(f"degree {t} beyond computed range", self.computed_degree)

    def basis(self, t, i, j):
        if t < 0:
            return []
        self._check_degree(t)
        if t >= len(self._basis):
            return []
        return self._basis[t].get((i, j), [])

    def basis_from(self, t, i):
        return [p for j in self.q.vertices for p in self.basis(t, i, j)]

    def dims(self, t):
        """A_t with A_t[j][i] = dim e_j Lambda_t e_i."""
        vs = self.q.vertices
        return [[len(self.basis(t, i, j)) for i in vs] for j in vs]

    def nf(self, p):
        """Normal form of a path as a dict over standard monomials."""
        t = p.length
        self._check_degree(t)
        if t >= len(self._basis):
            return {}
        rows = self._pivot_rows[t].get((p.source, p.target))
        if not rows or p not in rows:
            return {p: Fraction(1)}
        return {x: -c for x, c in rows[p].items() if x != p}

    def reduce(self, vec):
        out = {}
        for p, c in vec.items():
            _add(out, self.nf(p), c)
        return out

    def mul(self, x, y):
        """Product x*y of elements given as dicts over paths (y acts first)."""
        out = {}
        for px, cx in x.items():
            for py, cy in y.items():
                if py.target == px.source:
                    _add(out, self.nf(px * py), cx * cy)
        return out

    def total_dim(self):
        return sum(len(b) for d in self._basis for b in d.values())


@dataclass
class GradedDims:
    vertices: tuple
    matrices: list  # matrices[t] = A_t
    vanishes_from: int | None = None

    def hilbert(self, i):
        """dim Lambda_t e_i for each computed t (column sums)."""
        k = self.vertices.index(i)
        return [sum(row[k] for row in m) for m in self.matrices]

    def total(self):
        return sum(sum(map(sum, m)) for m in self.matrices)

    def to_json(self):
        return {
            "vertices": list(self.vertices),
            "A": self.matrices,
            "hilbert": {v: self.hilbert(v) for v in self.vertices},
        }


def graded_dims(bq, t_max):
    alg = GradedAlgebra(bq, t_max)
    mats = [alg.dims(t) for t in range(t_max + 1)]
    return GradedDims(bq.quiver.vertices, mats, alg.vanishes_from), alg


# ---------------------------------------------------------------------------
# gradings


@dataclass
class ProperGrading:
    yes: bool
    n: int | None = None
    witness: tuple = ()


def default_degree_cap(bq):
    env = os.environ.get("QLAB_DEGREE_CAP")
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise ValidationError("QLAB_DEGREE_CAP must be an integer", env) from None
        if cap < 1:
            raise ValidationError("QLAB_DEGREE_CAP must be positive", cap)
        return cap
    return len(bq.quiver.arrows) + 2


def maximal_bound_paths(alg):
    """All maximal bound paths, grouped by length."""
    q = alg.q
    found = defaultdict(list)
    layer = [q.idempotent(v) for v in q.vertices]
    t = 0
    while layer:
        nxt = []
        for p in layer:
            extendable = False
            for a in q.out_arrows[p.target]:
                ext = Path(p.source, a.target, (a.id,) + p.arrows)
                if alg.nf(ext):
                    nxt.append(ext)
                    extendable = True
            if not extendable:
                for a in q.in_arrows[p.source]:
                    if alg.nf(Path(a.source, p.target, p.arrows + (a.id,))):
                        extendable = True
                        break
            if not extendable:
                found[t].append(p)
        layer = nxt
        t += 1
    return dict(found)


def is_n_properly_graded(bq, cap=None, alg=None):
    cap = default_degree_cap(bq) if cap is None else cap
    if alg is None or alg.computed_degree < cap and alg.vanishes_from is None:
        alg = GradedAlgebra(bq, cap)
    if alg.vanishes_from is None:
        raise DegreeCapExceeded(f"Lambda_{cap} is nonzero; raise the degree cap")
    found = maximal_bound_paths(alg)
    lengths = sorted(found)
    if len(lengths) == 1:
        return ProperGrading(True, lengths[0])
    return ProperGrading(False, None, (found[lengths[0]][0], found[lengths[-1]][0]))


def is_nicely_graded(q):
    """Potential d with d(target) = d(source) + 1 on every arrow.

    Returns ``(True, d)`` or ``(False, offending_arrow)``.  Each connected
    component is normalised so its first vertex has potential 0.
    """
    d = {}
    for comp in q.undirected_components():
        root = comp[0]
        d[root] = 0
        stack = [root]
        while stack:
            v = stack.pop()
            for a in q.out_arrows[v]:
                if a.target not in d:
                    d[a.target] = d[v] + 1
                    stack.append(a.target)
            for a in q.in_arrows[v]:
                if a.source not in d:
                    d[a.source] = d[v] - 1
                    stack.append(a.source)
    for a in q.arrows:
        if d[a.target] != d[a.source] + 1:
            return False, a
    return True, d


# ---------------------------------------------------------------------------
# stable translation check


@dataclass
class StableCheck:
    stable: bool
    tau: dict = field(default_factory=dict)
    reason: str = ""


def _transpose(m):
    return [list(r) for r in zip(*m)]


def _matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def stable_translation_check(bq, n, alg=None):
    """Check the graded self-injective shape with Loewy length n+2.

    Requires Lambda_{n+2} = 0, A_{n+1} a permutation matrix P and
    A_t = A_{n+1-t}^T P for all t (which is the dimension shadow of the
    perfect pairing e_j L_t e_i x e_nu(i) L_{n+1-t} e_j -> e_nu(i) L_{n+1} e_i).
    ``tau`` maps each vertex i to the vertex nu(i) carrying the socle of L e_i.
    """
    if alg is None or alg.computed_degree < n + 2 and alg.vanishes_from is None:
        alg = GradedAlgebra(bq, n + 2)
    mats = [alg.dims(t) for t in range(n + 3)]
    if any(any(row) for row in mats[n + 2]):
        return StableCheck(False, {}, f"Lambda_{n + 2} is nonzero")
    top = mats[n + 1]
    vs = bq.quiver.vertices
    m = len(vs)
    tau = {}
    for i in range(m):
        col = [top[j][i] for j in range(m)]
        if sorted(col) != [0] * (m - 1) + [1]:
            return StableCheck(False, {}, f"A_{n + 1} is not a permutation matrix")
        tau[vs[i]] = vs[col.index(1)]
    if len(set(tau.values())) != m:
        return StableCheck(False, {}, f"A_{n + 1} is not a permutation matrix")
    for t in range(n + 2):
        if mats[t] != _matmul(_transpose(mats[n + 1 - t]), top):
            return StableCheck(False, tau, f"pairing symmetry fails at degree {t}")
    return StableCheck(True, tau, "")


# ---------------------------------------------------------------------------
# trivial extension


def returning_arrow_id(p):
    return f"ret({p})"


class TrivialExtension:
    """Delta = Lambda + D(Lambda) with explicit multiplication.

    Elements are pairs ``(a, f)`` of dicts: ``a`` over standard monomials of
    Lambda, ``f`` over the dual basis (key ``b`` stands for ``b*``).  The
    left action on D(Lambda) carries the twist: (a.f)(x) = s^deg(a) f(x a).
    """

    def __init__(self, alg, n, twist_sign):
        self.alg = alg
        self.n = n
        self.sign = twist_sign

    def left(self, a, f):
        """a . f for a path a and functional f (dict b -> coeff)."""
        out = {}
        alg = self.alg
        s = Fraction(self.sign) ** a.length
        for b, c in f.items():
            deg = b.length - a.length
            if deg < 0 or a.source != b.source:
                continue
            for x in alg.basis(deg, a.target, b.target):
                v = alg.nf(x * a).get(b)
                if v:
                    _add(out, {x: s * c * v})
        return out

    def right(self, f, a):
        """f . a: (f.a)(x) = f(a x)."""
        out = {}
        alg = self.alg
        for b, c in f.items():
            deg = b.length - a.length
            if deg < 0 or a.target != b.target:
                continue
            for x in alg.basis(deg, b.source, a.source):
                v = alg.nf(a * x).get(b)
                if v:
                    _add(out, {x: c * v})
        return out

    def product(self, x, y):
        (a, f), (b, g) = x, y
        ab = self.alg.mul(a, b)
        fg = {}
        for pa, ca in a.items():
            _add(fg, self.left(pa, g), ca)
        for pb, cb in b.items():
            _add(fg, self.right(f, pb), cb)
        return ab, fg


def trivial_extension(bq, twist_sign=None, cap=None):
    """Bound quiver of the trivial extension of an n-properly-graded algebra.

    Returns a BoundQuiver on Q plus returning arrows; relation ``n`` is the
    same n.  Raises NonQuadratic when the degree-2 kernel does not present
    Delta, reporting the first degree where dimensions disagree.
    """
    grading = is_n_properly_graded(bq, cap)
    if not grading.yes:
        raise NotProperlyGraded(
            "maximal bound paths have different lengths",
            [str(p) for p in grading.witness],
        )
    n = grading.n
    if twist_sign is None:
        twist_sign = -1 if n % 2 else 1
    if twist_sign not in (1, -1):
        raise ValidationError("twist_sign must be +1 or -1", twist_sign)
    alg = GradedAlgebra(bq, n + 1)
    delta = TrivialExtension(alg, n, twist_sign)
    q = bq.quiver

    returning = []
    images = {}
    for a in q.arrows:
        images[a.id] = ({q.path(a.id): Fraction(1)}, {})
    for i in q.vertices:
        for j in q.vertices:
            for p in alg.basis(n, i, j):
                aid = returning_arrow_id(p)
                returning.append(Arrow(aid, j, i))
                images[aid] = ({}, {p: Fraction(1)})
    qt = Quiver(q.vertices, list(q.arrows) + returning)
    ret_ids = {a.id for a in returning}

    def image(path):
        ids = path.arrows
        x = images[ids[-1]]
        for aid in reversed(ids[:-1]):
            x = delta.product(images[aid], x)
        return x

    rels = []
    for i in qt.vertices:
        for j in qt.vertices:
            paths = qt.paths_between(i, j, 2)
            if not paths:
                continue
            coords = {}
            cols = []
            for p in paths:
                a, f = image(p)
                col = {}
                for key, c in a.items():
                    col[("L", key)] = c
                for key, c in f.items():
                    col[("D", key)] = c
                cols.append(col)
                for key in col:
                    coords.setdefault(key, len(coords))
            mat = [[Fraction(0)] * len(paths) for _ in coords]
            for k, col in enumerate(cols):
                for key, c in col.items():
                    mat[coords[key]][k] = c
            ker = kernel_basis(mat, len(paths)) if coords else kernel_basis([], len(paths))
            for v in row_basis(ker, len(paths)):
                rels.append(make_relation(qt, [(c, p) for c, p in zip(v, paths) if c]))
    out = BoundQuiver(qt, rels, n)

    # Delta_t on the pair (i -> j) is Lambda_t(i -> j) + D(Lambda_{n+1-t}(j -> i)).
    check = GradedAlgebra(out, n + 2)
    for t in range(n + 3):
        got = check.dims(t)
        want_l = alg.dims(t) if t <= n + 1 else None
        want_d = alg.dims(n + 1 - t) if 0 <= n + 1 - t else None
        size = len(q.vertices)
        for r in range(size):
            for c in range(size):
                w = 0
                if want_l is not None:
                    w += want_l[r][c]
                if want_d is not None:
                    w += want_d[c][r]
                if got[r][c] != w:
                    raise NonQuadratic(
                        f"quadratic relations do not present the trivial extension in degree {t}",
                        degree=t,
                    )
    return out


def returning_arrow_ids(bq):
    return {a.id for a in bq.quiver.arrows if a.id.startswith("ret(")}


def returning_count(rel, returning_ids):
    """Number of returning arrows on each path of a relation (all terms agree)."""
    counts = {sum(a in returning_ids for a in p.arrows) for _, p in rel.terms}
    if len(counts) != 1:
        raise ValidationError("relation mixes returning-arrow counts", str(rel))
    return counts.pop()

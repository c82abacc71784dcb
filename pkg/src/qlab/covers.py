"""Finite windows of covering quivers, complete tau-slices and tau-mutations.

Vertex (i, t) of a cover is named ``"i@t"`` and the copy of arrow ``a``
starting on level t is named ``"a@t"``.

In the separated quiver Z_v Q~ of a stable n-translation quiver with trivial
Nakayama permutation the translation is tau(i, t) = (i, t - n - 1), so a
tau-orbit is {(i, t + k(n+1))}.  A Nakayama permutation ``nu`` can be
supplied; then tau(i, t) = (nu(i), t - n - 1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .algebra import returning_arrow_ids, trivial_extension
from .errors import NotASink, NotASource, ValidationError, WindowTooSmall
from .quiver import Arrow, BoundQuiver, Path, Quiver, RelationElement


def cover_vertex(i, t):
    return f"{i}@{t}"


def split_vertex(v):
    i, _, t = v.rpartition("@")
    return i, int(t)


@dataclass
class SliceWindow:
    base: BoundQuiver
    m: int
    l: int
    bound: BoundQuiver
    n: int | None = None
    nu: dict = field(default_factory=dict)

    @property
    def quiver(self):
        return self.bound.quiver

    def levels(self):
        return range(self.m, self.l + 1)

    def orbit_key(self, v):
        """Representative (nu^k(i), r) of the tau-orbit of v = (i, k(n+1) + r)."""
        i, t = split_vertex(v)
        k, r = divmod(t, self.n + 1)
        if self.nu:
            step = self.nu if k >= 0 else {b: a for a, b in self.nu.items()}
            for _ in range(abs(k)):
                i = step[i]
        return i, r


def _lift_path(p, level, shift_of):
    """Lift path ``p`` to a cover starting on ``level``.

    ``shift_of(arrow_id)`` gives the level change along that arrow.  Returns
    the lifted path and its end level.
    """
    arrows = []
    cur = level
    for a in reversed(p.arrows):
        arrows.append(f"{a}@{cur}")
        cur += shift_of(a)
    arrows.reverse()
    return arrows, cur


def _lift(base, levels_ok, shift_of):
    q = base.quiver
    vertices, arrows = [], []
    lo, hi = levels_ok
    for t in range(lo, hi + 1):
        for v in q.vertices:
            vertices.append(cover_vertex(v, t))
    for t in range(lo, hi + 1):
        for a in q.arrows:
            s = shift_of(a.id)
            if lo <= t + s <= hi:
                arrows.append(Arrow(f"{a.id}@{t}", cover_vertex(a.source, t), cover_vertex(a.target, t + s)))
    cq = Quiver(vertices, arrows)
    rels = []
    for r in base.relations:
        for t in range(lo, hi + 1):
            terms = []
            ok = True
            for c, p in r.terms:
                lifted, end = _lift_path(p, t, shift_of)
                if end > hi:
                    ok = False
                    break
                terms.append((c, Path(cover_vertex(p.source, t), cover_vertex(p.target, end), tuple(lifted))))
            if ok:
                rels.append(RelationElement(tuple(terms)))
    return BoundQuiver(cq, rels, base.n)


def z_separated(base, m, l, n=None):
    """Window [m, l] of the separated directed quiver of ``base``."""
    if l < m:
        raise ValidationError("window must satisfy m <= l", (m, l))
    bound = _lift(base, (m, l), lambda a: 1)
    return SliceWindow(base, m, l, bound, base.n if n is None else n)


def complete_tau_slice(w, m):
    n = w.n
    if n is None:
        raise ValidationError("window needs the translation degree n")
    if m < w.m or m + n > w.l:
        raise WindowTooSmall(f"levels [{m}, {m + n}] not inside window [{w.m}, {w.l}]")
    keep = [v for v in w.quiver.vertices if m <= split_vertex(v)[1] <= m + n]
    return w.bound.restrict(keep)


def znq_cover(bq, t_min, t_max, delta=None):
    """Window [t_min, t_max] of the cover obtained by unrolling returning arrows.

    Copy t of Q sits on level t; a returning arrow goes from level t to t+1.
    Relations of the trivial extension are lifted by tracking levels.
    """
    if t_max < t_min:
        raise ValidationError("window must satisfy t_min <= t_max", (t_min, t_max))
    if delta is None:
        delta = trivial_extension(bq)
    ret = returning_arrow_ids(delta)
    bound = _lift(delta, (t_min, t_max), lambda a: 1 if a in ret else 0)
    return SliceWindow(delta, t_min, t_max, bound, delta.n)


def cycle_gcd(q):
    """gcd of the (signed) lengths of cycles in each component; 0 if acyclic as a graph."""
    d = {}
    g = 0
    for comp in q.undirected_components():
        d[comp[0]] = 0
        stack = [comp[0]]
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
        g = gcd(g, d[a.source] + 1 - d[a.target])
    return g


# ---------------------------------------------------------------------------
# slices and mutation


def is_convex(q, keep):
    keep = set(keep)

    def reach(forward):
        seen = set()
        stack = list(keep)
        while stack:
            v = stack.pop()
            arrows = q.out_arrows[v] if forward else q.in_arrows[v]
            for a in arrows:
                u = a.target if forward else a.source
                if u not in keep and u not in seen:
                    seen.add(u)
                    stack.append(u)
        return seen

    return not (reach(True) & reach(False))


def is_complete_tau_slice(w, vertices):
    keys = [w.orbit_key(v) for v in vertices]
    if len(set(keys)) != len(keys):
        return False
    all_keys = {w.orbit_key(v) for v in w.quiver.vertices}
    return set(keys) == all_keys and is_convex(w.quiver, vertices)


def tau_mutation(slice_bq, w, v, kind="source"):
    """Replace the source (i, t) by (i, t+n+1), or the sink (i, t) by (i, t-n-1).

    The result is the full bound subquiver of the window on the new vertex
    set.
    """
    q = slice_bq.quiver
    q.check_vertex(v)
    i, t = split_vertex(v)
    if kind == "source":
        if q.in_arrows[v]:
            raise NotASource("vertex has incoming arrows in the slice", v)
        new_t = t + w.n + 1
    elif kind == "sink":
        if q.out_arrows[v]:
            raise NotASink("vertex has outgoing arrows in the slice", v)
        new_t = t - w.n - 1
    else:
        raise ValidationError("kind must be 'source' or 'sink'", kind)
    if not w.m <= new_t <= w.l:
        raise WindowTooSmall(f"level {new_t} is not materialised in [{w.m}, {w.l}]")
    new_v = cover_vertex(i, new_t)
    keep = [u for u in q.vertices if u != v] + [new_v]
    order = {u: k for k, u in enumerate(w.quiver.vertices)}
    keep.sort(key=order.__getitem__)
    return w.bound.restrict(keep)


def mutate_sources(slice_bq, w):
    """Mutate every source of the slice (sources chosen up front)."""
    q = slice_bq.quiver
    sources = [v for v in q.vertices if not q.in_arrows[v]]
    cur = slice_bq
    for v in sources:
        cur = tau_mutation(cur, w, v, "source")
    return cur

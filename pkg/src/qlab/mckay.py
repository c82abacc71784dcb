"""McKay quivers and the explicit relation families attached to them.

Abelian groups Z/r_1 x ... x Z/r_m act diagonally through the characters
e_1, ..., e_m and -e = -(e_1 + ... + e_m).  The McKay quiver has one arrow
i -> i + e_t for each t and one arrow i -> i - e.  For m = 2 these are
called a (along e_1), b (along e_2) and c (along -e).

The ADE quivers with loops carry arrows ``a[i,j]`` for i < j, ``b[i,j]`` for
i > j and a loop ``c[i]`` at every vertex.  For the cyclic family A_l the
vertices are Z/(l+1) and ``a`` goes i -> i+1, ``b`` goes i -> i-1.

Vertex labels of the extended diagrams:

    A_l   0 .. l, a cycle
    D_l   0 .. l, edges 0-2, 1-2, 2-3, ..., (l-3)-(l-2), (l-2)-(l-1), (l-2)-l
    E6    1 .. 7, chain 1-2-3-4-5 with the arm 3-6-7
    E7    0 .. 7, chain 0-1-2-3-4-5-6 with the arm 3-7
    E8    1 .. 9, chain 1-2-3-4-5-6-7-9 with the arm 3-8
"""
from __future__ import annotations

import itertools
import string
from fractions import Fraction

import numpy as np

from .covers import complete_tau_slice, z_separated
from .errors import (
    NonOrthonormalTable,
    NotIntegerMultiplicity,
    ParameterZero,
    SizeTooSmall,
    UnsupportedFamily,
    ValidationError,
)
from .quiver import Arrow, BoundQuiver, Quiver, make_relation

# ---------------------------------------------------------------------------
# Abelian groups


def group_label(g):
    return ",".join(str(x) for x in g)


def mckay_abelian(orders):
    orders = tuple(int(r) for r in orders)
    if not orders or any(r < 1 for r in orders):
        raise ValidationError("orders must be positive integers", orders)
    m = len(orders)
    if m + 1 > len(string.ascii_lowercase):
        raise ValidationError("too many factors", orders)
    elems = list(itertools.product(*[range(r) for r in orders]))
    shifts = []
    for t in range(m):
        shifts.append(tuple(int(k == t) for k in range(m)))
    shifts.append(tuple(-1 for _ in range(m)))
    arrows = []
    for letter, sh in zip(string.ascii_lowercase, shifts):
        for g in elems:
            h = tuple((x + d) % r for x, d, r in zip(g, sh, orders))
            arrows.append(Arrow(f"{letter}[{group_label(g)}]", group_label(g), group_label(h)))
    return Quiver([group_label(g) for g in elems], arrows)


def mckay_add_loops(q, prefix="loop"):
    taken = set(q.arrow_by_id)
    extra = []
    for v in q.vertices:
        aid = f"{prefix}[{v}]"
        k = 1
        while aid in taken:
            k += 1
            aid = f"{prefix}{k}[{v}]"
        taken.add(aid)
        extra.append(Arrow(aid, v, v))
    return Quiver(q.vertices, list(q.arrows) + extra)


def _param(table, key, default=1):
    if table is None:
        v = default
    elif isinstance(table, dict):
        v = table.get(key, default)
    else:
        v = table
    v = Fraction(v)
    if v == 0:
        raise ParameterZero("parameter is zero", key)
    return v


def _sr_check(s, r):
    if s < 4 or r < 4:
        raise SizeTooSmall("both orders must be at least 4", (s, r))


def _sr_relations(s, r, C, dual):
    """Commutation (and, for the primal family, zero) relations on Q~(s,r).

    ``C`` maps "a", "b", "c" to a scalar or a dict keyed by vertex label.
    """
    _sr_check(s, r)
    q = mckay_abelian((s, r))

    def v(i1, i2):
        return f"{i1 % s},{i2 % r}"

    def A(i1, i2):
        return f"a[{v(i1, i2)}]"

    def B(i1, i2):
        return f"b[{v(i1, i2)}]"

    def G(i1, i2):
        return f"c[{v(i1, i2)}]"

    C = C or {}
    rels = []
    for i1 in range(s):
        for i2 in range(r):
            lab = v(i1, i2)
            a = _param(C.get("a"), lab)
            b = _param(C.get("b"), lab)
            c = _param(C.get("c"), lab)
            if dual:
                a, b, c = -1 / a, -1 / b, -1 / c
            # z(c, i): i -> i + e
            rels.append([(c, (B(i1 + 1, i2), A(i1, i2))), (1, (A(i1, i2 + 1), B(i1, i2)))])
            # z(b, i): i -> i - e_2
            rels.append([(b, (A(i1 - 1, i2 - 1), G(i1, i2))), (1, (G(i1 + 1, i2), A(i1, i2)))])
            # z(a, i): i -> i - e_1
            rels.append([(a, (B(i1 - 1, i2 - 1), G(i1, i2))), (1, (G(i1, i2 + 1), B(i1, i2)))])
            if not dual:
                rels.append([(1, (A(i1 + 1, i2), A(i1, i2)))])
                rels.append([(1, (B(i1, i2 + 1), B(i1, i2)))])
                rels.append([(1, (G(i1 - 1, i2 - 1), G(i1, i2)))])
    return BoundQuiver(q, [make_relation(q, rel) for rel in rels], 2)


def relations_sr(s, r, C=None):
    return _sr_relations(s, r, C, dual=False)


def relations_sr_dual(s, r, C=None):
    return _sr_relations(s, r, C, dual=True)


def slice_relations_sr(s, r, which="primal"):
    """Relations on the three-level slice Z_v Q~(s,r)[0,2] without parameters.

    The primal family is the zero relations plus commutations with
    coefficient -1; the dual family is the commutations with coefficient 1.
    """
    if which not in ("primal", "dual"):
        raise ValidationError("which must be 'primal' or 'dual'", which)
    _sr_check(s, r)
    if which == "primal":
        base = _sr_relations(s, r, {"a": -1, "b": -1, "c": -1}, dual=False)
    else:
        base = _sr_relations(s, r, {"a": -1, "b": -1, "c": -1}, dual=True)
    return complete_tau_slice(z_separated(base, 0, 2, n=2), 0)


# ---------------------------------------------------------------------------
# character tables


def mckay_from_characters(table, faithful=None, tol=1e-6):
    """McKay quiver from a complex character table.

    ``table`` has "class_sizes" (list of ints), "characters" (rows of
    [re, im] pairs) and optionally "names" and "V" (the character of the
    representation, as [re, im] pairs).  Without "V", ``faithful`` selects
    a row of the table.  a_ij = <chi_V chi_i, chi_j> must be integral.
    """
    sizes = np.array(table["class_sizes"], dtype=float)
    chars = np.array([[complex(x[0], x[1]) for x in row] for row in table["characters"]])
    order = sizes.sum()
    k = len(chars)
    if chars.shape != (k, len(sizes)):
        raise NonOrthonormalTable("character table must be square over the classes")

    def inner(x, y):
        return np.sum(sizes * x * np.conj(y)) / order

    gram = np.array([[inner(chars[i], chars[j]) for j in range(k)] for i in range(k)])
    if np.max(np.abs(gram - np.eye(k))) > tol:
        raise NonOrthonormalTable("rows are not orthonormal", float(np.max(np.abs(gram - np.eye(k)))))
    if "V" in table:
        chi_v = np.array([complex(x[0], x[1]) for x in table["V"]])
    elif faithful is not None:
        if not 0 <= faithful < k:
            raise ValidationError("faithful row out of range", faithful)
        chi_v = chars[faithful]
    else:
        raise ValidationError("need a 'V' character or a faithful row index")
    names = [str(x) for x in table.get("names", range(k))]
    arrows = []
    for i in range(k):
        for j in range(k):
            val = inner(chi_v * chars[i], chars[j])
            mult = round(val.real)
            if abs(val - mult) > tol:
                raise NotIntegerMultiplicity("multiplicity is not an integer", (names[i], names[j], complex(val)))
            for t in range(mult):
                arrows.append(Arrow(f"x[{names[i]},{names[j]},{t}]", names[i], names[j]))
    return Quiver(names, arrows)


def abelian_character_table(orders, names=True):
    """Character table of Z/r_1 x ... x Z/r_m plus the embedding character."""
    elems = list(itertools.product(*[range(r) for r in orders]))
    chars = []
    for chi in elems:
        row = []
        for g in elems:
            z = np.exp(2j * np.pi * sum(c * x / r for c, x, r in zip(chi, g, orders)))
            row.append([float(z.real), float(z.imag)])
        chars.append(row)
    m = len(orders)
    idx = {g: k for k, g in enumerate(elems)}
    shifts = [tuple(int(k == t) for k in range(m)) for t in range(m)]
    shifts.append(tuple((-1) % r for r in orders))
    v = np.zeros(len(elems), dtype=complex)
    for sh in shifts:
        sh = tuple(x % r for x, r in zip(sh, orders))
        v += np.array([complex(*x) for x in chars[idx[sh]]])
    out = {
        "class_sizes": [1] * len(elems),
        "characters": chars,
        "V": [[float(z.real), float(z.imag)] for z in v],
    }
    if names:
        out["names"] = [group_label(g) for g in elems]
    return out


# ---------------------------------------------------------------------------
# ADE quivers with loops


def ade_edges(family, l=None):
    """Vertex labels (ints, in order) and undirected edges of the diagram."""
    family = family.upper()
    if family == "A":
        if l is None or l < 4:
            raise UnsupportedFamily("A_l needs l >= 4", l)
        verts = list(range(l + 1))
        return verts, [(i, (i + 1) % (l + 1)) for i in range(l + 1)]
    if family == "D":
        if l is None or l < 4:
            raise UnsupportedFamily("D_l needs l >= 4", l)
        verts = list(range(l + 1))
        edges = [(0, 2), (1, 2)]
        edges += [(i, i + 1) for i in range(2, l - 2)]
        edges += [(l - 2, l - 1), (l - 2, l)]
        return verts, edges
    if family in ("E6", "E") and (family == "E6" or l == 6):
        return list(range(1, 8)), [(1, 2), (2, 3), (3, 4), (4, 5), (3, 6), (6, 7)]
    if family == "E7" or (family == "E" and l == 7):
        return list(range(8)), [(i, i + 1) for i in range(6)] + [(3, 7)]
    if family == "E8" or (family == "E" and l == 8):
        return list(range(1, 10)), [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 9), (3, 8)]
    raise UnsupportedFamily("unsupported family", (family, l))


def _ade_arrow_ids(family, i, j, cyclic_size=None):
    """Id of the arrow i -> j in the doubled diagram."""
    if cyclic_size is not None:
        ascending = j == (i + 1) % cyclic_size
    else:
        ascending = i < j
    return f"{'a' if ascending else 'b'}[{i},{j}]"


def mckay_ade(family, l=None, loops=True):
    verts, edges = ade_edges(family, l)
    cyc = len(verts) if family.upper() == "A" else None
    arrows = []
    for i, j in sorted(edges):
        for s, t in ((i, j), (j, i)):
            arrows.append(Arrow(_ade_arrow_ids(family, s, t, cyc), str(s), str(t)))
    arrows.sort(key=lambda a: (a.id[0], int(a.source), int(a.target)))
    q = Quiver([str(v) for v in verts], arrows)
    if loops:
        q = Quiver(q.vertices, list(q.arrows) + [Arrow(f"c[{v}]", v, v) for v in q.vertices])
    return q


def _neighbours(q, i):
    """Non-loop out-arrows of i, ordered by target label."""
    outs = [a for a in q.out_arrows[i] if a.target != i]
    return sorted(outs, key=lambda a: int(a.target))


def _back(q, a):
    """The arrow returning along the edge of ``a``."""
    for b in q.out_arrows[a.target]:
        if b.target == a.source and b.source != b.target:
            return b
    raise ValidationError("no returning arrow", a.id)


def xi_vertex_class(q, i):
    return len(_neighbours(q, i))


def _xi_relations(family, l, J, C, dual):
    q = mckay_ade(family, l, loops=True)
    J = {str(j) for j in (J or ())}
    for j in J:
        q.check_vertex(j)
    C = C or {}
    rels = []
    loop = {v: f"c[{v}]" for v in q.vertices}
    # rho_p: zero relations along two non-loop arrows with distinct ends
    if not dual:
        for a in q.arrows:
            if a.source == a.target:
                continue
            for b in q.out_arrows[a.target]:
                if b.source != b.target and b.target != a.source:
                    rels.append([(1, (b.id, a.id))])
    # rho_a: loops commute with arrows up to the edge parameter
    for a in q.arrows:
        i, j = a.source, a.target
        if i == j:
            continue
        if a.id.startswith("a["):
            p = _param(C.get("a"), f"{i},{j}")
            if dual:
                rels.append([(p, (a.id, loop[i])), (1, (loop[j], a.id))])
            else:
                rels.append([(1, (a.id, loop[i])), (-p, (loop[j], a.id))])
        else:
            if dual:
                rels.append([(1, (a.id, loop[i])), (1, (loop[j], a.id))])
            else:
                rels.append([(1, (a.id, loop[i])), (-1, (loop[j], a.id))])
    # vertex families
    for i in q.vertices:
        outs = _neighbours(q, i)
        k = len(outs)
        cyc = [(_back(q, mu).id, mu.id) for mu in outs]  # zeta_t mu_t : i -> i
        gg = (loop[i], loop[i])
        c = _param(C.get("c"), i)
        bs = C.get("b", {})
        btab = bs.get(i, 1) if isinstance(bs, dict) else bs
        if k >= 3:
            if not isinstance(btab, (list, tuple)):
                btab = [btab] * (k - 1)
            if len(btab) != k - 1:
                raise ValidationError("need one b parameter per extra neighbour", (i, btab))
            blist = [Fraction(x) for x in btab]
            if any(x == 0 for x in blist):
                raise ParameterZero("parameter is zero", ("b", i))
        else:
            b = _param(btab if not isinstance(btab, (list, tuple)) else btab[0], i)
        minus = i in J
        if k == 0:
            raise UnsupportedFamily("vertex without neighbours", i)
        if not dual:
            if k == 1:
                if minus:
                    rels.append([(1, cyc[0])])
                else:
                    rels.append([(c, gg), (1, cyc[0])])
            elif k == 2:
                rels.append([(1, cyc[0]), (-b, cyc[1])])
                rels.append([(1, gg)] if minus else [(1, gg), (-c, cyc[0])])
            else:
                for bt, z in zip(blist, cyc[1:]):
                    rels.append([(bt, cyc[0]), (-1, z)])
                rels.append([(1, gg)] if minus else [(1, gg), (-c, cyc[0])])
        else:
            if k == 1:
                rels.append([(1, gg)] if minus else [(1, gg), (-c, cyc[0])])
            elif k == 2:
                if minus:
                    rels.append([(b, cyc[0]), (1, cyc[1])])
                else:
                    rels.append([(1, cyc[0]), (1 / b, cyc[1]), (c, gg)])
            else:
                terms = [(1, cyc[0])] + [(bt, z) for bt, z in zip(blist, cyc[1:])]
                if not minus:
                    terms.append((c, gg))
                rels.append(terms)
    return BoundQuiver(q, [make_relation(q, r) for r in rels], 2)


def relations_xi(family, l=None, J=(), C=None):
    return _xi_relations(family, l, J, C, dual=False)


def relations_xi_dual(family, l=None, J=(), C=None):
    return _xi_relations(family, l, J, C, dual=True)


def slice_relations_xi(family, l=None, J=(), which="primal"):
    """Three-level slice of Q~(Xi) with the parameter-free relations."""
    if which not in ("primal", "dual"):
        raise ValidationError("which must be 'primal' or 'dual'", which)
    base = _xi_relations(family, l, J, None, dual=(which == "dual"))
    return complete_tau_slice(z_separated(base, 0, 2, n=2), 0)

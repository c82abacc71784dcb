"""Quivers, paths, relation elements and bound quivers.

Paths are written the way they compose as maps: the path ``(b, a)`` means
"first ``a``, then ``b``" and is printed ``b*a``.  So ``p.arrows[-1]`` is the
first arrow walked and ``p.arrows[0]`` the last one.  A path from ``i`` to
``j`` satisfies ``p = e_j p e_i``.

Vertex and arrow ids are plain strings.  Structured ids are flattened, for
instance ``"1,0"`` for a group element or ``"3@2"`` for the vertex (3, 2)
of a cover.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NonHomogeneous, ParseError, UnknownVertex, ValidationError


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str


@dataclass(frozen=True, order=False)
class Path:
    """A path; ``arrows`` is in written (right-to-left) order."""

    source: str
    target: str
    arrows: tuple = ()

    @property
    def length(self):
        return len(self.arrows)

    def __mul__(self, other):
        """``self * other`` is ``other`` followed by ``self``."""
        if other.target != self.source:
            raise ValidationError("paths do not compose", (self, other))
        return Path(other.source, self.target, self.arrows + other.arrows)

    def __str__(self):
        if not self.arrows:
            return f"e[{self.source}]"
        return "*".join(self.arrows)


class Quiver:
    """A finite quiver.  Loops and multiple arrows are allowed."""

    def __init__(self, vertices, arrows):
        self.vertices = tuple(str(v) for v in vertices)
        self.arrows = tuple(a if isinstance(a, Arrow) else Arrow(*map(str, a)) for a in arrows)
        self.vertex_index = {}
        for k, v in enumerate(self.vertices):
            if v in self.vertex_index:
                raise ValidationError("duplicate vertex id", v)
            self.vertex_index[v] = k
        self.arrow_index = {}
        self.out_arrows = defaultdict(list)
        self.in_arrows = defaultdict(list)
        for k, a in enumerate(self.arrows):
            if a.id in self.arrow_index:
                raise ValidationError("duplicate arrow id", a.id)
            for end in (a.source, a.target):
                if end not in self.vertex_index:
                    raise UnknownVertex("arrow endpoint is not a vertex", a)
            self.arrow_index[a.id] = k
            self.out_arrows[a.source].append(a)
            self.in_arrows[a.target].append(a)
        self.arrow_by_id = {a.id: a for a in self.arrows}
        self._paths_from = {}

    def __eq__(self, other):
        return (
            isinstance(other, Quiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
        )

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"

    def check_vertex(self, v):
        if v not in self.vertex_index:
            raise UnknownVertex("unknown vertex", v)

    def idempotent(self, v):
        self.check_vertex(v)
        return Path(v, v, ())

    def path(self, *arrow_ids):
        """Build a path from arrow ids given in written order."""
        if not arrow_ids:
            raise ValidationError("use idempotent() for trivial paths")
        for a in arrow_ids:
            if a not in self.arrow_by_id:
                raise ValidationError("unknown arrow", a)
        arrows = [self.arrow_by_id[a] for a in arrow_ids]
        for later, earlier in zip(arrows, arrows[1:]):
            if earlier.target != later.source:
                raise ValidationError("arrows do not compose", arrow_ids)
        return Path(arrows[-1].source, arrows[0].target, tuple(arrow_ids))

    def path_key(self, p):
        return tuple(self.arrow_index[a] for a in p.arrows)

    def paths_from(self, i, t):
        """All paths of length ``t`` starting at ``i``, sorted lexicographically."""
        key = (i, t)
        if key in self._paths_from:
            return self._paths_from[key]
        self.check_vertex(i)
        if t == 0:
            out = [Path(i, i, ())]
        else:
            out = []
            for p in self.paths_from(i, t - 1):
                for a in self.out_arrows[p.target]:
                    out.append(Path(i, a.target, (a.id,) + p.arrows))
            out.sort(key=self.path_key)
        self._paths_from[key] = out
        return out

    def paths_between(self, i, j, t):
        if t < 0:
            raise ValidationError("negative path length", t)
        self.check_vertex(j)
        return [p for p in self.paths_from(i, t) if p.target == j]

    def adjacency(self):
        """Matrix M with M[i][j] the number of arrows i -> j."""
        n = len(self.vertices)
        m = [[0] * n for _ in range(n)]
        for a in self.arrows:
            m[self.vertex_index[a.source]][self.vertex_index[a.target]] += 1
        return m

    def undirected_components(self):
        """Vertex sets of the connected components, in vertex order."""
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for a in self.arrows:
            ra, rb = find(a.source), find(a.target)
            if ra != rb:
                parent[max(ra, rb, key=self.vertex_index.get)] = min(
                    ra, rb, key=self.vertex_index.get
                )
        groups = defaultdict(list)
        for v in self.vertices:
            groups[find(v)].append(v)
        return sorted(groups.values(), key=lambda g: self.vertex_index[g[0]])

    def full_subquiver(self, vertices):
        keep = set(vertices)
        verts = [v for v in self.vertices if v in keep]
        arrows = [a for a in self.arrows if a.source in keep and a.target in keep]
        return Quiver(verts, arrows)


def connected_components(q):
    return [q.full_subquiver(vs) for vs in q.undirected_components()]


@dataclass(frozen=True)
class RelationElement:
    """Linear combination of parallel paths of one length.

    ``terms`` is a tuple of ``(coefficient, Path)`` pairs.
    """

    terms: tuple

    @property
    def source(self):
        return self.terms[0][1].source

    @property
    def target(self):
        return self.terms[0][1].target

    @property
    def length(self):
        return self.terms[0][1].length

    def __str__(self):
        parts = []
        for c, p in self.terms:
            parts.append(f"{c}*{p}" if c != 1 else str(p))
        return " + ".join(parts)


def make_relation(quiver, terms):
    """Validate and canonicalise one already-normalised relation."""
    merged = {}
    for c, p in terms:
        if isinstance(p, (tuple, list)):
            p = quiver.path(*p)
        c = Fraction(c)
        merged[p] = merged.get(p, Fraction(0)) + c
    items = [(c, p) for p, c in merged.items() if c != 0]
    if not items:
        raise ValidationError("relation is zero", terms)
    ends = {(p.source, p.target, p.length) for _, p in items}
    if len(ends) != 1:
        raise ValidationError("relation is not normalized", [str(p) for _, p in items])
    items.sort(key=lambda cp: quiver.path_key(cp[1]))
    return RelationElement(tuple(items))


def normalize_relations(quiver, raw):
    """Split raw combinations into their e_j x e_i pieces.

    ``raw`` is a list of lists of ``(coefficient, path)``.  Zero pieces are
    dropped.  A raw element mixing path lengths raises ``NonHomogeneous``.
    """
    out = []
    for elem in raw:
        pieces = {}
        lengths = set()
        for c, p in elem:
            if isinstance(p, (tuple, list)):
                p = quiver.path(*p)
            lengths.add(p.length)
            key = (p.source, p.target)
            bucket = pieces.setdefault(key, {})
            bucket[p] = bucket.get(p, Fraction(0)) + Fraction(c)
        if len(lengths) > 1:
            raise NonHomogeneous("relation mixes path lengths", sorted(lengths))
        for key in sorted(pieces, key=lambda st: (quiver.vertex_index[st[0]], quiver.vertex_index[st[1]])):
            terms = [(c, p) for p, c in pieces[key].items() if c != 0]
            if terms:
                out.append(make_relation(quiver, terms))
    return out


def relation_sort_key(quiver, rel):
    return (
        quiver.vertex_index[rel.source],
        quiver.vertex_index[rel.target],
        rel.length,
        tuple((quiver.path_key(p), c) for c, p in rel.terms),
    )


@dataclass(frozen=True)
class BoundQuiver:
    quiver: Quiver
    relations: tuple = field(default=())
    n: int | None = None

    def __post_init__(self):
        rels = []
        for r in self.relations:
            if not isinstance(r, RelationElement):
                r = make_relation(self.quiver, r)
            if r.length < 2:
                raise ValidationError("relations must have length at least 2", str(r))
            for _, p in r.terms:
                for a in p.arrows:
                    if a not in self.quiver.arrow_by_id:
                        raise ValidationError("relation uses unknown arrow", a)
            rels.append(r)
        rels.sort(key=lambda r: relation_sort_key(self.quiver, r))
        object.__setattr__(self, "relations", tuple(rels))

    def relations_at(self, i, j, length=None):
        return [
            r
            for r in self.relations
            if r.source == i and r.target == j and (length is None or r.length == length)
        ]

    def relation_vectors(self, i, j, t):
        """Coordinate vectors of e_j rho e_i in the path basis of length t."""
        paths = self.quiver.paths_between(i, j, t)
        pos = {p: k for k, p in enumerate(paths)}
        vecs = []
        for r in self.relations_at(i, j, t):
            v = [Fraction(0)] * len(paths)
            for c, p in r.terms:
                v[pos[p]] += c
            vecs.append(v)
        return paths, vecs

    def is_quadratic(self):
        return all(r.length == 2 for r in self.relations)

    def components(self):
        """Connected components with their induced relations."""
        out = []
        for vs in self.quiver.undirected_components():
            sub = self.quiver.full_subquiver(vs)
            keep = set(vs)
            rels = [r for r in self.relations if r.source in keep]
            out.append(BoundQuiver(sub, rels, self.n))
        return out

    def restrict(self, vertices):
        """Full bound subquiver on ``vertices``; relations are kept only when
        every term lies inside the subquiver."""
        sub = self.quiver.full_subquiver(vertices)
        rels = [
            r
            for r in self.relations
            if all(a in sub.arrow_by_id for _, p in r.terms for a in p.arrows)
        ]
        return BoundQuiver(sub, rels, self.n)


# ---------------------------------------------------------------------------
# JSON format


def _parse_coeff(raw):
    if isinstance(raw, bool):
        raise ParseError("bad coefficient", raw)
    if isinstance(raw, int):
        return Fraction(raw)
    if not isinstance(raw, str) or any(ch in raw for ch in ".eE") or not raw.strip():
        raise ParseError("coefficient must be a fraction string like '-3/4'", raw)
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise ParseError("bad coefficient", raw) from None


def from_dict(doc):
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    try:
        vertices = doc["vertices"]
        arrows = doc.get("arrows", [])
        relations = doc.get("relations", [])
    except KeyError as e:
        raise ParseError("missing key", e.args[0]) from None
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise ParseError("'vertices' must be a list of strings")
    arr = []
    for a in arrows:
        if not isinstance(a, dict) or not {"id", "from", "to"} <= set(a):
            raise ParseError("arrow needs id, from, to", a)
        arr.append(Arrow(str(a["id"]), str(a["from"]), str(a["to"])))
    q = Quiver(vertices, arr)
    rels = []
    for raw in relations:
        if not isinstance(raw, list) or not raw:
            raise ParseError("relation must be a non-empty list of terms", raw)
        terms = []
        for term in raw:
            if not isinstance(term, dict) or "path" not in term:
                raise ParseError("term needs coeff and path", term)
            c = _parse_coeff(term.get("coeff", "1"))
            path = term["path"]
            if not isinstance(path, list) or not path:
                raise ParseError("path must be a non-empty list of arrow ids", path)
            terms.append((c, q.path(*[str(x) for x in path])))
        rels.append(make_relation(q, terms))
    n = doc.get("n")
    if n is not None and (not isinstance(n, int) or isinstance(n, bool) or n < 0):
        raise ParseError("'n' must be a non-negative integer", n)
    return BoundQuiver(q, rels, n)


def parse_bound_quiver(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}") from None
    return from_dict(doc)


def to_dict(bq):
    doc = {
        "vertices": list(bq.quiver.vertices),
        "arrows": [{"id": a.id, "from": a.source, "to": a.target} for a in bq.quiver.arrows],
        "relations": [
            [{"coeff": str(c), "path": list(p.arrows)} for c, p in r.terms]
            for r in bq.relations
        ],
    }
    if bq.n is not None:
        doc["n"] = bq.n
    return doc


def serialize(bq):
    return json.dumps(to_dict(bq), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def to_dot(q, name="Q"):
    if isinstance(q, BoundQuiver):
        q = q.quiver
    lines = [f"digraph {json.dumps(name)} {{"]
    for v in q.vertices:
        lines.append(f"  {json.dumps(v)};")
    for a in q.arrows:
        lines.append(f"  {json.dumps(a.source)} -> {json.dumps(a.target)} [label={json.dumps(a.id)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"

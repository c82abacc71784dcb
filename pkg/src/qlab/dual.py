"""Quadratic dual of a bound quiver.

For every vertex pair the dual relations span the orthogonal complement of
``e_j rho e_i`` inside the space of length-2 paths, with the paths taken as
their own dual basis.  The basis we return is the rref basis of that
complement, so the output is canonical.
"""
from .errors import NotQuadratic
from .linalg import orth_complement, span_equal
from .quiver import BoundQuiver, make_relation


def _check_quadratic(bq):
    for r in bq.relations:
        if r.length != 2:
            raise NotQuadratic("relation of length %d" % r.length, str(r))


def quadratic_dual(bq):
    _check_quadratic(bq)
    q = bq.quiver
    rels = []
    for i in q.vertices:
        for j in q.vertices:
            paths, vecs = bq.relation_vectors(i, j, 2)
            if not paths:
                continue
            for w in orth_complement(vecs, len(paths)):
                rels.append(make_relation(q, [(c, p) for c, p in zip(w, paths) if c]))
    return BoundQuiver(q, rels, bq.n)


def relation_span_equal(a, b, length=2):
    """Whether two bound quivers on one quiver have equal relation spans per vertex pair."""
    q = a.quiver
    for i in q.vertices:
        for j in q.vertices:
            paths, va = a.relation_vectors(i, j, length)
            _, vb = b.relation_vectors(i, j, length)
            if paths and not span_equal(va, vb, len(paths)):
                return False
    return True


def dual_involution_check(bq):
    return relation_span_equal(quadratic_dual(quadratic_dual(bq)), bq)

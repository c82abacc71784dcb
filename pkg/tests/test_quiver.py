import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from builders import a3, random_quadratic
from qlab.covers import z_separated
from qlab.errors import NonHomogeneous, ParseError, UnknownVertex, ValidationError
from qlab.linalg import mat_mul
from qlab.mckay import mckay_abelian, relations_sr
from qlab.quiver import (
    BoundQuiver,
    Quiver,
    connected_components,
    normalize_relations,
    parse_bound_quiver,
    serialize,
    to_dot,
)


def test_parse_single_vertex():
    bq = parse_bound_quiver('{"vertices": ["x"], "arrows": [], "relations": []}')
    assert bq.quiver.vertices == ("x",)
    assert bq.relations == ()


def test_parse_a3_relation():
    doc = {
        "vertices": ["1", "2", "3"],
        "arrows": [{"id": "a", "from": "1", "to": "2"}, {"id": "b", "from": "2", "to": "3"}],
        "relations": [[{"coeff": "1", "path": ["b", "a"]}]],
    }
    bq = parse_bound_quiver(json.dumps(doc))
    (rel,) = bq.relations
    assert rel.length == 2
    assert (rel.source, rel.target) == ("1", "3")


def test_parse_rejects_mixed_targets():
    doc = {
        "vertices": ["1", "2", "3"],
        "arrows": [
            {"id": "a", "from": "1", "to": "2"},
            {"id": "b", "from": "2", "to": "3"},
            {"id": "c", "from": "2", "to": "1"},
        ],
        "relations": [[{"coeff": "1", "path": ["b", "a"]}, {"coeff": "1", "path": ["c", "a"]}]],
    }
    with pytest.raises(ValidationError):
        parse_bound_quiver(json.dumps(doc))


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_bound_quiver("{not json")
    with pytest.raises(ParseError):
        parse_bound_quiver('{"arrows": []}')
    with pytest.raises(UnknownVertex):
        parse_bound_quiver('{"vertices": ["1"], "arrows": [{"id": "a", "from": "1", "to": "9"}]}')
    with pytest.raises(ParseError):
        parse_bound_quiver(
            '{"vertices": ["1"], "arrows": [{"id": "a", "from": "1", "to": "1"}],'
            ' "relations": [[{"coeff": "0.5", "path": ["a", "a"]}]]}'
        )
    with pytest.raises(ValidationError):
        parse_bound_quiver(
            '{"vertices": ["1", "2"], "arrows": [{"id": "a", "from": "1", "to": "2"}],'
            ' "relations": [[{"coeff": "1", "path": ["a", "a"]}]]}'
        )


def test_normalize_splits_and_drops():
    q = Quiver(["1", "2", "3", "4"], [("a", "1", "2"), ("b", "2", "3"), ("c", "4", "1"), ("d", "1", "3")])
    ba = q.path("b", "a")
    ac = q.path("a", "c")
    rels = normalize_relations(q, [[(1, ba), (2, ac)]])
    assert len(rels) == 2
    assert normalize_relations(q, [[(1, ba)]])[0].terms == ((Fraction(1), ba),)
    assert normalize_relations(q, [[(1, ba), (-1, ba)]]) == []
    with pytest.raises(NonHomogeneous):
        normalize_relations(q, [[(1, ba), (1, q.path("d"))]])


def test_paths_between():
    q = a3().quiver
    assert [p.arrows for p in q.paths_between("1", "1", 0)] == [()]
    assert len(q.paths_between("1", "3", 2)) == 1
    with pytest.raises(UnknownVertex):
        q.paths_between("1", "9", 1)


def test_paths_in_mckay_quiver_include_triangle():
    q = mckay_abelian((4, 4))
    paths = {p.arrows for p in q.paths_between("0,0", "0,0", 3)}
    # first a along e_1, then b along e_2, then c back along -e
    assert ("c[1,1]", "b[1,0]", "a[0,0]") in paths


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 4))
def test_path_counts_are_adjacency_powers(seed, t):
    q = random_quadratic(seed).quiver
    m = q.adjacency()
    power = [[int(i == j) for j in range(len(m))] for i in range(len(m))]
    for _ in range(t):
        power = mat_mul(power, m)
    for a, i in enumerate(q.vertices):
        for b, j in enumerate(q.vertices):
            assert len(q.paths_between(i, j, t)) == power[a][b]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_serialization_round_trip(seed):
    bq = random_quadratic(seed)
    text = serialize(bq)
    back = parse_bound_quiver(text)
    assert back == bq
    assert serialize(back) == text
    assert text.endswith("\n") and "\r" not in text


def test_relations_sorted_canonically():
    q = a3(relations=False).quiver
    bq = BoundQuiver(q, [[(2, q.path("b", "a"))]], n=1)
    assert json.loads(serialize(bq))["relations"] == [[{"coeff": "2", "path": ["b", "a"]}]]
    assert json.loads(serialize(bq))["n"] == 1


def test_components():
    assert len(connected_components(a3().quiver)) == 1
    w44 = z_separated(relations_sr(4, 4), 0, 6, n=2)
    w66 = z_separated(relations_sr(6, 6), 0, 6, n=2)
    assert len(connected_components(w44.quiver)) == 1
    assert len(connected_components(w66.quiver)) == 3


def test_dot_output_is_stable():
    dot = to_dot(a3())
    assert dot.splitlines()[1:4] == ['  "1";', '  "2";', '  "3";']
    assert '"1" -> "2" [label="a"];' in dot

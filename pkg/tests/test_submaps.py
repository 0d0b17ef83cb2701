import json
import random

import pytest

from cogmine.errors import SameUnit, UnknownUnit
from cogmine.km import KnowledgeMap, load_km, neighbors
from cogmine.submaps import (
    SHAPES, ThinkingMapKind, comparison_triple, search_connective, search_single, to_document, to_dot,
)

from conftest import make_km

K = ThinkingMapKind


def bubble_fixture():
    return make_km([("A", "an attribute", f"d{i}") for i in range(1, 7)])


def test_bubble_has_six_units():
    subs = search_single(bubble_fixture(), "A", 2)
    assert subs[K.BUBBLE].unit_ids == {f"d{i}" for i in range(1, 7)}
    assert len(subs[K.BUBBLE]) == 6
    assert list(subs) == [K.BUBBLE, K.CIRCLE, K.MULTI_FLOW, K.TREE, K.BRACE]


def test_tree_depth():
    km = make_km([("X", "a kind of", "t1"), ("t1", "a kind of", "t2")])
    assert search_single(km, "X", 2)[K.TREE].unit_ids == {"t1", "t2"}
    assert search_single(km, "X", 1)[K.TREE].unit_ids == {"t1"}


def test_tree_is_direction_agnostic():
    km = make_km([("t1", "a type of", "X"), ("t2", "a kind of", "t1")])
    assert search_single(km, "X", 2)[K.TREE].unit_ids == {"t1", "t2"}


def test_isolated_cku_gives_five_empty_submaps():
    km = make_km([], extra=["solo"])
    subs = search_single(km, "solo", 3)
    assert len(subs) == 5
    assert all(s.is_empty for s in subs.values())


def test_single_errors():
    km = bubble_fixture()
    with pytest.raises(UnknownUnit):
        search_single(km, "nope", 1)
    with pytest.raises(ValueError):
        search_single(km, "A", 0)


def test_multiflow_collects_cause_and_result():
    km = make_km([("A", "an initial cause", "c"), ("r", "a result", "A"), ("A", "an attribute", "d")])
    assert search_single(km, "A", 1)[K.MULTI_FLOW].unit_ids == {"c", "r"}


def connective_fixture():
    return make_km([
        ("A", "an association", "c1"), ("P", "an association", "c1"),
        ("A", "an association", "c2"), ("P", "an association", "c2"),
        ("c1", "a part of", "c3"), ("c1", "a definition", "c4"), ("c2", "a definition", "c5"),
    ])


def test_connective_five_units():
    conn = search_connective(connective_fixture(), "A", "P")
    assert conn.unit_ids == {"c1", "c2", "c3", "c4", "c5"}
    assert conn.ckus == ("A", "P")
    conn.check()


def test_connective_without_shared_neighbours_is_empty():
    km = make_km([("A", "an attribute", "x"), ("P", "an attribute", "y")])
    assert search_connective(km, "A", "P").is_empty


def test_connective_shared_unit_with_no_other_neighbour():
    km = make_km([("A", "an attribute", "u"), ("P", "an association", "u"), ("A", "an attribute", "z")])
    assert search_connective(km, "A", "P").unit_ids == {"u"}


def test_connective_errors():
    km = connective_fixture()
    with pytest.raises(SameUnit):
        search_connective(km, "A", "A")
    with pytest.raises(UnknownUnit):
        search_connective(km, "A", "Q")


def test_array_pointer_triple(sample_km):
    desc1, conn, desc2 = comparison_triple(sample_km, "array", "pointer", 2)
    assert (len(desc1), len(conn), len(desc2)) == (6, 5, 5)
    assert conn.unit_ids == {
        "array_pointer", "pointer_array", "array_pointer_structure",
        "array_pointer_definition", "pointer_array_definition",
    }
    assert not (desc1.unit_ids & conn.unit_ids or desc1.unit_ids & desc2.unit_ids or conn.unit_ids & desc2.unit_ids)
    for s in (desc1, conn, desc2):
        s.check()
        assert not s.unit_ids & {"array", "pointer"}


def test_triple_without_overlap_keeps_bubbles():
    km = make_km([("A", "an attribute", "a1"), ("P", "an attribute", "p1"),
                  ("A", "an association", "s"), ("P", "an association", "s")])
    desc1, conn, desc2 = comparison_triple(km, "A", "P")
    single = search_single(km, "A")[K.BUBBLE]
    assert desc1 == single
    assert desc2 == search_single(km, "P")[K.BUBBLE]
    assert conn.unit_ids == {"s"}


def test_unit_attribute_of_both_goes_to_connective_only():
    km = make_km([("A", "an attribute", "both"), ("P", "an attribute", "both"),
                  ("A", "an attribute", "a1"), ("P", "an attribute", "p1")])
    desc1, conn, desc2 = comparison_triple(km, "A", "P")
    assert "both" in conn.unit_ids
    assert desc1.unit_ids == {"a1"} and desc2.unit_ids == {"p1"}
    desc1.check()
    desc2.check()


def test_triple_drops_other_cku_from_description():
    km = make_km([("A", "an attribute", "P"), ("A", "an attribute", "a1"), ("P", "an attribute", "p1")])
    desc1, _, _ = comparison_triple(km, "A", "P")
    assert desc1.unit_ids == {"a1"}


def random_km(rng, n_units=12, n_edges=20):
    labels = ["an attribute", "an association", "a kind of", "a part of", "an initial cause", "a result", "similar to"]
    edges, seen = [], set()
    ids = [f"n{i}" for i in range(n_units)]
    while len(edges) < n_edges:
        h, t = rng.sample(ids, 2)
        label = rng.choice(labels)
        if (h, label, t) not in seen:
            seen.add((h, label, t))
            edges.append((h, label, t))
    return make_km(edges, extra=ids)


def test_single_depth_one_matches_neighbor_scan():
    rng = random.Random(3)
    for _ in range(30):
        km = random_km(rng)
        for cku in km.units:
            subs = search_single(km, cku, 1)
            for kind, (kinds, _) in SHAPES.items():
                assert subs[kind].unit_ids == neighbors(km, cku, kinds, "both")
                subs[kind].check()


def test_results_ignore_edge_order():
    rng = random.Random(11)
    km = random_km(rng, 10, 25)
    edges = list(km.edges)
    rng.shuffle(edges)
    units = list(km.units.values())
    rng.shuffle(units)
    shuffled = KnowledgeMap(km.course_id, units, edges)
    for cku in km.units:
        assert search_single(km, cku, 3) == search_single(shuffled, cku, 3)
    assert search_connective(km, "n0", "n1") == search_connective(shuffled, "n0", "n1")


def test_dot_export(sample_km):
    _, conn, _ = comparison_triple(sample_km, "array", "pointer")
    dot = to_dot(conn, sample_km, "conn")
    assert dot.startswith('digraph "conn" {')
    assert '"array" [label="Array", shape=ellipse, style=filled, fillcolor=yellow];' in dot
    assert dot.count("->") == len(conn.edges)
    assert dot.rstrip().endswith("}")


def test_document_export_loads_as_map(sample_km):
    desc1, _, _ = comparison_triple(sample_km, "array", "pointer")
    doc = to_document(desc1, sample_km)
    assert doc["kind"] == "Bubble" and doc["ckus"] == ["array"]
    sub_km = load_km(json.dumps({k: doc[k] for k in ("course_id", "units", "edges")}))
    assert set(sub_km.units) == desc1.unit_ids | {"array"}
    assert set(sub_km.edges) == set(desc1.edges)

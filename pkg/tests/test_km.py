import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cogmine.errors import Ambiguous, NotFound, ParseError, UnknownRelation, UnknownUnit, ValidationError
from cogmine.km import (
    ALIASES, KnowledgeMap, RelationKind, dump_km, find_cku, load_km, neighbors,
    normalize_relation, validate_document,
)

from conftest import make_km


@pytest.mark.parametrize("label, kind", [
    ("a part of", RelationKind.PART_OF),
    ("A Kind Of", RelationKind.KIND_OF),
    ("a type of", RelationKind.KIND_OF),
    ("  an   attribute ", RelationKind.ATTRIBUTE),
    ("an initial cause", RelationKind.CAUSE),
    ("a result", RelationKind.RESULT),
    ("a part", RelationKind.PART_OF),
    ("similar to", RelationKind.SIMILAR_TO),
])
def test_normalize_relation(label, kind):
    assert normalize_relation(label) is kind


def test_unknown_relation():
    with pytest.raises(UnknownRelation):
        normalize_relation("friend of")


def test_alias_sets_disjoint_and_nonempty():
    seen = set()
    for kind, labels in ALIASES.items():
        assert labels
        for label in labels:
            assert label not in seen
            seen.add(label)
    assert set(ALIASES) == set(RelationKind)


@given(st.sampled_from(list(RelationKind)))
def test_normalize_idempotent_on_canonical(kind):
    assert normalize_relation(kind.value) is kind
    assert normalize_relation(normalize_relation(kind.value)) is kind
    assert normalize_relation(kind.label) is kind


THREE = {
    "course_id": "c",
    "units": [
        {"id": "a", "name": "Array", "content": "", "core_term": "array"},
        {"id": "b", "name": "Array Definition", "content": "x"},
        {"id": "c", "name": "Array Type", "content": "", "core_term": ""},
    ],
    "edges": [
        {"head": "a", "relation": "an attribute", "tail": "b"},
        {"head": "a", "relation": "A  Type Of", "tail": "c"},
    ],
}


def test_load_three_unit_document():
    km = load_km(json.dumps(THREE))
    assert len(km.units) == 3
    assert len(km.edges) == 2
    assert km.edges[1].relation is RelationKind.KIND_OF


def test_load_from_stream_and_bytes():
    assert load_km(io.StringIO(json.dumps(THREE))) == load_km(json.dumps(THREE).encode())


def test_empty_map_is_valid():
    km = load_km('{"course_id": "x", "units": [], "edges": []}')
    assert len(km) == 0 and km.edges == ()


@pytest.mark.parametrize("mutate, fragment", [
    (lambda d: d["edges"].append({"head": "a", "relation": "an attribute", "tail": "zz"}), "not a unit"),
    (lambda d: d["units"].append({"id": "a", "name": "Again"}), "duplicate unit id"),
    (lambda d: d["edges"].append({"head": "a", "relation": "friend of", "tail": "b"}), "unknown relation"),
    (lambda d: d["edges"].append({"head": "b", "relation": "an attribute", "tail": "b"}), "self-loop"),
    (lambda d: d["edges"].append({"head": "a", "relation": "an attribute", "tail": "b"}), "duplicate edge"),
    (lambda d: d["units"].append({"id": "q", "name": "  "}), "non-empty name"),
])
def test_validation_errors(mutate, fragment):
    doc = json.loads(json.dumps(THREE))
    mutate(doc)
    with pytest.raises(ValidationError) as info:
        load_km(json.dumps(doc))
    assert any(fragment in v for v in info.value.violations)


def test_validate_document_collects_all():
    doc = json.loads(json.dumps(THREE))
    doc["edges"] += [{"head": "a", "relation": "friend of", "tail": "b"},
                     {"head": "x", "relation": "an attribute", "tail": "b"}]
    assert len(validate_document(doc)) == 2
    assert validate_document(THREE) == []


def test_malformed_document():
    with pytest.raises(ParseError):
        load_km("{not json")


def test_parallel_edges_of_different_kinds_allowed():
    km = make_km([("a", "an attribute", "b"), ("a", "an association", "b")])
    assert len(km.edges) == 2


def test_find_cku(sample_km):
    assert find_cku(sample_km, "array") == "array"
    assert find_cku(sample_km, "ARRAY  ") == "array"
    assert find_cku(sample_km, "array   pointer") == "array_pointer"
    with pytest.raises(NotFound):
        find_cku(sample_km, "vector")


def test_find_cku_ambiguous():
    km = load_km(json.dumps({"course_id": "c", "units": [
        {"id": "1", "name": "Array"}, {"id": "2", "name": "array"}], "edges": []}))
    with pytest.raises(Ambiguous):
        find_cku(km, "array")


def test_neighbors_examples():
    km = make_km([("A", "an attribute", "d1"), ("A", "an association", "c1")], extra=["lone"])
    assert neighbors(km, "lone", {RelationKind.ATTRIBUTE}, "both") == set()
    assert neighbors(km, "A", {RelationKind.ATTRIBUTE}, "out") == {"d1"}
    assert neighbors(km, "A", {RelationKind.ATTRIBUTE, RelationKind.ASSOCIATION}, "both") == {"d1", "c1"}
    assert neighbors(km, "d1", {RelationKind.ATTRIBUTE}, "out") == set()
    assert neighbors(km, "d1", {RelationKind.ATTRIBUTE}, "in") == {"A"}
    with pytest.raises(UnknownUnit):
        neighbors(km, "nope", {RelationKind.ATTRIBUTE}, "out")


labels = st.sampled_from([label for group in ALIASES.values() for label in group])


@st.composite
def km_documents(draw):
    n = draw(st.integers(0, 8))
    ids = [f"u{i}" for i in range(n)]
    units = [{"id": u, "name": f"Unit {u}", "content": draw(st.sampled_from(["", "text", "x, y"])), "core_term": ""}
             for u in ids]
    edges, seen = [], set()
    if n >= 2:
        raw = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), labels), max_size=15))
        for h, t, label in raw:
            key = (h, normalize_relation(label), t)
            if h != t and key not in seen:
                seen.add(key)
                edges.append({"head": ids[h], "relation": label, "tail": ids[t]})
    return {"course_id": "c", "units": units, "edges": edges}


@given(km_documents())
@settings(max_examples=60)
def test_round_trip(doc):
    km = load_km(json.dumps(doc))
    again = load_km(dump_km(km))
    assert again == km
    assert set(again.units.values()) == set(km.units.values())
    assert set(again.edges) == set(km.edges)


@given(km_documents(), st.sets(st.sampled_from(list(RelationKind)), min_size=1))
@settings(max_examples=60)
def test_neighbors_both_is_union(doc, kinds):
    km = load_km(json.dumps(doc))
    for u in km.units:
        assert neighbors(km, u, kinds, "both") == neighbors(km, u, kinds, "out") | neighbors(km, u, kinds, "in")


def test_map_is_immutable(sample_km):
    with pytest.raises(TypeError):
        sample_km.units["x"] = None
    assert isinstance(sample_km, KnowledgeMap)

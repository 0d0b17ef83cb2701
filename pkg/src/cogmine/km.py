"""Knowledge-map graph model: units, typed semantic edges, loading and lookup."""
from __future__ import annotations

import enum
import io
import json
import re
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import Ambiguous, NotFound, ParseError, UnknownRelation, UnknownUnit, ValidationError

_WS = re.compile(r"\s+")


def normalize_text(text: str) -> str:
    """Lower-case and collapse runs of whitespace; used for labels and core terms."""
    return _WS.sub(" ", text).strip().lower()


class RelationKind(enum.Enum):
    ATTRIBUTE = "Attribute"
    ASSOCIATION = "Association"
    PART_OF = "PartOf"
    KIND_OF = "KindOf"
    CAUSE = "Cause"
    RESULT = "Result"
    DEFINITION = "Definition"
    SIMILAR_TO = "SimilarTo"

    @property
    def label(self) -> str:
        """Preferred surface label, used when serializing."""
        return ALIASES[self][0]

    def __repr__(self):
        return f"RelationKind.{self.name}"


# first entry of each tuple is the label written by the serializer
ALIASES: dict[RelationKind, tuple[str, ...]] = {
    RelationKind.ATTRIBUTE: ("an attribute",),
    RelationKind.ASSOCIATION: ("an association",),
    RelationKind.PART_OF: ("a part of", "a part"),
    RelationKind.KIND_OF: ("a kind of", "a type of"),
    RelationKind.CAUSE: ("an initial cause",),
    RelationKind.RESULT: ("a result",),
    RelationKind.DEFINITION: ("a definition",),
    RelationKind.SIMILAR_TO: ("similar to",),
}

_LOOKUP: dict[str, RelationKind] = {}
for _kind, _labels in ALIASES.items():
    for _label in _labels:
        _LOOKUP[normalize_text(_label)] = _kind
    _LOOKUP[normalize_text(_kind.value)] = _kind


def normalize_relation(label) -> RelationKind:
    if isinstance(label, RelationKind):
        return label
    if not isinstance(label, str):
        raise UnknownRelation(f"relation label must be a string, got {label!r}")
    try:
        return _LOOKUP[normalize_text(label)]
    except KeyError:
        raise UnknownRelation(f"unknown relation label {label!r}") from None


@dataclass(frozen=True)
class KnowledgeUnit:
    id: str
    name: str
    content: str = ""
    core_term: str = ""

    @property
    def term(self) -> str:
        # a unit without an explicit core term is named by it
        return normalize_text(self.core_term or self.name)


@dataclass(frozen=True)
class SemanticEdge:
    head: str
    relation: RelationKind
    tail: str

    def __lt__(self, other):
        return (self.head, self.relation.value, self.tail) < (other.head, other.relation.value, other.tail)

    def other(self, unit: str) -> str:
        return self.tail if unit == self.head else self.head


class KnowledgeMap:
    """Immutable directed multigraph of knowledge units.

    Units keep their load order; equality is unit-set and edge-set equality.
    """

    def __init__(self, course_id: str, units: Iterable[KnowledgeUnit], edges: Iterable[SemanticEdge]):
        self.course_id = course_id
        unit_map = {}
        for u in units:
            if u.id in unit_map:
                raise ValidationError(f"duplicate unit id {u.id!r}")
            unit_map[u.id] = u
        self._units = MappingProxyType(unit_map)
        edge_list = []
        seen = set()
        for e in edges:
            if e in seen:
                raise ValidationError(f"duplicate edge {e.head!r} -{e.relation.value}-> {e.tail!r}")
            for end in (e.head, e.tail):
                if end not in unit_map:
                    raise ValidationError(f"edge endpoint {end!r} is not a unit")
            if e.head == e.tail:
                raise ValidationError(f"self-loop on unit {e.head!r}")
            seen.add(e)
            edge_list.append(e)
        self._edges = tuple(edge_list)
        self._edge_set = frozenset(edge_list)
        out_adj = defaultdict(list)
        in_adj = defaultdict(list)
        for e in edge_list:
            out_adj[e.head].append(e)
            in_adj[e.tail].append(e)
        self._out = dict(out_adj)
        self._in = dict(in_adj)

    @property
    def units(self) -> Mapping[str, KnowledgeUnit]:
        return self._units

    @property
    def edges(self) -> tuple[SemanticEdge, ...]:
        return self._edges

    def __contains__(self, unit_id) -> bool:
        return unit_id in self._units

    def __len__(self):
        return len(self._units)

    def __eq__(self, other):
        if not isinstance(other, KnowledgeMap):
            return NotImplemented
        return (
            self.course_id == other.course_id
            and set(self._units.values()) == set(other._units.values())
            and self._edge_set == other._edge_set
        )

    def __hash__(self):
        return hash((self.course_id, frozenset(self._units.values()), self._edge_set))

    def __repr__(self):
        return f"KnowledgeMap({self.course_id!r}, units={len(self._units)}, edges={len(self._edges)})"

    def unit(self, unit_id: str) -> KnowledgeUnit:
        try:
            return self._units[unit_id]
        except KeyError:
            raise UnknownUnit(f"unknown unit {unit_id!r}") from None

    def name(self, unit_id: str) -> str:
        return self.unit(unit_id).name

    def incident(self, unit_id: str, direction: str = "both") -> list[SemanticEdge]:
        """Edges touching ``unit_id``: outgoing, incoming or both."""
        self.unit(unit_id)
        if direction == "out":
            return list(self._out.get(unit_id, ()))
        if direction == "in":
            return list(self._in.get(unit_id, ()))
        if direction == "both":
            return list(self._out.get(unit_id, ())) + list(self._in.get(unit_id, ()))
        raise ValueError(f"direction must be 'out', 'in' or 'both', got {direction!r}")


def neighbors(km: KnowledgeMap, unit: str, kinds: Iterable[RelationKind] | None = None, direction: str = "both") -> set[str]:
    """Units adjacent to ``unit`` via an edge whose kind is in ``kinds`` (all kinds when None)."""
    allowed = None if kinds is None else {normalize_relation(k) for k in kinds}
    return {
        e.other(unit)
        for e in km.incident(unit, direction)
        if allowed is None or e.relation in allowed
    }


def find_cku(km: KnowledgeMap, core_item: str) -> str:
    """Return the id of the unique unit whose core term matches ``core_item``."""
    if not isinstance(core_item, str) or not core_item.strip():
        raise ValueError("core item must be a non-empty string")
    wanted = normalize_text(core_item)
    hits = [u.id for u in km.units.values() if u.term == wanted]
    if not hits:
        raise NotFound(f"no knowledge unit has core term {core_item.strip()!r}")
    if len(hits) > 1:
        raise Ambiguous(f"core term {core_item.strip()!r} matches units {sorted(hits)}")
    return hits[0]


# -- file format --------------------------------------------------------------

def validate_document(doc) -> list[str]:
    """Collect every violation in a parsed KM document without raising."""
    if not isinstance(doc, dict):
        return ["top level must be an object"]
    problems = []
    if not isinstance(doc.get("course_id", ""), str):
        problems.append("course_id must be a string")
    units = doc.get("units", [])
    edges = doc.get("edges", [])
    if not isinstance(units, list):
        return problems + ["units must be a list"]
    if not isinstance(edges, list):
        return problems + ["edges must be a list"]
    ids = set()
    for i, u in enumerate(units):
        if not isinstance(u, dict):
            problems.append(f"units[{i}]: must be an object")
            continue
        uid = u.get("id")
        if uid is None or isinstance(uid, (bool, dict, list)) or str(uid) == "":
            problems.append(f"units[{i}]: missing id")
            continue
        uid = str(uid)
        if uid in ids:
            problems.append(f"units[{i}]: duplicate unit id {uid!r}")
        ids.add(uid)
        name = u.get("name")
        if not isinstance(name, str) or not name.strip():
            problems.append(f"units[{i}]: unit {uid!r} needs a non-empty name")
        for key in ("content", "core_term"):
            if u.get(key) is not None and not isinstance(u.get(key), str):
                problems.append(f"units[{i}]: {key} must be a string")
    triples = set()
    for i, e in enumerate(edges):
        if not isinstance(e, dict):
            problems.append(f"edges[{i}]: must be an object")
            continue
        head, tail = e.get("head"), e.get("tail")
        head = None if head is None else str(head)
        tail = None if tail is None else str(tail)
        for role, end in (("head", head), ("tail", tail)):
            if end is None:
                problems.append(f"edges[{i}]: missing {role}")
            elif end not in ids:
                problems.append(f"edges[{i}]: {role} {end!r} is not a unit")
        if head is not None and head == tail:
            problems.append(f"edges[{i}]: self-loop on {head!r}")
        try:
            kind = normalize_relation(e.get("relation"))
        except UnknownRelation as exc:
            problems.append(f"edges[{i}]: {exc}")
            continue
        key = (head, kind, tail)
        if key in triples:
            problems.append(f"edges[{i}]: duplicate edge {head!r} -{kind.value}-> {tail!r}")
        triples.add(key)
    return problems


def _parse(document) -> dict:
    if isinstance(document, (str, bytes)):
        text = document
    else:
        text = document.read()
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"knowledge map is not UTF-8: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed knowledge map document: {exc}") from None


def from_dict(doc) -> KnowledgeMap:
    problems = validate_document(doc)
    if problems:
        raise ValidationError(problems)
    units = [
        KnowledgeUnit(
            id=str(u["id"]),
            name=u["name"],
            content=u.get("content") or "",
            core_term=u.get("core_term") or "",
        )
        for u in doc.get("units", [])
    ]
    edges = [
        SemanticEdge(str(e["head"]), normalize_relation(e["relation"]), str(e["tail"]))
        for e in doc.get("edges", [])
    ]
    return KnowledgeMap(doc.get("course_id", ""), units, edges)


def load_km(document) -> KnowledgeMap:
    """Parse and validate a KM document given as text, bytes or a readable stream."""
    return from_dict(_parse(document))


def load_km_file(path) -> KnowledgeMap:
    return load_km(Path(path).read_bytes())


def to_dict(km: KnowledgeMap) -> dict:
    return {
        "course_id": km.course_id,
        "units": [
            {"id": u.id, "name": u.name, "content": u.content, "core_term": u.core_term}
            for u in km.units.values()
        ],
        "edges": [
            {"head": e.head, "relation": e.relation.label, "tail": e.tail} for e in km.edges
        ],
    }


def dump_km(km: KnowledgeMap, stream=None) -> str | None:
    text = json.dumps(to_dict(km), indent=2, ensure_ascii=False) + "\n"
    if stream is None:
        return text
    stream.write(text)
    return None


def builtin_map(name: str = "array_pointer") -> KnowledgeMap:
    """Load a knowledge map bundled with the package (``array_pointer``)."""
    from importlib import resources

    data = resources.files("cogmine").joinpath("data", f"{name}.json").read_bytes()
    return load_km(io.BytesIO(data))

"""Thinking-Map-shaped submap search around one or two core knowledge units."""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass

from .errors import SameUnit
from .km import KnowledgeMap, RelationKind, neighbors


class ThinkingMapKind(enum.Enum):
    BUBBLE = "Bubble"
    CIRCLE = "Circle"
    MULTI_FLOW = "MultiFlow"
    TREE = "Tree"
    BRACE = "Brace"
    CONNECTIVE = "Connective"


# relation kinds and whether growth is limited to one hop
SHAPES: dict[ThinkingMapKind, tuple[frozenset, bool]] = {
    ThinkingMapKind.BUBBLE: (frozenset({RelationKind.ATTRIBUTE}), True),
    ThinkingMapKind.CIRCLE: (frozenset({RelationKind.ASSOCIATION}), True),
    ThinkingMapKind.MULTI_FLOW: (frozenset({RelationKind.CAUSE, RelationKind.RESULT}), True),
    ThinkingMapKind.TREE: (frozenset({RelationKind.KIND_OF}), False),
    ThinkingMapKind.BRACE: (frozenset({RelationKind.PART_OF}), False),
}

SINGLE_KINDS = tuple(SHAPES)


@dataclass(frozen=True)
class Submap:
    kind: ThinkingMapKind
    ckus: tuple[str, ...]
    unit_ids: frozenset
    edges: frozenset

    def __len__(self):
        return len(self.unit_ids)

    @property
    def is_empty(self) -> bool:
        return not self.unit_ids

    @property
    def key(self) -> str:
        return f"{self.kind.value}({','.join(self.ckus)})"

    def check(self) -> None:
        """Assert the structural invariants; raises AssertionError on violation."""
        assert 1 <= len(self.ckus) <= 2
        assert not (self.unit_ids & set(self.ckus))
        ends = set()
        for e in self.edges:
            ends.add(e.head)
            ends.add(e.tail)
        assert self.unit_ids <= ends
        if SHAPES.get(self.kind, (None, False))[1]:
            cku = self.ckus[0]
            for u in self.unit_ids:
                assert any(cku in (e.head, e.tail) and u in (e.head, e.tail) for e in self.edges)


def _induced_edges(km: KnowledgeMap, nodes: set, kinds=None) -> frozenset:
    return frozenset(
        e for e in km.edges
        if e.head in nodes and e.tail in nodes and (kinds is None or e.relation in kinds)
    )


def _grow(km: KnowledgeMap, cku: str, kinds: frozenset, depth: int) -> set:
    reached = {cku: 0}
    queue = deque([cku])
    while queue:
        u = queue.popleft()
        if reached[u] == depth:
            continue
        for v in sorted(neighbors(km, u, kinds, "both")):
            if v not in reached:
                reached[v] = reached[u] + 1
                queue.append(v)
    reached.pop(cku)
    return set(reached)


def _shape(km: KnowledgeMap, kind: ThinkingMapKind, cku: str, k_depth: int) -> Submap:
    kinds, one_hop = SHAPES[kind]
    if one_hop:
        units = neighbors(km, cku, kinds, "both") - {cku}
        edges = frozenset(
            e for e in km.incident(cku, "both") if e.relation in kinds and e.other(cku) in units
        )
    else:
        units = _grow(km, cku, kinds, k_depth)
        edges = _induced_edges(km, units | {cku}, kinds)
    return Submap(kind, (cku,), frozenset(units), edges)


def search_single(km: KnowledgeMap, cku: str, k_depth: int = 2) -> dict[ThinkingMapKind, Submap]:
    """The five single-cku submaps, keyed by kind in a fixed order.

    Bubble, Circle and Multi-Flow stay one hop from the cku; Tree and Brace grow
    breadth-first up to ``k_depth`` hops. Edge direction is ignored.
    """
    km.unit(cku)
    if int(k_depth) != k_depth or k_depth < 1:
        raise ValueError(f"k_depth must be a positive integer, got {k_depth!r}")
    return {kind: _shape(km, kind, cku, int(k_depth)) for kind in SINGLE_KINDS}


def search_connective(km: KnowledgeMap, cku1: str, cku2: str) -> Submap:
    """Shared one-hop neighbours of both ckus plus those neighbours' own neighbours."""
    km.unit(cku1)
    km.unit(cku2)
    if cku1 == cku2:
        raise SameUnit(f"connective submap needs two distinct ckus, got {cku1!r} twice")
    ends = {cku1, cku2}
    shared = (neighbors(km, cku1) & neighbors(km, cku2)) - ends
    units = set(shared)
    for u in shared:
        units |= neighbors(km, u)
    units -= ends
    return Submap(ThinkingMapKind.CONNECTIVE, (cku1, cku2), frozenset(units), _induced_edges(km, units | ends))


def _without(km: KnowledgeMap, sub: Submap, drop: set) -> Submap:
    units = sub.unit_ids - drop
    cku = sub.ckus[0]
    edges = frozenset(e for e in sub.edges if e.other(cku) in units and cku in (e.head, e.tail))
    return Submap(sub.kind, sub.ckus, units, edges)


def comparison_triple(km: KnowledgeMap, cku1: str, cku2: str, k_depth: int = 2) -> tuple[Submap, Submap, Submap]:
    """(desc1, conn, desc2) with pairwise-disjoint unit sets; connective units win overlaps."""
    conn = search_connective(km, cku1, cku2)
    desc1 = search_single(km, cku1, k_depth)[ThinkingMapKind.BUBBLE]
    desc2 = search_single(km, cku2, k_depth)[ThinkingMapKind.BUBBLE]
    taken = set(conn.unit_ids) | {cku1, cku2}
    desc1 = _without(km, desc1, taken)
    desc2 = _without(km, desc2, taken | desc1.unit_ids)
    return desc1, conn, desc2


# -- export -------------------------------------------------------------------

def _quote(text: str) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(submap: Submap, km: KnowledgeMap, name: str | None = None) -> str:
    lines = [f"digraph {_quote(name or submap.key)} {{", "  rankdir=LR;"]
    for cku in submap.ckus:
        lines.append(f"  {_quote(cku)} [label={_quote(km.name(cku))}, shape=ellipse, style=filled, fillcolor=yellow];")
    for u in sorted(submap.unit_ids):
        lines.append(f"  {_quote(u)} [label={_quote(km.name(u))}, shape=box];")
    for e in sorted(submap.edges):
        lines.append(f"  {_quote(e.head)} -> {_quote(e.tail)} [label={_quote(e.relation.label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_document(submap: Submap, km: KnowledgeMap) -> dict:
    """KM-format document of the submap (ckus included as units) plus kind and ckus."""
    ids = list(submap.ckus) + sorted(submap.unit_ids)
    return {
        "course_id": km.course_id,
        "kind": submap.kind.value,
        "ckus": list(submap.ckus),
        "units": [
            {"id": u.id, "name": u.name, "content": u.content, "core_term": u.core_term}
            for u in (km.unit(i) for i in ids)
        ],
        "edges": [
            {"head": e.head, "relation": e.relation.label, "tail": e.tail} for e in sorted(submap.edges)
        ],
    }

"""Strategy labels, metacognitive strategy sequences and population statistics."""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .codec import decode_ccm
from .errors import NonMonotonePattern
from .submaps import Submap, ThinkingMapKind


class StrategyKind(enum.Enum):
    DESCRIPTION = "Description"
    COMPARISON = "Comparison"
    CLASSIFICATION = "Classification"
    WHOLE_PART = "WholePart"
    CAUSE_EFFECT = "CauseEffect"
    CONTEXT = "Context"


STRATEGY_OF = {
    ThinkingMapKind.BUBBLE: StrategyKind.DESCRIPTION,
    ThinkingMapKind.CONNECTIVE: StrategyKind.COMPARISON,
    ThinkingMapKind.TREE: StrategyKind.CLASSIFICATION,
    ThinkingMapKind.BRACE: StrategyKind.WHOLE_PART,
    ThinkingMapKind.MULTI_FLOW: StrategyKind.CAUSE_EFFECT,
    ThinkingMapKind.CIRCLE: StrategyKind.CONTEXT,
}


@dataclass(frozen=True)
class StrategyLabel:
    kind: StrategyKind
    ckus: tuple[str, ...] = ()

    def abstract(self) -> "StrategyLabel":
        return StrategyLabel(self.kind)

    def __str__(self):
        if not self.ckus:
            return self.kind.value
        return f"{self.kind.value}({', '.join(self.ckus)})"


def label_for(submap: Submap, km=None) -> StrategyLabel:
    names = tuple(km.name(c) for c in submap.ckus) if km is not None else tuple(submap.ckus)
    return StrategyLabel(STRATEGY_OF[submap.kind], names)


@dataclass(frozen=True)
class MetacognitiveStrategySequence:
    labels: tuple[StrategyLabel, ...] = ()

    @property
    def name(self) -> str:
        return "-".join(label.kind.value for label in self.labels)

    def __len__(self):
        return len(self.labels)

    def __str__(self):
        return self.name


def abstract_learner(instances) -> MetacognitiveStrategySequence:
    return MetacognitiveStrategySequence(tuple(i.label.abstract() for i in instances))


def _kind(entry) -> StrategyKind:
    if isinstance(entry, StrategyKind):
        return entry
    if isinstance(entry, ThinkingMapKind):
        return STRATEGY_OF[entry]
    if isinstance(entry, Submap):
        return STRATEGY_OF[entry.kind]
    if isinstance(entry, StrategyLabel):
        return entry.kind
    raise TypeError(f"cannot derive a strategy label from {entry!r}")


def decode_and_label(pattern, arity: int, submap_order: Sequence) -> MetacognitiveStrategySequence:
    """Abstract label sequence read off the state changes of a mined code pattern.

    Between consecutive decoded vectors, each component whose state rose emits
    its label, but only at the start of a run of consecutive rises of that same
    component. A component that falls raises NonMonotonePattern.
    """
    symbols = getattr(pattern, "pattern", pattern)
    if len(submap_order) != arity:
        raise ValueError(f"submap_order has {len(submap_order)} entries for arity {arity}")
    kinds = [_kind(entry) for entry in submap_order]
    states = [decode_ccm(code, arity) for code in symbols]
    labels = []
    previous_risers: set[int] = set()
    for before, after in zip(states, states[1:]):
        risers = set()
        for j in range(arity):
            if after[j] < before[j]:
                raise NonMonotonePattern(f"component {j + 1} falls from {before[j]} to {after[j]}")
            if after[j] > before[j]:
                risers.add(j)
        for j in sorted(risers - previous_risers):
            labels.append(StrategyLabel(kinds[j]))
        previous_risers = risers
    return MetacognitiveStrategySequence(tuple(labels))


@dataclass
class PatternReport:
    total_learners: int
    patterns: list[dict] = field(default_factory=list)
    unmatched_count: int = 0

    @property
    def matched_share(self) -> Fraction:
        if not self.total_learners:
            return Fraction(0)
        return Fraction(sum(p["count"] for p in self.patterns), self.total_learners)

    def share(self, name: str) -> Fraction:
        for p in self.patterns:
            if p["name"] == name:
                return p["share"]
        return Fraction(0)


def population_report(sequences: Iterable[MetacognitiveStrategySequence], arity: int) -> PatternReport:
    """Group learners by their full strategy sequence; shorter sequences are unmatched.

    A sequence is a full pattern when it names all ``arity`` tracked submaps.
    """
    sequences = list(sequences)
    total = len(sequences)
    full = Counter(s.name for s in sequences if len(s) == arity)
    labels = {s.name: [lab.kind.value for lab in s.labels] for s in sequences if len(s) == arity}
    patterns = [
        {"name": name, "labels": labels[name], "count": count, "share": Fraction(count, total)}
        for name, count in sorted(full.items(), key=lambda item: (-item[1], item[0]))
    ]
    return PatternReport(total, patterns, total - sum(full.values()))


def percent(share: Fraction, digits: int = 1) -> str:
    value = round(Fraction(share) * 100 * 10**digits)
    whole, frac = divmod(value, 10**digits)
    return f"{whole}.{frac:0{digits}d}%" if digits else f"{whole}%"


def render_table(report) -> str:
    """Plain-text table: pattern, percentage, and the matched sum on the middle row."""
    if isinstance(report, PatternReport):
        rows = [(p["name"], p["share"]) for p in report.patterns]
        total = report.matched_share
    else:
        rows = [(p["name"], as_share(p["count"], report["total_learners"])) for p in report["patterns"]]
        total = as_share(sum(p["count"] for p in report["patterns"]), report["total_learners"])
    width = max([len("Metacognitive Strategy Pattern")] + [len(name) for name, _ in rows])
    lines = [f"{'Metacognitive Strategy Pattern':<{width}}  {'Percentage':>10}  {'Sum':>6}"]
    lines.append("-" * len(lines[0]))
    middle = (len(rows) - 1) // 2 if rows else -1
    for i, (name, share) in enumerate(rows):
        tail = percent(total) if i == middle else ""
        lines.append(f"{name:<{width}}  {percent(share):>10}  {tail:>6}")
    if not rows:
        lines.append("(no complete strategy patterns)")
    return "\n".join(lines) + "\n"


def as_share(count: int, total: int) -> Fraction:
    return Fraction(count, total) if total else Fraction(0)

"""Coverage-based cognition control measures and threshold strategy recognition."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from . import kernels
from .errors import EmptySubmap
from .submaps import Submap, ThinkingMapKind

if TYPE_CHECKING:
    from .abstraction import StrategyLabel

DEFAULT_THRESHOLD = Fraction(3, 5)


def as_fraction(value) -> Fraction:
    """Exact rational from an int, Fraction, decimal string, "p/q" string or float.

    Floats go through their shortest repr so 0.6 becomes 3/5, not the binary value.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def coverage(submap: Submap, visited: Iterable[str]) -> Fraction:
    if not submap.unit_ids:
        raise EmptySubmap(f"submap {submap.key} has no units")
    return Fraction(len(submap.unit_ids & set(visited)), len(submap.unit_ids))


def prune_irrelevant(submaps: Sequence[Submap], visits: Iterable[str], keep: Iterable[Submap] = ()) -> list[Submap]:
    """Drop empty submaps and submaps none of ``visits`` touch.

    Submaps in ``keep`` (the comparison triple) survive at zero coverage but are
    still dropped when empty.
    """
    seen = set(visits)
    keep = set(keep)
    return [s for s in submaps if s.unit_ids and (s in keep or s.unit_ids & seen)]


@dataclass(frozen=True)
class CognitionControlSequence:
    submaps: tuple[Submap, ...]
    ccms: tuple[tuple[Fraction, ...], ...]

    def __len__(self):
        return len(self.ccms)

    @property
    def final(self) -> tuple[Fraction, ...]:
        if self.ccms:
            return self.ccms[-1]
        return tuple(Fraction(0) for _ in self.submaps)


def ccm_sequence(las, submaps: Sequence[Submap]) -> CognitionControlSequence:
    """One CCM per visit, over the cumulative set of distinct units visited so far."""
    visits = list(getattr(las, "visits", las))
    submaps = tuple(submaps)
    for s in submaps:
        if not s.unit_ids:
            raise EmptySubmap(f"submap {s.key} has no units")
    index = {}
    for s in submaps:
        for u in sorted(s.unit_ids):
            index.setdefault(u, len(index))
    membership = np.zeros((len(submaps), max(len(index), 1)), dtype=bool)
    for i, s in enumerate(submaps):
        for u in s.unit_ids:
            membership[i, index[u]] = True
    coded = np.array([index.get(v, -1) for v in visits], dtype=np.int64)
    hits = kernels.cumulative_hits(coded, membership)
    sizes = [len(s.unit_ids) for s in submaps]
    ccms = tuple(
        tuple(Fraction(int(n), d) for n, d in zip(row, sizes)) for row in hits.tolist()
    )
    return CognitionControlSequence(submaps, ccms)


# -- strategy recognition -----------------------------------------------------

@dataclass(frozen=True)
class CognitiveStrategyInstance:
    label: StrategyLabel
    submap: Submap
    position: int
    crossing_index: int
    final_coverage: Fraction


def recognize_strategies(s_cog: CognitionControlSequence, threshold=DEFAULT_THRESHOLD, km=None) -> list[CognitiveStrategyInstance]:
    """Submaps whose coverage reaches ``threshold``, in the order they first got there.

    Ties on the crossing event keep submap order. Labels carry cku names when
    ``km`` is given, otherwise cku ids.
    """
    from .abstraction import label_for

    threshold = as_fraction(threshold)
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    found = []
    for pos, sub in enumerate(s_cog.submaps):
        for t, ccm in enumerate(s_cog.ccms):
            if ccm[pos] >= threshold:
                found.append((t, pos, sub))
                break
    found.sort(key=lambda item: (item[0], item[1]))
    final = s_cog.final
    return [
        CognitiveStrategyInstance(label_for(sub, km), sub, pos, t, final[pos])
        for t, pos, sub in found
    ]


# -- curve export -------------------------------------------------------------

def decimal6(x: Fraction) -> str:
    """Exact rational rendered with six fractional digits (round half to even)."""
    scaled = round(Fraction(x) * 10**6)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**6)
    return f"{sign}{whole}.{frac:06d}"


def curve_columns(submaps: Sequence[Submap]) -> list[str]:
    kinds = [s.kind for s in submaps]
    if kinds == [ThinkingMapKind.BUBBLE, ThinkingMapKind.CONNECTIVE, ThinkingMapKind.BUBBLE]:
        return ["desc1", "conn", "desc2"]
    return [s.kind.value.lower() for s in submaps]


def write_curve_csv(s_cog: CognitionControlSequence, stream) -> None:
    """Per-event coverage table; ``event_index`` counts visits from 1."""
    stream.write(",".join(["event_index"] + curve_columns(s_cog.submaps)) + "\n")
    for t, ccm in enumerate(s_cog.ccms, start=1):
        stream.write(",".join([str(t)] + [decimal6(x) for x in ccm]) + "\n")

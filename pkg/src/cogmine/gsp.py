"""Generalized Sequential Patterns over sequences of single items.

Each sequence element is one symbol, so GSP's itemset machinery reduces to
ordered, possibly gapped subsequences. Support is containment-based: a
database sequence counts at most once per pattern.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .errors import EmptyDatabase, InstanceTooLarge, InvalidMinsup
from .metrics import as_fraction

DEFAULT_MINSUP = Fraction(1, 4)


@dataclass(frozen=True)
class FrequentPattern:
    pattern: tuple
    support_count: int
    support_ratio: Fraction

    def as_dict(self) -> dict:
        return {
            "pattern": list(self.pattern),
            "support_count": self.support_count,
            "support_ratio": float(self.support_ratio),
        }


def _sequences(db) -> list[tuple]:
    if isinstance(db, Mapping):
        return [tuple(db[k]) for k in db]
    return [tuple(s) for s in db]


def _check(db, minsup) -> tuple[list[tuple], Fraction]:
    seqs = _sequences(db)
    if not seqs:
        raise EmptyDatabase("sequence database is empty")
    try:
        minsup = as_fraction(minsup)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InvalidMinsup(f"minsup must be a rational in (0, 1], got {minsup!r}") from None
    if not 0 < minsup <= 1:
        raise InvalidMinsup(f"minsup must be in (0, 1], got {minsup}")
    return seqs, minsup


def _min_count(n: int, minsup: Fraction) -> int:
    return math.ceil(minsup * n)


def sort_patterns(patterns: list[FrequentPattern]) -> list[FrequentPattern]:
    """Longest first, then highest support, then lexicographic."""
    return sorted(patterns, key=lambda p: (-len(p.pattern), -p.support_count, p.pattern))


def _candidates(frequent: list[tuple], frequent_set: set, k: int) -> list[tuple]:
    if k == 2:
        items = [p[0] for p in frequent]
        return [(a, b) for a in items for b in items]
    by_prefix: dict[tuple, list] = {}
    for p in frequent:
        by_prefix.setdefault(p[:-1], []).append(p[-1])
    out = []
    for p in frequent:
        for last in by_prefix.get(p[1:], ()):
            cand = p + (last,)
            # apriori prune: every (k-1)-subsequence must be frequent
            if all(cand[:i] + cand[i + 1:] in frequent_set for i in range(1, k - 1)):
                out.append(cand)
    return out


def gsp(db, minsup=DEFAULT_MINSUP, max_len: int | None = None) -> list[FrequentPattern]:
    """All patterns whose support ratio is at least ``minsup``, by levelwise search.

    ``db`` is a list of sequences or a mapping from sequence id to sequence.
    Symbols must be mutually comparable and hashable.
    """
    seqs, minsup = _check(db, minsup)
    n = len(seqs)
    need = _min_count(n, minsup)
    alphabet = sorted({x for s in seqs for x in s})
    code = {x: i for i, x in enumerate(alphabet)}
    matrix, lengths = kernels.pad_sequences([[code[x] for x in s] for s in seqs])

    counts = Counter(x for s in seqs for x in set(s))
    level = [((x,), counts[x]) for x in alphabet if counts[x] >= need]
    result = [FrequentPattern(p, c, Fraction(c, n)) for p, c in level]
    k = 2
    while level and (max_len is None or k <= max_len):
        frequent = [p for p, _ in level]
        cands = _candidates(frequent, set(frequent), k)
        if not cands:
            break
        coded = np.array([[code[x] for x in c] for c in cands], dtype=np.int64)
        support = kernels.count_support(matrix, lengths, coded)
        level = [(c, int(s)) for c, s in zip(cands, support) if s >= need]
        result.extend(FrequentPattern(p, c, Fraction(c, n)) for p, c in level)
        k += 1
    return sort_patterns(result)


def brute_force_frequent(db, minsup=DEFAULT_MINSUP, max_len: int | None = None,
                         budget: int = 2_000_000) -> list[FrequentPattern]:
    """Exhaustive reference miner: enumerate every subsequence of every sequence.

    Meant as a test oracle for small databases only.
    """
    seqs, minsup = _check(db, minsup)
    if sum(len(s) for s in seqs) > 40:
        raise InstanceTooLarge("brute force is limited to 40 symbols in total")
    cap = lambda s: len(s) if max_len is None else min(max_len, len(s))  # noqa: E731
    work = sum(math.comb(len(s), r) for s in seqs for r in range(1, cap(s) + 1))
    if work > budget:
        raise InstanceTooLarge(f"brute force would enumerate {work} subsequences")
    n = len(seqs)
    need = _min_count(n, minsup)
    support: Counter = Counter()
    for s in seqs:
        subs = set()
        for r in range(1, cap(s) + 1):
            for idx in combinations(range(len(s)), r):
                subs.add(tuple(s[i] for i in idx))
        support.update(subs)
    return sort_patterns([FrequentPattern(p, c, Fraction(c, n)) for p, c in support.items() if c >= need])


def maximal(patterns: Sequence[FrequentPattern]) -> list[FrequentPattern]:
    """Patterns not contained in a longer pattern of the same list."""
    def contains(big, small):
        it = iter(big)
        return all(any(x == y for y in it) for x in small)

    return [
        p for p in patterns
        if not any(len(q.pattern) > len(p.pattern) and contains(q.pattern, p.pattern) for q in patterns)
    ]

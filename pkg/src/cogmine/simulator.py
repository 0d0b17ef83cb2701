"""Deterministic synthetic learner logs over a comparison question.

Randomness comes from numpy's PCG64 generator. Learner ``i`` draws from
``default_rng([seed, i])`` and the archetype shuffle from ``default_rng([seed])``,
so a learner's events do not depend on how many learners are generated after it.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .errors import ConfigError, EmptySubmapFixture
from .km import KnowledgeMap, find_cku, neighbors
from .logs import LearningEvent
from .metrics import as_fraction
from .submaps import comparison_triple

BASE_TIMESTAMP = 1_600_000_000_000


class LearnerArchetype(enum.Enum):
    DCD = "DCD"
    CDD = "CDD"
    DDC = "DDC"
    NOISE = "NOISE"

    @property
    def stage_order(self) -> tuple[int, ...] | None:
        """Indices into (desc1, conn, desc2); None for the random walker."""
        return {
            LearnerArchetype.DCD: (0, 1, 2),
            LearnerArchetype.CDD: (1, 0, 2),
            LearnerArchetype.DDC: (0, 2, 1),
        }.get(self)

    @property
    def pattern_name(self) -> str | None:
        names = ("Description", "Comparison", "Description")
        order = self.stage_order
        return None if order is None else "-".join(names[i] for i in order)


@dataclass
class SimConfig:
    km: KnowledgeMap
    core_items: tuple[str, str]
    learner_count: int = 100
    mix: Mapping = field(default_factory=lambda: {LearnerArchetype.DCD: 1})
    seed: int = 0
    interleave_prob: float = 0.0
    completion: Fraction = Fraction(1)
    question_id: str = "q1"
    k_depth: int = 2

    def __post_init__(self):
        self.core_items = tuple(self.core_items)
        if len(self.core_items) != 2:
            raise ConfigError("the simulator needs exactly two core items")
        if self.learner_count < 0:
            raise ConfigError("learner_count must be non-negative")
        self.mix = {LearnerArchetype(k) if not isinstance(k, LearnerArchetype) else k: as_fraction(v)
                    for k, v in self.mix.items()}
        if any(v < 0 for v in self.mix.values()):
            raise ConfigError("mix fractions must be non-negative")
        if sum(self.mix.values()) != 1:
            raise ConfigError(f"mix fractions must sum to 1, got {sum(self.mix.values())}")
        if not 0 <= self.interleave_prob <= 1:
            raise ConfigError("interleave_prob must be in [0, 1]")
        self.completion = as_fraction(self.completion)
        if not 0 < self.completion <= 1:
            raise ConfigError("completion must be in (0, 1]")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")


def parse_mix(text: str) -> dict[LearnerArchetype, Fraction]:
    """``"DCD=0.313,CDD=0.31,DDC=0.316,NOISE=0.061"`` to exact fractions."""
    mix = {}
    for part in text.split(","):
        if not part.strip():
            continue
        name, _, value = part.partition("=")
        try:
            mix[LearnerArchetype(name.strip().upper())] = as_fraction(value)
        except ValueError:
            raise ConfigError(f"bad mix entry {part.strip()!r}") from None
    return mix


def allocate(mix: Mapping[LearnerArchetype, Fraction], count: int) -> dict[LearnerArchetype, int]:
    """Largest-remainder apportionment of ``count`` learners over the mix."""
    order = [a for a in LearnerArchetype if a in mix]
    quotas = {a: mix[a] * count for a in order}
    counts = {a: math.floor(q) for a, q in quotas.items()}
    left = count - sum(counts.values())
    by_remainder = sorted(order, key=lambda a: (-(quotas[a] - counts[a]), order.index(a)))
    for a in by_remainder[:left]:
        counts[a] += 1
    return counts


def assign_archetypes(config: SimConfig) -> list[LearnerArchetype]:
    counts = allocate(config.mix, config.learner_count)
    pool = [a for a in LearnerArchetype for _ in range(counts.get(a, 0))]
    rng = np.random.default_rng([config.seed])
    return [pool[i] for i in rng.permutation(len(pool))]


def user_id(index: int) -> str:
    return f"u{index + 1:04d}"


def _triple_units(config: SimConfig):
    km = config.km
    ckus = [find_cku(km, item) for item in config.core_items]
    triple = comparison_triple(km, ckus[0], ckus[1], config.k_depth)
    for sub in triple:
        if not sub.unit_ids:
            raise EmptySubmapFixture(f"{sub.key} is empty; the simulator needs three non-empty submaps")
    return [sorted(sub.unit_ids) for sub in triple]


def _walk(km: KnowledgeMap, rng, steps: int) -> list[str]:
    ids = list(km.units)
    current = ids[rng.integers(len(ids))]
    path = [current]
    while len(path) < steps:
        options = sorted(neighbors(km, current))
        if options and rng.random() < 0.85:
            current = options[rng.integers(len(options))]
        else:
            current = ids[rng.integers(len(ids))]
        path.append(current)
    return path


def _visits(config: SimConfig, archetype: LearnerArchetype, stages, rng) -> list[str]:
    km = config.km
    if archetype is LearnerArchetype.NOISE:
        return _walk(km, rng, sum(len(s) for s in stages))
    all_ids = list(km.units)
    out = []
    for stage in archetype.stage_order:
        units = stages[stage]
        quota = math.ceil(config.completion * len(units))
        chosen = [units[i] for i in rng.permutation(len(units))[:quota]]
        elsewhere = [u for u in all_ids if u not in set(units)]
        for unit in chosen:
            if config.interleave_prob and rng.random() < config.interleave_prob:
                out.append(elsewhere[rng.integers(len(elsewhere))])
            out.append(unit)
    return out


def simulate(config: SimConfig) -> list[LearningEvent]:
    """Events for every learner, sorted by learner then per-learner sequence number.

    Each learner logs in, visits units, and submits; login and submit are the
    non-learning actions the log pipeline is expected to filter out.
    """
    stages = _triple_units(config)
    archetypes = assign_archetypes(config)
    km = config.km
    events = []
    next_id = 1
    for index, archetype in enumerate(archetypes):
        rng = np.random.default_rng([config.seed, index])
        uid = user_id(index)
        stamp = BASE_TIMESTAMP + index * 10_000_000
        steps = [("login", "", "")]
        steps += [("visit", unit, km.name(unit)) for unit in _visits(config, archetype, stages, rng)]
        steps.append(("submit", "", "answer"))
        for action, obj, label in steps:
            stamp += int(rng.integers(1_000, 60_000))
            events.append(LearningEvent(
                id=str(next_id), user_id=uid, question_id=config.question_id,
                action_type=action, object_id=obj, timestamp=stamp,
                user_name=f"learner-{index + 1:04d}", action_object=label,
            ))
            next_id += 1
    return events


def ground_truth(config: SimConfig) -> dict[str, LearnerArchetype]:
    return {user_id(i): a for i, a in enumerate(assign_archetypes(config))}

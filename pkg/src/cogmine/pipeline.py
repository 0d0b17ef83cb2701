"""End-to-end strategy mining: knowledge map + events in, pattern report out."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import abstraction, codec, metrics
from .gsp import DEFAULT_MINSUP, FrequentPattern, gsp
from .abstraction import MetacognitiveStrategySequence, PatternReport
from .errors import ConfigError, EmptyData, EmptySubmap
from .km import KnowledgeMap, find_cku
from .logs import LearningActivitySequence, build_las, filter_events
from .metrics import CognitionControlSequence, as_fraction
from .submaps import Submap, comparison_triple, search_single, to_document, to_dot


@dataclass
class PipelineConfig:
    km: str | None = None
    logs: tuple[str, ...] = ()
    core: tuple[str, ...] = ()
    k_depth: int = 2
    threshold: Fraction = metrics.DEFAULT_THRESHOLD
    minsup: Fraction = DEFAULT_MINSUP
    out: str | None = None
    format: str | None = None
    question: str | None = None

    def __post_init__(self):
        self.core = tuple(self.core)
        self.logs = tuple(self.logs)
        try:
            self.threshold = as_fraction(self.threshold)
            self.minsup = as_fraction(self.minsup)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"threshold and minsup must be rationals: {exc}") from None
        self.validate()

    def validate(self):
        if not 0 < self.threshold <= 1:
            raise ConfigError(f"threshold must be in (0, 1], got {float(self.threshold):g}")
        if not 0 < self.minsup <= 1:
            raise ConfigError(f"minsup must be in (0, 1], got {float(self.minsup):g}")
        if self.core and not 1 <= len(self.core) <= 2:
            raise ConfigError(f"give one or two core items, got {len(self.core)}")
        if isinstance(self.k_depth, bool) or int(self.k_depth) != self.k_depth or self.k_depth < 1:
            raise ConfigError(f"k_depth must be a positive integer, got {self.k_depth!r}")
        self.k_depth = int(self.k_depth)
        if self.format not in (None, "csv", "jsonl"):
            raise ConfigError(f"format must be csv or jsonl, got {self.format!r}")


@dataclass
class MiningResult:
    question_id: str
    km: KnowledgeMap
    ckus: tuple[str, ...]
    submaps: tuple[Submap, ...]
    sequences: list[LearningActivitySequence]
    s_cogs: dict[str, CognitionControlSequence]
    learner_patterns: dict[str, MetacognitiveStrategySequence]
    encoded: dict[str, list[int]]
    report: PatternReport
    mined: list[FrequentPattern]
    mined_labels: list[MetacognitiveStrategySequence]
    threshold: Fraction
    minsup: Fraction
    k_depth: int
    removed_events: int = 0
    unresolved_events: int = 0

    @property
    def submap_names(self) -> list[str]:
        return metrics.curve_columns(self.submaps)


def tracked_submaps(km: KnowledgeMap, ckus, k_depth: int) -> tuple[list[Submap], list[Submap]]:
    """Candidate submaps for the question and the subset that must never be pruned."""
    if len(ckus) == 2:
        triple = list(comparison_triple(km, ckus[0], ckus[1], k_depth))
        for sub in triple:
            if not sub.unit_ids:
                raise EmptySubmap(f"{sub.key} has no units; the comparison needs all three submaps")
        return triple, triple
    return list(search_single(km, ckus[0], k_depth).values()), []


def _pick_question(events, question_id):
    if question_id is not None:
        return question_id
    questions = sorted({e.question_id for e in events})
    if len(questions) != 1:
        raise ConfigError(f"logs hold {len(questions)} questions {questions}; choose one with --question")
    return questions[0]


def mine(km: KnowledgeMap, events, core_items, question_id=None, k_depth: int = 2,
         threshold=metrics.DEFAULT_THRESHOLD, minsup=DEFAULT_MINSUP) -> MiningResult:
    threshold = as_fraction(threshold)
    minsup = as_fraction(minsup)
    ckus = tuple(find_cku(km, item) for item in core_items)
    if not 1 <= len(ckus) <= 2:
        raise ConfigError("one or two core items are required")
    candidates, keep = tracked_submaps(km, ckus, k_depth)

    events, removed = filter_events(list(events))
    if not events:
        raise EmptyData("no learning events left after filtering")
    question_id = _pick_question(events, question_id)
    sequences, unresolved = build_las(events, km, question_id)
    if not sequences:
        raise EmptyData(f"no learner visited a knowledge unit for question {question_id!r}")

    population_visits = {u for las in sequences for u in las.visits}
    submaps = tuple(metrics.prune_irrelevant(candidates, population_visits, keep))
    if not submaps:
        raise EmptyData("no candidate submap was visited by any learner")
    arity = len(submaps)

    s_cogs, learner_patterns, encoded = {}, {}, {}
    for las in sequences:
        s_cog = metrics.ccm_sequence(las, submaps)
        s_cogs[las.user_id] = s_cog
        instances = metrics.recognize_strategies(s_cog, threshold, km)
        learner_patterns[las.user_id] = abstraction.abstract_learner(instances)
        encoded[las.user_id] = codec.encode_sequence(s_cog)

    report = abstraction.population_report(learner_patterns.values(), arity)
    mined = gsp(list(encoded.values()), minsup)
    mined_labels = [abstraction.decode_and_label(p, arity, submaps) for p in mined]
    return MiningResult(
        question_id=question_id, km=km, ckus=ckus, submaps=submaps, sequences=sequences,
        s_cogs=s_cogs, learner_patterns=learner_patterns, encoded=encoded, report=report,
        mined=mined, mined_labels=mined_labels, threshold=threshold, minsup=minsup,
        k_depth=k_depth, removed_events=removed, unresolved_events=len(unresolved),
    )


def report_document(result: MiningResult) -> dict:
    total = result.report.total_learners
    return {
        "question_id": result.question_id,
        "course_id": result.km.course_id,
        "ckus": [{"id": c, "name": result.km.name(c)} for c in result.ckus],
        "submaps": [
            {"column": col, "kind": s.kind.value, "ckus": list(s.ckus), "size": len(s.unit_ids)}
            for col, s in zip(result.submap_names, result.submaps)
        ],
        "k_depth": result.k_depth,
        "threshold": float(result.threshold),
        "minsup": float(result.minsup),
        "total_learners": total,
        "patterns": [
            {"labels": p["labels"], "name": p["name"], "count": p["count"],
             "pct": round(float(p["share"] * 100), 4)}
            for p in result.report.patterns
        ],
        "unmatched_count": result.report.unmatched_count,
        "filtered_events": result.removed_events,
        "unresolved_events": result.unresolved_events,
        "mined_raw": [list(p.pattern) for p in result.mined],
        "mined": [
            p.as_dict() | {"labels": [lab.kind.value for lab in labels.labels]}
            for p, labels in zip(result.mined, result.mined_labels)
        ],
        "encoded": {user: codes for user, codes in sorted(result.encoded.items())},
    }


_UNSAFE = re.compile(r"[^A-Za-z0-9_.-]+")


def safe_name(text: str) -> str:
    return _UNSAFE.sub("_", text).strip("._") or "unnamed"


def write_outputs(result: MiningResult, out_dir) -> list[Path]:
    """Write report.json, per-learner curve CSVs and per-submap DOT/JSON files."""
    out = Path(out_dir)
    (out / "curves").mkdir(parents=True, exist_ok=True)
    (out / "submaps").mkdir(parents=True, exist_ok=True)
    written = []
    report = out / "report.json"
    report.write_text(json.dumps(report_document(result), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    written.append(report)
    for user, s_cog in sorted(result.s_cogs.items()):
        path = out / "curves" / f"{safe_name(user)}.csv"
        with path.open("w", encoding="utf-8", newline="") as fh:
            metrics.write_curve_csv(s_cog, fh)
        written.append(path)
    written.extend(write_submaps(result.km, result.submaps, out / "submaps", result.submap_names))
    return written


def write_submaps(km: KnowledgeMap, submaps, out_dir, names=None) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = names or metrics.curve_columns(submaps)
    written = []
    for name, sub in zip(names, submaps):
        dot = out / f"{safe_name(name)}.dot"
        dot.write_text(to_dot(sub, km, name), encoding="utf-8")
        doc = out / f"{safe_name(name)}.json"
        doc.write_text(json.dumps(to_document(sub, km), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        written += [dot, doc]
    return written

"""Learner event logs: parsing, filtering and learning activity sequences."""
from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import asdict, dataclass, field
from itertools import groupby

from .errors import FatalError, FormatError
from .km import KnowledgeMap, normalize_text

log = logging.getLogger(__name__)

FIELDS = ("id", "user_id", "user_name", "question_id", "action_type", "object_id", "action_object", "timestamp")
EXCLUDED_ACTIONS = frozenset({"login", "log in", "exit", "submit", "post"})


@dataclass(frozen=True)
class LearningEvent:
    id: str
    user_id: str
    question_id: str
    action_type: str
    object_id: str
    timestamp: int
    user_name: str = ""
    action_object: str = ""

    def __post_init__(self):
        if not self.user_id:
            raise ValueError("user_id must be non-empty")
        if not self.question_id:
            raise ValueError("question_id must be non-empty")
        if isinstance(self.timestamp, bool) or not isinstance(self.timestamp, int) or self.timestamp < 0:
            raise ValueError(f"timestamp must be a non-negative integer, got {self.timestamp!r}")

    def as_row(self) -> dict:
        return {name: getattr(self, name) for name in FIELDS}


@dataclass(frozen=True)
class LearningActivitySequence:
    user_id: str
    question_id: str
    visits: tuple[str, ...]


@dataclass
class ParsedLog:
    events: list[LearningEvent] = field(default_factory=list)
    errors: list[FormatError] = field(default_factory=list)


def _timestamp(raw) -> int:
    if isinstance(raw, bool):
        raise ValueError("timestamp must be an integer")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, str) and raw.strip().isdigit():
        return int(raw.strip())
    raise ValueError(f"timestamp must be integer milliseconds, got {raw!r}")


def _event(record: dict) -> LearningEvent:
    values = {}
    for name in FIELDS:
        raw = record.get(name)
        if name == "timestamp":
            if raw is None or raw == "":
                raise ValueError("missing timestamp")
            values[name] = _timestamp(raw)
            continue
        if raw is None:
            if name in ("user_name", "action_object", "object_id"):
                raw = ""
            else:
                raise ValueError(f"missing field {name!r}")
        if isinstance(raw, (dict, list, bool, float)):
            raise ValueError(f"field {name!r} must be a string")
        values[name] = str(raw)
    if not values["id"]:
        raise ValueError("missing event id")
    return LearningEvent(**values)


def _text_stream(stream):
    if isinstance(stream, str):
        return io.StringIO(stream)
    if isinstance(stream, bytes):
        stream = io.BytesIO(stream)
    if isinstance(stream, io.TextIOBase):
        return stream
    return io.TextIOWrapper(stream, encoding="utf-8", newline="")


def parse_log(stream, format: str = "csv") -> ParsedLog:
    """Parse a CSV or JSONL log; malformed records land in ``errors`` with their line numbers."""
    stream = _text_stream(stream)
    result = ParsedLog()
    try:
        if format == "csv":
            _parse_csv(stream, result)
        elif format == "jsonl":
            _parse_jsonl(stream, result)
        else:
            raise FatalError(f"unsupported log format {format!r}")
    except UnicodeDecodeError as exc:
        raise FatalError(f"log is not valid UTF-8: {exc}") from None
    for err in result.errors:
        log.warning("skipping malformed log record: %s", err)
    return result


def _parse_csv(stream, result: ParsedLog) -> None:
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise FatalError("empty log: missing CSV header") from None
    if tuple(h.strip() for h in header) != FIELDS:
        raise FatalError(f"CSV header must be {','.join(FIELDS)}; got {','.join(header)}")
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != len(FIELDS):
            result.errors.append(FormatError(line, f"expected {len(FIELDS)} fields, got {len(row)}"))
            continue
        try:
            result.events.append(_event(dict(zip(FIELDS, row))))
        except ValueError as exc:
            result.errors.append(FormatError(line, str(exc)))


def _parse_jsonl(stream, result: ParsedLog) -> None:
    for line, text in enumerate(stream, start=1):
        if not text.strip():
            continue
        try:
            record = json.loads(text)
        except json.JSONDecodeError as exc:
            result.errors.append(FormatError(line, f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(record, dict):
            result.errors.append(FormatError(line, "record must be a JSON object"))
            continue
        try:
            result.events.append(_event(record))
        except ValueError as exc:
            result.errors.append(FormatError(line, str(exc)))


def write_log(events, stream, format: str = "csv") -> None:
    if format == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(FIELDS)
        for e in events:
            writer.writerow([getattr(e, name) for name in FIELDS])
    elif format == "jsonl":
        for e in events:
            stream.write(json.dumps(e.as_row(), ensure_ascii=False) + "\n")
    else:
        raise ValueError(f"unsupported log format {format!r}")


def format_for(path) -> str:
    """Guess the log format from a file suffix."""
    return "jsonl" if str(path).lower().endswith((".jsonl", ".ndjson", ".json")) else "csv"


def is_excluded(action_type: str) -> bool:
    return normalize_text(action_type) in EXCLUDED_ACTIONS


def filter_events(events) -> tuple[list[LearningEvent], int]:
    """Drop login/exit/submit/post actions, keeping order; returns (kept, removed count)."""
    kept = [e for e in events if not is_excluded(e.action_type)]
    return kept, len(events) - len(kept)


def _id_key(event_id: str):
    # numeric ids order numerically, anything else lexically after them
    return (0, int(event_id), "") if event_id.isdigit() else (1, 0, event_id)


def event_order(e: LearningEvent):
    return (e.timestamp, _id_key(e.id))


def build_las(events, km: KnowledgeMap, question_id: str) -> tuple[list[LearningActivitySequence], list[LearningEvent]]:
    """Group one question's events by learner into unit-visit sequences.

    Events without an ``object_id`` are not visits and are ignored; events whose
    ``object_id`` is not a unit of ``km`` are skipped and returned as unresolved.
    Consecutive repeats of the same unit collapse into one visit. Sequences are
    ordered by user id.
    """
    per_user: dict[str, list[LearningEvent]] = {}
    for e in events:
        if e.question_id == question_id and e.object_id:
            per_user.setdefault(e.user_id, []).append(e)
    sequences, unresolved = [], []
    for user in sorted(per_user):
        visits = []
        for e in sorted(per_user[user], key=event_order):
            if e.object_id not in km:
                unresolved.append(e)
                continue
            visits.append(e.object_id)
        visits = [unit for unit, _ in groupby(visits)]
        if visits:
            sequences.append(LearningActivitySequence(user, question_id, tuple(visits)))
    for e in unresolved:
        log.warning("event %s: object %r is not a unit of %s", e.id, e.object_id, km.course_id)
    return sequences, unresolved


def las_to_dict(las: LearningActivitySequence) -> dict:
    return asdict(las) | {"visits": list(las.visits)}

"""Command line front end: validate, submaps, ingest, simulate, mine, report."""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import yaml

from . import km as km_mod
from . import logs as logs_mod
from .abstraction import render_table
from .errors import (
    Ambiguous, ConfigError, EmptyData, EmptySubmap, EmptySubmapFixture, FatalError,
    NotFound, ParseError, TooManyComponents, UnknownUnit, ValidationError,
)
from .pipeline import PipelineConfig, mine, write_outputs, write_submaps
from .submaps import comparison_triple, search_single

EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_EMPTY = 4

_CLASSES = (
    (ConfigError, "config", EXIT_CONFIG),
    ((ParseError, FatalError), "parse", EXIT_INPUT),
    (ValidationError, "validation", EXIT_INPUT),
    ((NotFound, Ambiguous, UnknownUnit), "unknown-cku", EXIT_INPUT),
    ((EmptyData, EmptySubmap, EmptySubmapFixture, TooManyComponents), "empty-data", EXIT_EMPTY),
)


def fail(kind: str, message: str, code: int):
    click.echo(f"error[{kind}]: {message}", err=True)
    sys.exit(code)


def run_guarded(fn, *args, **kwargs):
    """Call ``fn``, turning package errors into one structured message and exit code."""
    try:
        return fn(*args, **kwargs)
    except FileNotFoundError as exc:
        fail("input", f"file not found: {exc.filename}", EXIT_INPUT)
    except OSError as exc:
        fail("input", str(exc), EXIT_INPUT)
    except Exception as exc:
        for classes, kind, code in _CLASSES:
            if isinstance(exc, classes):
                fail(kind, str(exc), code)
        raise


def load_config_file(path) -> dict:
    if path is None:
        return {}
    try:
        data = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    except FileNotFoundError:
        fail("config", f"config file not found: {path}", EXIT_CONFIG)
    except yaml.YAMLError as exc:
        fail("config", f"cannot parse config file: {exc}", EXIT_CONFIG)
    if not isinstance(data, dict):
        fail("config", "config file must hold a mapping", EXIT_CONFIG)
    return {str(k).replace("-", "_"): v for k, v in data.items()}


def merged(config_file: dict, **flags) -> dict:
    """Config-file values overridden by any flag that was given."""
    out = dict(config_file)
    for key, value in flags.items():
        if value is None or value == ():
            continue
        out[key] = value
    return out


def _listify(value):
    if value is None:
        return ()
    if isinstance(value, (list, tuple)):
        return tuple(str(v) for v in value)
    return (str(value),)


def read_km(path):
    if path is None:
        fail("config", "a knowledge map is required (--km)", EXIT_CONFIG)
    text = str(path)
    if text.startswith("builtin:"):
        return run_guarded(km_mod.builtin_map, text.split(":", 1)[1])
    return run_guarded(km_mod.load_km_file, path)


def read_events(paths, fmt=None):
    if not paths:
        fail("config", "at least one log file is required (--logs)", EXIT_CONFIG)
    events, errors = [], []
    for path in paths:
        def parse(p=path):
            with open(p, "rb") as fh:
                return logs_mod.parse_log(fh, fmt or logs_mod.format_for(p))
        parsed = run_guarded(parse)
        events += parsed.events
        errors += [(path, e) for e in parsed.errors]
    for path, err in errors:
        click.echo(f"warning: {path}: {err}", err=True)
    return events, errors


common_km = click.option("--km", "km_path", default=None, help="Knowledge map JSON file (or builtin:array_pointer).")
common_core = click.option("--core", multiple=True, help="Core item of the question; repeat for two.")
common_config = click.option("--config", "config_path", type=click.Path(), default=None, help="YAML/JSON config file.")


@click.group()
def cli():
    """Mine cognitive and metacognitive strategies from knowledge-map learning logs."""


@cli.command()
@common_km
@common_config
def validate(km_path, config_path):
    """Check a knowledge map file and list its violations."""
    cfg = merged(load_config_file(config_path), km=km_path)
    path = cfg.get("km")
    if path is None:
        fail("config", "a knowledge map is required (--km)", EXIT_CONFIG)

    def check():
        if str(path).startswith("builtin:"):
            km_mod.builtin_map(str(path).split(":", 1)[1])
            return []
        raw = Path(path).read_bytes()
        try:
            doc = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ParseError(f"malformed knowledge map document: {exc}") from None
        return km_mod.validate_document(doc)

    problems = run_guarded(check)
    for p in problems:
        click.echo(f"  {p}")
    click.echo(f"{len(problems)} violations")
    if problems:
        sys.exit(EXIT_INPUT)


@cli.command()
@common_km
@common_core
@click.option("--k-depth", type=int, default=None, help="Hop budget for Tree/Brace maps (default 2).")
@click.option("--out", default=None, help="Directory for DOT and JSON submap files.")
@common_config
def submaps(km_path, core, k_depth, out, config_path):
    """Search Thinking-Map submaps around the core units and print their sizes."""
    cfg = merged(load_config_file(config_path), km=km_path, core=core, k_depth=k_depth, out=out)
    config = run_guarded(PipelineConfig, km=cfg.get("km"), core=_listify(cfg.get("core")),
                         k_depth=cfg.get("k_depth", 2), out=cfg.get("out"))
    if not config.core:
        fail("config", "give one or two --core items", EXIT_CONFIG)
    km = read_km(config.km)
    ckus = [run_guarded(km_mod.find_cku, km, item) for item in config.core]
    if len(ckus) == 2:
        found = run_guarded(comparison_triple, km, ckus[0], ckus[1], config.k_depth)
        names = ["desc1", "conn", "desc2"]
    else:
        single = run_guarded(search_single, km, ckus[0], config.k_depth)
        found = list(single.values())
        names = [k.value.lower() for k in single]
    click.echo(" ".join(f"{n}={len(s.unit_ids)}" for n, s in zip(names, found)))
    if config.out:
        run_guarded(write_submaps, km, found, config.out, names)


@cli.command()
@click.option("--logs", "log_paths", multiple=True, help="Log file(s), CSV or JSONL.")
@click.option("--format", "fmt", type=click.Choice(["csv", "jsonl"]), default=None)
@common_km
@click.option("--question", default=None, help="Question id for learning activity sequences.")
@click.option("--out", default=None, help="Directory for filtered.csv and las.jsonl.")
@common_config
def ingest(log_paths, fmt, km_path, question, out, config_path):
    """Parse and filter logs; with --km also build learning activity sequences."""
    cfg = merged(load_config_file(config_path), logs=log_paths, format=fmt, km=km_path,
                 question=question, out=out)
    events, errors = read_events(_listify(cfg.get("logs")), cfg.get("format"))
    kept, removed = logs_mod.filter_events(events)
    click.echo(f"records={len(events) + len(errors)} malformed={len(errors)} filtered={removed} kept={len(kept)}")
    sequences = []
    if cfg.get("km"):
        km = read_km(cfg["km"])
        questions = sorted({e.question_id for e in kept})
        chosen = [cfg["question"]] if cfg.get("question") else questions
        for q in chosen:
            built, unresolved = logs_mod.build_las(kept, km, q)
            sequences += built
            click.echo(f"question={q} sequences={len(built)} unresolved={len(unresolved)}")
    if cfg.get("out"):
        target = Path(cfg["out"])
        target.mkdir(parents=True, exist_ok=True)
        with (target / "filtered.csv").open("w", encoding="utf-8", newline="") as fh:
            logs_mod.write_log(kept, fh, "csv")
        if sequences:
            with (target / "las.jsonl").open("w", encoding="utf-8") as fh:
                for las in sequences:
                    fh.write(json.dumps(logs_mod.las_to_dict(las)) + "\n")


@cli.command()
@common_km
@common_core
@click.option("--learners", type=int, default=None, help="Number of simulated learners (default 100).")
@click.option("--mix", default=None, help="Archetype shares, e.g. DCD=0.313,CDD=0.31,DDC=0.316,NOISE=0.061.")
@click.option("--seed", type=int, default=None, help="Generator seed (default 0).")
@click.option("--interleave", type=float, default=None, help="Chance of an off-stage visit per event.")
@click.option("--question", default=None, help="Question id written into the log (default q1).")
@click.option("--format", "fmt", type=click.Choice(["csv", "jsonl"]), default=None)
@click.option("--out", default=None, help="Output log file.")
@common_config
def simulate(km_path, core, learners, mix, seed, interleave, question, fmt, out, config_path):
    """Generate a deterministic synthetic learner log."""
    from .simulator import SimConfig, parse_mix, simulate as run_simulation

    cfg = merged(load_config_file(config_path), km=km_path, core=core, learners=learners, mix=mix,
                 seed=seed, interleave=interleave, question=question, format=fmt, out=out)
    if not cfg.get("out"):
        fail("config", "--out is required", EXIT_CONFIG)
    mix_value = cfg.get("mix", "DCD=1")
    if isinstance(mix_value, dict):
        mix_value = ",".join(f"{k}={v}" for k, v in mix_value.items())
    parsed_mix = run_guarded(parse_mix, str(mix_value))
    core_items = _listify(cfg.get("core"))
    km = read_km(cfg.get("km"))
    config = run_guarded(
        SimConfig, km=km, core_items=core_items, learner_count=int(cfg.get("learners", 100)),
        mix=parsed_mix, seed=int(cfg.get("seed", 0)), interleave_prob=float(cfg.get("interleave", 0.0)),
        question_id=str(cfg.get("question", "q1")),
    )
    events = run_guarded(run_simulation, config)
    target = Path(cfg["out"])
    fmt = cfg.get("format") or logs_mod.format_for(target)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", encoding="utf-8", newline="") as fh:
        logs_mod.write_log(events, fh, fmt)
    click.echo(f"wrote {len(events)} events for {config.learner_count} learners to {target}")


@cli.command("mine")
@common_km
@click.option("--logs", "log_paths", multiple=True, help="Log file(s), CSV or JSONL.")
@click.option("--format", "fmt", type=click.Choice(["csv", "jsonl"]), default=None)
@common_core
@click.option("--k-depth", type=int, default=None)
@click.option("--threshold", default=None, help="Recognition threshold (default 0.6).")
@click.option("--minsup", default=None, help="GSP minimum support ratio (default 0.25).")
@click.option("--question", default=None)
@click.option("--out", default=None, help="Output directory.")
@common_config
def mine_cmd(km_path, log_paths, fmt, core, k_depth, threshold, minsup, question, out, config_path):
    """Run the whole pipeline and write report, curves and submaps."""
    cfg = merged(load_config_file(config_path), km=km_path, logs=log_paths, format=fmt, core=core,
                 k_depth=k_depth, threshold=threshold, minsup=minsup, question=question, out=out)
    config = run_guarded(
        PipelineConfig, km=cfg.get("km"), logs=_listify(cfg.get("logs")), core=_listify(cfg.get("core")),
        k_depth=cfg.get("k_depth", 2), threshold=str(cfg.get("threshold", "3/5")),
        minsup=str(cfg.get("minsup", "1/4")), out=cfg.get("out"), format=cfg.get("format"),
        question=cfg.get("question"),
    )
    if not config.core:
        fail("config", "give one or two --core items", EXIT_CONFIG)
    if not config.out:
        fail("config", "--out is required", EXIT_CONFIG)
    km = read_km(config.km)
    events, _ = read_events(config.logs, config.format)
    result = run_guarded(mine, km, events, config.core, config.question, config.k_depth,
                         config.threshold, config.minsup)
    run_guarded(write_outputs, result, config.out)
    click.echo(render_table(result.report), nl=False)
    click.echo(f"learners={result.report.total_learners} unmatched={result.report.unmatched_count} "
               f"mined_patterns={len(result.mined)}")


@cli.command()
@click.option("--in", "report_path", required=True, help="report.json written by mine.")
def report(report_path):
    """Print the pattern table of an existing report."""
    def load():
        return json.loads(Path(report_path).read_text(encoding="utf-8"))

    try:
        doc = run_guarded(load)
    except json.JSONDecodeError as exc:
        fail("parse", f"malformed report: {exc}", EXIT_INPUT)
    click.echo(render_table(doc), nl=False)
    click.echo(f"learners={doc['total_learners']} unmatched={doc['unmatched_count']}")


def main():
    cli(prog_name="cogmine")


if __name__ == "__main__":
    main()

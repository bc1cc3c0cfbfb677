"""Command-line entry point: run episodes, evaluate batches, replay traces.

The CLI is a thin shell over the library; every behavior here is reachable
through library calls. Exit codes: 0 command completed (even when the
episode failed), 2 configuration error, 3 input parse error.

Settings resolve as flags > environment variables > config file.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

from .envs import TASK_FAMILIES, TaskSpec, TextHouseEnv, generate_task, generate_tasks, load_task
from .errors import ConfigError, TraceParseError
from .loop import MODES, EpisodeConfig, EpisodeReport, run_batch, run_episode
from .oracle import OracleReflectors
from .prompts import DEFAULT_TEMPLATES, PromptTemplates
from .provider import (
    ENV_ENDPOINT,
    ScriptedProvider,
    WireConfig,
    WireProvider,
    load_fixture,
)
from .reflect import LlmReflectors
from .trace import TRACE_FILE_SUFFIX, ExploreTrace, read_trace, write_trace


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dusar", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--provider", default="oracle",
                       help="oracle | wire | scripted[:FIXTURE] (default: oracle)")
        p.add_argument("--fixture", help="fixture file for the scripted provider")
        p.add_argument("--endpoint", help="chat-completions endpoint URL (wire provider)")
        p.add_argument("--model", help="model name sent to the endpoint")
        p.add_argument("--mode", choices=MODES, default="full")
        p.add_argument("--max-steps", type=int, default=30)
        p.add_argument("--window", type=int, default=10)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--templates", help="directory of prompt template files")
        p.add_argument("--out", default="out", help="output directory (default: out)")
        p.add_argument("--config", help="JSON config file (lowest-precedence settings)")

    run_p = sub.add_parser("run", help="run a single episode")
    run_p.add_argument("--task", help="task file (JSON)")
    run_p.add_argument("--task-type", choices=TASK_FAMILIES, default="put")
    common(run_p)

    eval_p = sub.add_parser("eval", help="run a batch and summarize per task type")
    eval_p.add_argument("--tasks", help="JSON file holding a list of task documents")
    eval_p.add_argument("--per-type", type=int, default=10,
                        help="generated tasks per family when --tasks is absent")
    eval_p.add_argument("--parallelism", type=int, default=1)
    common(eval_p)

    replay_p = sub.add_parser("replay", help="re-render and validate a stored trace")
    replay_p.add_argument("trace", help="trace file to replay")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "eval":
            return cmd_eval(args)
        return cmd_replay(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except TraceParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 3


# --- provider / reflector wiring -----------------------------------------

def _file_config(path) -> dict:
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must contain a JSON object")
    return data


def _resolve(flag, env_name: str, cfg: dict, key: str) -> str | None:
    return flag or os.environ.get(env_name) or cfg.get(key)


def make_reflector_factory(args):
    """Build (make_reflectors, provider_name) from CLI settings."""
    cfg = _file_config(args.config)
    templates = PromptTemplates.from_dir(args.templates) if args.templates else DEFAULT_TEMPLATES

    spec = args.provider
    if spec == "oracle":
        def factory(env, task):
            return OracleReflectors(env, templates=templates)
        return factory, "oracle"

    if spec.startswith("scripted"):
        _, _, inline = spec.partition(":")
        fixture_path = inline or args.fixture or cfg.get("fixture")
        if not fixture_path:
            raise ConfigError("scripted provider needs a fixture file (--fixture or scripted:PATH)")
        provider = ScriptedProvider(load_fixture(fixture_path))
    elif spec == "wire":
        wire_config = WireConfig.from_env(
            endpoint=_resolve(args.endpoint, ENV_ENDPOINT, cfg, "endpoint"),
            api_key=_resolve(None, "DUSAR_API_KEY", cfg, "api_key"),
            model=_resolve(args.model, "DUSAR_MODEL", cfg, "model"),
        )
        provider = WireProvider(wire_config)
    else:
        raise ConfigError(f"unknown provider {spec!r}; expected oracle, wire, or scripted[:PATH]")

    def factory(env, task):
        return LlmReflectors(provider, task_type=task.task_type, templates=templates)

    return factory, spec


def _load_run_task(args) -> TaskSpec:
    if args.task:
        return load_task(args.task)
    return generate_task(args.seed, args.task_type)


# --- commands --------------------------------------------------------------

def _excerpt(text: str, width: int) -> str:
    flat = re.sub(r"\s+", " ", text).strip()
    return flat if len(flat) <= width else flat[: width - 3] + "..."


def format_step_table(trace: ExploreTrace) -> str:
    header = f"{'step':>4}  {'observation':<44}  {'action':<28}  {'score':>5}  reasoning"
    lines = [header, "-" * len(header)]
    for step in trace.steps:
        lines.append(
            f"{step.step_index:>4}  {_excerpt(step.observation, 44):<44}  "
            f"{_excerpt(step.action, 28):<28}  {step.score.value:>5}  "
            f"{_excerpt(step.local_log, 40)}"
        )
    return "\n".join(lines)


def _write_report(report: EpisodeReport, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(report.to_dict(), handle, indent=2, ensure_ascii=False)
        handle.write("\n")


def cmd_run(args) -> int:
    task = _load_run_task(args)
    factory, _ = make_reflector_factory(args)
    config = EpisodeConfig(
        max_steps=args.max_steps,
        window_size=args.window,
        mode=args.mode,
        seed=task.seed,
        task_type=task.task_type,
    )
    env = TextHouseEnv(task)
    report = run_episode(config, env, factory(env, task))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"episode-{task.task_type}-seed{task.seed}-{args.mode}"
    trace_path = out / f"{stem}{TRACE_FILE_SUFFIX}"
    write_trace(report.trace, trace_path)
    report_path = out / f"{stem}-report.json"
    _write_report(report, report_path)

    print(f"task: {task.instruction}")
    print(format_step_table(report.trace))
    outcome = "success" if report.success else f"failure ({report.abort_reason or report.ended_by})"
    print(f"outcome: {outcome} in {report.steps_taken} steps; "
          f"final score {report.final_score.value}; trace: {trace_path}")
    return 0


def cmd_eval(args) -> int:
    if args.tasks:
        try:
            with open(args.tasks, "r", encoding="utf-8") as handle:
                documents = json.load(handle)
        except FileNotFoundError as exc:
            raise ConfigError(f"tasks file not found: {args.tasks}") from exc
        except json.JSONDecodeError as exc:
            raise TraceParseError(f"tasks file is not valid JSON: {exc.msg}", line=exc.lineno) from exc
        if not isinstance(documents, list) or not documents:
            raise ConfigError("tasks file must contain a non-empty JSON list")
        tasks = [TaskSpec.from_dict(doc) for doc in documents]
    else:
        if args.per_type < 1:
            raise ConfigError("--per-type must be >= 1")
        tasks = generate_tasks(args.per_type, args.seed)

    factory, _ = make_reflector_factory(args)
    config = EpisodeConfig(max_steps=args.max_steps, window_size=args.window, mode=args.mode)
    summary = run_batch(tasks, config, factory, parallelism=args.parallelism)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    summary_path = out / f"summary-{args.mode}.jsonl"
    with open(summary_path, "w", encoding="utf-8", newline="\n") as handle:
        for row in summary.rows:
            handle.write(json.dumps(row.to_dict(), ensure_ascii=False) + "\n")
    episodes_path = out / f"episodes-{args.mode}.jsonl"
    with open(episodes_path, "w", encoding="utf-8", newline="\n") as handle:
        for report in summary.reports:
            handle.write(json.dumps(report.to_dict(), ensure_ascii=False) + "\n")

    print(summary.format_table())
    print(f"summary: {summary_path}")
    return 0


def cmd_replay(args) -> int:
    try:
        trace = read_trace(args.trace)
    except FileNotFoundError as exc:
        raise ConfigError(f"trace file not found: {args.trace}") from exc
    print(f"task: {trace.task_instruction} (mode: {trace.mode}, window: {trace.window_size})")
    print(format_step_table(trace))
    print(f"{len(trace.steps)} steps; invariants OK")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Append-only explore trace with a sliding-window view and JSONL persistence.

Full history is always stored; the window applies only to views (prompt
construction), never to storage, so traces stay replayable.

File format (UTF-8, one JSON document per line, extension `.trace.jsonl`):

    line 1   header: {"kind": "trace", "task": ..., "window_size": ..., "mode": ...}
    line 2+  step records, keys in fixed order:
             {"step": i, "observation": ..., "action": ..., "reward": ...,
              "local_log": ..., "score": ..., "holistic_version": ...}

Serialization is byte-stable: equal traces always produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .core import ExploreStep, FitnessScore
from .errors import TraceParseError

DEFAULT_WINDOW_SIZE = 10
TRACE_FILE_SUFFIX = ".trace.jsonl"

_STEP_FIELDS = ("step", "observation", "action", "reward", "local_log", "score", "holistic_version")
_HEADER_FIELDS = ("kind", "task", "window_size", "mode")


@dataclass
class ExploreTrace:
    """Ordered step history for one episode."""

    task_instruction: str
    window_size: int = DEFAULT_WINDOW_SIZE
    mode: str = "full"
    steps: list[ExploreStep] = field(default_factory=list)

    def __post_init__(self):
        if self.window_size < 1:
            raise ValueError(f"window size must be >= 1, got {self.window_size}")

    def __len__(self) -> int:
        return len(self.steps)

    def append(self, step: ExploreStep) -> None:
        """Append the next step. Indices must be consecutive starting at 1."""
        expected = self.steps[-1].step_index + 1 if self.steps else 1
        if step.step_index != expected:
            raise ValueError(
                f"non-consecutive step index: expected {expected}, got {step.step_index}"
            )
        self.steps.append(step)

    def window(self) -> list[ExploreStep]:
        """The last min(window_size, len) steps, in order. A view, not a copy of state."""
        return self.steps[-self.window_size:] if self.steps else []


def serialize(trace: ExploreTrace) -> str:
    """Render a trace as line-delimited JSON. Deterministic and byte-stable."""
    header = {
        "kind": "trace",
        "task": trace.task_instruction,
        "window_size": trace.window_size,
        "mode": trace.mode,
    }
    lines = [_dump(header, _HEADER_FIELDS)]
    for step in trace.steps:
        record = {
            "step": step.step_index,
            "observation": step.observation,
            "action": step.action,
            "reward": step.reward,
            "local_log": step.local_log,
            "score": step.score.value,
            "holistic_version": step.holistic_version,
        }
        lines.append(_dump(record, _STEP_FIELDS))
    return "\n".join(lines) + "\n"


def deserialize(text: str) -> ExploreTrace:
    """Parse a serialized trace, validating every record field."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise TraceParseError("empty trace document", line=1)

    header = _load(lines[0], 1)
    if header.get("kind") != "trace":
        raise TraceParseError("missing or wrong header record", line=1, field="kind")
    task = _expect(header, "task", str, 1)
    window_size = _expect(header, "window_size", int, 1)
    mode = _expect(header, "mode", str, 1)
    if window_size < 1:
        raise TraceParseError(f"window_size must be >= 1, got {window_size}", line=1, field="window_size")

    trace = ExploreTrace(task_instruction=task, window_size=window_size, mode=mode)
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            raise TraceParseError("blank line inside trace", line=number)
        record = _load(line, number)
        step = _parse_step(record, number)
        try:
            trace.append(step)
        except ValueError as exc:
            raise TraceParseError(str(exc), line=number, field="step") from exc
    return trace


def write_trace(trace: ExploreTrace, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(serialize(trace))


def read_trace(path) -> ExploreTrace:
    with open(path, "r", encoding="utf-8") as handle:
        return deserialize(handle.read())


def _dump(record: dict, order: tuple[str, ...]) -> str:
    ordered = {key: record[key] for key in order}
    return json.dumps(ordered, ensure_ascii=False, separators=(", ", ": "))


def _load(line: str, number: int) -> dict:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise TraceParseError(f"invalid JSON: {exc.msg}", line=number) from exc
    if not isinstance(record, dict):
        raise TraceParseError("record is not an object", line=number)
    return record


def _expect(record: dict, key: str, kind: type, number: int):
    if key not in record:
        raise TraceParseError(f"missing field '{key}'", line=number, field=key)
    value = record[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise TraceParseError(
            f"field '{key}' must be {kind.__name__}, got {type(value).__name__}",
            line=number,
            field=key,
        )
    return value


def _parse_step(record: dict, number: int) -> ExploreStep:
    index = _expect(record, "step", int, number)
    observation = _expect(record, "observation", str, number)
    action = _expect(record, "action", str, number)
    reward = record.get("reward")
    if not isinstance(reward, (int, float)) or isinstance(reward, bool):
        raise TraceParseError("field 'reward' must be a number", line=number, field="reward")
    local_log = _expect(record, "local_log", str, number)
    score_value = _expect(record, "score", int, number)
    holistic_version = _expect(record, "holistic_version", int, number)
    try:
        score = FitnessScore(score_value)
    except ValueError as exc:
        raise TraceParseError(str(exc), line=number, field="score") from exc
    try:
        return ExploreStep(
            step_index=index,
            observation=observation,
            action=action,
            reward=float(reward),
            local_log=local_log,
            score=score,
            holistic_version=holistic_version,
        )
    except ValueError as exc:
        raise TraceParseError(str(exc), line=number, field="step") from exc

"""The co-adaptive episode loop and the batch runner.

One episode is strictly sequential: at each step the directive derived from
the previous score routes plan revision, then local reflecting proposes,
decision reflecting picks one available action, the environment executes
it, score analysis judges the outcome (seeing the post-action observation),
and the trace grows by one step. Episodes end on a Terminate directive,
environment completion, a decision error, or the step limit.

Success requires environment ground truth: a claimed score of 100 without
the goal predicate holding ends the episode as a failure with abort reason
"false completion claim".

Ablation modes:
    full           - everything above
    holistic_only  - local reflecting skipped; decisions see plan + observation
    local_only     - plan frozen at version 1; Update directives ignored
    naive_concat   - plan regenerated every step; no score gating, no
                     directive termination
    react_baseline - one thought-then-act prompt per step; no strategies,
                     no scoring
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .core import ExploreStep, FitnessScore, StrategyDirective, next_directive
from .envs import TaskSpec, TextHouseEnv
from .errors import (
    ConfigError,
    DecisionError,
    EnvActionError,
    OracleError,
    ProviderError,
    ReflectError,
)
from .trace import DEFAULT_WINDOW_SIZE, ExploreTrace

MODES = ("full", "holistic_only", "local_only", "naive_concat", "react_baseline")

_STEP_ERRORS = (ReflectError, ProviderError, DecisionError, EnvActionError, OracleError)


@dataclass
class EpisodeConfig:
    max_steps: int = 30
    window_size: int = DEFAULT_WINDOW_SIZE
    mode: str = "full"
    seed: int = 0
    task_type: str = "generic"

    def __post_init__(self):
        if self.max_steps < 1:
            raise ConfigError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.window_size < 1:
            raise ConfigError(f"window_size must be >= 1, got {self.window_size}")
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; expected one of {MODES}")


@dataclass
class EpisodeReport:
    success: bool
    steps_taken: int
    per_step_usage: list[tuple[int, int]]
    holistic_versions: list[tuple[int, int]]
    final_score: FitnessScore
    abort_reason: str | None
    ended_by: str
    mode: str
    task_instruction: str
    total_prompt_tokens: int = 0
    total_completion_tokens: int = 0
    trace: ExploreTrace | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "success": self.success,
            "steps_taken": self.steps_taken,
            "per_step_usage": [list(u) for u in self.per_step_usage],
            "holistic_versions": [list(v) for v in self.holistic_versions],
            "final_score": self.final_score.value,
            "abort_reason": self.abort_reason,
            "ended_by": self.ended_by,
            "mode": self.mode,
            "task_instruction": self.task_instruction,
            "total_prompt_tokens": self.total_prompt_tokens,
            "total_completion_tokens": self.total_completion_tokens,
        }


def run_episode(config: EpisodeConfig, env, reflectors) -> EpisodeReport:
    """Run one episode of the co-adaptive loop against an environment.

    The reflectors object provides holistic/local/decide/score (and react
    for the baseline mode) plus begin_step and pop_usage; see LlmReflectors
    and OracleReflectors.
    """
    instruction = env.task.instruction
    trace = ExploreTrace(
        task_instruction=instruction, window_size=config.window_size, mode=config.mode
    )
    usage: list[tuple[int, int]] = []
    versions: list[tuple[int, int]] = []
    react_mode = config.mode == "react_baseline"

    def report(success, ended_by, abort=None, final=None):
        if final is None:
            final = trace.steps[-1].score if trace.steps else FitnessScore(0)
        return EpisodeReport(
            success=success,
            steps_taken=len(trace.steps),
            per_step_usage=usage,
            holistic_versions=versions,
            final_score=final,
            abort_reason=abort,
            ended_by=ended_by,
            mode=config.mode,
            task_instruction=instruction,
            total_prompt_tokens=sum(p for p, _ in usage),
            total_completion_tokens=sum(c for _, c in usage),
            trace=trace,
        )

    plan = None
    if not react_mode:
        reflectors.begin_step(0)
        try:
            plan = reflectors.holistic(instruction, trace, None, None)
        except _STEP_ERRORS as exc:
            usage.append(reflectors.pop_usage())
            ended = "provider_error" if isinstance(exc, ProviderError) else "reflect_error"
            return report(False, ended, abort=f"{type(exc).__name__}: {exc}")

    obs, available = env.reset()
    if env.goal_reached():
        if plan is not None:
            usage.append(reflectors.pop_usage())
        return report(True, "env_done", final=FitnessScore(100))

    prev_score: FitnessScore | None = None
    pending = reflectors.pop_usage() if plan is not None else (0, 0)

    for t in range(1, config.max_steps + 1):
        reflectors.begin_step(t)
        try:
            if react_mode:
                choice, local_log = reflectors.react(instruction, obs, trace, available)
                local = None
            else:
                if config.mode == "naive_concat":
                    plan = reflectors.holistic(instruction, trace, plan, prev_score)
                    versions.append((t, plan.version))
                else:
                    directive = next_directive(t, prev_score)
                    if directive is StrategyDirective.TERMINATE:
                        if env.goal_reached():
                            return report(True, "terminate_directive")
                        return report(False, "false_completion", abort="false completion claim")
                    if directive is StrategyDirective.UPDATE and config.mode != "local_only":
                        plan = reflectors.holistic(instruction, trace, plan, prev_score)
                        versions.append((t, plan.version))
                    elif directive is StrategyDirective.USE_INITIAL:
                        versions.append((t, plan.version))
                if config.mode == "holistic_only":
                    local, local_log = None, ""
                else:
                    local, local_log = reflectors.local(obs, plan, trace)
                choice = reflectors.decide(plan, local, obs, available)

            obs, reward, done, available = env.step(choice.action)

            if react_mode:
                score = FitnessScore(0)
            else:
                score = reflectors.score(obs, choice.action, reward, trace, plan).value
        except _STEP_ERRORS as exc:
            step_usage = _merge(pending, reflectors.pop_usage())
            pending = (0, 0)
            if step_usage != (0, 0):
                usage.append(step_usage)
            if isinstance(exc, (DecisionError, EnvActionError)):
                ended = "decision_error"
            elif isinstance(exc, ProviderError):
                ended = "provider_error"
            else:
                ended = "reflect_error"
            return report(False, ended, abort=f"{type(exc).__name__}: {exc}")

        trace.append(
            ExploreStep(
                step_index=t,
                observation=obs,
                action=choice.action,
                reward=reward,
                local_log=local_log,
                score=score,
                holistic_version=0 if react_mode else plan.version,
            )
        )
        usage.append(_merge(pending, reflectors.pop_usage()))
        pending = (0, 0)
        prev_score = score
        if done:
            return report(True, "env_done")

    return report(False, "step_limit")


def _merge(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    return (a[0] + b[0], a[1] + b[1])


@dataclass
class SummaryRow:
    task_type: str
    episodes: int
    successes: int
    success_rate: float
    mean_steps: float
    mean_prompt_tokens_per_step: float
    mean_completion_tokens_per_step: float

    def to_dict(self) -> dict:
        return {
            "task_type": self.task_type,
            "episodes": self.episodes,
            "successes": self.successes,
            "success_rate": round(self.success_rate, 4),
            "mean_steps": round(self.mean_steps, 2),
            "mean_prompt_tokens_per_step": round(self.mean_prompt_tokens_per_step, 2),
            "mean_completion_tokens_per_step": round(self.mean_completion_tokens_per_step, 2),
        }


@dataclass
class BatchSummary:
    rows: list[SummaryRow]
    reports: list[EpisodeReport]

    def row(self, task_type: str) -> SummaryRow:
        for row in self.rows:
            if row.task_type == task_type:
                return row
        raise KeyError(task_type)

    def format_table(self) -> str:
        header = f"{'type':<10} {'n':>4} {'SR':>7} {'steps':>7} {'tok/step (prompt)':>18} {'tok/step (compl.)':>18}"
        lines = [header, "-" * len(header)]
        for row in self.rows:
            lines.append(
                f"{row.task_type:<10} {row.episodes:>4} {row.success_rate:>6.1%} "
                f"{row.mean_steps:>7.1f} {row.mean_prompt_tokens_per_step:>18.1f} "
                f"{row.mean_completion_tokens_per_step:>18.1f}"
            )
        return "\n".join(lines)


def run_batch(
    tasks: list[TaskSpec],
    config: EpisodeConfig,
    make_reflectors,
    make_env=None,
    parallelism: int = 1,
) -> BatchSummary:
    """Run every task, never aborting the batch on individual failures.

    make_reflectors(env, task) builds a fresh reflector set per episode;
    make_env(task) defaults to a TextHouse instance.
    """
    if not tasks:
        raise ConfigError("task list is empty")
    if make_env is None:
        make_env = lambda task: TextHouseEnv(task)

    def one(task: TaskSpec) -> EpisodeReport:
        env = make_env(task)
        episode_config = EpisodeConfig(
            max_steps=config.max_steps,
            window_size=config.window_size,
            mode=config.mode,
            seed=task.seed,
            task_type=task.task_type,
        )
        try:
            return run_episode(episode_config, env, make_reflectors(env, task))
        except Exception as exc:  # defensive: a broken episode never kills the batch
            return EpisodeReport(
                success=False,
                steps_taken=0,
                per_step_usage=[],
                holistic_versions=[],
                final_score=FitnessScore(0),
                abort_reason=f"{type(exc).__name__}: {exc}",
                ended_by="error",
                mode=config.mode,
                task_instruction=task.instruction,
            )

    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            reports = list(pool.map(one, tasks))
    else:
        reports = [one(task) for task in tasks]

    rows = _summarize(tasks, reports)
    return BatchSummary(rows=rows, reports=reports)


def _summarize(tasks: list[TaskSpec], reports: list[EpisodeReport]) -> list[SummaryRow]:
    order: list[str] = []
    for task in tasks:
        if task.task_type not in order:
            order.append(task.task_type)

    def build(name: str, pairs) -> SummaryRow:
        episodes = len(pairs)
        successes = sum(1 for _, r in pairs if r.success)
        steps = [r.steps_taken for _, r in pairs]
        total_steps = sum(steps)
        prompt = sum(p for _, r in pairs for p, _ in r.per_step_usage)
        completion = sum(c for _, r in pairs for _, c in r.per_step_usage)
        return SummaryRow(
            task_type=name,
            episodes=episodes,
            successes=successes,
            success_rate=successes / episodes,
            mean_steps=total_steps / episodes,
            mean_prompt_tokens_per_step=prompt / total_steps if total_steps else 0.0,
            mean_completion_tokens_per_step=completion / total_steps if total_steps else 0.0,
        )

    pairs = list(zip(tasks, reports))
    rows = [build(name, [p for p in pairs if p[0].task_type == name]) for name in order]
    rows.append(build("all", pairs))
    return rows

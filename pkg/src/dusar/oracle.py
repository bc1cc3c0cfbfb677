"""Rule-based reflectors answering from ground-truth world state.

These implement the same four reflecting roles as the LLM-backed set but
bypass any completion provider:

* plans come from task-family decompositions,
* next actions from the shortest-path planner,
* scores from the milestone profile evaluated against the true state,
* decisions take the local candidate.

They exist so the whole loop is verifiable end to end without a model.
Prompt rendering still happens (unless disabled) purely for token
accounting, so token-budget comparisons measure the real prompt surfaces.
"""

from __future__ import annotations

from .core import FitnessScore, HolisticStrategy, LocalStrategy
from .envs import TextHouseEnv, object_type, plan_from_state
from .errors import OracleError
from .prompts import (
    DEFAULT_TEMPLATES,
    PromptTemplates,
    milestone_profile,
    plan_text,
    render_decision,
    render_holistic,
    render_local,
    render_react,
    render_score,
)
from .provider import count_tokens
from .reflect import ActionChoice, ParsedScore
from .trace import ExploreTrace


def plan_subgoals(task) -> tuple[str, ...]:
    """Task-family decomposition into ordered sub-goals."""
    goal = task.goal
    otype = goal.object_type
    rtype = goal.receptacle_type
    if task.task_type == "put":
        return (
            f"Locate the {otype}",
            f"Pick up the {otype}",
            f"Navigate to the {rtype}",
            f"Place the {otype}",
        )
    if task.task_type == "examine":
        return (
            f"Locate the {otype}",
            f"Pick up the {otype}",
            "Navigate to the desklamp",
            f"Examine the {otype} under the desklamp",
        )
    if task.task_type in ("clean", "heat", "cool"):
        appliance = {"clean": "sinkbasin", "heat": "microwave", "cool": "fridge"}[task.task_type]
        return (
            f"Locate the {otype}",
            f"Pick up the {otype}",
            f"Navigate to the {appliance}",
            f"{task.task_type.capitalize()} the {otype}",
            f"Navigate to the {rtype}",
            f"Place the {otype}",
        )
    if task.task_type == "puttwo":
        return (
            f"Locate the first {otype}",
            f"Pick up the first {otype}",
            f"Locate the second {otype}",
            f"Pick up the second {otype}",
            f"Navigate to the {rtype}",
            f"Place both {otype}s",
        )
    return (f"Work toward: {task.instruction}",)


def progress_score(env: TextHouseEnv) -> int:
    """Current milestone stage from the true world state and family profile.

    Below the first milestone the stage is 25 (plain ongoing exploration),
    or 10 when the family's first milestone is itself below 50, so that
    milestone stays observable. The reflector reports each stage once, when
    first reached; in between it reports the ongoing base.
    """
    goal = env.task.goal
    state = env.state
    if env.goal_reached():
        return 100

    held = [n for n in state.inventory if object_type(n) == goal.object_type]
    instances = [o.name for o in state.objects.values() if o.type == goal.object_type]
    seen = [n for n in instances if n in env.seen_objects]
    kind = goal.kind

    if kind == "put":
        if held:
            return 75
        return 50 if seen else 25
    if kind == "examine":
        at_lamp = state.agent_at is not None and state.receptacles[state.agent_at].kind == "desklamp"
        if held and at_lamp:
            return 75
        return 50 if seen else 25
    if kind in ("clean", "heat", "cool"):
        flag = {"clean": "clean", "heat": "hot", "cool": "cold"}[kind]
        if any(getattr(state.objects[n], flag) for n in instances):
            return 75
        if held:
            return 50
        return 25
    if kind == "puttwo":
        placed = sum(
            1
            for r in state.receptacles.values()
            if r.kind == goal.receptacle_type
            for n in r.contents
            if object_type(n) == goal.object_type
        )
        acquired = placed + len(held)
        if acquired >= 2:
            return 90
        if len(seen) + placed >= 2 and acquired >= 1:
            return 75
        if acquired >= 1:
            return 50
        if seen:
            return 25
        return 10
    return 25


class OracleReflectors:
    """Ground-truth reflector set for one TextHouse episode."""

    def __init__(
        self,
        env: TextHouseEnv,
        templates: PromptTemplates = DEFAULT_TEMPLATES,
        count_prompts: bool = True,
    ):
        self.env = env
        self.templates = templates
        self.count_prompts = count_prompts
        self.profile = None  # set lazily once the env has a task
        self._step = 0
        self._best_stage = 0
        self._prompt_tokens = 0
        self._completion_tokens = 0

    def begin_step(self, step_index: int) -> None:
        self._step = step_index

    def pop_usage(self) -> tuple[int, int]:
        usage = (self._prompt_tokens, self._completion_tokens)
        self._prompt_tokens = 0
        self._completion_tokens = 0
        return usage

    def _account(self, prompt_text, answer: str) -> None:
        if self.count_prompts:
            self._prompt_tokens += prompt_text.approx_tokens
            self._completion_tokens += count_tokens(answer)

    def _next_action(self) -> str:
        plan = plan_from_state(self.env.state, self.env.task.goal)
        if not plan:
            raise OracleError("oracle asked for an action but the goal already holds")
        return plan[0]

    def holistic(self, instruction, trace: ExploreTrace, prev, prev_score) -> HolisticStrategy:
        task = self.env.task
        subgoals = plan_subgoals(task)
        if prev is None:
            rationale = "Initial decomposition of the task into ordered sub-goals."
            version = 1
        elif prev_score is not None and prev_score.value == 0:
            rationale = f"Stagnation at step {self._step}; revising the approach."
            version = prev.version + 1
        else:
            rationale = f"Milestone reached by step {self._step}; focusing on the remaining sub-goals."
            version = prev.version + 1
        plan = HolisticStrategy(
            version=version,
            subgoals=subgoals,
            rationale=rationale,
            created_at_step=self._step,
        )
        prompt = render_holistic(
            instruction, trace.window(), prev, prev_score,
            templates=self.templates, window_size=trace.window_size,
        )
        self._account(prompt, plan_text(plan))
        return plan

    def local(self, observation, holistic, trace: ExploreTrace) -> tuple[LocalStrategy, str]:
        action = self._next_action()
        strategy = LocalStrategy(
            guidance=f"Take the shortest route: {action}.",
            candidate_actions=(action,),
            alignment_note="aligned with the current sub-goal",
        )
        log = (
            f"Shortest-path analysis from the current state selects: {action}. "
            "This advances the active sub-goal."
        )
        prompt = render_local(
            observation, holistic, trace.window(),
            templates=self.templates, window_size=trace.window_size,
        )
        self._account(prompt, log)
        return strategy, log

    def decide(self, holistic, local, observation, available) -> ActionChoice:
        if not available:
            raise ValueError("available action set must be non-empty")
        if local is not None and local.candidate_actions:
            action = local.candidate_actions[0]
        else:
            action = self._next_action()
        if action not in available:
            raise OracleError(f"planned action {action!r} is not available")
        prompt = render_decision(holistic, local, observation, available, templates=self.templates)
        self._account(prompt, action)
        return ActionChoice(action, "exact")

    def score(self, observation, action, reward, trace: ExploreTrace, holistic) -> ParsedScore:
        if self.profile is None:
            self.profile = milestone_profile(self.env.task.task_type)
        stage = progress_score(self.env)
        base = 10 if self.env.task.task_type == "puttwo" else 25
        if stage == 100:
            value = 100
        elif stage > self._best_stage:
            # one milestone per step, in profile order, even when a single
            # action completes two stages at once (e.g. both objects found
            # before the first pickup)
            thresholds = [score for _, score in self.profile.thresholds]
            pending = [t for t in thresholds if self._best_stage < t <= stage]
            value = pending[0] if pending else stage
            self._best_stage = value
        else:
            value = base
        prompt = render_score(
            observation, action, reward, trace.window(), self.profile, holistic,
            templates=self.templates, window_size=trace.window_size,
        )
        self._account(prompt, str(value))
        return ParsedScore(FitnessScore(value), raw=str(value))

    def react(self, instruction, observation, trace: ExploreTrace, available) -> tuple[ActionChoice, str]:
        action = self._next_action()
        if action not in available:
            raise OracleError(f"planned action {action!r} is not available")
        log = f"Think: the shortest path to the goal continues with {action}.\n{action}"
        prompt = render_react(
            instruction, observation, trace.window(), available, self.env.task.task_type,
            templates=self.templates, window_size=trace.window_size,
        )
        self._account(prompt, log)
        return ActionChoice(action, "exact"), log

"""The four reflecting calls, built from prompt rendering plus a provider.

Model output is untrusted text; every parser here has a bounded recovery
path:

* plans: numbered/bulleted lines become sub-goals; with no list structure
  the whole completion becomes a single sub-goal flagged ``parse_warning``.
* actions: exact line match first, then normalized matching (case-fold,
  trim, collapse whitespace, strip trailing punctuation); one re-prompt;
  then the first local candidate; then a DecisionError.
* scores: the last integer in [0, 100] wins (completions often restate the
  rubric before the verdict); one re-prompt; then default 25 (Ongoing, the
  least disruptive band) flagged ``defaulted``.

Retry calls flow through the same usage meter, so token accounting includes
re-prompts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import ExploreStep, FitnessScore, HolisticStrategy, LocalStrategy
from .errors import DecisionError, ReflectError
from .prompts import (
    DEFAULT_TEMPLATES,
    MilestoneProfile,
    PromptTemplates,
    milestone_profile,
    render_decision,
    render_holistic,
    render_local,
    render_react,
    render_score,
)
from .provider import CompletionRequest, Message, UsageMeter
from .trace import ExploreTrace


@dataclass(frozen=True)
class ParsedScore:
    value: FitnessScore
    raw: str
    defaulted: bool = False


@dataclass(frozen=True)
class ActionChoice:
    action: str
    matched_by: str  # "exact" | "normalized"

    def __post_init__(self):
        if self.matched_by not in ("exact", "normalized"):
            raise ValueError(f"unknown match kind {self.matched_by!r}")


# --- parsers -------------------------------------------------------------

_LIST_LINE = re.compile(r"^\s*(?:[-*•]|\(?\d+[.)]\)?)\s+(.*\S)\s*$")
_INLINE_MARK = re.compile(r"\(\d+\)\s*")


def parse_subgoals(text: str) -> tuple[tuple[str, ...], str, bool]:
    """Extract (subgoals, rationale, parse_warning) from a plan completion."""
    subgoals: list[str] = []
    prose: list[str] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        parts = _INLINE_MARK.split(line)
        if len(parts) >= 3:
            subgoals.extend(part.strip() for part in parts[1:] if part.strip())
            if parts[0].strip():
                prose.append(parts[0].strip())
            continue
        match = _LIST_LINE.match(line)
        if match:
            subgoals.append(match.group(1).strip())
        else:
            prose.append(line.strip())
    if subgoals:
        return tuple(subgoals), " ".join(prose), False
    return (text.strip(),), "", True


_ACTION_SYNTAX = re.compile(
    r"^(?:go to|open|close|take|put|clean|heat|cool|examine|use|look at|click|type|select)\b",
    re.IGNORECASE,
)
_LABEL = re.compile(r"^action\s*:\s*", re.IGNORECASE)
_BULLET = re.compile(r"^\s*(?:[-*•]|\(?\d+[.)]\)?)\s*")


def parse_candidate_actions(text: str) -> tuple[str, ...]:
    """Lines of a completion that look like actions, cleaned of list markers."""
    seen: list[str] = []
    for line in text.splitlines():
        cleaned = _LABEL.sub("", _BULLET.sub("", line).strip()).strip()
        cleaned = cleaned.rstrip(" .;:!?")
        if cleaned and _ACTION_SYNTAX.match(cleaned) and cleaned not in seen:
            seen.append(cleaned)
    return tuple(seen)


def parse_alignment(text: str) -> str:
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.lower().startswith("alignment"):
            _, _, rest = stripped.partition(":")
            return rest.strip()
    return ""


def normalize_action(text: str) -> str:
    collapsed = re.sub(r"\s+", " ", text.strip())
    return collapsed.rstrip(".,;:!?").casefold()


def match_action(completion: str, available: list[str]) -> ActionChoice | None:
    """Match a completion against the available set: exact, then normalized."""
    lines = [line for line in completion.splitlines() if line.strip()]
    available_set = set(available)
    for line in lines:
        if line in available_set:
            return ActionChoice(line, "exact")
    normalized = {normalize_action(a): a for a in available}
    for line in lines:
        norm = normalize_action(_LABEL.sub("", _BULLET.sub("", line).strip()))
        if norm in normalized:
            return ActionChoice(normalized[norm], "normalized")
    for line in lines:
        norm = normalize_action(line)
        contained = [a for a in available if normalize_action(a) in norm]
        if contained:
            best = max(contained, key=lambda a: (len(normalize_action(a)), -available.index(a)))
            return ActionChoice(best, "normalized")
    return None


def extract_score(text: str) -> int | None:
    values = [int(token) for token in re.findall(r"\d+", text)]
    values = [value for value in values if value <= 100]
    return values[-1] if values else None


# --- the LLM-backed reflector set ----------------------------------------

class LlmReflectors:
    """Reflecting via rendered prompts against a completion provider.

    One instance serves one episode; the loop announces the current step via
    begin_step() so requests carry a useful phase for scripted fixtures and
    error messages.
    """

    def __init__(
        self,
        provider,
        task_type: str = "generic",
        templates: PromptTemplates = DEFAULT_TEMPLATES,
        profile: MilestoneProfile | None = None,
        model: str = "local",
    ):
        self.meter = UsageMeter(provider)
        self.task_type = task_type
        self.templates = templates
        self.profile = profile or milestone_profile(task_type)
        self.model = model
        self._step = 0

    def begin_step(self, step_index: int) -> None:
        self._step = step_index

    def pop_usage(self) -> tuple[int, int]:
        return self.meter.pop()

    def _phase(self) -> str:
        return "init" if self._step == 0 else f"step{self._step}"

    def _complete(self, tag: str, prompt: str, retry: bool = False) -> str:
        request = CompletionRequest(
            messages=(Message("user", prompt),),
            model=self.model,
            tag=tag,
            phase=self._phase() + (":retry" if retry else ""),
        )
        return self.meter.complete(request).content

    def holistic(
        self,
        instruction: str,
        trace: ExploreTrace,
        prev: HolisticStrategy | None,
        prev_score: FitnessScore | None,
    ) -> HolisticStrategy:
        prompt = render_holistic(
            instruction, trace.window(), prev, prev_score,
            templates=self.templates, window_size=trace.window_size,
        )
        content = self._complete("holistic", prompt.rendered)
        if not content.strip():
            raise ReflectError("empty completion from holistic reflecting")
        subgoals, rationale, warning = parse_subgoals(content)
        return HolisticStrategy(
            version=1 if prev is None else prev.version + 1,
            subgoals=subgoals,
            rationale=rationale,
            created_at_step=self._step,
            parse_warning=warning,
        )

    def local(
        self,
        observation: str,
        holistic: HolisticStrategy,
        trace: ExploreTrace,
    ) -> tuple[LocalStrategy, str]:
        prompt = render_local(
            observation, holistic, trace.window(),
            templates=self.templates, window_size=trace.window_size,
        )
        content = self._complete("local", prompt.rendered)
        strategy = LocalStrategy(
            guidance=parse_guidance(content),
            candidate_actions=parse_candidate_actions(content),
            alignment_note=parse_alignment(content),
        )
        return strategy, content

    def decide(
        self,
        holistic: HolisticStrategy,
        local: LocalStrategy | None,
        observation: str,
        available: list[str],
    ) -> ActionChoice:
        if not available:
            raise ValueError("available action set must be non-empty")
        prompt = render_decision(
            holistic, local, observation, available, templates=self.templates
        )
        choice = match_action(self._complete("decision", prompt.rendered), available)
        if choice is None:
            reminder = (
                prompt.rendered
                + "\n\nReminder: choose exactly one of the available actions, copied verbatim:\n"
                + "\n".join(f"- {action}" for action in available)
            )
            choice = match_action(self._complete("decision", reminder, retry=True), available)
        if choice is None and local is not None and local.candidate_actions:
            choice = self._candidate_fallback(local.candidate_actions[0], available)
        if choice is None:
            raise DecisionError(
                f"no valid action at step {self._step}; available: {available[:5]}..."
            )
        assert choice.action in available
        return choice

    def score(
        self,
        observation: str,
        action: str,
        reward: float,
        trace: ExploreTrace,
        holistic: HolisticStrategy,
    ) -> ParsedScore:
        prompt = render_score(
            observation, action, reward, trace.window(), self.profile, holistic,
            templates=self.templates, window_size=trace.window_size,
        )
        content = self._complete("score", prompt.rendered)
        value = extract_score(content)
        if value is None:
            demand = prompt.rendered + "\n\nReply with a single integer between 0 and 100 and nothing else."
            content = self._complete("score", demand, retry=True)
            value = extract_score(content)
        if value is None:
            return ParsedScore(FitnessScore(25), raw=content, defaulted=True)
        return ParsedScore(FitnessScore(value), raw=content)

    def react(
        self,
        instruction: str,
        observation: str,
        trace: ExploreTrace,
        available: list[str],
    ) -> tuple[ActionChoice, str]:
        if not available:
            raise ValueError("available action set must be non-empty")
        prompt = render_react(
            instruction, observation, trace.window(), available, self.task_type,
            templates=self.templates, window_size=trace.window_size,
        )
        content = self._complete("react", prompt.rendered)
        choice = match_action(content, available)
        if choice is None:
            reminder = (
                prompt.rendered
                + "\n\nReminder: reply with exactly one action from the available list."
            )
            retry_content = self._complete("react", reminder, retry=True)
            choice = match_action(retry_content, available)
            if choice is None:
                raise DecisionError(f"react baseline produced no valid action at step {self._step}")
            content = retry_content
        assert choice.action in available
        return choice, content

    @staticmethod
    def _candidate_fallback(candidate: str, available: list[str]) -> ActionChoice | None:
        if candidate in available:
            return ActionChoice(candidate, "exact")
        normalized = {normalize_action(a): a for a in available}
        norm = normalize_action(candidate)
        if norm in normalized:
            return ActionChoice(normalized[norm], "normalized")
        return None


def parse_guidance(text: str) -> str:
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.lower().startswith("guidance"):
            _, _, rest = stripped.partition(":")
            return rest.strip()
    return ""

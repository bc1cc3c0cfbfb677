"""Domain types and the score-band directive state machine.

The fitness score is an integer in [0, 100]. Its band decides what happens
to the high-level plan at the start of the next step:

    score 0        -> no progress      -> revise the plan (Update)
    score 1..49    -> ongoing          -> keep the plan   (Maintain)
    score 50..99   -> milestone        -> advance the plan (Update)
    score 100      -> task complete    -> Terminate

Step 1 always runs on the initialized plan (UseInitial), before any score
exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class FitnessBand(Enum):
    NO_PROGRESS = "no_progress"
    ONGOING = "ongoing"
    MILESTONE = "milestone"
    COMPLETE = "complete"


class StrategyDirective(Enum):
    USE_INITIAL = "use_initial"
    UPDATE = "update"
    MAINTAIN = "maintain"
    TERMINATE = "terminate"


@dataclass(frozen=True)
class FitnessScore:
    """Integer progress judgement in [0, 100]."""

    value: int

    def __post_init__(self):
        if not isinstance(self.value, int) or isinstance(self.value, bool):
            raise ValueError(f"fitness score must be an integer, got {self.value!r}")
        if not 0 <= self.value <= 100:
            raise ValueError(f"fitness score must be in [0, 100], got {self.value}")

    @property
    def band(self) -> FitnessBand:
        return classify_score(self.value)


def classify_score(value: int) -> FitnessBand:
    """Map a score to its unique band. Total over [0, 100]."""
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"score must be an integer, got {value!r}")
    if value == 0:
        return FitnessBand.NO_PROGRESS
    if 1 <= value <= 49:
        return FitnessBand.ONGOING
    if 50 <= value <= 99:
        return FitnessBand.MILESTONE
    if value == 100:
        return FitnessBand.COMPLETE
    raise ValueError(f"score must be in [0, 100], got {value}")


def next_directive(step_index: int, prev_score: FitnessScore | None) -> StrategyDirective:
    """Directive for step `step_index`, given the previous step's score.

    prev_score must be absent exactly at step 1 (there is no step 0 score).
    """
    if step_index < 1:
        raise ValueError(f"step index must be >= 1, got {step_index}")
    if step_index == 1:
        if prev_score is not None:
            raise ValueError("step 1 has no previous score; got one anyway")
        return StrategyDirective.USE_INITIAL
    if prev_score is None:
        raise ValueError(f"step {step_index} requires the previous step's score")

    band = prev_score.band
    if band in (FitnessBand.NO_PROGRESS, FitnessBand.MILESTONE):
        return StrategyDirective.UPDATE
    if band is FitnessBand.ONGOING:
        return StrategyDirective.MAINTAIN
    return StrategyDirective.TERMINATE


@dataclass(frozen=True)
class HolisticStrategy:
    """Versioned high-level plan: ordered sub-goals plus free-form rationale.

    The version counter increments by exactly one on every plan revision,
    so "an update happened" is directly observable in reports and traces.
    parse_warning marks plans recovered from completions with no list
    structure (the whole completion became a single sub-goal).
    """

    version: int
    subgoals: tuple[str, ...]
    rationale: str = ""
    created_at_step: int = 0
    parse_warning: bool = False

    def __post_init__(self):
        if self.version < 1:
            raise ValueError(f"plan version must be >= 1, got {self.version}")
        if not self.subgoals:
            raise ValueError("a plan needs at least one sub-goal")


@dataclass(frozen=True)
class LocalStrategy:
    """Context-grounded guidance for the current step."""

    guidance: str
    candidate_actions: tuple[str, ...] = ()
    alignment_note: str = ""


@dataclass(frozen=True)
class ExploreStep:
    """One trace tuple: what happened at a single step.

    observation is the environment's feedback to the executed action (the
    same text the scorer judged). holistic_version records which plan
    version was active when the action was chosen; 0 means no plan existed
    (react baseline).
    """

    step_index: int
    observation: str
    action: str
    reward: float
    local_log: str
    score: FitnessScore
    holistic_version: int = 1

    def __post_init__(self):
        if self.step_index < 1:
            raise ValueError(f"step index must be >= 1, got {self.step_index}")
        if self.holistic_version < 0:
            raise ValueError(f"holistic version must be >= 0, got {self.holistic_version}")
        # normalize so equal steps always serialize to identical bytes
        object.__setattr__(self, "reward", float(self.reward))

"""Deterministic prompt rendering for the four reflecting roles.

Rendering is a pure function of its inputs: equal inputs produce
byte-identical output. Free text that originates outside the runtime
(observations, model output, history lines) is fenced between ``<<<`` and
``>>>`` with any delimiter occurrence doubled, so environment text cannot
imitate template structure.

Templates may be loaded from a directory (one ``<role>.txt`` file per
role: holistic, local, score, decision, react); built-in defaults are used
for any missing file. Placeholders use ``{name}`` syntax; the supported
names per role are listed in the built-in templates below.

The decision template has no canonical source text; the built-in default
is a synthesized plan-priority prompt and is marked as such here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .core import ExploreStep, FitnessScore, HolisticStrategy, LocalStrategy
from .errors import ConfigError
from .provider import count_tokens
from .trace import DEFAULT_WINDOW_SIZE

ROLE_TAGS = ("holistic", "local", "score", "decision", "react")

FENCE_OPEN = "<<<"
FENCE_CLOSE = ">>>"


@dataclass(frozen=True)
class PromptText:
    rendered: str
    role_tag: str
    approx_tokens: int

    def __post_init__(self):
        if self.role_tag not in ROLE_TAGS:
            raise ValueError(f"unknown role tag {self.role_tag!r}")
        if self.approx_tokens < 0:
            raise ValueError("approx_tokens must be >= 0")


@dataclass(frozen=True)
class MilestoneProfile:
    """Score thresholds a task family hands to the scorer rubric."""

    task_type: str
    thresholds: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if not self.thresholds:
            raise ValueError("a milestone profile needs at least one threshold")
        scores = [score for _, score in self.thresholds]
        if any(b <= a for a, b in zip(scores, scores[1:])):
            raise ValueError(f"threshold scores must strictly increase, got {scores}")
        if scores[-1] != 100:
            raise ValueError(f"final threshold must be 100, got {scores[-1]}")
        if scores[0] < 0:
            raise ValueError("threshold scores must be >= 0")

    def lines(self) -> str:
        return "\n".join(f"- {score}: {desc}" for desc, score in self.thresholds)


_PROFILES: dict[str, MilestoneProfile] = {
    "put": MilestoneProfile("put", (
        ("target object found", 50),
        ("target object picked up", 75),
        ("object placed at the target, task complete", 100),
    )),
    "examine": MilestoneProfile("examine", (
        ("both target object and lamp found", 50),
        ("object carried to the lamp", 75),
        ("object examined under the lamp, task complete", 100),
    )),
    "clean": MilestoneProfile("clean", (
        ("target object picked up", 50),
        ("object cleaned at the sink", 75),
        ("cleaned object placed at the target", 90),
        ("task complete", 100),
    )),
    "heat": MilestoneProfile("heat", (
        ("target object picked up", 50),
        ("object heated in the microwave", 75),
        ("heated object placed at the target", 90),
        ("task complete", 100),
    )),
    "cool": MilestoneProfile("cool", (
        ("target object picked up", 50),
        ("object cooled at the fridge", 75),
        ("cooled object placed at the target", 90),
        ("task complete", 100),
    )),
    "puttwo": MilestoneProfile("puttwo", (
        ("first target object found", 25),
        ("first object picked up", 50),
        ("second target object found", 75),
        ("second object picked up", 90),
        ("both objects placed at the target, task complete", 100),
    )),
}

GENERIC_PROFILE = MilestoneProfile("generic", (
    ("significant progress toward the goal", 50),
    ("task nearly complete", 75),
    ("task complete", 100),
))


def milestone_profile(task_type: str) -> MilestoneProfile:
    """Profile for a known task family; anything else falls back to generic."""
    return _PROFILES.get(task_type, GENERIC_PROFILE)


# --- built-in templates ------------------------------------------------

HOLISTIC_TEMPLATE = """\
You are a strategic planner. Given a task instruction, past exploration
history, and current holistic strategy, generate a refined high-level plan.

Task: {task_instruction}
Previous Strategy: {previous_strategy}
Exploration History: {window}
Strategy Fitness Score: {prev_score}

Generate a holistic strategy that:
1. Decomposes the task into ordered sub-goals
2. Accounts for progress indicated by the fitness score
3. Revises the plan if stagnation (score=0) or advances if milestone
   achieved (50 <= score <= 99)

Reply with one numbered sub-goal per line, then an optional rationale line.
"""

LOCAL_TEMPLATE = """\
You are a local executor. Given current observation, holistic strategy,
and exploration history, generate immediate action guidance.

Observation: {observation}
Holistic Strategy: {holistic_strategy}
Exploration History: {window}

Generate a local strategy that:
1. Identifies feasible next actions
2. Evaluates alignment with holistic goals
3. Provides context-aware execution guidance

List each feasible next action on its own line as "Action: ...", and state
alignment on a line starting with "Alignment:".
"""

SCORE_TEMPLATE = """\
Evaluate the Strategy Fitness Score based on:
- Current observation: {observation}
- Last action: {action}
- Reward signal: {reward}
- Recent history: {window}

Current plan: {holistic_strategy}

Milestones for this task type:
{milestones}

Assign numerical score (0-100):
- 0: No progress (stagnation, repeated actions, no state change)
- 1-49: Approaching sub-goal (relevant elements found, ongoing exploration)
- 50-99: Significant advancement or sub-goal completed (milestone achieved)
- 100: Task completed (overall goal reached)

Reply with a single integer between 0 and 100.
"""

# Synthesized default: no canonical text exists for the decision role.
DECISION_TEMPLATE = """\
You choose the single next action by combining the long-term plan with the
local guidance. Integration prioritizes the Holistic Strategy when aligned
with local context; otherwise defer to the local guidance for grounded
adaptation.

Holistic Strategy: {holistic_strategy}
Local guidance: {local_guidance}
Observation: {observation}

Available actions:
{available_actions}

Reply with exactly one action, copied verbatim from the available list.
"""

REACT_TEMPLATE = """\
You interact with a household to solve a task. At each turn, think about
what to do next, then act. Thoughts start with "Think:" and the action must
be copied verbatim from the available actions.

Here are two solved examples.

{exemplars}

Your task: {task_instruction}
History: {window}
Observation: {observation}

Available actions:
{available_actions}

Think, then reply with exactly one action from the list on its own line.
"""

_BUILTIN = {
    "holistic": HOLISTIC_TEMPLATE,
    "local": LOCAL_TEMPLATE,
    "score": SCORE_TEMPLATE,
    "decision": DECISION_TEMPLATE,
    "react": REACT_TEMPLATE,
}


@dataclass(frozen=True)
class PromptTemplates:
    holistic: str = HOLISTIC_TEMPLATE
    local: str = LOCAL_TEMPLATE
    score: str = SCORE_TEMPLATE
    decision: str = DECISION_TEMPLATE
    react: str = REACT_TEMPLATE

    @classmethod
    def from_dir(cls, directory) -> "PromptTemplates":
        """Load `<role>.txt` files from a directory; built-ins fill the gaps."""
        path = Path(directory)
        if not path.is_dir():
            raise ConfigError(f"template directory not found: {directory}")
        loaded = {}
        for role in ROLE_TAGS:
            candidate = path / f"{role}.txt"
            loaded[role] = candidate.read_text(encoding="utf-8") if candidate.is_file() else _BUILTIN[role]
        return cls(**loaded)

    def for_role(self, role: str) -> str:
        return getattr(self, role)


DEFAULT_TEMPLATES = PromptTemplates()


# --- escaping and block helpers ----------------------------------------

def fence(text: str) -> str:
    """Wrap untrusted free text; delimiter occurrences inside are doubled."""
    escaped = text.replace(FENCE_OPEN, FENCE_OPEN * 2).replace(FENCE_CLOSE, FENCE_CLOSE * 2)
    return f"{FENCE_OPEN}{escaped}{FENCE_CLOSE}"


def _collapse(text: str) -> str:
    return re.sub(r"\r\n|\r|\n", "\\\\n", text)


def window_lines(steps: list[ExploreStep]) -> str:
    """Fixed one-line-per-step serialization of a trace window, newest last."""
    return "\n".join(
        f"Step {s.step_index}: {_collapse(s.observation)} | {_collapse(s.action)} | score {s.score.value}"
        for s in steps
    )


def _window_block(steps, window_size: int) -> str:
    steps = list(steps)[-window_size:]
    if not steps:
        return "(none)"
    return fence(window_lines(steps))


def plan_text(plan: HolisticStrategy) -> str:
    lines = [f"Plan v{plan.version}:"]
    lines += [f"{i}. {goal}" for i, goal in enumerate(plan.subgoals, start=1)]
    if plan.rationale:
        lines.append(f"Rationale: {plan.rationale}")
    return "\n".join(lines)


def _plan_block(plan: HolisticStrategy | None) -> str:
    return fence(plan_text(plan)) if plan is not None else "(none)"


def _local_block(local: LocalStrategy | None) -> str:
    """Local strategy as shown to the decision role.

    Deliberately excludes the raw reasoning log: only extracted candidate
    actions and the alignment note participate in action selection.
    """
    if local is None:
        return "(none)"
    lines = []
    if local.guidance:
        lines.append(f"Guidance: {local.guidance}")
    if local.candidate_actions:
        lines.append("Candidate actions:")
        lines += [f"- {action}" for action in local.candidate_actions]
    if local.alignment_note:
        lines.append(f"Alignment: {local.alignment_note}")
    if not lines:
        return "(no local guidance)"
    return fence("\n".join(lines))


def _available_block(available: list[str]) -> str:
    return fence("\n".join(f"- {action}" for action in available))


_PLACEHOLDER = re.compile(r"\{([a-z_]+)\}")


def _substitute(template: str, mapping: dict[str, str]) -> str:
    def repl(match: re.Match) -> str:
        name = match.group(1)
        if name not in mapping:
            raise ConfigError(f"template references unknown placeholder {{{name}}}")
        return mapping[name]

    return _PLACEHOLDER.sub(repl, template)


def _prompt(role: str, template: str, mapping: dict[str, str]) -> PromptText:
    rendered = _substitute(template, mapping)
    return PromptText(rendered=rendered, role_tag=role, approx_tokens=count_tokens(rendered))


# --- render operations --------------------------------------------------

def render_holistic(
    instruction: str,
    window: list[ExploreStep],
    prev: HolisticStrategy | None,
    prev_score: FitnessScore | None,
    *,
    templates: PromptTemplates = DEFAULT_TEMPLATES,
    window_size: int = DEFAULT_WINDOW_SIZE,
) -> PromptText:
    if not instruction:
        raise ValueError("task instruction must be non-empty")
    mapping = {
        "task_instruction": fence(instruction),
        "previous_strategy": _plan_block(prev),
        "window": _window_block(window, window_size),
        "prev_score": str(prev_score.value) if prev_score is not None else "(none)",
    }
    return _prompt("holistic", templates.holistic, mapping)


def render_local(
    observation: str,
    holistic: HolisticStrategy,
    window: list[ExploreStep],
    *,
    templates: PromptTemplates = DEFAULT_TEMPLATES,
    window_size: int = DEFAULT_WINDOW_SIZE,
) -> PromptText:
    if not observation:
        raise ValueError("observation must be non-empty")
    mapping = {
        "observation": fence(observation),
        "holistic_strategy": _plan_block(holistic),
        "window": _window_block(window, window_size),
    }
    return _prompt("local", templates.local, mapping)


def render_score(
    observation: str,
    action: str,
    reward: float,
    window: list[ExploreStep],
    profile: MilestoneProfile,
    holistic: HolisticStrategy,
    *,
    templates: PromptTemplates = DEFAULT_TEMPLATES,
    window_size: int = DEFAULT_WINDOW_SIZE,
) -> PromptText:
    mapping = {
        "observation": fence(observation),
        "action": fence(_collapse(action)),
        "reward": repr(float(reward)),
        "window": _window_block(window, window_size),
        "holistic_strategy": _plan_block(holistic),
        "milestones": profile.lines(),
    }
    return _prompt("score", templates.score, mapping)


def render_decision(
    holistic: HolisticStrategy,
    local: LocalStrategy | None,
    observation: str,
    available: list[str],
    *,
    templates: PromptTemplates = DEFAULT_TEMPLATES,
) -> PromptText:
    if not available:
        raise ValueError("available action set must be non-empty")
    mapping = {
        "holistic_strategy": _plan_block(holistic),
        "local_guidance": _local_block(local),
        "observation": fence(observation),
        "available_actions": _available_block(available),
    }
    return _prompt("decision", templates.decision, mapping)


def render_react(
    instruction: str,
    observation: str,
    window: list[ExploreStep],
    available: list[str],
    task_type: str,
    *,
    templates: PromptTemplates = DEFAULT_TEMPLATES,
    window_size: int = DEFAULT_WINDOW_SIZE,
) -> PromptText:
    if not available:
        raise ValueError("available action set must be non-empty")
    mapping = {
        "exemplars": react_exemplars(task_type),
        "task_instruction": fence(instruction),
        "window": _window_block(window, window_size),
        "observation": fence(observation),
        "available_actions": _available_block(available),
    }
    return _prompt("react", templates.react, mapping)


# --- react baseline exemplars -------------------------------------------
# Two fixed solved trajectories per task family, embedded in every react
# prompt. Intentionally verbose: the baseline pays the in-context price.

def _exemplar(task: str, steps: list[tuple[str, str, str]]) -> str:
    lines = [f"Example task: {task}"]
    for obs, think, act in steps:
        lines.append(f"Observation: {obs}")
        lines.append(f"Think: {think}")
        lines.append(f"Action: {act}")
    lines.append("Observation: Task completed.")
    return "\n".join(lines)


_ROOM = (
    "You are in the middle of the room. Around you: cabinet 1, cabinet 2, "
    "countertop 1, countertop 2, shelf 1, drawer 1, sinkbasin 1, microwave 1, "
    "fridge 1, garbagecan 1, desklamp 1."
)

_REACT_EXEMPLARS: dict[str, tuple[str, str]] = {
    "put": (
        _exemplar("put some saltshaker on shelf 1", [
            (_ROOM,
             "I need to find a saltshaker somewhere in the room and then carry it to a shelf. "
             "Saltshakers are usually kept on countertops or inside cabinets, so I will search "
             "the countertops first because they are visible without opening anything, and only "
             "then start opening the closed storage one by one.",
             "go to countertop 1"),
            ("You are at countertop 1. You see: bowl 1, knife 1.",
             "There is only a bowl and a knife here, no saltshaker. Before I start opening "
             "cabinets, which costs an extra action each time, I should finish checking the "
             "other countertop since its contents are visible for free.",
             "go to countertop 2"),
            ("You are at countertop 2. You see: plate 1.",
             "Still no saltshaker on the countertops, only a plate. The shelf is also visible, "
             "so I will glance there before committing to the closed cabinets, to rule out all "
             "of the open surfaces first.",
             "go to shelf 1"),
            ("You are at shelf 1. You see: cup 1.",
             "Only a cup on the shelf, so every open surface has been ruled out. The saltshaker "
             "must be hidden inside one of the closed receptacles. Cabinet 1 is the nearest, so "
             "I will walk there and open it to look inside.",
             "go to cabinet 1"),
            ("You are at cabinet 1. Cabinet 1 is closed.",
             "The cabinet is closed and I cannot see what it contains from the outside. Opening "
             "it is the only way to check whether the saltshaker is stored here, so I open it.",
             "open cabinet 1"),
            ("You open cabinet 1. It is empty.",
             "Cabinet 1 turned out to be completely empty. That rules it out. The next closed "
             "receptacle is cabinet 2, so I continue the systematic search there rather than "
             "revisiting places I have already seen.",
             "go to cabinet 2"),
            ("You are at cabinet 2. Cabinet 2 is closed.",
             "Cabinet 2 is closed like the last one. I will open it and inspect the contents; "
             "if the saltshaker is not here either, the drawer remains as the final hiding "
             "spot.",
             "open cabinet 2"),
            ("You open cabinet 2. In it you see: saltshaker 1.",
             "I found the saltshaker inside cabinet 2. I should pick it up now so that I can "
             "carry it over to the shelf, which is where the task wants it placed.",
             "take saltshaker 1 from cabinet 2"),
            ("You take saltshaker 1 from cabinet 2.",
             "I am now holding the saltshaker, so the search phase is over. The target location "
             "is a shelf, so I will navigate back to shelf 1 and place the saltshaker there to "
             "finish the task.",
             "go to shelf 1"),
            ("You are at shelf 1. You see: cup 1.",
             "I have reached the shelf while carrying the saltshaker. Putting it down here "
             "satisfies the instruction exactly, so I place it and the task is complete.",
             "put saltshaker 1 in shelf 1"),
        ]),
        _exemplar("put some book on countertop 2", [
            (_ROOM,
             "The task asks me to place a book on countertop 2. First I must locate a book. "
             "Books are often kept on shelves or inside drawers, so I will inspect the shelf "
             "first since its contents are visible without opening anything.",
             "go to shelf 1"),
            ("You are at shelf 1. You see: plate 2.",
             "Only a plate here, no book. The countertops are also open surfaces, so I will "
             "scan countertop 1 on my way before opening any drawers, in case the book is "
             "simply lying out in the open.",
             "go to countertop 1"),
            ("You are at countertop 1. You see: knife 1.",
             "Just a knife on this countertop. Countertop 2 is the eventual destination anyway, "
             "but scanning it for the book while passing by costs nothing extra and might end "
             "the search early if the book is already lying out there in the open.",
             "go to countertop 2"),
            ("You are at countertop 2. You see: plate 1.",
             "Only a plate on countertop 2, so the book is not out in the open anywhere in this "
             "room. The sinkbasin occasionally holds misplaced items and is visible at no cost, "
             "so one quick look there completes the sweep of every open receptacle.",
             "go to sinkbasin 1"),
            ("You are at sinkbasin 1. It is empty.",
             "The sinkbasin is empty too. Every open surface has now been ruled out, which "
             "means the book must be inside closed storage. The drawer is the classic place "
             "for books and pens, so I will go there and open it to check the contents.",
             "go to drawer 1"),
            ("You are at drawer 1. Drawer 1 is closed.",
             "The drawer is closed and hides its contents completely. I need to open it to "
             "check whether the book is inside; drawers are the most common place for books "
             "and pens in these rooms.",
             "open drawer 1"),
            ("You open drawer 1. In it you see: book 1, pen 1.",
             "There is the book, inside the drawer together with a pen. I only need the book "
             "for this task, so I will take just the book and leave the pen where it is.",
             "take book 1 from drawer 1"),
            ("You take book 1 from drawer 1.",
             "I am holding the book now, so the finding phase is done. The destination named "
             "in the instruction is countertop 2, so I will walk over there to place it down.",
             "go to countertop 2"),
            ("You are at countertop 2. You see: plate 1.",
             "I am at countertop 2 with the book in hand. There is space next to the plate, "
             "so placing the book here fulfils the instruction and completes the task.",
             "put book 1 in countertop 2"),
        ]),
    ),
    "examine": (
        _exemplar("look at bowl under the desklamp", [
            (_ROOM,
             "I need to examine a bowl under the desklamp. That means finding a bowl, carrying "
             "it to the desklamp, and examining it there under the light. Bowls are commonly on "
             "countertops or shelves, so I will check countertop 1 first since it is visible.",
             "go to countertop 1"),
            ("You are at countertop 1. You see: knife 1.",
             "No bowl on this countertop, only a knife. The shelf is another open surface that "
             "can be scanned at the cost of a single move, so I will rule it out before "
             "touching any of the closed cabinets or drawers, which each cost an extra open "
             "action.",
             "go to shelf 1"),
            ("You are at shelf 1. You see: cup 1.",
             "Only a cup on the shelf, still no bowl. The sinkbasin sometimes holds dishes "
             "waiting to be washed, and like the other open receptacles it shows its contents "
             "on arrival, so one quick look there keeps the sweep exhaustive.",
             "go to sinkbasin 1"),
            ("You are at sinkbasin 1. It is empty.",
             "The sinkbasin is empty. Bowls are heavy and often stored low in cabinets, but "
             "countertop 2 remains unchecked and is free to inspect, so the systematic sweep "
             "of open surfaces continues there before any cabinet gets opened.",
             "go to countertop 2"),
            ("You are at countertop 2. You see: bowl 1, plate 1.",
             "There is a bowl right here on countertop 2, next to a plate. I will pick the "
             "bowl up so I can bring it to the desklamp; without holding it, the lamp cannot "
             "be used on it.",
             "take bowl 1 from countertop 2"),
            ("You take bowl 1 from countertop 2.",
             "I am carrying the bowl now. The next sub-task is to reach the desklamp, which "
             "stands at its own spot in the room, so I will walk to desklamp 1 while keeping "
             "the bowl in hand.",
             "go to desklamp 1"),
            ("You are at desklamp 1.",
             "I am at the desklamp while holding the bowl, which is exactly the configuration "
             "the task needs. Examining the bowl under the lamp's light now completes the "
             "task.",
             "examine bowl 1 with desklamp 1"),
        ]),
        _exemplar("look at pen under the desklamp", [
            (_ROOM,
             "The task is to look at a pen under the desklamp, so I need the pen first and the "
             "lamp second. Pens are small and usually live in drawers rather than on open "
             "surfaces, but I will glance at the shelf first since that costs nothing.",
             "go to shelf 1"),
            ("You are at shelf 1. You see: cup 1.",
             "Only a cup on the shelf, no pen. The countertops are also open surfaces, so I "
             "will finish scanning them before opening anything; a pen could easily be lying "
             "next to other utensils out in the open.",
             "go to countertop 1"),
            ("You are at countertop 1. You see: knife 1.",
             "A knife but no pen on countertop 1. One more open surface remains; checking "
             "countertop 2 completes the free sweep and tells me for certain whether the pen "
             "is hidden in closed storage.",
             "go to countertop 2"),
            ("You are at countertop 2. You see: plate 1.",
             "Nothing but a plate here, so the pen is not lying in the open. Small items "
             "usually end up in the drawer or a cabinet; the drawer is closer and the more "
             "typical home for pens, so I will try it first before any cabinet.",
             "go to drawer 1"),
            ("You are at drawer 1. Drawer 1 is closed.",
             "The drawer is closed as expected, hiding everything inside it. Opening it costs "
             "one action and settles the most likely hypothesis about where the pen is stored, "
             "so I open it now rather than detouring anywhere else first.",
             "open drawer 1"),
            ("You open drawer 1. In it you see: pen 1, book 1.",
             "The pen is in the drawer along with a book. I will take only the pen with me so "
             "that I can hold it under the desklamp as the instruction demands.",
             "take pen 1 from drawer 1"),
            ("You take pen 1 from drawer 1.",
             "With the pen in hand, the remaining steps are to walk to the desklamp and use "
             "its light on the pen. Nothing else blocks the way, so I head straight there.",
             "go to desklamp 1"),
            ("You are at desklamp 1.",
             "Standing at the desklamp with the pen in my inventory, I can now examine the pen "
             "under the light, which is precisely what the task asked for and finishes it.",
             "examine pen 1 with desklamp 1"),
        ]),
    ),
    "clean": (
        _exemplar("clean some egg and put it in microwave 1", [
            (_ROOM,
             "I must clean an egg at the sink and then put it into the microwave, so the order "
             "is: find the egg, pick it up, wash it at the sinkbasin, then carry it to the "
             "microwave. Eggs usually sit on countertops or in the fridge; countertop 1 is the "
             "cheapest place to look first.",
             "go to countertop 1"),
            ("You are at countertop 1. You see: knife 1.",
             "No egg here, only a knife. Eggs are frequently kept cold, and the fridge shows "
             "its contents on arrival in this room, so a quick detour to the fridge is a "
             "cheap way to check the most likely refrigerated spot before the other surfaces.",
             "go to fridge 1"),
            ("You are at fridge 1. It is empty.",
             "The fridge is empty, so no egg there. The other countertop is still unexplored "
             "and visible at no cost, so I will check countertop 2 before considering any of "
             "the closed cabinets, which each cost an opening action.",
             "go to countertop 2"),
            ("You are at countertop 2. You see: egg 1, bowl 1.",
             "The egg is right here on countertop 2. I will pick it up so I can wash it; the "
             "cleaning step has to happen at the sinkbasin, which only works on objects I am "
             "actually holding.",
             "take egg 1 from countertop 2"),
            ("You take egg 1 from countertop 2.",
             "Holding the egg, I now need running water. The sinkbasin is the place where "
             "objects get cleaned in this room, so I will walk there next, keeping the egg "
             "with me.",
             "go to sinkbasin 1"),
            ("You are at sinkbasin 1.",
             "I am at the sink with the egg in hand. Cleaning it here satisfies the first half "
             "of the task; after this only the delivery to the microwave remains.",
             "clean egg 1 with sinkbasin 1"),
            ("You clean egg 1 with sinkbasin 1.",
             "The egg is clean now, so the washing sub-task is done. The destination is the "
             "microwave, so I will carry the clean egg over to microwave 1 and place it "
             "inside.",
             "go to microwave 1"),
            ("You are at microwave 1.",
             "I am at the microwave holding the freshly cleaned egg. Placing it inside "
             "completes both halves of the instruction and therefore the whole task.",
             "put egg 1 in microwave 1"),
        ]),
        _exemplar("clean some plate and put it in cabinet 2", [
            (_ROOM,
             "This task asks for a cleaned plate stored in cabinet 2, so I need to find a "
             "plate, wash it at the sinkbasin, and then store it. Plates sit on countertops or "
             "shelves; I will check the shelf first since it is an open surface.",
             "go to shelf 1"),
            ("You are at shelf 1. You see: cup 1.",
             "Only a cup on the shelf, no plate. The countertops are the next open surfaces "
             "to rule out; countertop 1 is closer, so I continue the sweep there before "
             "opening any cabinets.",
             "go to countertop 1"),
            ("You are at countertop 1. You see: knife 1.",
             "Just a knife here. One open surface remains unchecked, countertop 2, and plates "
             "very often sit there next to food; scanning it completes the free part of the "
             "search.",
             "go to countertop 2"),
            ("You are at countertop 2. You see: plate 1.",
             "Here is a plate right away. I will take it so I can rinse it at the sinkbasin; "
             "carrying it is required before any cleaning can happen.",
             "take plate 1 from countertop 2"),
            ("You take plate 1 from countertop 2.",
             "With the plate in hand I head to the sinkbasin, because cleaning only works "
             "there. The storage step comes afterwards, so the sink is the right next stop.",
             "go to sinkbasin 1"),
            ("You are at sinkbasin 1.",
             "At the sink with the plate in my inventory; washing it now prepares it for "
             "storage and completes the first half of the instruction.",
             "clean plate 1 with sinkbasin 1"),
            ("You clean plate 1 with sinkbasin 1.",
             "The plate is clean. Cabinet 2 is the named target, so I will go there next; if "
             "it is closed I will have to open it before putting the plate inside.",
             "go to cabinet 2"),
            ("You are at cabinet 2. Cabinet 2 is closed.",
             "The cabinet is closed, so nothing can be placed inside yet. I must open it "
             "first; opening is a single action and then the placement becomes possible.",
             "open cabinet 2"),
            ("You open cabinet 2. In it you see: cup 2.",
             "Cabinet 2 is open now and there is room next to the cup. Placing the clean "
             "plate inside finishes the storage half of the task and completes it.",
             "put plate 1 in cabinet 2"),
        ]),
    ),
    "heat": (
        _exemplar("heat some mug and put it in garbagecan 1", [
            (_ROOM,
             "I need to heat a mug in the microwave and then drop it into the garbage can, so "
             "the sequence is: locate a mug, pick it up, heat it at the microwave, then carry "
             "it to the garbage can. Mugs are typically found in cabinets or on countertops; "
             "the shelf is the nearest open surface, so I start the sweep there.",
             "go to shelf 1"),
            ("You are at shelf 1. You see: plate 2.",
             "Only a plate on the shelf, no mug. Countertop 2 is another free-to-inspect "
             "surface on the way, so I will scan it next and keep the closed cabinets as a "
             "last resort since each one costs an extra opening action.",
             "go to countertop 2"),
            ("You are at countertop 2. You see: bowl 1.",
             "A bowl but no mug on countertop 2. Countertop 1 is the final open surface; if "
             "the mug is not there either, I will begin opening cabinets one by one in order.",
             "go to countertop 1"),
            ("You are at countertop 1. You see: mug 1, knife 1.",
             "A mug is right here on the countertop next to a knife. I will pick the mug up so "
             "I can warm it; the microwave only heats objects that I am holding.",
             "take mug 1 from countertop 1"),
            ("You take mug 1 from countertop 1.",
             "Holding the mug, I need the microwave to heat it. The microwave stands at its "
             "own spot in the room, so I will walk to microwave 1 while keeping the mug with "
             "me.",
             "go to microwave 1"),
            ("You are at microwave 1.",
             "I am at the microwave with the mug in hand. Heating it here accomplishes the "
             "temperature requirement of the task; after that only the delivery remains.",
             "heat mug 1 with microwave 1"),
            ("You heat mug 1 with microwave 1.",
             "The mug is hot now, so the heating sub-task is done. The final destination named "
             "by the instruction is the garbage can, so I will carry the hot mug over there "
             "without detours.",
             "go to garbagecan 1"),
            ("You are at garbagecan 1.",
             "At the garbage can while holding the heated mug; dropping it in matches the "
             "instruction exactly and completes the task.",
             "put mug 1 in garbagecan 1"),
        ]),
        _exemplar("heat some potato and put it in fridge 1", [
            (_ROOM,
             "The task wants a heated potato stored in the fridge, which sounds odd but the "
             "steps are clear: find a potato, heat it in the microwave, then place it in the "
             "fridge. Vegetables often sit in cabinets, so I will walk to cabinet 1 and open "
             "it if needed.",
             "go to cabinet 1"),
            ("You are at cabinet 1. Cabinet 1 is closed.",
             "The cabinet is closed; its contents are hidden until I open it. Opening it is "
             "one action and gives me full information about what is stored inside, so I do "
             "that now.",
             "open cabinet 1"),
            ("You open cabinet 1. It is empty.",
             "Cabinet 1 is empty, so the potato must be elsewhere. Cabinet 2 is the next "
             "closed container; a systematic sweep of the cabinets avoids revisiting places "
             "and wasted moves.",
             "go to cabinet 2"),
            ("You are at cabinet 2. Cabinet 2 is closed.",
             "Cabinet 2 is closed as well. I will open it and look inside; if the potato is "
             "not here either, the drawers and the fridge itself remain as candidates.",
             "open cabinet 2"),
            ("You open cabinet 2. In it you see: potato 1.",
             "The potato is inside cabinet 2. I will take it and head for the microwave, "
             "because the heating step must happen before the potato goes into the fridge.",
             "take potato 1 from cabinet 2"),
            ("You take potato 1 from cabinet 2.",
             "Now that I hold the potato, heating comes next, which requires the microwave. I "
             "will walk straight there; no other stop is useful while my hands are full.",
             "go to microwave 1"),
            ("You are at microwave 1.",
             "Standing at the microwave with the potato in hand; I heat it now to meet the "
             "temperature requirement of the task before the final delivery.",
             "heat potato 1 with microwave 1"),
            ("You heat potato 1 with microwave 1.",
             "The potato is hot. It belongs in the fridge per the instruction, so I walk to "
             "the fridge carrying it; placing it there will finish everything.",
             "go to fridge 1"),
            ("You are at fridge 1.",
             "At the fridge with the heated potato in hand; placing it inside satisfies the "
             "instruction completely and ends the task.",
             "put potato 1 in fridge 1"),
        ]),
    ),
    "cool": (
        _exemplar("cool some apple and put it in cabinet 1", [
            (_ROOM,
             "I need to chill an apple at the fridge and then store it in a cabinet, so the "
             "order is: find an apple, pick it up, cool it at the fridge, then place it in a "
             "cabinet. Apples usually lie on countertops; countertop 1 is my first stop since "
             "its contents are visible without opening anything.",
             "go to countertop 1"),
            ("You are at countertop 1. You see: knife 1.",
             "No apple on countertop 1, just a knife. The shelf is another open surface worth "
             "a glance on the way; fruit sometimes sits in bowls on shelves, and the look "
             "costs only a single move.",
             "go to shelf 1"),
            ("You are at shelf 1. It is empty.",
             "The shelf is completely empty. Countertop 2 remains the last open surface, and "
             "fruit most often sits there next to the other food, so I will check it before "
             "resorting to the closed cabinets.",
             "go to countertop 2"),
            ("You are at countertop 2. You see: apple 1, bowl 1.",
             "The apple is here next to a bowl. I pick it up so I can cool it at the fridge; "
             "the cooling only applies to objects I am actually carrying.",
             "take apple 1 from countertop 2"),
            ("You take apple 1 from countertop 2.",
             "Holding the apple, the fridge provides the cooling step, so I head there now. "
             "The storage cabinet comes after the apple is cold, not before.",
             "go to fridge 1"),
            ("You are at fridge 1.",
             "I am at the fridge with the apple in hand; cooling it here satisfies the first "
             "half of the instruction and leaves only the storage step.",
             "cool apple 1 with fridge 1"),
            ("You cool apple 1 with fridge 1.",
             "The apple is cold now. The destination is cabinet 1, so I carry the apple over "
             "there; if the cabinet is closed I will open it before placing anything inside.",
             "go to cabinet 1"),
            ("You are at cabinet 1. Cabinet 1 is closed.",
             "The cabinet is closed; I must open it before anything can be placed inside. One "
             "open action and the placement becomes possible.",
             "open cabinet 1"),
            ("You open cabinet 1. In it you see: glassbottle 1.",
             "Cabinet 1 stands open now with room beside the glassbottle. Putting the cooled "
             "apple inside completes the storage half and with it the whole task.",
             "put apple 1 in cabinet 1"),
        ]),
        _exemplar("cool some cup and put it in shelf 1", [
            (_ROOM,
             "This task needs a cooled cup placed on a shelf: find a cup, chill it at the "
             "fridge, then set it on the shelf. Cups hide in cabinets frequently, but I will "
             "scan the open shelf first since that costs nothing.",
             "go to shelf 1"),
            ("You are at shelf 1. You see: plate 2.",
             "Only a plate on the shelf, no cup. The countertops can be ruled out for free as "
             "well, so I sweep countertop 1 before paying the extra action that opening any "
             "cabinet would cost.",
             "go to countertop 1"),
            ("You are at countertop 1. You see: knife 1.",
             "No cup among the utensils on countertop 1. The open surfaces are nearly "
             "exhausted now, and cups most often live in cabinets, so I will inspect cabinet "
             "2 next and open it if it is closed.",
             "go to cabinet 2"),
            ("You are at cabinet 2. Cabinet 2 is closed.",
             "Cabinet 2 is closed, hiding whatever is inside. Opening it reveals the contents "
             "and costs a single action, which is the cheapest way to make progress now.",
             "open cabinet 2"),
            ("You open cabinet 2. In it you see: cup 2.",
             "A cup is inside cabinet 2. I take it so I can chill it at the fridge; carrying "
             "it is a precondition for the cooling step.",
             "take cup 2 from cabinet 2"),
            ("You take cup 2 from cabinet 2.",
             "With the cup in hand, the fridge handles the cooling, so that is my next stop. "
             "After the cup is cold the shelf is the final destination.",
             "go to fridge 1"),
            ("You are at fridge 1.",
             "At the fridge holding the cup; cooling it now fulfils the temperature part of "
             "the task and unlocks the final placement step.",
             "cool cup 2 with fridge 1"),
            ("You cool cup 2 with fridge 1.",
             "The cup is cold. The shelf is the target spot named in the instruction, so I "
             "walk back to shelf 1 carrying the chilled cup.",
             "go to shelf 1"),
            ("You are at shelf 1. You see: plate 2.",
             "I reached the shelf with the cooled cup in hand; placing it next to the plate "
             "finishes the task exactly as instructed.",
             "put cup 2 in shelf 1"),
        ]),
    ),
    "puttwo": (
        _exemplar("put two soapbars in garbagecan 1", [
            (_ROOM,
             "I must collect two soapbars and drop both into the garbage can. For this task I "
             "can carry two small items at once, so the efficient plan is to find and pick up "
             "both soapbars before walking to the garbage can. Soap is usually near the sink "
             "or in cabinets; I start at sinkbasin 1.",
             "go to sinkbasin 1"),
            ("You are at sinkbasin 1. You see: soapbar 1.",
             "The first soapbar is at the sink. I pick it up and keep searching; delivering "
             "one bar alone would waste a round trip since I can hold both at the same time.",
             "take soapbar 1 from sinkbasin 1"),
            ("You take soapbar 1 from sinkbasin 1.",
             "One soapbar secured, one to go. The second one is not in sight, so I check the "
             "closed storage next; cabinets near the sink are the most likely spot for spare "
             "soap.",
             "go to cabinet 1"),
            ("You are at cabinet 1. Cabinet 1 is closed.",
             "The cabinet is closed so its contents are unknown. I open it to look for the "
             "second soapbar; if it is not here I will continue with cabinet 2 and the "
             "drawers.",
             "open cabinet 1"),
            ("You open cabinet 1. It is empty.",
             "Cabinet 1 is empty, no soapbar here. I keep the sweep going: cabinet 2 is the "
             "next unopened container, and I still hold the first soapbar so nothing is "
             "lost.",
             "go to cabinet 2"),
            ("You are at cabinet 2. Cabinet 2 is closed.",
             "Cabinet 2 is also closed. Opening it continues the systematic search; with only "
             "a few containers left the second soapbar must turn up soon.",
             "open cabinet 2"),
            ("You open cabinet 2. In it you see: soapbar 2.",
             "The second soapbar is here in cabinet 2. I take it so that I hold both bars at "
             "the same time; now only the delivery to the garbage can remains.",
             "take soapbar 2 from cabinet 2"),
            ("You take soapbar 2 from cabinet 2.",
             "Both soapbars are in hand, so the collection phase is finished. Now I navigate "
             "to the garbage can to deposit them one after the other.",
             "go to garbagecan 1"),
            ("You are at garbagecan 1.",
             "At the garbage can with both soapbars; I drop the first one in, keeping the "
             "second ready for the next action.",
             "put soapbar 1 in garbagecan 1"),
            ("You put soapbar 1 in garbagecan 1.",
             "One soapbar is disposed of; putting the second one in completes the pair and "
             "with it the whole task.",
             "put soapbar 2 in garbagecan 1"),
        ]),
        _exemplar("put two cups in cabinet 1", [
            (_ROOM,
             "Two cups must end up inside cabinet 1. I can carry both cups at once for this "
             "task, so I will collect both before heading to the destination cabinet. Cups "
             "appear on shelves and in cabinets; shelf 1 is visible, so I look there first.",
             "go to shelf 1"),
            ("You are at shelf 1. You see: cup 1.",
             "The first cup sits on the shelf. I take it and remember I still need a second "
             "cup before heading to the cabinet; delivering them together saves a trip.",
             "take cup 1 from shelf 1"),
            ("You take cup 1 from shelf 1.",
             "First cup acquired. The countertops are free to scan, so I glance at countertop "
             "1 on the way; if no cup is visible I will start opening the closed cabinets.",
             "go to countertop 1"),
            ("You are at countertop 1. You see: knife 1.",
             "No cup on the countertop, just a knife. Countertop 2 is the last open surface "
             "and it sits on the way to the cabinets, so scanning it keeps the search "
             "exhaustive without costing a detour.",
             "go to countertop 2"),
            ("You are at countertop 2. You see: plate 1.",
             "Only a plate here, so no second cup sits in the open. Cabinet 2 might hold "
             "another cup; I go there and open it, since closed cabinets are where spare cups "
             "usually sit.",
             "go to cabinet 2"),
            ("You are at cabinet 2. Cabinet 2 is closed.",
             "Cabinet 2 is closed, so I open it to inspect the contents. I am still holding "
             "the first cup, which is fine because this task lets me carry two items.",
             "open cabinet 2"),
            ("You open cabinet 2. In it you see: cup 2.",
             "A second cup is inside cabinet 2. I take it, holding both cups now; the "
             "collection phase is complete and only the delivery to cabinet 1 remains.",
             "take cup 2 from cabinet 2"),
            ("You take cup 2 from cabinet 2.",
             "Both cups are in hand. The destination cabinet 1 may be closed, so I will go "
             "there and open it before placing anything inside.",
             "go to cabinet 1"),
            ("You are at cabinet 1. Cabinet 1 is closed.",
             "As expected cabinet 1 is closed. I open it so that the cups can be placed "
             "inside; after that two put actions finish the job.",
             "open cabinet 1"),
            ("You open cabinet 1. In it you see: glassbottle 1.",
             "Cabinet 1 is open with room beside the glassbottle. I put the first cup in, "
             "then the second right after.",
             "put cup 1 in cabinet 1"),
            ("You put cup 1 in cabinet 1.",
             "One cup stored; placing the second cup completes the pair and the task is "
             "done.",
             "put cup 2 in cabinet 1"),
        ]),
    ),
}


def react_exemplars(task_type: str) -> str:
    """The two fixed exemplars for a task family (put pair for unknown types)."""
    pair = _REACT_EXEMPLARS.get(task_type, _REACT_EXEMPLARS["put"])
    return "\n\n".join(pair)

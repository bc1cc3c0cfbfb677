"""Deterministic text-household world with six task families and a BFS oracle.

The world is a flat room of receptacles. Cabinets and drawers are openable
and hide their contents while closed; appliances transform a held object
(sinkbasin cleans, microwave heats, fridge cools, desklamp examines).
Observations follow a fixed grammar ("You are at X. You see: a, b.") so
fixtures and parsers stay stable.

Task families: put, examine, clean, heat, cool, puttwo. Generated tasks are
always solvable; generation reruns until a BFS plan within the family's
length bound exists.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field, replace

from .errors import ConfigError, EnvActionError, OracleError

TASK_FAMILIES = ("put", "examine", "clean", "heat", "cool", "puttwo")

OPENABLE_KINDS = {"cabinet", "drawer"}
APPLIANCE_VERB = {"sinkbasin": "clean", "microwave": "heat", "fridge": "cool", "desklamp": "examine"}
NON_CONTAINER_KINDS = {"desklamp"}
ENCLOSED_KINDS = {"cabinet", "drawer", "fridge", "microwave", "garbagecan"}

_OBJECT_TYPES = (
    "apple", "mug", "saltshaker", "soapbar", "egg", "potato", "bowl", "cup",
    "plate", "knife", "book", "pen", "glassbottle", "soapbottle", "tomato", "spoon",
)

# minimal BFS plan length required of a generated task
_MIN_PLAN_LENGTH = {"put": 4, "examine": 4, "clean": 6, "heat": 6, "cool": 6, "puttwo": 6}

_GOAL_FLAG = {"clean": "clean", "heat": "hot", "cool": "cold"}


def object_type(name: str) -> str:
    return name.rsplit(" ", 1)[0]


@dataclass
class Receptacle:
    name: str
    kind: str
    is_open: bool = True
    contents: list[str] = field(default_factory=list)

    @property
    def openable(self) -> bool:
        return self.kind in OPENABLE_KINDS

    @property
    def can_contain(self) -> bool:
        return self.kind not in NON_CONTAINER_KINDS

    @property
    def visible(self) -> bool:
        return not self.openable or self.is_open


@dataclass(frozen=True)
class GoalSpec:
    """Structured goal predicate: what must hold for the task to be done."""

    kind: str
    object_type: str
    receptacle_type: str = ""
    count: int = 1

    def holds(self, state: "EnvState") -> bool:
        if self.kind == "examine":
            return any(
                obj.examined for obj in state.objects.values() if obj.type == self.object_type
            )
        flag = _GOAL_FLAG.get(self.kind)
        placed = 0
        for receptacle in state.receptacles.values():
            if receptacle.kind != self.receptacle_type:
                continue
            for name in receptacle.contents:
                obj = state.objects[name]
                if obj.type != self.object_type:
                    continue
                if flag is None or getattr(obj, flag):
                    placed += 1
        return placed >= self.count

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "object_type": self.object_type,
            "receptacle_type": self.receptacle_type,
            "count": self.count,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GoalSpec":
        return cls(
            kind=data["kind"],
            object_type=data["object_type"],
            receptacle_type=data.get("receptacle_type", ""),
            count=int(data.get("count", 1)),
        )


@dataclass
class WorldObject:
    name: str
    clean: bool = False
    hot: bool = False
    cold: bool = False
    examined: bool = False

    @property
    def type(self) -> str:
        return object_type(self.name)


@dataclass
class EnvState:
    receptacles: dict[str, Receptacle]
    objects: dict[str, WorldObject]
    agent_at: str | None = None
    inventory: list[str] = field(default_factory=list)
    capacity: int = 1

    def location_of(self, name: str) -> str:
        if name in self.inventory:
            return "inventory"
        for receptacle in self.receptacles.values():
            if name in receptacle.contents:
                return receptacle.name
        raise ValueError(f"object {name!r} is nowhere")


@dataclass(frozen=True)
class Layout:
    """Initial world description: receptacles with their kinds, open state
    and contents, plus the agent's carrying capacity."""

    receptacles: tuple[tuple[str, str, bool, tuple[str, ...]], ...]
    capacity: int = 1

    def build(self) -> EnvState:
        receptacles: dict[str, Receptacle] = {}
        objects: dict[str, WorldObject] = {}
        for name, kind, is_open, contents in self.receptacles:
            receptacles[name] = Receptacle(name, kind, is_open, list(contents))
            for obj in contents:
                if obj in objects:
                    raise ConfigError(f"object {obj!r} appears in two receptacles")
                objects[obj] = WorldObject(obj)
        return EnvState(receptacles=receptacles, objects=objects, capacity=self.capacity)

    def to_dict(self) -> dict:
        return {
            "capacity": self.capacity,
            "receptacles": [
                {"name": n, "kind": k, "open": o, "contents": list(c)}
                for n, k, o, c in self.receptacles
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Layout":
        receptacles = tuple(
            (r["name"], r["kind"], bool(r.get("open", True)), tuple(r.get("contents", ())))
            for r in data["receptacles"]
        )
        return cls(receptacles=receptacles, capacity=int(data.get("capacity", 1)))


@dataclass(frozen=True)
class TaskSpec:
    task_type: str
    instruction: str
    goal: GoalSpec
    seed: int
    layout: Layout

    def to_dict(self) -> dict:
        return {
            "task_type": self.task_type,
            "instruction": self.instruction,
            "seed": self.seed,
            "goal": self.goal.to_dict(),
            "layout": self.layout.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TaskSpec":
        if "layout" in data and "goal" in data:
            return cls(
                task_type=data["task_type"],
                instruction=data["instruction"],
                goal=GoalSpec.from_dict(data["goal"]),
                seed=int(data.get("seed", 0)),
                layout=Layout.from_dict(data["layout"]),
            )
        return generate_task(int(data["seed"]), data["task_type"])


def load_task(path) -> TaskSpec:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except FileNotFoundError as exc:
        raise ConfigError(f"task file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"task file {path} is not valid JSON: {exc.msg}") from exc
    try:
        return TaskSpec.from_dict(data)
    except KeyError as exc:
        raise ConfigError(f"task file {path} is missing field {exc}") from exc


def save_task(task: TaskSpec, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(task.to_dict(), handle, indent=2, ensure_ascii=False)
        handle.write("\n")


# --- the environment ----------------------------------------------------

class TextHouseEnv:
    """Deterministic, partially observable household environment.

    One instance is owned by one episode. Closed receptacles hide their
    contents from every observation until opened.
    """

    def __init__(self, task: TaskSpec | None = None):
        self.task = task
        self.state: EnvState | None = None
        self.seen_objects: set[str] = set()
        self._done = False

    def reset(self, task: TaskSpec | None = None) -> tuple[str, list[str]]:
        if task is not None:
            self.task = task
        if self.task is None:
            raise ConfigError("environment has no task to reset to")
        self.state = self.task.layout.build()
        self.seen_objects = set()
        self._done = self.task.goal.holds(self.state)
        names = ", ".join(self.state.receptacles)
        observation = f"You are in the middle of the room. Around you: {names}."
        return observation, self.available()

    def goal_reached(self) -> bool:
        return self.state is not None and self.task.goal.holds(self.state)

    def available(self) -> list[str]:
        state = self._require_state()
        actions: list[str] = []
        for name in state.receptacles:
            if name != state.agent_at:
                actions.append(f"go to {name}")
        here = state.receptacles.get(state.agent_at) if state.agent_at else None
        if here is not None:
            if here.openable and not here.is_open:
                actions.append(f"open {here.name}")
            if here.openable and here.is_open:
                actions.append(f"close {here.name}")
            if here.visible and here.can_contain and len(state.inventory) < state.capacity:
                for obj in here.contents:
                    actions.append(f"take {obj} from {here.name}")
            if here.can_contain and here.visible:
                for obj in state.inventory:
                    actions.append(f"put {obj} in {here.name}")
            verb = APPLIANCE_VERB.get(here.kind)
            if verb:
                for obj in state.inventory:
                    actions.append(f"{verb} {obj} with {here.name}")
        return actions

    def step(self, action: str) -> tuple[str, float, bool, list[str]]:
        state = self._require_state()
        if action not in self.available():
            raise EnvActionError(f"action not available: {action!r}")
        was_done = self.task.goal.holds(state)
        observation = self._apply(action)
        done = self.task.goal.holds(state)
        reward = 1.0 if done and not was_done else 0.0
        self._done = done
        return observation, reward, done, self.available()

    # -- internals --------------------------------------------------------

    def _require_state(self) -> EnvState:
        if self.state is None:
            raise ConfigError("environment must be reset before use")
        return self.state

    def _apply(self, action: str) -> str:
        state = self.state
        if action.startswith("go to "):
            name = action[len("go to "):]
            state.agent_at = name
            receptacle = state.receptacles[name]
            return f"You are at {name}." + self._contents_clause(receptacle)
        if action.startswith("open "):
            name = action[len("open "):]
            receptacle = state.receptacles[name]
            receptacle.is_open = True
            self._mark_seen(receptacle)
            if receptacle.contents:
                return f"You open {name}. In it you see: {', '.join(receptacle.contents)}."
            return f"You open {name}. It is empty."
        if action.startswith("close "):
            name = action[len("close "):]
            state.receptacles[name].is_open = False
            return f"You close {name}."
        if action.startswith("take "):
            rest = action[len("take "):]
            obj, _, source = rest.partition(" from ")
            state.receptacles[source].contents.remove(obj)
            state.inventory.append(obj)
            self.seen_objects.add(obj)
            return f"You take {obj} from {source}."
        if action.startswith("put "):
            rest = action[len("put "):]
            obj, _, target = rest.partition(" in ")
            state.inventory.remove(obj)
            state.receptacles[target].contents.append(obj)
            return f"You put {obj} in {target}."
        for verb in APPLIANCE_VERB.values():
            prefix = f"{verb} "
            if action.startswith(prefix) and " with " in action:
                obj, _, appliance = action[len(prefix):].partition(" with ")
                world_obj = state.objects[obj]
                if verb == "clean":
                    world_obj.clean = True
                elif verb == "heat":
                    world_obj.hot = True
                    world_obj.cold = False
                elif verb == "cool":
                    world_obj.cold = True
                    world_obj.hot = False
                elif verb == "examine":
                    world_obj.examined = True
                return f"You {verb} {obj} with {appliance}."
        raise EnvActionError(f"unrecognized action: {action!r}")

    def _contents_clause(self, receptacle: Receptacle) -> str:
        if receptacle.openable and not receptacle.is_open:
            return f" {receptacle.name[0].upper()}{receptacle.name[1:]} is closed."
        if not receptacle.can_contain:
            return ""
        self._mark_seen(receptacle)
        if receptacle.contents:
            return f" You see: {', '.join(receptacle.contents)}."
        return " It is empty."

    def _mark_seen(self, receptacle: Receptacle) -> None:
        self.seen_objects.update(receptacle.contents)


# --- task generation ----------------------------------------------------

def _generate_layout(rng: random.Random, capacity: int) -> Layout:
    names: list[tuple[str, str]] = []
    for kind, low, high in (("cabinet", 2, 3), ("drawer", 1, 2), ("countertop", 1, 3), ("shelf", 0, 1)):
        for index in range(1, rng.randint(low, high) + 1):
            names.append((f"{kind} {index}", kind))
    for kind in ("sinkbasin", "microwave", "fridge", "garbagecan", "desklamp"):
        names.append((f"{kind} 1", kind))

    type_counts: dict[str, int] = {}
    object_names: list[str] = []
    for _ in range(rng.randint(6, 12)):
        otype = rng.choice(_OBJECT_TYPES)
        type_counts[otype] = type_counts.get(otype, 0) + 1
        object_names.append(f"{otype} {type_counts[otype]}")

    containers = [name for name, kind in names if kind not in NON_CONTAINER_KINDS]
    placements: dict[str, list[str]] = {name: [] for name, _ in names}
    for obj in object_names:
        placements[rng.choice(containers)].append(obj)

    receptacles = tuple(
        (name, kind, kind not in OPENABLE_KINDS or rng.random() > 0.7, tuple(placements[name]))
        for name, kind in names
    )
    return Layout(receptacles=receptacles, capacity=capacity)


def _instruction(task_type: str, otype: str, rtype: str) -> str:
    prep = "in" if rtype in ENCLOSED_KINDS else "on"
    if task_type == "put":
        return f"put some {otype} {prep} {rtype}"
    if task_type == "examine":
        return f"look at {otype} under the desklamp"
    if task_type in ("clean", "heat", "cool"):
        return f"{task_type} some {otype} and put it {prep} {rtype}"
    if task_type == "puttwo":
        return f"put two {otype}s {prep} {rtype}"
    raise ConfigError(f"unknown task type {task_type!r}")


_TARGET_KINDS = ("cabinet", "drawer", "countertop", "shelf", "garbagecan", "fridge", "microwave")


def generate_task(seed: int, task_type: str, max_attempts: int = 200) -> TaskSpec:
    """Deterministically generate a solvable task of the given family.

    Regenerates until the BFS plan length meets the family bound; the same
    (seed, task_type) always yields the same task.
    """
    if task_type not in TASK_FAMILIES:
        raise ConfigError(f"unknown task type {task_type!r}; expected one of {TASK_FAMILIES}")
    rng = random.Random(f"{task_type}:{seed}")
    capacity = 2 if task_type == "puttwo" else 1
    needed = 2 if task_type == "puttwo" else 1
    min_length = _MIN_PLAN_LENGTH[task_type]

    for _ in range(max_attempts):
        layout = _generate_layout(rng, capacity)
        state = layout.build()
        counts: dict[str, int] = {}
        for obj in state.objects.values():
            counts[obj.type] = counts.get(obj.type, 0) + 1
        candidates = [
            otype for otype, count in counts.items()
            if count >= needed and not (task_type == "puttwo" and otype == "knife")
        ]
        if not candidates:
            continue
        otype = rng.choice(sorted(candidates))
        present_kinds = {r.kind for r in state.receptacles.values()}
        rtype = rng.choice([k for k in _TARGET_KINDS if k in present_kinds])
        if task_type == "examine":
            goal = GoalSpec(kind="examine", object_type=otype)
        else:
            goal = GoalSpec(kind=task_type, object_type=otype, receptacle_type=rtype, count=needed)
        if goal.holds(state):
            continue
        task = TaskSpec(
            task_type=task_type,
            instruction=_instruction(task_type, otype, rtype),
            goal=goal,
            seed=seed,
            layout=layout,
        )
        try:
            plan = oracle_plan(task)
        except OracleError:
            continue
        if len(plan) >= min_length:
            return task
    raise ConfigError(f"could not generate a {task_type} task for seed {seed}")


def generate_tasks(per_type: int, base_seed: int, families=TASK_FAMILIES) -> list[TaskSpec]:
    """A fixed battery of tasks: `per_type` per family, seeds derived from base_seed."""
    if per_type < 1:
        raise ConfigError("per_type must be >= 1")
    return [
        generate_task(base_seed + offset, family)
        for family in families
        for offset in range(per_type)
    ]


# --- BFS planner oracle --------------------------------------------------

def oracle_plan(task: TaskSpec) -> list[str]:
    """Shortest action sequence from the initial state to the goal.

    Full-observability breadth-first search. Actions that provably never
    shorten a plan are pruned: closing receptacles, touching objects other
    than goal instances, opening receptacles that neither hold a goal
    instance nor match the target type, and putting goal objects anywhere
    except the target type.
    """
    return plan_from_state(task.layout.build(), task.goal)


def plan_from_state(state: EnvState, goal: GoalSpec) -> list[str]:
    relevant = sorted(obj.name for obj in state.objects.values() if obj.type == goal.object_type)
    flag = _GOAL_FLAG.get(goal.kind)
    blockers = [name for name in state.inventory if object_type(name) != goal.object_type]
    targets = {r.name for r in state.receptacles.values() if r.kind == goal.receptacle_type}
    sources = {state.location_of(name) for name in relevant} - {"inventory"}
    openable_useful = {
        r.name for r in state.receptacles.values()
        if r.openable and (r.name in targets or r.name in sources)
    }

    def encode(st: EnvState):
        opens = frozenset(n for n in openable_useful if st.receptacles[n].is_open)
        objs = tuple(
            (name, st.location_of(name), bool(getattr(st.objects[name], flag)) if flag else st.objects[name].examined)
            for name in relevant
        )
        blocked = tuple(sorted(n for n in blockers if n in st.inventory))
        return (st.agent_at, opens, objs, blocked)

    def goal_done(st: EnvState) -> bool:
        return goal.holds(st)

    start = _copy_state(state)
    if goal_done(start):
        return []

    queue = deque([(start, [])])
    visited = {encode(start)}
    while queue:
        current, plan = queue.popleft()
        for action in _pruned_actions(current, goal, relevant, targets, openable_useful, blockers):
            nxt = _copy_state(current)
            _apply_planning_action(nxt, action)
            key = encode(nxt)
            if key in visited:
                continue
            visited.add(key)
            new_plan = plan + [action]
            if goal_done(nxt):
                return new_plan
            queue.append((nxt, new_plan))
    raise OracleError(f"no plan reaches the goal {goal}")


_GOAL_VERB = {"clean": "clean", "heat": "heat", "cool": "cool", "examine": "examine"}


def _pruned_actions(state: EnvState, goal, relevant, targets, openable_useful, blockers):
    actions = []
    for name in state.receptacles:
        if name != state.agent_at:
            actions.append(f"go to {name}")
    here = state.receptacles.get(state.agent_at) if state.agent_at else None
    if here is None:
        return actions
    if here.openable and not here.is_open and here.name in openable_useful:
        actions.append(f"open {here.name}")
    if here.visible and here.can_contain and len(state.inventory) < state.capacity:
        for obj in here.contents:
            if obj in relevant:
                actions.append(f"take {obj} from {here.name}")
    if here.can_contain and here.visible:
        for obj in state.inventory:
            if obj in relevant and here.name in targets:
                actions.append(f"put {obj} in {here.name}")
            elif obj in blockers:
                actions.append(f"put {obj} in {here.name}")
    verb = _GOAL_VERB.get(goal.kind)
    if verb and here.kind == APPLIANCE_FOR_VERB[verb]:
        for obj in state.inventory:
            if obj in relevant:
                actions.append(f"{verb} {obj} with {here.name}")
    return actions


APPLIANCE_FOR_VERB = {verb: kind for kind, verb in APPLIANCE_VERB.items()}


def _copy_state(state: EnvState) -> EnvState:
    return EnvState(
        receptacles={
            name: Receptacle(r.name, r.kind, r.is_open, list(r.contents))
            for name, r in state.receptacles.items()
        },
        objects={name: replace(obj) for name, obj in state.objects.items()},
        agent_at=state.agent_at,
        inventory=list(state.inventory),
        capacity=state.capacity,
    )


def _apply_planning_action(state: EnvState, action: str) -> None:
    if action.startswith("go to "):
        state.agent_at = action[len("go to "):]
    elif action.startswith("open "):
        state.receptacles[action[len("open "):]].is_open = True
    elif action.startswith("take "):
        obj, _, source = action[len("take "):].partition(" from ")
        state.receptacles[source].contents.remove(obj)
        state.inventory.append(obj)
    elif action.startswith("put "):
        obj, _, target = action[len("put "):].partition(" in ")
        state.inventory.remove(obj)
        state.receptacles[target].contents.append(obj)
    else:
        verb, _, rest = action.partition(" ")
        obj, _, _ = rest.partition(" with ")
        world_obj = state.objects[obj]
        if verb == "clean":
            world_obj.clean = True
        elif verb == "heat":
            world_obj.hot = True
            world_obj.cold = False
        elif verb == "cool":
            world_obj.cold = True
            world_obj.hot = False
        elif verb == "examine":
            world_obj.examined = True

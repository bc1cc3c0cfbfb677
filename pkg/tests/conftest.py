from __future__ import annotations

import random
from pathlib import Path

import pytest

from dusar.core import ExploreStep, FitnessScore
from dusar.trace import ExploreTrace

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


def make_step(index: int, score: int = 25, **overrides) -> ExploreStep:
    fields = {
        "step_index": index,
        "observation": f"You are at countertop {index}.",
        "action": f"go to countertop {index}",
        "reward": 0.0,
        "local_log": f"log {index}",
        "score": FitnessScore(score),
        "holistic_version": 1,
    }
    fields.update(overrides)
    return ExploreStep(**fields)


def make_trace(n_steps: int, window_size: int = 10, **step_overrides) -> ExploreTrace:
    trace = ExploreTrace(task_instruction="put some mug on shelf", window_size=window_size)
    for i in range(1, n_steps + 1):
        trace.append(make_step(i, **step_overrides))
    return trace


_TEXT_POOL = [
    "go to cabinet 2",
    "You see: a cup, a bowl.",
    "line one\nline two",
    "score 99 <<< fenced >>> text",
    "unicode: émile, 寿司, ß",
    'quotes "and" backslashes \\ here',
    "",
    "   leading and trailing   ",
]


def random_trace(rng: random.Random) -> ExploreTrace:
    trace = ExploreTrace(
        task_instruction=rng.choice(_TEXT_POOL) or "task",
        window_size=rng.randint(1, 15),
        mode=rng.choice(["full", "holistic_only", "local_only", "naive_concat", "react_baseline"]),
    )
    for i in range(1, rng.randint(0, 12) + 1):
        trace.append(
            ExploreStep(
                step_index=i,
                observation=rng.choice(_TEXT_POOL),
                action=rng.choice(_TEXT_POOL),
                reward=rng.choice([0.0, 1.0, rng.random(), -2.5]),
                local_log=rng.choice(_TEXT_POOL),
                score=FitnessScore(rng.randint(0, 100)),
                holistic_version=rng.randint(0, 9),
            )
        )
    return trace

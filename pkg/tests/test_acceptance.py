"""Acceptance suite: one test per criterion, each printing a pass line.

Run with `pytest tests/test_acceptance.py -v -s` to see the pass lines and
timings. Every tolerance is pinned here; nothing is deferred.
"""

import json
import random
import time

from dusar.core import FitnessScore, StrategyDirective, next_directive
from dusar.envs import TASK_FAMILIES, TextHouseEnv, generate_task, generate_tasks, oracle_plan
from dusar.loop import EpisodeConfig, run_batch, run_episode
from dusar.oracle import OracleReflectors
from dusar.provider import CompletionRequest, Message, ScriptedProvider
from dusar.reflect import LlmReflectors
from dusar.trace import deserialize, serialize

from .conftest import DATA_DIR, random_trace
from .test_loop import RandomJunkProvider

BATTERY_SEED = 100  # 60-task battery: 10 per family
TOKEN_SEED = 200  # token-efficiency battery: 2 per family


def _ok(name: str, started: float) -> None:
    print(f"[PASS] {name} ({time.time() - started:.1f}s)")


def _oracle_factory(env, task):
    return OracleReflectors(env)


def test_eq1_state_machine_exhaustive():
    started = time.time()
    assert next_directive(1, None) is StrategyDirective.USE_INITIAL
    for value in range(101):
        directive = next_directive(2, FitnessScore(value))
        if value == 0 or 50 <= value <= 99:
            assert directive is StrategyDirective.UPDATE, value
        elif value == 100:
            assert directive is StrategyDirective.TERMINATE, value
        else:
            assert directive is StrategyDirective.MAINTAIN, value
    assert time.time() - started < 1.0
    _ok("directive state machine exhaustive over s in 0..100 and t in {1,2}", started)


def _saltshaker_episode():
    from dusar.envs import TaskSpec

    with open(DATA_DIR / "saltshaker_task.json", encoding="utf-8") as handle:
        task = TaskSpec.from_dict(json.load(handle))
    with open(DATA_DIR / "saltshaker_fixture.json", encoding="utf-8") as handle:
        fixture = json.load(handle)
    env = TextHouseEnv(task)
    reflectors = LlmReflectors(ScriptedProvider(fixture), task_type=task.task_type)
    config = EpisodeConfig(max_steps=7, task_type=task.task_type)
    return run_episode(config, env, reflectors)


def test_scripted_trace_replay():
    started = time.time()
    report = _saltshaker_episode()
    scores = [step.score.value for step in report.trace.steps]
    assert scores[:6] == [25, 25, 25, 25, 25, 50]
    assert all(step.holistic_version == 1 for step in report.trace.steps[:6])
    assert report.trace.steps[6].holistic_version == 2
    assert report.holistic_versions == [(1, 1), (7, 2)]

    first = serialize(report.trace)
    second = serialize(_saltshaker_episode().trace)
    assert first == second
    assert deserialize(first) == report.trace
    assert time.time() - started < 1.0
    _ok("scripted fixture replay: scores 25,25,25,25,25,50; plan v2 at step 7; byte-stable trace", started)


def test_oracle_end_to_end_sixty_tasks():
    started = time.time()
    tasks = generate_tasks(10, base_seed=BATTERY_SEED)
    assert len(tasks) == 60
    plan_lengths = {id(task): len(oracle_plan(task)) for task in tasks}
    summary = run_batch(tasks, EpisodeConfig(), _oracle_factory)

    assert summary.row("all").success_rate == 1.0
    for task, report in zip(tasks, summary.reports):
        assert report.success, (task.task_type, task.seed, report.abort_reason)
        assert report.steps_taken <= 2 * plan_lengths[id(task)], (task.task_type, task.seed)
        if task.task_type == "puttwo":
            scores = [step.score.value for step in report.trace.steps]
            expected = iter([25, 50, 75, 90, 100])
            needle = next(expected)
            for value in scores:
                if value == needle:
                    needle = next(expected, None)
                    if needle is None:
                        break
            assert needle is None, f"milestone subsequence missing from {scores}"
    elapsed = time.time() - started
    assert elapsed < 30.0
    _ok("oracle end-to-end: 60/60 success within 2x plan length; puttwo milestones in order", started)


def test_oracle_plan_validity_two_hundred_tasks():
    started = time.time()
    count = 0
    seed = 0
    while count < 200:
        for family in TASK_FAMILIES:
            if count >= 200:
                break
            task = generate_task(1000 + seed, family)
            plan = oracle_plan(task)
            if family == "puttwo":
                assert len(plan) >= 6, (task.seed, plan)
            env = TextHouseEnv(task)
            env.reset()
            reward = done = None
            for action in plan:
                _, reward, done, _ = env.step(action)
            assert done is True and reward == 1.0, (family, task.seed)
            count += 1
        seed += 1
    elapsed = time.time() - started
    assert elapsed < 60.0
    _ok("200 generated tasks: executing the planned actions reaches done with reward 1", started)


def test_termination_on_adversarial_episodes():
    started = time.time()
    tasks = [generate_task(seed, family) for seed in (0, 1) for family in TASK_FAMILIES]
    outcomes = {}
    for i in range(1000):
        task = tasks[i % len(tasks)]
        env = TextHouseEnv(task)
        reflectors = LlmReflectors(RandomJunkProvider(random.Random(i)), task_type=task.task_type)
        report = run_episode(EpisodeConfig(max_steps=8, task_type=task.task_type), env, reflectors)

        assert report.steps_taken <= 8
        assert report.steps_taken == len(report.trace.steps)
        assert isinstance(report.success, bool)
        assert 0 <= report.final_score.value <= 100
        assert len(report.per_step_usage) <= report.steps_taken + 1
        for step_index, step in enumerate(report.trace.steps, start=1):
            assert step.step_index == step_index
        outcomes[report.ended_by] = outcomes.get(report.ended_by, 0) + 1
    assert "error" not in outcomes  # no unclassified crashes
    elapsed = time.time() - started
    assert elapsed < 60.0
    _ok(f"1000 adversarial scripted episodes all terminate within max_steps ({outcomes})", started)


def test_serialization_round_trip_property():
    started = time.time()
    rng = random.Random(2024)
    for _ in range(500):
        trace = random_trace(rng)
        text = serialize(trace)
        assert deserialize(text) == trace
        assert serialize(deserialize(text)) == text
    rng_a, rng_b = random.Random(31), random.Random(31)
    for _ in range(100):
        assert serialize(random_trace(rng_a)) == serialize(random_trace(rng_b))
    _ok("serialization: 500-trace round-trip identity and byte-stable output", started)


def test_token_efficiency_direction():
    started = time.time()
    tasks = generate_tasks(2, base_seed=TOKEN_SEED)
    full = run_batch(tasks, EpisodeConfig(mode="full"), _oracle_factory)
    react = run_batch(tasks, EpisodeConfig(mode="react_baseline"), _oracle_factory)
    assert full.row("all").success_rate == 1.0
    assert react.row("all").success_rate == 1.0

    full_tokens = full.row("all").mean_prompt_tokens_per_step
    react_tokens = react.row("all").mean_prompt_tokens_per_step
    assert full_tokens < react_tokens
    ratio = react_tokens / full_tokens
    assert ratio >= 1.5, f"react/full prompt-token ratio {ratio:.2f} < 1.5"
    _ok(
        f"token efficiency: full {full_tokens:.0f} vs react {react_tokens:.0f} "
        f"prompt tokens/step (ratio {ratio:.2f} >= 1.5)",
        started,
    )


def test_ablation_plumbing_across_modes():
    started = time.time()
    tasks = generate_tasks(10, base_seed=BATTERY_SEED)
    for mode in ("full", "holistic_only", "local_only", "naive_concat"):
        summary = run_batch(tasks, EpisodeConfig(mode=mode), _oracle_factory)
        assert len(summary.reports) == 60
        for report in summary.reports:
            assert report.ended_by != "error", (mode, report.abort_reason)
            if mode == "local_only":
                assert all(version == 1 for _, version in report.holistic_versions)
                assert all(step.holistic_version == 1 for step in report.trace.steps)
            if mode == "naive_concat":
                assert len(report.holistic_versions) == report.steps_taken
                versions = [version for _, version in report.holistic_versions]
                assert versions == list(range(2, 2 + len(versions)))
            if mode == "holistic_only":
                assert all(step.local_log == "" for step in report.trace.steps)
    _ok("ablations: local_only frozen plan, naive_concat per-step regeneration, holistic_only empty local logs; 60-task batches complete in all four modes", started)


def test_default_request_parameters():
    started = time.time()
    request = CompletionRequest(messages=(Message("user", "ping"),))
    assert request.temperature == 0.0
    assert request.top_p == 0.8
    assert request.presence_penalty == 0.1
    assert request.frequency_penalty == 0.1
    _ok("default decoding parameters: temperature 0, top_p 0.8, penalties 0.1", started)

import re

import pytest

from dusar.core import FitnessScore, HolisticStrategy, LocalStrategy
from dusar.errors import ConfigError
from dusar.prompts import (
    GENERIC_PROFILE,
    MilestoneProfile,
    PromptTemplates,
    PromptText,
    fence,
    milestone_profile,
    render_decision,
    render_holistic,
    render_local,
    render_react,
    render_score,
)

from .conftest import make_step

PLAN = HolisticStrategy(
    version=1,
    subgoals=("Locate the apple", "Pick up the apple", "Navigate to the fridge", "Place the apple"),
    rationale="initial decomposition",
)

LOCAL = LocalStrategy(
    guidance="open the closed cabinet",
    candidate_actions=("go to cabinet 2",),
    alignment_note="matches sub-goal 1",
)

RUBRIC_LINES = [
    "- 0: No progress (stagnation, repeated actions, no state change)",
    "- 1-49: Approaching sub-goal (relevant elements found, ongoing exploration)",
    "- 50-99: Significant advancement or sub-goal completed (milestone achieved)",
    "- 100: Task completed (overall goal reached)",
]


class TestMilestoneProfiles:
    def test_puttwo_thresholds(self):
        profile = milestone_profile("puttwo")
        assert [score for _, score in profile.thresholds] == [25, 50, 75, 90, 100]
        assert "first" in profile.thresholds[0][0]

    def test_heat_thresholds(self):
        profile = milestone_profile("heat")
        assert [score for _, score in profile.thresholds] == [50, 75, 90, 100]

    def test_put_thresholds(self):
        assert [s for _, s in milestone_profile("put").thresholds] == [50, 75, 100]

    def test_unknown_type_falls_back_to_generic(self):
        assert milestone_profile("unknown") is GENERIC_PROFILE
        assert [s for _, s in GENERIC_PROFILE.thresholds] == [50, 75, 100]

    def test_thresholds_must_increase(self):
        with pytest.raises(ValueError):
            MilestoneProfile("x", (("a", 50), ("b", 50), ("c", 100)))

    def test_final_threshold_must_be_100(self):
        with pytest.raises(ValueError):
            MilestoneProfile("x", (("a", 50), ("b", 90)))


class TestRenderHolistic:
    def test_embeds_instruction_and_preamble(self):
        prompt = render_holistic("put apple in fridge", [], None, None)
        assert "put apple in fridge" in prompt.rendered
        assert "You are a strategic planner." in prompt.rendered
        assert prompt.role_tag == "holistic"

    def test_window_capped_at_k(self):
        steps = [make_step(i) for i in range(1, 13)]
        prompt = render_holistic("task", steps, PLAN, FitnessScore(25), window_size=10)
        embedded = re.findall(r"Step (\d+): ", prompt.rendered)
        assert embedded == [str(i) for i in range(3, 13)]

    def test_stagnation_clause_present(self):
        prompt = render_holistic("task", [], None, FitnessScore(0))
        assert "Revises the plan if stagnation (score=0)" in prompt.rendered
        assert "advances if milestone" in prompt.rendered

    def test_empty_instruction_rejected(self):
        with pytest.raises(ValueError):
            render_holistic("", [], None, None)

    def test_previous_plan_and_score_embedded(self):
        prompt = render_holistic("task", [], PLAN, FitnessScore(60))
        assert "Locate the apple" in prompt.rendered
        assert "60" in prompt.rendered


class TestRenderLocal:
    def test_embeds_observation_and_plan(self):
        prompt = render_local("cabinet 2 is closed", PLAN, [])
        assert "cabinet 2 is closed" in prompt.rendered
        assert "Locate the apple" in prompt.rendered
        assert "You are a local executor." in prompt.rendered
        assert "feasible next actions" in prompt.rendered.lower()

    def test_determinism(self):
        steps = [make_step(i) for i in range(1, 4)]
        a = render_local("obs", PLAN, steps)
        b = render_local("obs", PLAN, steps)
        assert a.rendered == b.rendered

    def test_newline_observation_is_fenced(self):
        prompt = render_local("line one\nline two", PLAN, [])
        assert "<<<line one\nline two>>>" in prompt.rendered

    def test_fence_delimiters_doubled(self):
        assert fence("a <<< b >>> c") == "<<<a <<<<<< b >>>>>> c>>>"


class TestRenderScore:
    def test_rubric_always_present(self):
        prompt = render_score("obs", "go to shelf 1", 0.0, [], milestone_profile("put"), PLAN)
        for line in RUBRIC_LINES:
            assert line in prompt.rendered

    def test_put_profile_lines(self):
        prompt = render_score("obs", "act", 0.0, [], milestone_profile("put"), PLAN)
        assert "- 50: target object found" in prompt.rendered

    def test_puttwo_profile_lines(self):
        prompt = render_score("obs", "act", 0.0, [], milestone_profile("puttwo"), PLAN)
        for value in (25, 50, 75, 90, 100):
            assert f"- {value}: " in prompt.rendered

    def test_empty_window_keeps_rubric(self):
        prompt = render_score("obs", "act", 1.0, [], milestone_profile("heat"), PLAN)
        assert "Assign numerical score (0-100):" in prompt.rendered


class TestRenderDecision:
    def test_available_actions_verbatim_once_each(self):
        available = ["go to cabinet 1", "open drawer 2", "take mug 1 from shelf 1"]
        prompt = render_decision(PLAN, LOCAL, "obs", available)
        for action in available:
            assert prompt.rendered.count(action) == 1

    def test_priority_rule_sentence(self):
        prompt = render_decision(PLAN, LOCAL, "obs", ["go to shelf 1"])
        assert "prioritizes the Holistic Strategy" in prompt.rendered

    def test_single_action_still_renders(self):
        prompt = render_decision(PLAN, None, "obs", ["go to shelf 1"])
        assert "go to shelf 1" in prompt.rendered

    def test_empty_available_rejected(self):
        with pytest.raises(ValueError):
            render_decision(PLAN, LOCAL, "obs", [])

    def test_demands_exactly_one_action(self):
        prompt = render_decision(PLAN, LOCAL, "obs", ["go to shelf 1"])
        assert "exactly one action" in prompt.rendered


class TestRenderReact:
    def test_embeds_two_exemplars_and_task(self):
        prompt = render_react("put some mug on shelf", "obs", [], ["go to shelf 1"], "put")
        assert prompt.rendered.count("Example task:") == 2
        assert "put some mug on shelf" in prompt.rendered
        assert prompt.role_tag == "react"

    def test_unknown_family_uses_fallback_exemplars(self):
        prompt = render_react("task", "obs", [], ["go to shelf 1"], "nonsense")
        assert prompt.rendered.count("Example task:") == 2


class TestTemplateMachinery:
    def test_tokens_monotone_in_window_length(self):
        previous = -1
        for n in range(13):
            steps = [make_step(i) for i in range(1, n + 1)]
            prompt = render_local("obs", PLAN, steps)
            assert prompt.approx_tokens >= previous
            previous = prompt.approx_tokens

    def test_unknown_placeholder_rejected(self):
        templates = PromptTemplates(local="Observation: {observation} {bogus_name}")
        with pytest.raises(ConfigError, match="bogus_name"):
            render_local("obs", PLAN, [], templates=templates)

    def test_from_dir_merges_builtin_defaults(self, tmp_path):
        (tmp_path / "local.txt").write_text(
            "CUSTOM {observation} {holistic_strategy} {window}", encoding="utf-8"
        )
        templates = PromptTemplates.from_dir(tmp_path)
        prompt = render_local("obs", PLAN, [], templates=templates)
        assert prompt.rendered.startswith("CUSTOM")
        assert "You are a strategic planner." in templates.holistic

    def test_from_dir_missing_directory(self, tmp_path):
        with pytest.raises(ConfigError):
            PromptTemplates.from_dir(tmp_path / "missing")

    def test_role_tag_validated(self):
        with pytest.raises(ValueError):
            PromptText(rendered="x", role_tag="bogus", approx_tokens=1)

    def test_content_braces_are_not_placeholders(self):
        prompt = render_local("a {weird} observation", PLAN, [])
        assert "{weird}" in prompt.rendered

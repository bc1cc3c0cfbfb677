"""Dual-strategy reflective agent runtime.

A frozen language model (or a rule-based oracle) drives episodes through a
co-adaptive loop: a versioned holistic plan, per-step local guidance, a
single integrated action choice, and a 0-100 fitness score whose band
routes plan revision, maintenance, or termination. Ships with a
deterministic text-household world so the whole loop runs and verifies
without any model.
"""

from .core import (
    ExploreStep,
    FitnessBand,
    FitnessScore,
    HolisticStrategy,
    LocalStrategy,
    StrategyDirective,
    classify_score,
    next_directive,
)
from .envs import TASK_FAMILIES, TaskSpec, TextHouseEnv, generate_task, generate_tasks, oracle_plan
from .errors import (
    ConfigError,
    DecisionError,
    DusarError,
    EnvActionError,
    OracleError,
    ProviderError,
    ReflectError,
    ScriptedMissError,
    TraceParseError,
)
from .loop import MODES, BatchSummary, EpisodeConfig, EpisodeReport, run_batch, run_episode
from .oracle import OracleReflectors
from .prompts import (
    DEFAULT_TEMPLATES,
    MilestoneProfile,
    PromptTemplates,
    PromptText,
    milestone_profile,
    render_decision,
    render_holistic,
    render_local,
    render_react,
    render_score,
)
from .provider import (
    CompletionRequest,
    CompletionResponse,
    EchoProvider,
    Message,
    ScriptedProvider,
    Usage,
    WireConfig,
    WireProvider,
    count_tokens,
    load_fixture,
)
from .reflect import ActionChoice, LlmReflectors, ParsedScore
from .trace import ExploreTrace, deserialize, read_trace, serialize, write_trace

__version__ = "0.1.0"

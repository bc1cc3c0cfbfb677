"""Completion providers: wire client, scripted replay, echo, plus token counting.

All providers expose one method, ``complete(request) -> CompletionResponse``.
Default request parameters are temperature=0, top_p=0.8, presence_penalty=0.1,
frequency_penalty=0.1; override per request when needed.

When a provider does not report token usage, counts come from
:func:`count_tokens`, a deliberately crude deterministic approximation used
only for offline budget checks, never for exact accounting.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field

from .errors import ConfigError, ProviderError, ScriptedMissError

DEFAULT_TEMPERATURE = 0.0
DEFAULT_TOP_P = 0.8
DEFAULT_PRESENCE_PENALTY = 0.1
DEFAULT_FREQUENCY_PENALTY = 0.1
DEFAULT_MAX_TOKENS = 512

ENV_ENDPOINT = "DUSAR_ENDPOINT"
ENV_API_KEY = "DUSAR_API_KEY"
ENV_MODEL = "DUSAR_MODEL"


def count_tokens(text: str) -> int:
    """Deterministic token approximation.

    Split on whitespace; each piece costs 1 token plus 1 per full 4
    characters beyond its first 4.
    """
    total = 0
    for piece in text.split():
        total += 1 + max(0, len(piece) - 4) // 4
    return total


@dataclass(frozen=True)
class Message:
    role: str  # "system" | "user" | "assistant"
    content: str

    def __post_init__(self):
        if self.role not in ("system", "user", "assistant"):
            raise ValueError(f"unknown message role {self.role!r}")


@dataclass(frozen=True)
class Usage:
    prompt_tokens: int
    completion_tokens: int

    def __post_init__(self):
        if self.prompt_tokens < 0 or self.completion_tokens < 0:
            raise ValueError("token counts must be >= 0")


@dataclass(frozen=True)
class CompletionRequest:
    """One chat-completion call.

    tag/phase identify the reflecting role and loop position ("holistic",
    "init" / "step3" / "step3:retry"); the wire protocol ignores them, the
    scripted provider matches fixture keys against their digest.
    """

    messages: tuple[Message, ...]
    model: str = "local"
    temperature: float = DEFAULT_TEMPERATURE
    top_p: float = DEFAULT_TOP_P
    presence_penalty: float = DEFAULT_PRESENCE_PENALTY
    frequency_penalty: float = DEFAULT_FREQUENCY_PENALTY
    max_tokens: int | None = DEFAULT_MAX_TOKENS
    tag: str = ""
    phase: str = ""

    def __post_init__(self):
        if not self.messages:
            raise ValueError("a completion request needs at least one message")

    @property
    def digest(self) -> str:
        """Canonical match key: role tag plus loop phase."""
        return f"{self.tag}:{self.phase}"

    def prompt_token_estimate(self) -> int:
        return sum(count_tokens(m.content) for m in self.messages)


@dataclass(frozen=True)
class CompletionResponse:
    content: str
    usage: Usage
    provider_reported_usage: bool = False


def _local_usage(request: CompletionRequest, content: str) -> Usage:
    return Usage(
        prompt_tokens=request.prompt_token_estimate(),
        completion_tokens=count_tokens(content),
    )


class ScriptedProvider:
    """Deterministic replay provider backed by a key -> response mapping.

    A fixture key matches a request when the request digest starts with the
    key; the longest matching key wins. Unmatched requests raise
    ScriptedMissError naming the nearest keys.
    """

    def __init__(self, fixture: dict[str, str]):
        if not isinstance(fixture, dict):
            raise ConfigError("scripted fixture must be a mapping of key -> response text")
        for key, value in fixture.items():
            if not isinstance(key, str) or not isinstance(value, str):
                raise ConfigError("scripted fixture keys and values must be strings")
        self.fixture = dict(fixture)

    def complete(self, request: CompletionRequest) -> CompletionResponse:
        digest = request.digest
        matches = [key for key in self.fixture if digest.startswith(key)]
        if not matches:
            nearest = sorted(
                self.fixture,
                key=lambda k: (-_shared_prefix(k, digest), k),
            )[:3]
            raise ScriptedMissError(digest, nearest)
        best = max(matches, key=len)
        content = self.fixture[best]
        return CompletionResponse(content=content, usage=_local_usage(request, content))


def load_fixture(path) -> dict[str, str]:
    """Load a scripted fixture file (a JSON object). Duplicate keys are an error."""
    def no_duplicates(pairs):
        seen = {}
        for key, value in pairs:
            if key in seen:
                raise ConfigError(f"duplicate fixture key {key!r} in {path}")
            seen[key] = value
        return seen

    try:
        with open(path, "r", encoding="utf-8") as handle:
            fixture = json.load(handle, object_pairs_hook=no_duplicates)
    except FileNotFoundError as exc:
        raise ConfigError(f"fixture file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"fixture file {path} is not valid JSON: {exc.msg}") from exc
    if not isinstance(fixture, dict):
        raise ConfigError(f"fixture file {path} must contain a JSON object")
    return fixture


def _shared_prefix(a: str, b: str) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


class EchoProvider:
    """Test double: the completion is the last user message."""

    def complete(self, request: CompletionRequest) -> CompletionResponse:
        users = [m.content for m in request.messages if m.role == "user"]
        content = users[-1] if users else ""
        return CompletionResponse(content=content, usage=_local_usage(request, content))


@dataclass
class WireConfig:
    """Connection settings for a chat-completions endpoint."""

    endpoint: str
    api_key: str = ""
    model: str = "local"
    timeout: float = 60.0
    max_retries: int = 3
    backoff_base: float = 0.5

    @classmethod
    def from_env(cls, **overrides) -> "WireConfig":
        endpoint = overrides.pop("endpoint", None) or os.environ.get(ENV_ENDPOINT, "")
        if not endpoint:
            raise ConfigError(f"wire provider needs an endpoint; set {ENV_ENDPOINT} or pass --endpoint")
        api_key = overrides.pop("api_key", None) or os.environ.get(ENV_API_KEY, "")
        model = overrides.pop("model", None) or os.environ.get(ENV_MODEL, "") or "local"
        return cls(endpoint=endpoint, api_key=api_key, model=model, **overrides)


_RETRY_STATUSES = {429, 500, 502, 503, 504}


def _requests_post(url: str, headers: dict, body: dict, timeout: float):
    import requests

    try:
        response = requests.post(url, headers=headers, json=body, timeout=timeout)
    except requests.RequestException as exc:
        raise ConnectionError(str(exc)) from exc
    return response.status_code, response.text


class WireProvider:
    """HTTP client for chat-completion endpoints.

    Retries transient transport failures (connection errors and HTTP
    429/5xx) with exponential backoff; any other non-success status fails
    immediately with the status and a body excerpt. Malformed or empty
    completions are never retried.
    """

    def __init__(self, config: WireConfig, post_fn=None, sleep=time.sleep):
        self.config = config
        self._post = post_fn or _requests_post
        self._sleep = sleep

    def complete(self, request: CompletionRequest) -> CompletionResponse:
        body = {
            "model": request.model if request.model != "local" else self.config.model,
            "messages": [{"role": m.role, "content": m.content} for m in request.messages],
            "temperature": request.temperature,
            "top_p": request.top_p,
            "presence_penalty": request.presence_penalty,
            "frequency_penalty": request.frequency_penalty,
        }
        if request.max_tokens is not None:
            body["max_tokens"] = request.max_tokens
        headers = {"Content-Type": "application/json"}
        if self.config.api_key:
            headers["Authorization"] = f"Bearer {self.config.api_key}"

        attempts = self.config.max_retries + 1
        last_error: ProviderError | None = None
        for attempt in range(attempts):
            try:
                status, text = self._post(self.config.endpoint, headers, body, self.config.timeout)
            except ConnectionError as exc:
                last_error = ProviderError(f"transport error: {exc}")
            else:
                if status == 200:
                    return self._parse(request, text)
                excerpt = text[:200]
                last_error = ProviderError(
                    f"endpoint returned status {status}: {excerpt}", status=status, body=excerpt
                )
                if status not in _RETRY_STATUSES:
                    raise last_error
            if attempt < attempts - 1:
                self._sleep(self.config.backoff_base * (2 ** attempt))
        assert last_error is not None
        raise last_error

    def _parse(self, request: CompletionRequest, text: str) -> CompletionResponse:
        try:
            payload = json.loads(text)
            choice = payload["choices"][0]
            content = choice["message"]["content"]
        except (json.JSONDecodeError, KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"malformed completion response: {text[:200]}") from exc
        if not isinstance(content, str) or not content.strip():
            raise ProviderError("empty completion")
        usage = payload.get("usage")
        if isinstance(usage, dict) and "prompt_tokens" in usage and "completion_tokens" in usage:
            return CompletionResponse(
                content=content,
                usage=Usage(int(usage["prompt_tokens"]), int(usage["completion_tokens"])),
                provider_reported_usage=True,
            )
        return CompletionResponse(content=content, usage=_local_usage(request, content))


class UsageMeter:
    """Wraps a provider and accumulates usage until popped.

    Retried calls naturally add their tokens, so per-step accounting
    includes re-prompts.
    """

    def __init__(self, provider):
        self.provider = provider
        self._prompt = 0
        self._completion = 0
        self.total_prompt = 0
        self.total_completion = 0

    def complete(self, request: CompletionRequest) -> CompletionResponse:
        response = self.provider.complete(request)
        self._prompt += response.usage.prompt_tokens
        self._completion += response.usage.completion_tokens
        self.total_prompt += response.usage.prompt_tokens
        self.total_completion += response.usage.completion_tokens
        return response

    def add(self, prompt_tokens: int, completion_tokens: int) -> None:
        self._prompt += prompt_tokens
        self._completion += completion_tokens
        self.total_prompt += prompt_tokens
        self.total_completion += completion_tokens

    def pop(self) -> tuple[int, int]:
        usage = (self._prompt, self._completion)
        self._prompt = 0
        self._completion = 0
        return usage

"""Exception types shared across the package."""


class DusarError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(DusarError):
    """Invalid or missing configuration (bad fixture file, missing endpoint, ...)."""


class ProviderError(DusarError):
    """A completion provider failed: transport error, bad status, empty completion."""

    def __init__(self, message: str, status: int | None = None, body: str = ""):
        super().__init__(message)
        self.status = status
        self.body = body


class ScriptedMissError(ProviderError):
    """A scripted provider had no fixture entry matching the request."""

    def __init__(self, digest: str, nearest: list[str]):
        hint = ", ".join(nearest) if nearest else "(fixture is empty)"
        super().__init__(f"no scripted response for request '{digest}'; nearest keys: {hint}")
        self.digest = digest
        self.nearest = nearest


class ReflectError(DusarError):
    """A reflecting call could not produce a usable result (e.g. empty completion)."""


class DecisionError(ReflectError):
    """Decision reflecting exhausted its fallback chain without a valid action."""


class TraceParseError(DusarError):
    """A trace document could not be parsed or failed validation."""

    def __init__(self, message: str, line: int, field: str = ""):
        where = f"line {line}" + (f", field '{field}'" if field else "")
        super().__init__(f"{message} ({where})")
        self.line = line
        self.field = field


class EnvActionError(DusarError):
    """An action outside the available set was forced on an environment."""


class OracleError(DusarError):
    """The search oracle could not find a plan (unsolvable task)."""

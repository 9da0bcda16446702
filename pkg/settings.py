import os
import sys
from pydantic import BaseModel, ConfigDict
from termcolor import cprint, colored

# Environment variables and their defaults
ENV_DEFAULTS = {
    "PROISO_VERBOSE": "false",
    "PROISO_TERM_BUDGET": "2000000",
    "PROISO_MAX_WEYL_RANK": "9",
    "PROISO_WORKERS": "0",
    "PROISO_DEFAULT_DEPTH": "10",
    "PROISO_DECIMAL_DIGITS": "12",
    "PROISO_SERVER_HOST": "0.0.0.0",
    "PROISO_SERVER_PORT": "8000",
}

# Maps each environment variable onto its Settings field
ENV_FIELDS = {
    "PROISO_VERBOSE": "verbose",
    "PROISO_TERM_BUDGET": "term_budget",
    "PROISO_MAX_WEYL_RANK": "max_weyl_rank",
    "PROISO_WORKERS": "workers",
    "PROISO_DEFAULT_DEPTH": "default_depth",
    "PROISO_DECIMAL_DIGITS": "decimal_digits",
    "PROISO_SERVER_HOST": "server_host",
    "PROISO_SERVER_PORT": "server_port",
}


class Settings(BaseModel):
    """Snapshot of the environment-driven configuration."""

    model_config = ConfigDict(frozen=True)

    verbose: bool = False
    term_budget: int = 2000000
    max_weyl_rank: int = 9
    workers: int = 0
    default_depth: int = 10
    decimal_digits: int = 12
    server_host: str = "0.0.0.0"
    server_port: int = 8000


_overrides: dict = {}


def current() -> Settings:
    """
    Read the configuration from the environment at call time.

    Values set through `configure` win over the environment, so a CLI flag
    such as --verbose does not have to touch os.environ.

    Returns:
        Settings: the active configuration
    """
    values = {}
    for env_key, field in ENV_FIELDS.items():
        raw = os.getenv(env_key, ENV_DEFAULTS[env_key])
        if field == "verbose":
            values[field] = raw.strip().lower() == "true"
        else:
            values[field] = raw
    values.update(_overrides)
    return Settings(**values)


def configure(**overrides) -> Settings:
    """Override individual settings for the rest of the process."""
    unknown = set(overrides) - set(Settings.model_fields)
    if unknown:
        raise ValueError(f"Unknown settings: {sorted(unknown)}")
    _overrides.update(overrides)
    return current()


def reset() -> None:
    _overrides.clear()


def report(message: str, color: str = "blue") -> None:
    """Print a diagnostic line to stderr when verbose output is enabled."""
    if current().verbose:
        cprint(message, color, file=sys.stderr)


def print_config() -> None:
    """Print the current configuration."""
    settings = current()
    print(colored("proiso-zeta Configuration", "yellow"), file=sys.stderr)
    print(colored("=========================", "yellow"), file=sys.stderr)
    for name, value in settings.model_dump().items():
        print(colored(f"{name}: {value}", "cyan"), file=sys.stderr)


if __name__ == "__main__":
    print_config()

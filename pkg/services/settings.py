import os
from dataclasses import dataclass

from dotenv import load_dotenv

_settings = None


@dataclass(frozen=True)
class Settings:
    brute_bound: int = 4
    brute_cap: int = 10_000_000
    subset_cap: int = 16
    log_level: str = "WARNING"


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise RuntimeError(f"{name} must be an integer, got {raw!r}.")
    if value < 1:
        raise RuntimeError(f"{name} must be positive, got {value}.")
    return value


def get_settings() -> Settings:
    global _settings
    if _settings is None:
        load_dotenv()
        _settings = Settings(
            brute_bound=_int_env("NUMRAT_BRUTE_BOUND", 4),
            brute_cap=_int_env("NUMRAT_BRUTE_CAP", 10_000_000),
            subset_cap=_int_env("NUMRAT_SUBSET_CAP", 16),
            log_level=(os.getenv("NUMRAT_LOG_LEVEL") or "WARNING").upper(),
        )
    return _settings


def reset_settings() -> None:
    global _settings
    _settings = None

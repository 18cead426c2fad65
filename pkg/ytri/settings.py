import importlib
import importlib.util
import logging
import os
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict

_dotenv_spec = importlib.util.find_spec("dotenv")
if _dotenv_spec is not None:
    load_dotenv = importlib.import_module("dotenv").load_dotenv
else:

    def load_dotenv() -> bool:
        return False


load_dotenv()

DEFAULT_TOLERANCE_BITS = 40
DEFAULT_FALSIFY_BUDGET = 10_000
DEFAULT_FALSIFY_SEED = 0
DEFAULT_REFINE_ROUNDS = 64
DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_SEEDS_PATH = "seeds/example_maps.yaml"
DEFAULT_FIXTURES_DIR = "fixtures"


class Settings(BaseModel):
    model_config = ConfigDict(frozen=True)

    tolerance_bits: int = DEFAULT_TOLERANCE_BITS
    falsify_budget: int = DEFAULT_FALSIFY_BUDGET
    falsify_seed: int = DEFAULT_FALSIFY_SEED
    refine_rounds: int = DEFAULT_REFINE_ROUNDS
    log_level: str = DEFAULT_LOG_LEVEL
    seeds_path: Path = Path(DEFAULT_SEEDS_PATH)
    fixtures_dir: Path = Path(DEFAULT_FIXTURES_DIR)


def _int_from_env(key: str, default: int, minimum: Optional[int] = None) -> int:
    raw = os.getenv(key)
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise RuntimeError(f"{key} must be an integer when provided") from exc
    if minimum is not None and value < minimum:
        raise RuntimeError(f"{key} must be at least {minimum}, got {value}")
    return value


def resolve_log_level() -> str:
    level = (os.getenv("YTRI_LOG_LEVEL") or DEFAULT_LOG_LEVEL).upper()
    if not isinstance(logging.getLevelName(level), int):
        raise RuntimeError(f"YTRI_LOG_LEVEL is not a logging level name: {level}")
    return level


def resolve_settings() -> Settings:
    return Settings(
        tolerance_bits=_int_from_env(
            "YTRI_TOLERANCE_BITS", DEFAULT_TOLERANCE_BITS, minimum=1
        ),
        falsify_budget=_int_from_env(
            "YTRI_FALSIFY_BUDGET", DEFAULT_FALSIFY_BUDGET, minimum=1
        ),
        falsify_seed=_int_from_env("YTRI_FALSIFY_SEED", DEFAULT_FALSIFY_SEED),
        refine_rounds=_int_from_env(
            "YTRI_REFINE_ROUNDS", DEFAULT_REFINE_ROUNDS, minimum=1
        ),
        log_level=resolve_log_level(),
        seeds_path=Path(os.getenv("YTRI_SEEDS_PATH") or DEFAULT_SEEDS_PATH),
        fixtures_dir=Path(os.getenv("YTRI_FIXTURES_DIR") or DEFAULT_FIXTURES_DIR),
    )

"""Run configuration for the command line."""

import logging
import os
from pathlib import Path
from typing import Literal

import psutil
from pydantic import BaseModel, Field, NonNegativeInt, PositiveInt

logger = logging.getLogger(__name__)

CACHE_ENV_VAR = "SINGULARITY_SERIES_CACHE"
DEFAULT_CACHE_FILE = ".singularity_series_cache.json"


class RunConfig(BaseModel):
    """Everything one CLI invocation needs."""

    command: Literal["series", "check", "table", "convert", "cache"]
    subcommand: str
    n: PositiveInt = 2
    d: PositiveInt = 3
    k: PositiveInt = 1
    qmax: NonNegativeInt | None = None
    format: Literal["text", "json"] = "text"
    cache_path: Path = Field(default_factory=lambda: resolve_cache_path(None))
    parallelism: NonNegativeInt = 0
    debug: bool = False
    svg: Path | None = None
    genvec: list[int] | None = None
    side: Literal["hilb", "quot"] = "hilb"


def resolve_cache_path(flag: str | Path | None) -> Path:
    """Flag, then $SINGULARITY_SERIES_CACHE, then ./.singularity_series_cache.json."""
    if flag:
        return Path(flag)
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path.cwd() / DEFAULT_CACHE_FILE


def resolve_parallelism(requested: int) -> int:
    """0 means one worker per physical core."""
    if requested < 0:
        msg = f"parallelism must be nonnegative, got {requested}"
        raise ValueError(msg)
    if requested:
        return requested
    cores = psutil.cpu_count(logical=False) or 1
    logger.debug(f"Auto parallelism: {cores} workers")
    return cores

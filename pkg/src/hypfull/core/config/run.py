from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Self

import yaml
from loguru import logger
from pydantic import BaseModel, Field, PositiveFloat, PositiveInt, model_validator

from hypfull.core.settings import settings

ENUMERATION_MIN = 20
ENUMERATION_MAX = 70


class AvailableProfile(Enum):
    DEFAULT = "default"
    LONG = "long"


class SolverConfig(BaseModel):
    tolerance: PositiveFloat = 1e-12
    max_iterations: PositiveInt = 200
    retries: int = Field(default=3, ge=0)
    homotopy_steps: PositiveInt = 8
    seed: int = 0
    jitter: float = Field(default=0.25, ge=0, lt=1)
    damping: PositiveFloat = 1e-3
    condition_threshold: PositiveFloat = 1e8
    gram_check_tolerance: PositiveFloat = 1e-9


class VolumeConfig(BaseModel):
    apex_tolerance: PositiveFloat = 1e-7
    degeneracy_tolerance: PositiveFloat = 1e-13


class RunConfig(BaseModel):
    # metadata
    name: str = "default"
    description: str = ""

    # inputs and range
    input_paths: list[Path] = []
    n_min: PositiveInt = 20
    n_max: PositiveInt = 40
    generate: bool = True

    # numerics
    solver: SolverConfig = SolverConfig()
    volume: VolumeConfig = VolumeConfig()

    # outputs
    output_dir: Path = Path()
    precision: int = Field(default=6, ge=0, le=15)
    jobs: PositiveInt = 1
    long_suite: bool = False
    use_cache: bool = True

    @model_validator(mode="after")
    def check_range(self) -> Self:
        if self.n_min > self.n_max:
            msg = f"Empty vertex range: n_min={self.n_min} > n_max={self.n_max}"
            raise ValueError(msg)
        if self.generate and (self.n_min < ENUMERATION_MIN or self.n_max > ENUMERATION_MAX):
            msg = f"Generation range [{self.n_min}, {self.n_max}] outside [{ENUMERATION_MIN}, {ENUMERATION_MAX}]"
            raise ValueError(msg)
        return self


@lru_cache(maxsize=16)
def get_run_config(profile: AvailableProfile) -> RunConfig:
    """Retrieve run configuration for a profile."""
    try:
        path = (settings.configs_dir / f"{profile.value}.yaml").resolve()
        with Path.open(path, "r", encoding="utf-8") as file:
            data = yaml.safe_load(file) or {}
        logger.debug(f"Loaded run profile '{profile.value}' from YAML file.")
    except FileNotFoundError as e:
        msg = f"Run profile {profile.value} not found: {e!s}"
        logger.error(msg)
        raise FileNotFoundError(msg) from e

    return RunConfig.model_validate(data)

from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


def get_project_root() -> Path:
    return Path(__file__).resolve().parents[3]


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_nested_delimiter="__",
        case_sensitive=False,
        env_file=get_project_root() / ".env",
        env_file_encoding="utf-8",
        env_prefix="hypfull_",
        extra="ignore",
    )

    # persistent realization/volume cache, HYPFULL_CACHE_DIR
    cache_dir: Path = Field(default_factory=lambda: get_project_root() / ".hypfull_cache")

    # run profiles (YAML)
    configs_dir: Path = Field(default_factory=lambda: get_project_root() / "configs")
    profile: str = "default"

    # enables the hours-scale reproduction suite
    long_suite: bool = False


settings = Settings()

import json
from pathlib import Path
from typing import Any

from loguru import logger
from pydantic import BaseModel

from hypfull.core.errors import InputError


def _save_text(path: Path, content: str) -> Path:
    """Saves the content, creating directories if needed."""
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content, encoding="utf-8")
    except OSError as e:
        msg = f"Cannot write {path}: {e!s}"
        logger.error(msg)
        raise InputError(msg) from e
    return path


def save_json(path: Path, data: dict[str, Any] | list[Any]) -> Path:
    """Write JSON with `repr` floats, so values round-trip exactly."""
    saved = _save_text(path, json.dumps(data, indent=4) + "\n")
    logger.debug(f"Saved {saved}")
    return saved


def save_model(path: Path, model: BaseModel) -> Path:
    return save_json(path, model.model_dump(mode="json"))


def save_lines(path: Path, lines: list[str]) -> Path:
    return _save_text(path, "".join(f"{line}\n" for line in lines))

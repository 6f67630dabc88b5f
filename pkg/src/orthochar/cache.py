"""Content-addressed on-disk cache for enumerated groups and character tables."""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Any

import numpy as np

__all__ = ["cache_dir", "cache_enabled", "load_json", "save_json", "load_arrays", "save_arrays", "recipe_key"]

CACHE_ENV = "ORTHOCHAR_CACHE_DIR"
DISABLE_ENV = "ORTHOCHAR_NO_CACHE"
FORMAT_VERSION = 1


def cache_enabled() -> bool:
    return os.environ.get(DISABLE_ENV, "") not in ("1", "true", "yes")


def cache_dir() -> Path:
    root = os.environ.get(CACHE_ENV)
    path = Path(root) if root else Path.home() / ".cache" / "orthochar"
    path.mkdir(parents=True, exist_ok=True)
    return path


def recipe_key(*parts: object) -> str:
    text = "|".join(str(p) for p in (FORMAT_VERSION, *parts))
    return hashlib.sha256(text.encode()).hexdigest()[:32]


def _path(kind: str, key: str, suffix: str) -> Path:
    return cache_dir() / f"{kind}-{key}{suffix}"


def load_json(kind: str, key: str) -> Any | None:
    if not cache_enabled():
        return None
    p = _path(kind, key, ".json")
    if not p.exists():
        return None
    try:
        return json.loads(p.read_text())
    except (OSError, json.JSONDecodeError):
        return None


def save_json(kind: str, key: str, data: Any) -> None:
    if not cache_enabled():
        return
    p = _path(kind, key, ".json")
    tmp = p.with_suffix(".tmp")
    tmp.write_text(json.dumps(data, sort_keys=True))
    os.replace(tmp, p)


def load_arrays(kind: str, key: str) -> dict[str, np.ndarray] | None:
    if not cache_enabled():
        return None
    p = _path(kind, key, ".npz")
    if not p.exists():
        return None
    try:
        with np.load(p, allow_pickle=False) as data:
            return {k: data[k] for k in data.files}
    except (OSError, ValueError):
        return None


def save_arrays(kind: str, key: str, **arrays: np.ndarray) -> None:
    if not cache_enabled():
        return
    p = _path(kind, key, ".npz")
    tmp = p.with_name(p.name + ".tmp.npz")
    np.savez(tmp, **arrays)
    os.replace(tmp, p)

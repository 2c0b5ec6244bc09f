"""Service configuration: one JSON file, overridable per key by env vars."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

ENV_PREFIX = "OPENANNO_"


@dataclass(frozen=True, slots=True)
class ServiceConfig:
    listen: str = "127.0.0.1:8080"
    data_dir: Path = Path("data")
    vocab_path: Optional[Path] = None
    registry_path: Optional[Path] = None
    ui_dir: Optional[Path] = None

    @property
    def host(self) -> str:
        return self.listen.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen.rsplit(":", 1)[1])


_FILE_KEYS = {
    "listen": "listen",
    "data_dir": "data_dir",
    "vocab": "vocab_path",
    "registry": "registry_path",
    "ui_dir": "ui_dir",
}

_ENV_KEYS = {
    "LISTEN": "listen",
    "DATA_DIR": "data_dir",
    "VOCAB": "vocab_path",
    "REGISTRY": "registry_path",
    "UI_DIR": "ui_dir",
}

_PATH_FIELDS = {"data_dir", "vocab_path", "registry_path", "ui_dir"}


def load_config(
    path: Optional[str | Path] = None, env: Optional[Mapping[str, str]] = None
) -> ServiceConfig:
    env = os.environ if env is None else env
    values: dict = {}
    if path is not None:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        unknown = set(data) - set(_FILE_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        for key, field in _FILE_KEYS.items():
            if key in data:
                values[field] = data[key]
    for suffix, field in _ENV_KEYS.items():
        raw = env.get(ENV_PREFIX + suffix)
        if raw:
            values[field] = raw
    for field in _PATH_FIELDS & set(values):
        values[field] = Path(values[field])
    return ServiceConfig(**values)

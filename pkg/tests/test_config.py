from __future__ import annotations

import json
from pathlib import Path

import pytest

from openanno.config import ServiceConfig, load_config


def test_defaults():
    config = load_config(env={})
    assert config.listen == "127.0.0.1:8080"
    assert config.data_dir == Path("data")
    assert config.vocab_path is None


def test_file_values(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(
        json.dumps({"listen": "0.0.0.0:9000", "data_dir": "/srv/anno", "registry": "reg.txt"})
    )
    config = load_config(path, env={})
    assert config.listen == "0.0.0.0:9000"
    assert config.data_dir == Path("/srv/anno")
    assert config.registry_path == Path("reg.txt")


def test_env_overrides_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"listen": "0.0.0.0:9000"}))
    config = load_config(
        path, env={"OPENANNO_LISTEN": "127.0.0.1:7777", "OPENANNO_DATA_DIR": "/tmp/d"}
    )
    assert config.listen == "127.0.0.1:7777"
    assert config.data_dir == Path("/tmp/d")


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"port": 80}))
    with pytest.raises(ValueError):
        load_config(path, env={})


def test_host_port_split():
    config = ServiceConfig(listen="0.0.0.0:1234")
    assert config.host == "0.0.0.0"
    assert config.port == 1234

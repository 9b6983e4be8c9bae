#!/usr/bin/env python
# coding: utf8
#
# Copyright (c) 2025 sentiforge contributors.
#
# This file is part of sentiforge.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""
Test module for sentiforge/utils/config_parser.py
"""
import logging
from pathlib import Path
import pytest
from yaml import YAMLError

from sentiforge.utils.config_parser import ConfigParser
from sentiforge.utils.exceptions import ConfigError


@pytest.fixture
def setup() -> None:
    """
        Setup function that will be provide to tests that require an input file
    """
    parser = ConfigParser(False)
    path = Path(__file__).parent / "data" / "config_parser"
    yield {"parser": parser, "path": path}


def test_format_check(setup) -> None:
    parser = setup["parser"]
    # Not a YAML file
    pytest.raises(ConfigError, lambda: parser.read("test.txt"))
    pytest.raises(ValueError, lambda: parser.read("test.txt"))
    pytest.raises(ConfigError, lambda: parser.read(None))
    # Passes the format check, then fails on existence
    pytest.raises(FileNotFoundError, lambda: parser.read("test.yaml"))
    pytest.raises(FileNotFoundError, lambda: parser.read("test.yml"))


def test_existence_check(setup) -> None:
    parser = setup["parser"]
    pytest.raises(FileNotFoundError, lambda: parser.read(str(setup["path"] / "test.yaml")))
    parser.read(str(setup["path"] / "parser_test.yaml"))
    # path-like objects are accepted
    parser.read(setup["path"] / "parser_test.yaml")


def test_read(setup) -> None:
    cfg = setup["parser"].read(str(setup["path"] / "parser_test.yaml"))
    assert isinstance(cfg, dict)
    assert len(cfg) == 6

    assert cfg["merged"] == "runs/merged.csv"
    assert isinstance(cfg["epochs"], int) and cfg["epochs"] == 100
    assert cfg["record_timing"] is True
    assert isinstance(cfg["train_fraction"], float) and cfg["train_fraction"] == 0.8
    assert cfg["max_rows"] is None

    experiments = cfg["experiments"]
    assert isinstance(experiments, list) and len(experiments) == 1
    assert experiments[0]["id"] == 4
    assert experiments[0]["features"] == ["close_BTCUSDT", "volume_BTCUSDT"]

    pytest.raises(YAMLError, lambda: setup["parser"].read(str(setup["path"] / "wrong_syntax.yaml")))


def test_document_shape(setup) -> None:
    assert setup["parser"].read(str(setup["path"] / "empty.yaml")) == {}
    with pytest.raises(ConfigError, match="mapping"):
        setup["parser"].read(str(setup["path"] / "sequence.yaml"))


def test_verbose() -> None:
    assert ConfigParser(verbose=False).level == logging.INFO
    assert ConfigParser(verbose=True).level == logging.DEBUG


def test_sections(setup) -> None:
    params, experiments = setup["parser"].read_sections(setup["path"] / "parser_test.yaml")
    assert "experiments" not in params and len(params) == 5
    assert [entry["id"] for entry in experiments] == [4]
    params, experiments = setup["parser"].read_sections(setup["path"] / "empty.yaml")
    assert params == {} and experiments is None


def test_key_normalization(tmp_path) -> None:
    path = tmp_path / "dashed.yaml"
    path.write_text("record-timing: false\nout_dir: runs\nexperiments:\n  - id: 7\n    lookback-days: 3\n",
                    encoding="utf-8")
    cfg = ConfigParser(True).read(path)
    assert cfg == {"record_timing": False, "out_dir": "runs", "experiments": [{"id": 7, "lookback_days": 3}]}


@pytest.mark.parametrize("text", ["1: numeric key\n", "out-dir: a\nout_dir: b\n", "experiments: 3\n",
                                  "experiments: [3]\n"])
def test_malformed_documents(tmp_path, text) -> None:
    path = tmp_path / "bad.yaml"
    path.write_text(text, encoding="utf-8")
    pytest.raises(ConfigError, lambda: ConfigParser(False).read(path))

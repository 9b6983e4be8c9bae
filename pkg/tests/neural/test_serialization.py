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
Test module for sentiforge/neural/serialization.py
"""
import json
import os
import struct
import numpy as np
import pytest

from sentiforge.neural.model import SequenceModel, build_spec
from sentiforge.neural.serialization import MAGIC, load_model, save_model, sidecar_path
from sentiforge.utils.exceptions import DataError


@pytest.fixture
def setup(tmp_path):
    model = SequenceModel(build_spec("conv1d_lstm", 3, 2), seed=4)
    path = os.path.join(str(tmp_path), "model.sfnn")
    save_model(model, path)
    yield {"model": model, "path": path, "x": np.random.default_rng(1).normal(size=(2, 5, 2))}


def test_container_layout(setup) -> None:
    with open(setup["path"], "rb") as stream:
        content = stream.read()
    assert content[:5] == MAGIC
    (length,) = struct.unpack("<I", content[5:9])
    manifest = json.loads(content[9:9 + length].decode("utf-8"))
    assert manifest["format"] == "SFNN1"
    assert manifest["spec"]["architecture"] == "conv1d_lstm"
    assert [(entry["layer"], entry["name"]) for entry in manifest["parameters"]] == [
        (0, "kernel"), (0, "bias"), (1, "kernel"), (1, "recurrent_kernel"), (1, "bias"), (2, "kernel"), (2, "bias")]
    payload = np.frombuffer(content[9 + length:], dtype="<f8")
    assert payload.size == setup["model"].parameter_count()
    np.testing.assert_array_equal(payload[:18], setup["model"].parameters()[0].ravel())
    with open(sidecar_path(setup["path"]), encoding="utf-8") as stream:
        sidecar = json.load(stream)
    assert sidecar["spec"] == setup["model"].spec.to_dict()
    assert sidecar["seed"] == 4


def test_load_restores_model(setup) -> None:
    loaded = load_model(setup["path"])
    assert loaded.spec == setup["model"].spec
    for a, b in zip(loaded.parameters(), setup["model"].parameters()):
        np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(loaded.forward(setup["x"]), setup["model"].forward(setup["x"]))


def test_corrupted_files(setup, tmp_path) -> None:
    with open(setup["path"], "rb") as stream:
        content = stream.read()
    cases = {"magic.sfnn": b"XXXXX" + content[5:], "truncated.sfnn": content[:-8], "odd.sfnn": content[:-3],
             "trailing.sfnn": content + bytes(8), "header.sfnn": content[:9] + b"[" + content[10:]}
    for name, data in cases.items():
        path = os.path.join(str(tmp_path), name)
        with open(path, "wb") as stream:
            stream.write(data)
        pytest.raises(DataError, lambda: load_model(path))

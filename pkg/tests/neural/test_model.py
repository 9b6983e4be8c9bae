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
Test module for sentiforge/neural/model.py
"""
import numpy as np
import pytest

from sentiforge.neural import model as nm
from sentiforge.neural.model import LayerSpec, ModelSpec, SequenceModel, build_spec
from sentiforge.utils.exceptions import ConfigError, DivergenceError, ShapeError

EPSILON = 1e-5


def mse(model: SequenceModel, x: np.ndarray, y: np.ndarray) -> float:
    errors = model.forward(x) - y
    return float(np.mean(errors * errors))


@pytest.fixture
def setup():
    rng = np.random.default_rng(5)
    yield {"x": rng.normal(size=(3, 6, 2)), "y": rng.normal(size=3)}


def test_architectures() -> None:
    spec = build_spec("lstm_gru", 8, 5)
    assert [(layer.kind, layer.units, layer.return_sequences) for layer in spec.layers] == [
        ("lstm", 8, True), ("gru", 8, False), ("dense", 1, False)]
    conv = build_spec("conv1d_lstm", 4, 3)
    assert conv.layers[0] == LayerSpec("conv1d", 4, kernel_width=3)
    assert conv.layers[1].return_sequences is False
    assert [layer.kind for layer in build_spec("lstm", 2, 1).layers] == ["lstm", "dense"]
    assert set(nm.NOTE_ARCHITECTURES.values()) == set(nm.ARCHITECTURES)
    # notes 4 and 7 describe the same stack
    assert nm.NOTE_ARCHITECTURES[4] == nm.NOTE_ARCHITECTURES[7] == "lstm_gru"


def test_spec_validation() -> None:
    dense = LayerSpec("dense", 1)
    pytest.raises(ConfigError, lambda: build_spec("transformer", 4, 2))
    pytest.raises(ConfigError, lambda: ModelSpec((LayerSpec("lstm", 4),), 2))
    pytest.raises(ConfigError, lambda: ModelSpec((LayerSpec("lstm", 4), LayerSpec("dense", 2)), 2))
    pytest.raises(ConfigError, lambda: ModelSpec((LayerSpec("lstm", 4, True), dense), 2))
    pytest.raises(ConfigError, lambda: ModelSpec((LayerSpec("lstm", 4), LayerSpec("gru", 4), dense), 2))
    pytest.raises(ConfigError, lambda: ModelSpec((LayerSpec("conv1d", 4, kernel_width=3), dense), 2))
    pytest.raises(ConfigError, lambda: ModelSpec((LayerSpec("dense", 4), dense), 2))
    pytest.raises(ConfigError, lambda: ModelSpec((LayerSpec("lstm", 4), dense), 0))


def test_spec_dict_round_trip() -> None:
    for architecture in nm.ARCHITECTURES:
        spec = build_spec(architecture, 6, 19)
        assert ModelSpec.from_dict(spec.to_dict()) == spec
    pytest.raises(ConfigError, lambda: ModelSpec.from_dict({"layers": [{"units": 2}], "n_features": 1}))


@pytest.mark.parametrize("architecture", sorted(nm.ARCHITECTURES))
def test_model_gradients(setup, architecture) -> None:
    model = SequenceModel(build_spec(architecture, 3, 2), seed=1)
    x, y = setup["x"], setup["y"]
    errors = model.forward(x) - y
    model.backward(2.0 * errors / len(y))
    for param, analytic in zip(model.parameters(), model.gradients()):
        numeric = np.zeros_like(param)
        for index in np.ndindex(param.shape):
            saved = param[index]
            param[index] = saved + EPSILON
            plus = mse(model, x, y)
            param[index] = saved - EPSILON
            minus = mse(model, x, y)
            param[index] = saved
            numeric[index] = (plus - minus) / (2.0 * EPSILON)
        scale = np.linalg.norm(analytic) + np.linalg.norm(numeric)
        assert np.linalg.norm(analytic - numeric) <= 1e-4 * scale


def test_forward_batch_equivalence(setup) -> None:
    model = SequenceModel(build_spec("conv1d_lstm", 4, 2))
    batched = model.forward(setup["x"])
    single = np.concatenate([model.forward(setup["x"][i:i + 1]) for i in range(3)])
    assert batched.shape == (3,)
    np.testing.assert_allclose(batched, single, rtol=0, atol=1e-12)


def test_zero_loss_batch(setup) -> None:
    model = SequenceModel(build_spec("gru", 4, 2))
    predictions = model.forward(setup["x"])
    model.backward(2.0 * (predictions - predictions) / 3)
    head = model.layers[-1]
    assert not head.grads["kernel"].any()
    assert not head.grads["bias"].any()


def test_duplicate_model_gradients(setup) -> None:
    grads = []
    for _ in range(2):
        model = SequenceModel(build_spec("lstm_lstm", 4, 2), seed=9)
        errors = model.forward(setup["x"]) - setup["y"]
        model.backward(errors)
        grads.append(model.gradients())
    for first, second in zip(*grads):
        np.testing.assert_array_equal(first, second)
    seeded = [SequenceModel(build_spec("lstm_lstm", 4, 2), seed=seed).parameters()[0] for seed in (9, 10)]
    assert not np.array_equal(*seeded)


def test_parameter_count() -> None:
    model = SequenceModel(build_spec("lstm_gru", 4, 3))
    expected = nm.recurrent_parameter_count("lstm", 4, 3) + nm.recurrent_parameter_count("gru", 4, 4) + 5
    assert model.parameter_count() == expected == sum(p.size for p in model.parameters())
    pytest.raises(ConfigError, lambda: nm.recurrent_parameter_count("dense", 1, 1))


def test_model_errors(setup) -> None:
    model = SequenceModel(build_spec("lstm", 4, 2))
    pytest.raises(ShapeError, lambda: model.forward(np.zeros((2, 6, 3))))
    debug = SequenceModel(build_spec("lstm", 4, 2), debug=True)
    x = setup["x"].copy()
    x[0, 0, 0] = np.nan
    pytest.raises(DivergenceError, lambda: debug.forward(x))
    # without debug checks the NaN simply propagates
    assert np.isnan(model.forward(x)[0])

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
    This module assembles layers into sequence regressors and names the stacked architectures.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple
import numpy as np
from sentiforge.neural.layers import LSTM, GRU, Conv1D, Dense, Layer, make_layer
from sentiforge.utils.exceptions import ConfigError, DivergenceError, ShapeError
from sentiforge.utils.sentiforge_logger import SentiforgeLogger

CONV_KERNEL_WIDTH = 3
SEQUENCE_KINDS = (LSTM.KIND, GRU.KIND, Conv1D.KIND)
RECURRENT_KINDS = (LSTM.KIND, GRU.KIND)

# layer kinds before the Dense(1) head
ARCHITECTURES: Dict[str, Tuple[str, ...]] = {
    "lstm": ("lstm",),
    "lstm_lstm": ("lstm", "lstm"),
    "lstm_gru": ("lstm", "gru"),
    "gru": ("gru",),
    "gru_gru": ("gru", "gru"),
    "conv1d_lstm": ("conv1d", "lstm"),
}

# model notes of the experiment tables; notes 4 and 7 name the same stack
NOTE_ARCHITECTURES: Dict[int, str] = {
    2: "lstm",
    3: "lstm_lstm",
    4: "lstm_gru",
    5: "gru",
    6: "gru_gru",
    7: "lstm_gru",
    8: "conv1d_lstm",
}


@dataclass(frozen=True)
class LayerSpec:
    kind: str
    units: int
    return_sequences: bool = False
    kernel_width: int = None

    def to_dict(self) -> dict:
        config = {"kind": self.kind, "units": self.units}
        if self.kind in RECURRENT_KINDS:
            config["return_sequences"] = self.return_sequences
        if self.kind == Conv1D.KIND:
            config["kernel_width"] = self.kernel_width
        return config

    @staticmethod
    def from_dict(config: dict) -> "LayerSpec":
        try:
            return LayerSpec(str(config["kind"]), int(config["units"]), bool(config.get("return_sequences", False)),
                             config.get("kernel_width"))
        except (KeyError, TypeError, ValueError) as err:
            raise ConfigError("Malformed layer description {}: {}".format(config, err)) from err


@dataclass(frozen=True)
class ModelSpec:
    """
        Ordered layers of a sequence regressor on n_features inputs.
        The stack ends with Dense(1); every sequence layer except the last recurrent one emits full sequences.
    """
    layers: Tuple[LayerSpec, ...]
    n_features: int
    architecture: str = "custom"

    def __post_init__(self) -> None:
        object.__setattr__(self, "layers", tuple(self.layers))
        validate_spec(self)

    def to_dict(self) -> dict:
        return {"architecture": self.architecture, "n_features": self.n_features,
                "layers": [layer.to_dict() for layer in self.layers]}

    @staticmethod
    def from_dict(config: dict) -> "ModelSpec":
        try:
            layers = tuple(LayerSpec.from_dict(layer) for layer in config["layers"])
            return ModelSpec(layers, int(config["n_features"]), str(config.get("architecture", "custom")))
        except (KeyError, TypeError) as err:
            raise ConfigError("Malformed model description: {}".format(err)) from err


def validate_spec(spec: ModelSpec) -> None:
    layers = spec.layers
    if spec.n_features < 1:
        raise ConfigError("A model needs at least one input feature, got {}".format(spec.n_features))
    if len(layers) < 2 or layers[-1].kind != Dense.KIND or layers[-1].units != 1:
        raise ConfigError("A model is one or more sequence layers followed by Dense(1), got {}".format(
            [layer.kind for layer in layers]))
    body = layers[:-1]
    for position, layer in enumerate(body):
        if layer.kind not in SEQUENCE_KINDS:
            raise ConfigError("Layer {} ('{}') is not a sequence layer".format(position, layer.kind))
        if layer.units < 1:
            raise ConfigError("Layer {} has {} unit(s)".format(position, layer.units))
        last = position == len(body) - 1
        if layer.kind == Conv1D.KIND:
            if last:
                raise ConfigError("A Conv1D layer must feed a recurrent layer")
            if layer.kernel_width is None or layer.kernel_width < 1:
                raise ConfigError("Conv1D layer {} has no valid kernel width".format(position))
        elif layer.return_sequences == last:
            raise ConfigError("Recurrent layer {} must {}return sequences".format(position, "not " if last else ""))


def build_spec(architecture: str, units: int, n_features: int, kernel_width: int = CONV_KERNEL_WIDTH) -> ModelSpec:
    """
    Spell out an architecture shorthand: stacked sequence layers of `units` units each, then Dense(1).

    Args:
        architecture: key of ARCHITECTURES.
        units: hidden units per recurrent layer, filters of a Conv1D layer.
        n_features: input width.
        kernel_width: Conv1D kernel width.

    Returns:
        the model spec.
    """
    if architecture not in ARCHITECTURES:
        raise ConfigError("Unknown architecture '{}', expected one of {}".format(architecture, sorted(ARCHITECTURES)))
    kinds = ARCHITECTURES[architecture]
    layers = []
    for position, kind in enumerate(kinds):
        if kind == Conv1D.KIND:
            layers.append(LayerSpec(kind, units, kernel_width=kernel_width))
        else:
            layers.append(LayerSpec(kind, units, return_sequences=position < len(kinds) - 1))
    layers.append(LayerSpec(Dense.KIND, 1))
    return ModelSpec(tuple(layers), n_features, architecture)


class SequenceModel(object):
    """
        Sequence regressor: [batch, steps, n_features] windows to [batch] predictions.
    """

    def __init__(self, spec: ModelSpec, seed: int = 42, debug: bool = False) -> None:
        self.spec = spec
        self.seed = seed
        self.debug = debug
        rng = np.random.default_rng(seed)
        self.layers: List[Layer] = []
        width = spec.n_features
        for layer_spec in spec.layers:
            layer = make_layer(layer_spec.to_dict())
            width = layer.build(width, rng)
            self.layers.append(layer)

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 3 or x.shape[2] != self.spec.n_features:
            raise ShapeError((None, None, self.spec.n_features), x.shape, "model input")
        out = x
        for layer in self.layers:
            out = layer.forward(out)
            self._check_finite(out, "{} activation".format(layer.KIND))
        return out[:, 0]

    def backward(self, dloss: np.ndarray) -> None:
        """
            Back-propagate d(loss)/d(prediction), [batch], filling every layer's grads.
        """
        grad = np.asarray(dloss, dtype=np.float64).reshape(-1, 1)
        for layer in reversed(self.layers):
            grad = layer.backward(grad)
            for name in layer.PARAM_NAMES:
                self._check_finite(layer.grads[name], "{} {} gradient".format(layer.KIND, name))

    def parameters(self) -> List[np.ndarray]:
        return [layer.params[name] for layer in self.layers for name in layer.PARAM_NAMES]

    def gradients(self) -> List[np.ndarray]:
        return [layer.grads[name] for layer in self.layers for name in layer.PARAM_NAMES]

    def named_parameters(self) -> List[Tuple[int, str, np.ndarray]]:
        return [(index, name, layer.params[name])
                for index, layer in enumerate(self.layers) for name in layer.PARAM_NAMES]

    def parameter_count(self) -> int:
        return sum(layer.parameter_count() for layer in self.layers)

    def _check_finite(self, values: np.ndarray, what: str) -> None:
        if self.debug and not np.all(np.isfinite(values)):
            SentiforgeLogger.log("Non-finite {}".format(what), logging.ERROR)
            raise DivergenceError("Non-finite {}".format(what))


def recurrent_parameter_count(kind: str, units: int, n_features: int) -> int:
    """
        gates * (units * n_features + units^2 + units), four gates for LSTM and three for GRU.
    """
    gates = {LSTM.KIND: 4, GRU.KIND: 3}
    if kind not in gates:
        raise ConfigError("Not a recurrent layer: '{}'".format(kind))
    return gates[kind] * (units * n_features + units * units + units)

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
    This module defines the layers of the sequence-model engine.
    Every layer caches its forward pass and back-propagates through time in float64.
"""
from typing import Dict, List, Tuple
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.special import expit
from sentiforge.utils.exceptions import ConfigError, ShapeError

FORGET_BIAS = 1.0


def glorot_uniform(rng: np.random.Generator, shape: Tuple[int, ...], fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


class Layer(object):
    """
        Base layer. Parameters and gradients are dicts of float64 arrays keyed by name,
        iterated in PARAM_NAMES order.
    """
    KIND = "layer"
    PARAM_NAMES: Tuple[str, ...] = ()

    def __init__(self, units: int) -> None:
        if int(units) < 1:
            raise ConfigError("{} requires at least one unit, got {}".format(self.KIND, units))
        self.units = int(units)
        self.input_dim = None
        self.params: Dict[str, np.ndarray] = {}
        self.grads: Dict[str, np.ndarray] = {}
        self._cache = None

    def build(self, input_dim: int, rng: np.random.Generator) -> int:
        raise NotImplementedError

    def forward(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def backward(self, dy: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def config(self) -> dict:
        return {"kind": self.KIND, "units": self.units}

    def parameter_count(self) -> int:
        return int(sum(self.params[name].size for name in self.PARAM_NAMES))

    def zero_grads(self) -> None:
        self.grads = {name: np.zeros_like(self.params[name]) for name in self.PARAM_NAMES}

    def _check_sequence(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 3 or x.shape[2] != self.input_dim:
            raise ShapeError((None, None, self.input_dim), x.shape, self.KIND)
        return x


class LSTM(Layer):
    """
    Long short-term memory layer, gates ordered input, forget, cell, output.

    kernel is [input_dim, 4 * units], recurrent_kernel [units, 4 * units] and bias [4 * units].
    The initial hidden and cell states are zero.
    """
    KIND = "lstm"
    PARAM_NAMES = ("kernel", "recurrent_kernel", "bias")

    def __init__(self, units: int, return_sequences: bool = False) -> None:
        super().__init__(units)
        self.return_sequences = bool(return_sequences)

    def config(self) -> dict:
        return {"kind": self.KIND, "units": self.units, "return_sequences": self.return_sequences}

    def build(self, input_dim: int, rng: np.random.Generator) -> int:
        h = self.units
        self.input_dim = int(input_dim)
        bias = np.zeros(4 * h)
        bias[h:2 * h] = FORGET_BIAS
        self.params = {
            "kernel": glorot_uniform(rng, (self.input_dim, 4 * h), self.input_dim, 4 * h),
            "recurrent_kernel": glorot_uniform(rng, (h, 4 * h), h, 4 * h),
            "bias": bias,
        }
        self.zero_grads()
        return h

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = self._check_sequence(x)
        batch, steps, _ = x.shape
        h = self.units
        kernel, recurrent, bias = self.params["kernel"], self.params["recurrent_kernel"], self.params["bias"]
        gates = np.empty((steps, 4, batch, h))
        cells = np.zeros((steps + 1, batch, h))
        hidden = np.zeros((steps + 1, batch, h))
        # input projection of every step at once
        projected = x @ kernel + bias
        for t in range(steps):
            z = projected[:, t] + hidden[t] @ recurrent
            i = expit(z[:, :h])
            f = expit(z[:, h:2 * h])
            g = np.tanh(z[:, 2 * h:3 * h])
            o = expit(z[:, 3 * h:])
            cells[t + 1] = f * cells[t] + i * g
            hidden[t + 1] = o * np.tanh(cells[t + 1])
            gates[t, 0], gates[t, 1], gates[t, 2], gates[t, 3] = i, f, g, o
        self._cache = (x, gates, cells, hidden)
        if self.return_sequences:
            return hidden[1:].transpose(1, 0, 2).copy()
        return hidden[steps].copy()

    def backward(self, dy: np.ndarray) -> np.ndarray:
        x, gates, cells, hidden = self._cache
        batch, steps, _ = x.shape
        h = self.units
        dh_seq = _sequence_grad(dy, self.return_sequences, batch, steps, h, self.KIND)
        kernel, recurrent = self.params["kernel"], self.params["recurrent_kernel"]
        dz = np.empty((batch, steps, 4 * h))
        dh_next = np.zeros((batch, h))
        dc_next = np.zeros((batch, h))
        drecurrent = np.zeros_like(recurrent)
        for t in reversed(range(steps)):
            i, f, g, o = gates[t]
            tanh_c = np.tanh(cells[t + 1])
            dh = dh_seq[:, t] + dh_next
            dc = dc_next + dh * o * (1.0 - tanh_c ** 2)
            dz_t = np.concatenate([dc * g * i * (1.0 - i),
                                   dc * cells[t] * f * (1.0 - f),
                                   dc * i * (1.0 - g ** 2),
                                   dh * tanh_c * o * (1.0 - o)], axis=1)
            dz[:, t] = dz_t
            drecurrent += hidden[t].T @ dz_t
            dh_next = dz_t @ recurrent.T
            dc_next = dc * f
        self.grads = {
            "kernel": np.einsum("btf,btg->fg", x, dz),
            "recurrent_kernel": drecurrent,
            "bias": dz.sum(axis=(0, 1)),
        }
        return dz @ kernel.T


class GRU(Layer):
    """
    Gated recurrent unit, gates ordered update, reset, candidate.

    The reset gate multiplies the previous state before the recurrent product and a single bias is used:
    h_t = z * h_{t-1} + (1 - z) * tanh(x W_h + (r * h_{t-1}) U_h + b_h).
    """
    KIND = "gru"
    PARAM_NAMES = ("kernel", "recurrent_kernel", "bias")

    def __init__(self, units: int, return_sequences: bool = False) -> None:
        super().__init__(units)
        self.return_sequences = bool(return_sequences)

    def config(self) -> dict:
        return {"kind": self.KIND, "units": self.units, "return_sequences": self.return_sequences}

    def build(self, input_dim: int, rng: np.random.Generator) -> int:
        h = self.units
        self.input_dim = int(input_dim)
        self.params = {
            "kernel": glorot_uniform(rng, (self.input_dim, 3 * h), self.input_dim, 3 * h),
            "recurrent_kernel": glorot_uniform(rng, (h, 3 * h), h, 3 * h),
            "bias": np.zeros(3 * h),
        }
        self.zero_grads()
        return h

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = self._check_sequence(x)
        batch, steps, _ = x.shape
        h = self.units
        recurrent = self.params["recurrent_kernel"]
        projected = x @ self.params["kernel"] + self.params["bias"]
        gates = np.empty((steps, 3, batch, h))
        hidden = np.zeros((steps + 1, batch, h))
        for t in range(steps):
            h_prev = hidden[t]
            zr = projected[:, t, :2 * h] + h_prev @ recurrent[:, :2 * h]
            z = expit(zr[:, :h])
            r = expit(zr[:, h:])
            candidate = np.tanh(projected[:, t, 2 * h:] + (r * h_prev) @ recurrent[:, 2 * h:])
            hidden[t + 1] = z * h_prev + (1.0 - z) * candidate
            gates[t, 0], gates[t, 1], gates[t, 2] = z, r, candidate
        self._cache = (x, gates, hidden)
        if self.return_sequences:
            return hidden[1:].transpose(1, 0, 2).copy()
        return hidden[steps].copy()

    def backward(self, dy: np.ndarray) -> np.ndarray:
        x, gates, hidden = self._cache
        batch, steps, _ = x.shape
        h = self.units
        dh_seq = _sequence_grad(dy, self.return_sequences, batch, steps, h, self.KIND)
        recurrent = self.params["recurrent_kernel"]
        u_zr, u_h = recurrent[:, :2 * h], recurrent[:, 2 * h:]
        da = np.empty((batch, steps, 3 * h))
        drecurrent = np.zeros_like(recurrent)
        dh_next = np.zeros((batch, h))
        for t in reversed(range(steps)):
            z, r, candidate = gates[t]
            h_prev = hidden[t]
            dh = dh_seq[:, t] + dh_next
            da_h = dh * (1.0 - z) * (1.0 - candidate ** 2)
            d_reset_state = da_h @ u_h.T
            da_zr = np.concatenate([dh * (h_prev - candidate) * z * (1.0 - z),
                                    d_reset_state * h_prev * r * (1.0 - r)], axis=1)
            drecurrent[:, :2 * h] += h_prev.T @ da_zr
            drecurrent[:, 2 * h:] += (r * h_prev).T @ da_h
            dh_next = dh * z + d_reset_state * r + da_zr @ u_zr.T
            da[:, t, :2 * h] = da_zr
            da[:, t, 2 * h:] = da_h
        self.grads = {
            "kernel": np.einsum("btf,btg->fg", x, da),
            "recurrent_kernel": drecurrent,
            "bias": da.sum(axis=(0, 1)),
        }
        return da @ self.params["kernel"].T


class Conv1D(Layer):
    """
    Valid (unpadded) cross-correlation along time with a linear activation.

    kernel is [kernel_width, input_dim, filters]: y[b, t] = sum_k x[b, t + k] @ kernel[k] + bias.
    """
    KIND = "conv1d"
    PARAM_NAMES = ("kernel", "bias")

    def __init__(self, filters: int, kernel_width: int = 3) -> None:
        super().__init__(filters)
        if int(kernel_width) < 1:
            raise ConfigError("The kernel width must be at least 1, got {}".format(kernel_width))
        self.kernel_width = int(kernel_width)

    @property
    def filters(self) -> int:
        return self.units

    def config(self) -> dict:
        return {"kind": self.KIND, "units": self.units, "kernel_width": self.kernel_width}

    def build(self, input_dim: int, rng: np.random.Generator) -> int:
        self.input_dim = int(input_dim)
        width = self.kernel_width
        self.params = {
            "kernel": glorot_uniform(rng, (width, self.input_dim, self.filters),
                                     width * self.input_dim, width * self.filters),
            "bias": np.zeros(self.filters),
        }
        self.zero_grads()
        return self.filters

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = self._check_sequence(x)
        if self.kernel_width > x.shape[1]:
            raise ShapeError((None, self.kernel_width, self.input_dim), x.shape,
                             "conv1d kernel wider than the sequence")
        # [batch, steps_out, features, width]
        windows = sliding_window_view(x, self.kernel_width, axis=1)
        self._cache = (x.shape, windows)
        return np.einsum("btfk,kfo->bto", windows, self.params["kernel"]) + self.params["bias"]

    def backward(self, dy: np.ndarray) -> np.ndarray:
        shape, windows = self._cache
        steps_out = shape[1] - self.kernel_width + 1
        if dy.shape != (shape[0], steps_out, self.filters):
            raise ShapeError((shape[0], steps_out, self.filters), dy.shape, self.KIND)
        kernel = self.params["kernel"]
        self.grads = {
            "kernel": np.einsum("btfk,bto->kfo", windows, dy),
            "bias": dy.sum(axis=(0, 1)),
        }
        dx = np.zeros(shape)
        for k in range(self.kernel_width):
            dx[:, k:k + steps_out] += dy @ kernel[k].T
        return dx


class Dense(Layer):
    """
        Fully connected linear layer on [batch, input_dim] inputs.
    """
    KIND = "dense"
    PARAM_NAMES = ("kernel", "bias")

    def build(self, input_dim: int, rng: np.random.Generator) -> int:
        self.input_dim = int(input_dim)
        self.params = {
            "kernel": glorot_uniform(rng, (self.input_dim, self.units), self.input_dim, self.units),
            "bias": np.zeros(self.units),
        }
        self.zero_grads()
        return self.units

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.input_dim:
            raise ShapeError((None, self.input_dim), x.shape, self.KIND)
        self._cache = x
        return x @ self.params["kernel"] + self.params["bias"]

    def backward(self, dy: np.ndarray) -> np.ndarray:
        x = self._cache
        self.grads = {"kernel": x.T @ dy, "bias": dy.sum(axis=0)}
        return dy @ self.params["kernel"].T


LAYER_TYPES = {layer.KIND: layer for layer in (LSTM, GRU, Conv1D, Dense)}


def _sequence_grad(dy: np.ndarray, return_sequences: bool, batch: int, steps: int, units: int,
                   where: str) -> np.ndarray:
    dy = np.asarray(dy, dtype=np.float64)
    if return_sequences:
        if dy.shape != (batch, steps, units):
            raise ShapeError((batch, steps, units), dy.shape, where)
        return dy
    if dy.shape != (batch, units):
        raise ShapeError((batch, units), dy.shape, where)
    dh_seq = np.zeros((batch, steps, units))
    dh_seq[:, -1] = dy
    return dh_seq


def make_layer(config: dict) -> Layer:
    """
        Instantiate an unbuilt layer from its config() dict.
    """
    kind = config.get("kind")
    if kind not in LAYER_TYPES:
        raise ConfigError("Unknown layer kind '{}', expected one of {}".format(kind, sorted(LAYER_TYPES)))
    if kind == Conv1D.KIND:
        return Conv1D(config["units"], config.get("kernel_width", 3))
    if kind == Dense.KIND:
        return Dense(config["units"])
    return LAYER_TYPES[kind](config["units"], config.get("return_sequences", False))


def layer_param_list(layers: List[Layer]) -> List[Tuple[int, str, np.ndarray]]:
    return [(index, name, layer.params[name]) for index, layer in enumerate(layers) for name in layer.PARAM_NAMES]


def _bound(layer: Layer, params: Dict[str, np.ndarray], input_dim: int) -> Layer:
    """
        Attach existing parameters to a layer, checking their shapes against a freshly built one.
    """
    layer.build(input_dim, np.random.default_rng(0))
    for name in layer.PARAM_NAMES:
        if name not in params:
            raise ConfigError("{}: missing parameter '{}'".format(layer.KIND, name))
        if np.shape(params[name]) != layer.params[name].shape:
            raise ShapeError(layer.params[name].shape, np.shape(params[name]), "{} {}".format(layer.KIND, name))
    layer.params = {name: np.asarray(params[name], dtype=np.float64) for name in layer.PARAM_NAMES}
    layer.zero_grads()
    return layer


def _recurrent_units(kind: str, params: Dict[str, np.ndarray]) -> int:
    if "recurrent_kernel" not in params:
        raise ConfigError("{}: missing parameter 'recurrent_kernel'".format(kind))
    return np.shape(params["recurrent_kernel"])[0]


def lstm_forward(x: np.ndarray, params: Dict[str, np.ndarray]) -> np.ndarray:
    """
        Hidden states [batch, steps, units] of an LSTM given its kernel, recurrent_kernel and bias.
    """
    layer = LSTM(_recurrent_units(LSTM.KIND, params), return_sequences=True)
    return _bound(layer, params, np.shape(x)[-1]).forward(x)


def gru_forward(x: np.ndarray, params: Dict[str, np.ndarray]) -> np.ndarray:
    layer = GRU(_recurrent_units(GRU.KIND, params), return_sequences=True)
    return _bound(layer, params, np.shape(x)[-1]).forward(x)


def conv1d_forward(x: np.ndarray, params: Dict[str, np.ndarray]) -> np.ndarray:
    """
        Feature maps [batch, steps - kernel_width + 1, filters] given a [width, features, filters] kernel and a bias.
    """
    if np.ndim(params.get("kernel")) != 3:
        raise ConfigError("conv1d: the kernel must be [kernel_width, features, filters]")
    width, _, filters = np.shape(params["kernel"])
    return _bound(Conv1D(filters, kernel_width=width), params, np.shape(x)[-1]).forward(x)

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
    This module trains sequence models with mini-batch Adam on the mean squared error.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Union
import numpy as np
from tqdm import tqdm
from sentiforge.neural.model import ModelSpec, SequenceModel
from sentiforge.neural.optimizer import Adam
from sentiforge.utils.exceptions import ConfigError, DataError, DivergenceError, ShapeError
from sentiforge.utils.sentiforge_logger import SentiforgeLogger

DEFAULT_BATCH_SIZE = 128
DEFAULT_EPOCHS = 5
DEFAULT_LEARNING_RATE = 1e-3


@dataclass(frozen=True)
class TrainConfig:
    """
        Mini-batch training settings. The sample order is reshuffled every epoch from the seed.
    """
    batch_size: int = DEFAULT_BATCH_SIZE
    epochs: int = DEFAULT_EPOCHS
    learning_rate: float = DEFAULT_LEARNING_RATE
    seed: int = 42
    shuffle: bool = True
    progress: bool = False
    debug: bool = False

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ConfigError("batch_size must be at least 1, got {}".format(self.batch_size))
        if self.epochs < 1:
            raise ConfigError("epochs must be at least 1, got {}".format(self.epochs))
        if not self.learning_rate > 0:
            raise ConfigError("learning_rate must be positive, got {}".format(self.learning_rate))


@dataclass
class TrainResult:
    model: SequenceModel
    # training RMSE of every epoch, in scaled target units
    history: List[float] = field(default_factory=list)


def train(model: Union[ModelSpec, SequenceModel], inputs: np.ndarray, targets: np.ndarray,
          config: TrainConfig = TrainConfig()) -> TrainResult:
    """
    Fit a model on windowed samples. The last batch of an epoch may be short.

    Args:
        model: a spec (built with config.seed) or an already built model, trained in place. config.debug turns the
            finite checks of a built model on; a model built in debug mode keeps them.
        inputs: [n_samples, seq_len, n_features] windows.
        targets: [n_samples] scaled targets.
        config: training settings.

    Returns:
        the trained model and its loss history.

    Raises:
        DivergenceError: the loss became NaN or infinite.
    """
    if isinstance(model, ModelSpec):
        model = SequenceModel(model, seed=config.seed, debug=config.debug)
    elif config.debug:
        model.debug = True
    targets = np.asarray(targets, dtype=np.float64).ravel()
    n_samples = len(targets)
    if n_samples == 0:
        raise DataError("Cannot train on an empty dataset")
    if len(inputs) != n_samples:
        raise ShapeError((n_samples,), (len(inputs),), "training inputs vs targets")

    optimizer = Adam(config.learning_rate)
    rng = np.random.default_rng(config.seed)
    history = []
    epochs = tqdm(range(config.epochs), desc="Training", disable=not config.progress)
    for epoch in epochs:
        order = rng.permutation(n_samples) if config.shuffle else np.arange(n_samples)
        squared_sum = 0.0
        for batch, start in enumerate(range(0, n_samples, config.batch_size)):
            rows = order[start:start + config.batch_size]
            errors = model.forward(inputs[rows]) - targets[rows]
            loss = np.mean(errors * errors)
            if not np.isfinite(loss):
                message = "Training diverged at epoch {}, batch {}: loss {}".format(epoch + 1, batch + 1, loss)
                SentiforgeLogger.log(message, logging.ERROR)
                raise DivergenceError(message)
            squared_sum += loss * len(rows)
            model.backward(2.0 * errors / len(rows))
            optimizer.step(model.parameters(), model.gradients())
        history.append(float(np.sqrt(squared_sum / n_samples)))
        SentiforgeLogger.log("Epoch {}/{}: rmse {:.6g}".format(epoch + 1, config.epochs, history[-1]), logging.DEBUG)
    return TrainResult(model, history)


def predict(model: SequenceModel, inputs: np.ndarray, batch_size: int = DEFAULT_BATCH_SIZE) -> np.ndarray:
    """
        Batched forward pass, [n_samples] predictions in scaled units.
    """
    if batch_size < 1:
        raise ConfigError("batch_size must be at least 1, got {}".format(batch_size))
    n_samples = len(inputs)
    if n_samples == 0:
        return np.empty(0)
    return np.concatenate([model.forward(inputs[start:start + batch_size])
                           for start in range(0, n_samples, batch_size)])

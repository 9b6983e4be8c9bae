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
    This module runs experiments end to end: select, scale, window, split, train and evaluate.
"""
import concurrent.futures
import json
import logging
import os
import time
from dataclasses import dataclass, field
from typing import List, Sequence
import numpy as np
import pandas as pd
from tqdm import tqdm
from sentiforge.dataset.scaler import invert_target
from sentiforge.dataset.windowing import (DEFAULT_TRAIN_FRACTION, ExperimentData, prepare_experiment_data,
                                          write_dataset_meta)
from sentiforge.ingest.storage import read_csv, write_csv
from sentiforge.neural.metrics import METRIC_NAMES, Metrics, evaluate
from sentiforge.neural.model import ARCHITECTURES, CONV_KERNEL_WIDTH, SequenceModel, build_spec
from sentiforge.neural.serialization import save_model
from sentiforge.neural.trainer import DEFAULT_LEARNING_RATE, TrainConfig, predict, train
from sentiforge.runner.experiment_matrix import ExperimentConfig
from sentiforge.utils.exceptions import ConfigError, DataError
from sentiforge.utils.helper import DEFAULT_SEED, ensure_dir, format_utc
from sentiforge.utils.sentiforge_logger import SentiforgeLogger

PREDICTION_COLUMNS = ("timestamp", "split", "actual", "predicted", "seed")
HISTORY_COLUMNS = ("epoch", "loss", "seed")
RESULT_FILE = "result.json"
PREDICTIONS_FILE = "predictions.csv"
HISTORY_FILE = "history.csv"
MODEL_FILE = "model.sfnn"
DATASET_META_FILE = "dataset.meta.json"


@dataclass(frozen=True)
class RunOverrides:
    """
        Desk-scale settings applied on top of an experiment config without changing it.
        None keeps the config's own value.
    """
    lookback_hours: int = None
    epochs: int = None
    stride: int = 1
    max_rows: int = None
    learning_rate: float = DEFAULT_LEARNING_RATE
    train_fraction: float = DEFAULT_TRAIN_FRACTION

    def __post_init__(self) -> None:
        for name in ("lookback_hours", "epochs", "max_rows"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ConfigError("{} must be positive, got {}".format(name, value))
        if self.stride < 1:
            raise ConfigError("stride must be positive, got {}".format(self.stride))

    def to_dict(self) -> dict:
        return {"lookback_hours": self.lookback_hours, "epochs": self.epochs, "stride": self.stride,
                "max_rows": self.max_rows, "learning_rate": self.learning_rate,
                "train_fraction": self.train_fraction}


@dataclass
class Predictions:
    timestamps: np.ndarray
    actual: np.ndarray
    predicted: np.ndarray

    def __len__(self) -> int:
        return len(self.actual)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    metrics: Metrics
    history: List[float]
    train: Predictions
    test: Predictions
    seed: int = DEFAULT_SEED
    wall_time: float = None
    overrides: RunOverrides = field(default_factory=RunOverrides)
    model: SequenceModel = None
    data: ExperimentData = None

    @property
    def id(self) -> int:
        return self.config.id

    def predictions_frame(self) -> pd.DataFrame:
        frames = []
        for split, predictions in (("train", self.train), ("test", self.test)):
            frames.append(pd.DataFrame({"timestamp": [format_timestamp(t) for t in predictions.timestamps],
                                        "split": split,
                                        "actual": [repr(float(v)) for v in predictions.actual],
                                        "predicted": [repr(float(v)) for v in predictions.predicted],
                                        "seed": str(self.seed)}, columns=list(PREDICTION_COLUMNS)))
        return pd.concat(frames, ignore_index=True)


def format_timestamp(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format_utc(value)


def run_experiment(config: ExperimentConfig, table: pd.DataFrame, overrides: RunOverrides = RunOverrides(),
                   seed: int = DEFAULT_SEED, progress: bool = False) -> ExperimentResult:
    """
    Train and evaluate one experiment on a merged table. Metrics are in unscaled USD.

    Args:
        config: experiment config.
        table: merged table, read-only.
        overrides: desk-scale settings.
        seed: weight initialisation and shuffling seed.
        progress: show the epoch progress bar.

    Returns:
        the experiment result.

    Raises:
        DataError: the table is too short for the look-back.
        DivergenceError: training diverged.
    """
    start = time.perf_counter()
    lookback_hours = overrides.lookback_hours or config.lookback_hours
    epochs = overrides.epochs or config.epochs
    if config.architecture not in ARCHITECTURES:
        raise ConfigError("Experiment {}: unknown architecture '{}'".format(config.id, config.architecture))
    if config.architecture.startswith("conv1d") and lookback_hours < CONV_KERNEL_WIDTH:
        raise ConfigError("Experiment {}: a look-back of {} hour(s) is narrower than the Conv1D kernel".format(
            config.id, lookback_hours))
    try:
        data = prepare_experiment_data(table, config.mask, lookback_hours, overrides.train_fraction,
                                       overrides.stride, overrides.max_rows)
    except DataError as e:
        raise DataError("Experiment {}: {}".format(config.id, e)) from e

    spec = build_spec(config.architecture, config.units, len(data.columns))
    train_config = TrainConfig(batch_size=config.batch_size, epochs=epochs, learning_rate=overrides.learning_rate,
                               seed=seed, progress=progress)
    trained = train(spec, data.train.inputs, data.train.targets, train_config)
    model = trained.model
    train_pred = invert_target(data.scaler, predict(model, data.train.inputs, config.batch_size))
    test_pred = invert_target(data.scaler, predict(model, data.test.inputs, config.batch_size))
    metrics = evaluate(train_pred, data.train.actual, test_pred, data.test.actual)
    wall_time = time.perf_counter() - start
    SentiforgeLogger.log("Experiment {} ({}, {} feature(s), seq_len {}): train rmse {:.2f}, test rmse {:.2f}, "
                         "train mae {:.2f}, test mae {:.2f}".format(config.id, config.architecture, len(data.columns),
                                                                   data.seq_len, *metrics), logging.INFO)
    return ExperimentResult(config, metrics, trained.history,
                            Predictions(data.train.timestamps, data.train.actual, train_pred),
                            Predictions(data.test.timestamps, data.test.actual, test_pred),
                            seed, wall_time, overrides, model, data)


def run_experiments(configs: Sequence[ExperimentConfig], table: pd.DataFrame,
                    overrides: RunOverrides = RunOverrides(), parallel: int = 1, seed: int = DEFAULT_SEED,
                    progress: bool = False) -> List[ExperimentResult]:
    """
        Run several experiments, one after the other or on a thread pool of `parallel` workers.
        Every experiment only reads the shared table. Results are sorted by id.
    """
    if parallel < 1:
        raise ConfigError("parallel must be at least 1, got {}".format(parallel))
    ids = [config.id for config in configs]
    if len(set(ids)) != len(ids):
        raise ConfigError("Duplicated experiment id(s) in {}".format(ids))
    results = []
    if parallel == 1 or len(configs) < 2:
        for config in tqdm(configs, desc="Experiments", disable=not progress):
            results.append(run_experiment(config, table, overrides, seed))
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=min(parallel, len(configs))) as executor:
            futures = [executor.submit(run_experiment, config, table, overrides, seed) for config in configs]
            for future in tqdm(concurrent.futures.as_completed(futures), total=len(futures), desc="Experiments",
                               disable=not progress):
                results.append(future.result())
    return sorted(results, key=lambda result: result.id)


def run_dir(out_dir: str, experiment_id: int) -> str:
    return os.path.join(out_dir, "experiment_{}".format(experiment_id))


def save_run(result: ExperimentResult, out_dir: str, record_timing: bool = True) -> str:
    """
        Store result.json, history.csv, the trained model and the dataset metadata under experiment_<id>/.
    """
    directory = ensure_dir(run_dir(out_dir, result.id))
    document = {
        "id": result.id,
        "config": result.config.to_dict(),
        "overrides": result.overrides.to_dict(),
        "seed": result.seed,
        "metrics": result.metrics._asdict(),
        "history": list(result.history),
        "n_train": len(result.train),
        "n_test": len(result.test),
    }
    if record_timing:
        document["wall_time_s"] = result.wall_time
    with open(os.path.join(directory, RESULT_FILE), "w", encoding="utf-8") as stream:
        json.dump(document, stream, indent=2)
        stream.write("\n")
    write_csv([[str(epoch), repr(loss), str(result.seed)] for epoch, loss in enumerate(result.history, start=1)],
              HISTORY_COLUMNS, os.path.join(directory, HISTORY_FILE))
    if result.model is not None:
        save_model(result.model, os.path.join(directory, MODEL_FILE))
    if result.data is not None:
        write_dataset_meta(os.path.join(directory, DATASET_META_FILE), result.data, result.seed)
    return directory


def load_run(directory: str) -> ExperimentResult:
    """
        Rebuild a result (without its model) from result.json and predictions.csv.
    """
    path = os.path.join(directory, RESULT_FILE)
    if not os.path.isfile(path):
        raise DataError("No {} in '{}'".format(RESULT_FILE, directory))
    with open(path, encoding="utf-8") as stream:
        document = json.load(stream)
    try:
        config = ExperimentConfig.from_dict(document["config"])
        metrics = Metrics(*(float(document["metrics"][name]) for name in METRIC_NAMES))
        overrides = RunOverrides(**document.get("overrides", {}))
    except (KeyError, TypeError) as e:
        raise DataError("'{}' is malformed: {}".format(path, e)) from e

    frame = read_csv(os.path.join(directory, PREDICTIONS_FILE), PREDICTION_COLUMNS)
    splits = {}
    for split in ("train", "test"):
        rows = frame[frame["split"] == split]
        timestamps = rows["timestamp"].to_numpy()
        if len(rows) and not timestamps[0].lstrip("-").isdigit():
            timestamps = pd.to_datetime(rows["timestamp"], utc=True).to_numpy(dtype=object)
        else:
            timestamps = timestamps.astype(np.int64)
        splits[split] = Predictions(timestamps, rows["actual"].to_numpy(dtype=np.float64),
                                    rows["predicted"].to_numpy(dtype=np.float64))
    return ExperimentResult(config, metrics, [float(v) for v in document.get("history", [])], splits["train"],
                            splits["test"], int(document.get("seed", DEFAULT_SEED)), document.get("wall_time_s"),
                            overrides)


def load_runs(runs_dir: str) -> List[ExperimentResult]:
    if not os.path.isdir(runs_dir):
        raise DataError("'{}' is not a directory".format(runs_dir))
    results = [load_run(os.path.join(runs_dir, name)) for name in sorted(os.listdir(runs_dir))
               if name.startswith("experiment_") and os.path.isfile(os.path.join(runs_dir, name, RESULT_FILE))]
    if not results:
        raise DataError("No experiment run found in '{}'".format(runs_dir))
    return sorted(results, key=lambda result: result.id)

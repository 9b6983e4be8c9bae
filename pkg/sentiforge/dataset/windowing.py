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
    This module cuts the scaled experiment matrix into look-back windows and splits them chronologically.
"""
import json
import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple
import numpy as np
import pandas as pd
from numpy.lib.stride_tricks import sliding_window_view
from sentiforge.dataset.feature_mask import FeatureMask, select_features
from sentiforge.dataset.scaler import ScalerState, apply_scaler, fit_scaler, scale_target
from sentiforge.utils.exceptions import ConfigError, DataError
from sentiforge.utils.sentiforge_logger import SentiforgeLogger

HOURS_PER_DAY = 24
DEFAULT_TRAIN_FRACTION = 0.8


@dataclass
class WindowedDataset:
    """
        Look-back windows and their next-hour targets.
        inputs is a strided view of the source matrix, [n_samples, seq_len, n_features].
    """
    inputs: np.ndarray
    targets: np.ndarray
    timestamps: np.ndarray
    scaler: Optional[ScalerState] = None
    actual: Optional[np.ndarray] = None

    @property
    def seq_len(self) -> int:
        return self.inputs.shape[1]

    @property
    def n_samples(self) -> int:
        return self.inputs.shape[0]

    def __len__(self) -> int:
        return self.n_samples

    def subset(self, selection: slice) -> "WindowedDataset":
        return WindowedDataset(self.inputs[selection], self.targets[selection], self.timestamps[selection],
                               self.scaler, None if self.actual is None else self.actual[selection])


def sequence_length(lookback_days: int = None, lookback_hours: int = None) -> int:
    if lookback_hours is None:
        if lookback_days is None:
            raise ConfigError("Either lookback_days or lookback_hours is required")
        lookback_hours = lookback_days * HOURS_PER_DAY
    if lookback_hours < 1:
        raise ConfigError("The look-back must cover at least one hour, got {}".format(lookback_hours))
    return int(lookback_hours)


def sample_count(n_rows: int, seq_len: int, stride: int = 1) -> int:
    """
        Number of windows with a target: ceil((n_rows - seq_len) / stride).
    """
    if n_rows <= seq_len:
        return 0
    return (n_rows - seq_len + stride - 1) // stride


def make_windows(matrix: np.ndarray, target: np.ndarray, lookback_days: int = None, timestamps: np.ndarray = None,
                 stride: int = 1, lookback_hours: int = None) -> WindowedDataset:
    """
    Window i covers rows [i * stride, i * stride + seq_len) and its target is the following row.

    Args:
        matrix: [n_rows, n_features] feature matrix.
        target: [n_rows] target column.
        lookback_days: look-back in days (seq_len = days * 24).
        timestamps: [n_rows] row timestamps, row indices when None.
        stride: step between two consecutive windows.
        lookback_hours: look-back in hours, takes precedence over lookback_days.

    Returns:
        the windowed dataset.

    Raises:
        DataError: not enough rows for a single window.
    """
    seq_len = sequence_length(lookback_days, lookback_hours)
    if stride < 1:
        raise ConfigError("The window stride must be at least 1, got {}".format(stride))
    matrix = np.asarray(matrix, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    n_rows = matrix.shape[0]
    if len(target) != n_rows:
        raise DataError("{} target value(s) for {} row(s)".format(len(target), n_rows))
    if n_rows <= seq_len:
        raise DataError("A look-back of {} hour(s) requires at least {} rows, got {}".format(
            seq_len, seq_len + 1, n_rows))
    if timestamps is None:
        timestamps = np.arange(n_rows)

    # drop the last window, it has no next hour
    windows = sliding_window_view(matrix, seq_len, axis=0)[:-1:stride].transpose(0, 2, 1)
    target_rows = np.arange(seq_len, n_rows, stride)
    return WindowedDataset(windows, target[target_rows], np.asarray(timestamps)[target_rows])


def split_index(n_samples: int, fraction: float) -> int:
    if not 0.0 < fraction < 1.0:
        raise ConfigError("The train fraction must lie in ]0, 1[, got {}".format(fraction))
    n_train = int(n_samples * fraction)
    if n_train == 0 or n_train == n_samples:
        raise DataError("Splitting {} sample(s) at {} leaves an empty side".format(n_samples, fraction))
    return n_train


def split_train_test(dataset: WindowedDataset,
                     fraction: float = DEFAULT_TRAIN_FRACTION) -> Tuple[WindowedDataset, WindowedDataset]:
    """
        Chronological split: the first int(n * fraction) samples train, the rest test.
    """
    n_train = split_index(dataset.n_samples, fraction)
    return dataset.subset(slice(0, n_train)), dataset.subset(slice(n_train, None))


class ExperimentData(NamedTuple):
    train: WindowedDataset
    test: WindowedDataset
    scaler: ScalerState
    columns: List[str]
    seq_len: int
    stride: int
    n_rows: int


def prepare_experiment_data(table: pd.DataFrame, mask: FeatureMask, lookback_hours: int,
                            train_fraction: float = DEFAULT_TRAIN_FRACTION, stride: int = 1,
                            max_rows: int = None) -> ExperimentData:
    """
    Select, scale, window and split a merged table for one experiment.
    The scalers are fitted on the rows the training windows and targets touch.

    Args:
        table: merged table.
        mask: feature mask of the experiment.
        lookback_hours: window length.
        train_fraction: share of the samples used for training.
        stride: step between two consecutive windows.
        max_rows: keep only the most recent rows.

    Returns:
        scaled train and test sets with their unscaled targets, the scaler and the matrix columns.
    """
    if max_rows is not None:
        if max_rows < 1:
            raise ConfigError("max_rows must be positive, got {}".format(max_rows))
        table = table.iloc[-max_rows:]
    selection = select_features(table, mask)
    seq_len = sequence_length(lookback_hours=lookback_hours)
    n_rows = len(table)
    n_samples = sample_count(n_rows, seq_len, stride)
    if n_samples == 0:
        raise DataError("A look-back of {} hour(s) requires at least {} rows, got {}".format(
            seq_len, seq_len + 1, n_rows))
    n_train = split_index(n_samples, train_fraction)

    last_train_row = (n_train - 1) * stride + seq_len
    scaler = fit_scaler(selection.matrix[:last_train_row + 1], selection.target[:last_train_row + 1])
    timestamps = table["timestamp"].to_numpy() if "timestamp" in table.columns else np.arange(n_rows)
    dataset = make_windows(apply_scaler(scaler, selection.matrix), scale_target(scaler, selection.target),
                           timestamps=timestamps, stride=stride, lookback_hours=seq_len)
    dataset.scaler = scaler
    dataset.actual = selection.target[np.arange(seq_len, n_rows, stride)]
    train, test = dataset.subset(slice(0, n_train)), dataset.subset(slice(n_train, None))
    SentiforgeLogger.log("{} feature(s), seq_len {}, {} train / {} test sample(s)".format(
        len(selection.columns), seq_len, len(train), len(test)), logging.DEBUG)
    return ExperimentData(train, test, scaler, selection.columns, seq_len, stride, n_rows)


def write_dataset_meta(path: str, data: ExperimentData, seed: int = None) -> None:
    """
        Write dataset.meta.json: shapes, split index and scaler extrema.
    """
    meta = {
        "columns": list(data.columns),
        "n_rows": data.n_rows,
        "seq_len": data.seq_len,
        "stride": data.stride,
        "n_samples": len(data.train) + len(data.test),
        "split_index": len(data.train),
        "feature_min": data.scaler.feature_min.tolist(),
        "feature_max": data.scaler.feature_max.tolist(),
        "target_min": data.scaler.target_min,
        "target_max": data.scaler.target_max,
        "seed": seed,
    }
    with open(path, "w", encoding="utf-8") as stream:
        json.dump(meta, stream, indent=2)
        stream.write("\n")

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
    Regression metrics, computed in unscaled target units.
"""
from typing import NamedTuple
import numpy as np
from sentiforge.utils.exceptions import DataError, ShapeError

METRIC_NAMES = ("train_rmse", "test_rmse", "train_mae", "test_mae")


class Metrics(NamedTuple):
    """
        Train and test errors of one experiment, in unscaled target units.
    """
    train_rmse: float
    test_rmse: float
    train_mae: float
    test_mae: float


def _errors(pred: np.ndarray, actual: np.ndarray) -> np.ndarray:
    pred = np.asarray(pred, dtype=np.float64).ravel()
    actual = np.asarray(actual, dtype=np.float64).ravel()
    if pred.shape != actual.shape:
        raise ShapeError(actual.shape, pred.shape, "predictions vs actual values")
    if pred.size == 0:
        raise DataError("Metrics need at least one value")
    return pred - actual


def rmse(pred: np.ndarray, actual: np.ndarray) -> float:
    """
        sqrt(sum((pred - actual)^2) / n)
    """
    errors = _errors(pred, actual)
    return float(np.sqrt(np.mean(errors * errors)))


def mae(pred: np.ndarray, actual: np.ndarray) -> float:
    """
        sum(|pred - actual|) / n
    """
    return float(np.mean(np.abs(_errors(pred, actual))))


def evaluate(train_pred: np.ndarray, train_actual: np.ndarray, test_pred: np.ndarray,
             test_actual: np.ndarray) -> Metrics:
    return Metrics(rmse(train_pred, train_actual), rmse(test_pred, test_actual),
                   mae(train_pred, train_actual), mae(test_pred, test_actual))

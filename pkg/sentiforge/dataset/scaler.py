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
    This module scales the experiment features and target to [0, 1], fitting on the training rows only.
"""
from dataclasses import dataclass
import numpy as np
from sklearn.preprocessing import MinMaxScaler
from sentiforge.utils.exceptions import DataError, ShapeError


@dataclass
class ScalerState:
    """
        Fitted min-max scalers of the feature matrix and of the target column.
        A constant column maps to 0.
    """
    features: MinMaxScaler
    target: MinMaxScaler

    @property
    def feature_min(self) -> np.ndarray:
        return self.features.data_min_

    @property
    def feature_max(self) -> np.ndarray:
        return self.features.data_max_

    @property
    def target_min(self) -> float:
        return float(self.target.data_min_[0])

    @property
    def target_max(self) -> float:
        return float(self.target.data_max_[0])


def fit_scaler(train_features: np.ndarray, train_target: np.ndarray) -> ScalerState:
    """
    Fit the feature and target scalers.

    Args:
        train_features: [n_rows, n_features] training rows.
        train_target: [n_rows] training targets.

    Returns:
        the fitted state.

    Raises:
        DataError: no training row.
    """
    train_features = np.asarray(train_features, dtype=np.float64)
    train_target = np.asarray(train_target, dtype=np.float64).reshape(-1, 1)
    if train_features.ndim != 2:
        raise ShapeError((None, None), train_features.shape, "fit_scaler")
    if len(train_features) == 0 or len(train_target) == 0:
        raise DataError("Cannot fit a scaler without training rows")
    return ScalerState(MinMaxScaler().fit(train_features), MinMaxScaler().fit(train_target))


def apply_scaler(state: ScalerState, features: np.ndarray) -> np.ndarray:
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[1] != state.features.n_features_in_:
        raise ShapeError((None, state.features.n_features_in_), features.shape, "apply_scaler")
    return state.features.transform(features)


def invert_scaler(state: ScalerState, scaled: np.ndarray) -> np.ndarray:
    return state.features.inverse_transform(np.asarray(scaled, dtype=np.float64))


def scale_target(state: ScalerState, target: np.ndarray) -> np.ndarray:
    return state.target.transform(np.asarray(target, dtype=np.float64).reshape(-1, 1)).ravel()


def invert_target(state: ScalerState, scaled: np.ndarray) -> np.ndarray:
    return state.target.inverse_transform(np.asarray(scaled, dtype=np.float64).reshape(-1, 1)).ravel()

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
    This module generates synthetic merged tables (sine, constant and random-walk prices) for tests and smoke runs.
"""
from datetime import datetime, timezone
import numpy as np
import pandas as pd
from sentiforge.fusion.merger import FEATURE_COLUMNS, HOURLY, MERGED_COLUMNS, NEWS_COLUMNS, REDDIT_COLUMNS

START = datetime(2018, 1, 1, tzinfo=timezone.utc)


def sine_series(n: int, period: float = 24.0, amplitude: float = 1.0, offset: float = 0.0,
                phase: float = 0.0) -> np.ndarray:
    t = np.arange(n, dtype=np.float64)
    return offset + amplitude * np.sin(2.0 * np.pi * t / period + phase)


def _table(close: np.ndarray, sentiment: np.ndarray, volume: np.ndarray, start: datetime) -> pd.DataFrame:
    """
        Build a merged table from a BTC close series. The other pairs follow BTC with fixed ratios,
        open is the previous close, high/low bracket open and close.
    """
    n = len(close)
    open_ = np.concatenate(([close[0]], close[:-1]))
    spread = 0.001 * np.abs(close)
    columns = {
        "open_BTCUSDT": open_,
        "high_BTCUSDT": np.maximum(open_, close) + spread,
        "low_BTCUSDT": np.minimum(open_, close) - spread,
        "close_BTCUSDT": close,
        "volume_BTCUSDT": volume,
        "close_LTCUSD": close / 60.0,
        "volume_LTCUSD": volume * 3.0,
        "close_ETHUSD": close / 18.0,
        "volume_ETHUSD": volume * 2.0,
    }
    for k, column in enumerate(NEWS_COLUMNS + REDDIT_COLUMNS):
        columns[column] = sentiment[:, k]
    table = pd.DataFrame(columns)[list(FEATURE_COLUMNS)]
    table.insert(0, "timestamp", pd.date_range(start, periods=n, freq=HOURLY))
    return table[list(MERGED_COLUMNS)]


def sine_table(n_rows: int, period: float = 24.0, amplitude: float = 1000.0, offset: float = 10000.0,
               seed: int = 42, start: datetime = START) -> pd.DataFrame:
    """
        Noiseless sine prices with sentiment drawn uniformly at random, unrelated to the prices.
    """
    rng = np.random.default_rng(seed)
    close = sine_series(n_rows, period, amplitude, offset)
    sentiment = rng.uniform(-1.0, 1.0, size=(n_rows, len(NEWS_COLUMNS) + len(REDDIT_COLUMNS)))
    volume = 100.0 + 10.0 * sine_series(n_rows, period * 2.0)
    return _table(close, sentiment, volume, start)


def constant_table(n_rows: int, price: float = 5000.0, start: datetime = START) -> pd.DataFrame:
    """
        Constant prices and zero sentiment.
    """
    return _table(np.full(n_rows, price), np.zeros((n_rows, len(NEWS_COLUMNS) + len(REDDIT_COLUMNS))),
                  np.full(n_rows, 50.0), start)


def random_walk_table(n_rows: int, seed: int = 42, start_price: float = 10000.0,
                      start: datetime = START) -> pd.DataFrame:
    """
        Geometric random-walk prices with random sentiment in the scorers' ranges.
    """
    rng = np.random.default_rng(seed)
    close = start_price * np.exp(np.cumsum(rng.normal(0.0, 0.005, size=n_rows)))
    sentiment = rng.uniform(0.0, 1.0, size=(n_rows, len(NEWS_COLUMNS) + len(REDDIT_COLUMNS)))
    # flair, polarity and compound channels are signed
    for k, column in enumerate(NEWS_COLUMNS + REDDIT_COLUMNS):
        if column.endswith(("flair", "tb_polarity", "sid_com")):
            sentiment[:, k] = 2.0 * sentiment[:, k] - 1.0
    volume = rng.uniform(50.0, 250.0, size=n_rows)
    return _table(close, sentiment, volume, start)

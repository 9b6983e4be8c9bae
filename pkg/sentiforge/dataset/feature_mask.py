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
    This module defines the per-experiment feature selection and the optional summation of the news and Reddit
    sentiment channels.
"""
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, NamedTuple, Sequence
import numpy as np
import pandas as pd
from sentiforge.fusion.merger import PRICE_COLUMNS
from sentiforge.sentiment.sentiment_tables import NEWS_PREFIX, REDDIT_PREFIX
from sentiforge.utils.exceptions import ConfigError, SchemaError

TARGET_COLUMN = "close_BTCUSDT"

# sid_neu and sid_com stay in the merged table but are never selectable
SENTIMENT_CHANNELS = ("flair", "tb_polarity", "tb_subjectivity", "sid_pos", "sid_neg")
NEWS_FEATURES = tuple(NEWS_PREFIX + c for c in SENTIMENT_CHANNELS)
REDDIT_FEATURES = tuple(REDDIT_PREFIX + c for c in SENTIMENT_CHANNELS)
SELECTABLE_FEATURES = PRICE_COLUMNS + NEWS_FEATURES + REDDIT_FEATURES
SUM_PREFIX = "sum_"


@dataclass(frozen=True)
class FeatureMask:
    """
        Selected features of one experiment, with the news/Reddit summation flag.
    """
    features: FrozenSet[str]
    sum_sentiment: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "features", frozenset(self.features))
        if not self.features:
            raise ConfigError("A feature mask must select at least one feature")
        unknown = sorted(self.features - set(SELECTABLE_FEATURES))
        if unknown:
            raise ConfigError("Unknown feature(s) {}, expected some of {}".format(unknown, list(SELECTABLE_FEATURES)))
        if self.sum_sentiment:
            for channel in SENTIMENT_CHANNELS:
                news, reddit = NEWS_PREFIX + channel, REDDIT_PREFIX + channel
                if (news in self.features) != (reddit in self.features):
                    raise ConfigError("Summing '{}' requires both {} and {} to be selected".format(
                        channel, news, reddit))

    @classmethod
    def from_flags(cls, flags: Sequence[bool], sum_sentiment: bool = False) -> "FeatureMask":
        if len(flags) != len(SELECTABLE_FEATURES):
            raise ConfigError("Expected {} feature flags, got {}".format(len(SELECTABLE_FEATURES), len(flags)))
        return cls(frozenset(f for f, flag in zip(SELECTABLE_FEATURES, flags) if flag), sum_sentiment)

    @property
    def flags(self) -> tuple:
        return tuple(f in self.features for f in SELECTABLE_FEATURES)

    def ordered(self) -> List[str]:
        """
            Selected features in canonical order.
        """
        return [f for f in SELECTABLE_FEATURES if f in self.features]

    def output_columns(self) -> List[str]:
        """
            Names of the selected matrix columns: prices first, then the sentiment channels (summed or not).
        """
        columns = [f for f in PRICE_COLUMNS if f in self.features]
        if self.sum_sentiment:
            return columns + [SUM_PREFIX + c for c in SENTIMENT_CHANNELS if NEWS_PREFIX + c in self.features]
        return columns + [f for f in NEWS_FEATURES + REDDIT_FEATURES if f in self.features]


def all_features(sum_sentiment: bool = False, exclude: Iterable[str] = ()) -> FeatureMask:
    return FeatureMask(frozenset(SELECTABLE_FEATURES) - set(exclude), sum_sentiment)


class Selection(NamedTuple):
    matrix: np.ndarray
    target: np.ndarray
    columns: List[str]


def select_features(table: pd.DataFrame, mask: FeatureMask) -> Selection:
    """
    Extract the experiment matrix and the target column from a merged table.

    Args:
        table: merged table.
        mask: feature mask.

    Returns:
        the [n_rows, n_features] float64 matrix, the close_BTCUSDT column and the matrix column names.

    Raises:
        SchemaError: a selected column or the target is absent from the table.
    """
    for column in mask.ordered() + [TARGET_COLUMN]:
        if column not in table.columns:
            raise SchemaError(column)

    blocks = [table[f].to_numpy(dtype=np.float64) for f in PRICE_COLUMNS if f in mask.features]
    if mask.sum_sentiment:
        blocks += [table[NEWS_PREFIX + c].to_numpy(dtype=np.float64)
                   + table[REDDIT_PREFIX + c].to_numpy(dtype=np.float64)
                   for c in SENTIMENT_CHANNELS if NEWS_PREFIX + c in mask.features]
    else:
        blocks += [table[f].to_numpy(dtype=np.float64) for f in NEWS_FEATURES + REDDIT_FEATURES if f in mask.features]
    return Selection(np.column_stack(blocks), table[TARGET_COLUMN].to_numpy(dtype=np.float64), mask.output_columns())

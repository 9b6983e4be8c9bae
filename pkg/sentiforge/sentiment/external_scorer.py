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
    This module implements the external-score channel: precomputed neural classifier outputs read from a
    CSV key,value store (key is a post_id or news:<date>:<rank>).
"""
import math
import logging
import threading
from dataclasses import dataclass
from datetime import date
from typing import Dict
from sentiforge.ingest.storage import read_csv
from sentiforge.utils.exceptions import DataError
from sentiforge.utils.helper import DAY_FORMAT, to_day
from sentiforge.utils.sentiforge_logger import SentiforgeLogger

STORE_COLUMNS = ("key", "value")
DEFAULT_SOURCE_TAG = "flair"


@dataclass(frozen=True)
class ExternalScore:
    value: float
    source_tag: str = DEFAULT_SOURCE_TAG


def news_key(day: date, rank: int) -> str:
    return "news:{}:{}".format(to_day(day).strftime(DAY_FORMAT), int(rank))


class ExternalScoreStore:
    """
        Read-only table of external scores. Missing keys fall back to the default value and are counted.
    """

    def __init__(self, scores: Dict[str, float] = None, default: float = 0.0,
                 source_tag: str = DEFAULT_SOURCE_TAG) -> None:
        self.scores = dict(scores or {})
        self.default = default
        self.source_tag = source_tag
        self.missing = 0
        self._lock = threading.Lock()

    @classmethod
    def from_csv(cls, path: str, default: float = 0.0, source_tag: str = DEFAULT_SOURCE_TAG):
        """
            Load a key,value CSV store.

            Raises:
                SchemaError: wrong header.
                DataError: duplicate key, non-numeric or out of [-1, 1] value.
        """
        frame = read_csv(path, STORE_COLUMNS)
        scores = {}
        for number, row in enumerate(frame.itertuples(index=False), start=2):
            try:
                value = float(row.value)
            except ValueError as e:
                raise DataError("{}:{}: non-numeric value '{}'".format(path, number, row.value)) from e
            if not math.isfinite(value) or not -1.0 <= value <= 1.0:
                raise DataError("{}:{}: value {} outside [-1, 1]".format(path, number, value))
            if not row.key or row.key in scores:
                raise DataError("{}:{}: empty or duplicate key '{}'".format(path, number, row.key))
            scores[row.key] = value
        SentiforgeLogger.log("{} external score(s) loaded from {}".format(len(scores), path), logging.DEBUG)
        return cls(scores, default=default, source_tag=source_tag)

    def __len__(self) -> int:
        return len(self.scores)

    def lookup(self, key: str) -> ExternalScore:
        if key in self.scores:
            return ExternalScore(self.scores[key], self.source_tag)
        with self._lock:
            self.missing += 1
        SentiforgeLogger.log("No external score for '{}', using {}".format(key, self.default), logging.WARNING)
        return ExternalScore(self.default, self.source_tag)


def score_external(key: str, store: ExternalScoreStore) -> ExternalScore:
    return store.lookup(key)

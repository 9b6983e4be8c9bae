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
    This module writes and reads the sentiment tables: daily news scores, per-post Reddit scores and hourly
    Reddit scores.
"""
import logging
from datetime import date, datetime
from typing import List, Sequence, Tuple
from sentiforge.ingest.storage import read_csv, write_csv
from sentiforge.sentiment.aggregation import CHANNELS, HourlyBucket, SentimentVector
from sentiforge.utils.exceptions import DataError
from sentiforge.utils.helper import DAY_FORMAT, format_utc, to_day, to_utc
from sentiforge.utils.sentiforge_logger import SentiforgeLogger

NEWS_PREFIX = "gnews_"
REDDIT_PREFIX = "reddit_"

NEWS_TABLE_COLUMNS = ("date",) + tuple(NEWS_PREFIX + c for c in CHANNELS)
REDDIT_TABLE_COLUMNS = ("timestamp",) + tuple(REDDIT_PREFIX + c for c in CHANNELS)
EMPTY_HOURS_COLUMNS = ("timestamp",)


def _cells(vector: SentimentVector) -> List[str]:
    return [repr(float(v)) for v in vector.as_array()]


def _vector(row: Sequence[str], path: str) -> SentimentVector:
    try:
        return SentimentVector.from_array([float(v) for v in row])
    except ValueError as e:
        raise DataError("{}: non-numeric sentiment value in {}".format(path, list(row))) from e


def write_news_table(daily: Sequence[Tuple[date, SentimentVector]], path: str) -> None:
    rows = [[to_day(day).strftime(DAY_FORMAT)] + _cells(vector) for day, vector in daily]
    write_csv(rows, NEWS_TABLE_COLUMNS, path)
    SentiforgeLogger.log("{} daily news row(s) written to {}".format(len(rows), path), logging.DEBUG)


def read_news_table(path: str) -> List[Tuple[date, SentimentVector]]:
    frame = read_csv(path, NEWS_TABLE_COLUMNS)
    return [(to_day(row[0]), _vector(row[1:], path)) for row in frame.itertuples(index=False)]


def write_reddit_table(rows: Sequence[Tuple[datetime, SentimentVector]], path: str) -> None:
    """
        Write timestamped Reddit vectors. Used for the per-post table (one row per post, timestamps may repeat)
        and for the hourly table.
    """
    lines = [[format_utc(timestamp)] + _cells(vector) for timestamp, vector in rows]
    write_csv(lines, REDDIT_TABLE_COLUMNS, path)
    SentiforgeLogger.log("{} reddit row(s) written to {}".format(len(lines), path), logging.DEBUG)


def read_reddit_table(path: str) -> List[Tuple[datetime, SentimentVector]]:
    frame = read_csv(path, REDDIT_TABLE_COLUMNS)
    return [(to_utc(row[0]), _vector(row[1:], path)) for row in frame.itertuples(index=False)]


def write_hourly_table(buckets: Sequence[HourlyBucket], path: str, empty_path: str = None) -> None:
    """
    Write the hourly Reddit table and, optionally, the list of zero-filled hours.

    Args:
        buckets: output of bucketize_hourly.
        path: hourly table path.
        empty_path: path of the empty-hours report, skipped when None.
    """
    write_reddit_table([(b.hour, b.vector) for b in buckets], path)
    if empty_path is not None:
        write_csv([[format_utc(b.hour)] for b in buckets if b.empty], EMPTY_HOURS_COLUMNS, empty_path)

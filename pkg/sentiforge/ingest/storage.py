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
    This module persists the ingested records as canonical CSV files and loads them back.
"""
import os
import csv
import logging
from typing import List, Sequence, Type, Union
import pandas as pd
from sentiforge.ingest.records import (NewsArticle, RedditPost, OhlcvBar, NEWS_COLUMNS, REDDIT_COLUMNS,
                                       OHLCV_COLUMNS, SUPPORTED_PAIRS, check_pair)
from sentiforge.utils.exceptions import DataError, SchemaError
from sentiforge.utils.helper import DAY_FORMAT, format_utc
from sentiforge.utils.sentiforge_logger import SentiforgeLogger

Record = Union[NewsArticle, RedditPost, OhlcvBar]

SCHEMAS = {
    NewsArticle: NEWS_COLUMNS,
    RedditPost: REDDIT_COLUMNS,
    OhlcvBar: OHLCV_COLUMNS,
}

# The first header column identifies the record family
FIRST_COLUMN_TYPES = {
    "date": NewsArticle,
    "post_id": RedditPost,
    "timestamp": OhlcvBar,
}


def _news_row(article: NewsArticle) -> list:
    return [article.date.strftime(DAY_FORMAT), str(article.rank), article.url, article.full_text]


def _reddit_row(post: RedditPost) -> list:
    return [post.post_id, post.title, post.selftext, post.url, post.author, str(post.score),
            format_utc(post.publish_date), str(post.num_of_comments), post.permalink, post.flair_tag]


def _ohlcv_row(bar: OhlcvBar) -> list:
    return [format_utc(bar.timestamp)] + [repr(float(v)) for v in (bar.open, bar.high, bar.low, bar.close, bar.volume)]


ROW_WRITERS = {
    NewsArticle: _news_row,
    RedditPost: _reddit_row,
    OhlcvBar: _ohlcv_row,
}


def write_csv(rows: Sequence[Sequence[str]], columns: Sequence[str], path: str) -> None:
    """
        Write string rows with the given header (UTF-8, minimal RFC-4180 quoting, LF line endings).
        A carriage return is not a line terminator for the writer, so a file holding one anywhere is written
        with every field quoted.
    """
    rows = list(rows)
    quoting = csv.QUOTE_ALL if any("\r" in str(cell) for row in rows for cell in row) else csv.QUOTE_MINIMAL
    frame = pd.DataFrame(rows, columns=list(columns), dtype=object)
    frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8", quoting=quoting)


def read_csv(path: str, columns: Sequence[str] = None) -> pd.DataFrame:
    """
        Read a CSV file as strings, without any NaN inference, optionally checking its header.

        Args:
            path: CSV path.
            columns: expected header (exact order) or None.

        Raises:
            FileNotFoundError: missing file.
            SchemaError: header mismatch, naming the first offending column.
    """
    if not os.path.isfile(path):
        raise FileNotFoundError("The input file '{}' doesn't exist".format(path))
    frame = pd.read_csv(path, dtype=str, keep_default_na=False, na_filter=False, encoding="utf-8")
    if columns is not None:
        check_header(list(frame.columns), columns, path)
    return frame


def check_header(actual: Sequence[str], expected: Sequence[str], path: str = None) -> None:
    missing = [c for c in expected if c not in actual]
    if missing:
        raise SchemaError(missing[0], path)
    unexpected = [c for c in actual if c not in expected]
    if unexpected:
        raise SchemaError(unexpected[0], path)
    for got, want in zip(actual, expected):
        if got != want:
            raise SchemaError(got, path)


def persist(records: Sequence[Record], path: str, record_type: Type = None) -> None:
    """
        Write records to their canonical CSV file.

        Args:
            records: homogeneous list of NewsArticle, RedditPost or OhlcvBar.
            path: output CSV path.
            record_type: record class, required only when records is empty.

        Raises:
            DataError: mixed record types, unknown type, empty untyped list or a NUL character in a field.
    """
    if record_type is None:
        if not records:
            raise DataError("Cannot infer the schema of an empty record list, provide record_type")
        record_type = type(records[0])
    if record_type not in SCHEMAS:
        raise DataError("Unsupported record type {}".format(record_type))
    if any(type(r) is not record_type for r in records):
        raise DataError("Cannot persist a mixed list of records in '{}'".format(path))
    if record_type is NewsArticle and any(not a.full_text for a in records):
        raise DataError("News articles must carry a non-empty text to be persisted")
    writer = ROW_WRITERS[record_type]
    rows = [writer(r) for r in records]
    if any("\x00" in cell for row in rows for cell in row):
        raise DataError("NUL characters cannot be persisted in '{}'".format(path))
    write_csv(rows, SCHEMAS[record_type], path)
    SentiforgeLogger.log("{} {} record(s) written to {}".format(len(records), record_type.__name__, path),
                         logging.DEBUG)


def infer_pair(path: str) -> str:
    name = os.path.basename(path).upper()
    # longest symbols first so that BTCUSDT is not mistaken for a shorter match
    for pair in sorted(SUPPORTED_PAIRS, key=len, reverse=True):
        if pair in name:
            return pair
    return None


def load(path: str, record_type: Type = None, pair: str = None) -> List[Record]:
    """
        Load records from a canonical CSV file.

        Args:
            path: input CSV path.
            record_type: expected record class. Inferred from the first header column when None.
            pair: trading pair of an OHLCV file. Inferred from the file name when None.

        Returns:
            the list of records in file order.

        Raises:
            SchemaError: header does not match the schema (the message names the column).
            DataError: a row violates the record invariants or the pair cannot be determined.
    """
    frame = read_csv(path)
    if record_type is None:
        first = frame.columns[0] if len(frame.columns) else ""
        if first not in FIRST_COLUMN_TYPES:
            raise SchemaError(first, path)
        record_type = FIRST_COLUMN_TYPES[first]
    check_header(list(frame.columns), SCHEMAS[record_type], path)

    try:
        if record_type is NewsArticle:
            return [NewsArticle(date=r.date, rank=int(r.rank), url=r.url, full_text=r.text)
                    for r in frame.itertuples(index=False)]
        if record_type is RedditPost:
            return [RedditPost(post_id=r.post_id, title=r.title, selftext=r.selftext, url=r.url, author=r.author,
                               score=int(r.score), publish_date=r.publish_date,
                               num_of_comments=int(r.num_of_comments), permalink=r.permalink, flair_tag=r.flair)
                    for r in frame.itertuples(index=False)]
    except ValueError as e:
        if isinstance(e, DataError):
            raise
        raise DataError("Malformed value in '{}': {}".format(path, e)) from e

    pair = pair or infer_pair(path)
    if pair is None:
        raise DataError("Cannot infer the trading pair of '{}', provide it explicitly".format(path))
    check_pair(pair)
    try:
        return [OhlcvBar(timestamp=r.timestamp, pair=pair, open=float(r.open), high=float(r.high), low=float(r.low),
                         close=float(r.close), volume=float(r.volume))
                for r in frame.itertuples(index=False)]
    except ValueError as e:
        if isinstance(e, DataError):
            raise
        raise DataError("Malformed value in '{}': {}".format(path, e)) from e

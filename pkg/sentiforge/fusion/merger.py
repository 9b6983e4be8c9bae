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
    This module merges the hourly news sentiment, the hourly Reddit sentiment and the three price series
    into the final hourly feature table.
"""
import logging
from datetime import date, datetime, timedelta
from typing import Iterator, List, NamedTuple, Sequence, Tuple
import numpy as np
import pandas as pd
from sentiforge.ingest.records import OhlcvBar
from sentiforge.ingest.storage import read_csv, write_csv
from sentiforge.sentiment.aggregation import CHANNELS, SentimentVector
from sentiforge.sentiment.sentiment_tables import NEWS_PREFIX, REDDIT_PREFIX
from sentiforge.utils.exceptions import DataError
from sentiforge.utils.helper import ISO_FORMAT, to_day, to_utc
from sentiforge.utils.sentiforge_logger import SentiforgeLogger

HOURS_PER_DAY = 24
MAX_GAP_HOURS = 2
HOURLY = pd.offsets.Hour(1)

# Price columns retained per pair
PAIR_COLUMNS = (
    ("BTCUSDT", ("open", "high", "low", "close", "volume")),
    ("LTCUSD", ("close", "volume")),
    ("ETHUSD", ("close", "volume")),
)

PRICE_COLUMNS = tuple("{}_{}".format(column, pair) for pair, columns in PAIR_COLUMNS for column in columns)
NEWS_COLUMNS = tuple(NEWS_PREFIX + c for c in CHANNELS)
REDDIT_COLUMNS = tuple(REDDIT_PREFIX + c for c in CHANNELS)
FEATURE_COLUMNS = PRICE_COLUMNS + NEWS_COLUMNS + REDDIT_COLUMNS
MERGED_COLUMNS = ("timestamp",) + FEATURE_COLUMNS
FILL_COLUMNS = ("timestamp", "column", "method")

FeatureRow = NamedTuple("FeatureRow", [("timestamp", datetime)] + [(c, float) for c in FEATURE_COLUMNS])


class Fill(NamedTuple):
    timestamp: datetime
    column: str
    method: str


class MergeResult(NamedTuple):
    table: pd.DataFrame
    fills: List[Fill]


def expand_daily_to_hourly(daily: Sequence[Tuple[date, SentimentVector]]) -> List[Tuple[datetime, SentimentVector]]:
    """
    Replicate each day's vector on the 24 hours of the day.

    Args:
        daily: (day, vector) pairs.

    Returns:
        (hour, vector) pairs in ascending order.

    Raises:
        DataError: the same day appears twice.
    """
    days = {}
    for day, vector in daily:
        day = to_day(day)
        if day in days:
            raise DataError("Day {} appears twice in the daily sentiment".format(day))
        days[day] = vector
    hourly = []
    for day in sorted(days):
        midnight = to_utc(day)
        hourly.extend((midnight + timedelta(hours=h), days[day]) for h in range(HOURS_PER_DAY))
    return hourly


def _index(frame: pd.DataFrame, source: str) -> pd.DataFrame:
    frame["timestamp"] = pd.to_datetime(frame["timestamp"], utc=True)
    frame = frame.sort_values("timestamp", kind="stable")
    if frame["timestamp"].duplicated().any():
        duplicate = frame.loc[frame["timestamp"].duplicated(), "timestamp"].iloc[0]
        raise DataError("{}: hour {} appears twice".format(source, duplicate.strftime(ISO_FORMAT)))
    frame = frame.set_index("timestamp")
    if (frame.index != frame.index.floor(HOURLY)).any():
        raise DataError("{}: timestamps must fall on the hour".format(source))
    full = pd.date_range(frame.index[0], frame.index[-1], freq=HOURLY, name="timestamp")
    return frame.reindex(full)


def _missing_runs(missing: pd.Series) -> List[pd.DatetimeIndex]:
    runs = (missing != missing.shift()).cumsum()
    return [group.index for _, group in missing[missing].groupby(runs[missing])]


def _price_frame(bars: Sequence[OhlcvBar], pair: str, columns: Sequence[str]) -> pd.DataFrame:
    if not bars:
        raise DataError("No {} bars to merge".format(pair))
    frame = pd.DataFrame([[b.timestamp] + [float(getattr(b, c)) for c in columns] for b in bars],
                         columns=["timestamp"] + list(columns))
    return _index(frame, pair)


def _fill_prices(frame: pd.DataFrame, pair: str, columns: Sequence[str], max_gap_hours: int, span: Tuple,
                 fills: List[Fill]) -> pd.DataFrame:
    """
        Interpolate the price gaps of one pair. Only the gaps reaching into span (first and last shared hour)
        are checked against max_gap_hours and reported.
    """
    start, end = span
    missing = frame[columns[0]].isna()
    for run in _missing_runs(missing):
        if run[-1] < start or run[0] > end:
            continue
        if len(run) > max_gap_hours:
            raise DataError("{}: {} consecutive hour(s) missing from {}, at most {} can be filled".format(
                pair, len(run), run[0].strftime(ISO_FORMAT), max_gap_hours))
        SentiforgeLogger.log("{}: filling {} missing hour(s) from {}".format(
            pair, len(run), run[0].strftime(ISO_FORMAT)), logging.WARNING)

    prices = [c for c in columns if c != "volume"]
    frame[prices] = frame[prices].interpolate(method="linear")
    if "volume" in columns:
        frame["volume"] = frame["volume"].fillna(0.0)
    for timestamp in frame.index[missing]:
        if start <= timestamp <= end:
            fills.extend(Fill(timestamp.to_pydatetime(), "{}_{}".format(column, pair),
                              "zero" if column == "volume" else "linear") for column in columns)
    return frame.rename(columns={c: "{}_{}".format(c, pair) for c in columns})


def _sentiment_frame(rows: Sequence, prefix: str, fills: List[Fill]) -> pd.DataFrame:
    columns = [prefix + c for c in CHANNELS]
    if not rows:
        raise DataError("No {}* sentiment rows to merge".format(prefix))
    # rows are (hour, vector) pairs or hourly buckets
    frame = pd.DataFrame([[row[0]] + row[1].as_array().tolist() for row in rows], columns=["timestamp"] + columns)
    frame = _index(frame, prefix + "*")
    missing = frame[columns[0]].isna()
    if missing.any():
        SentiforgeLogger.log("{}*: {} missing hour(s) zero-filled".format(prefix, int(missing.sum())), logging.WARNING)
    for timestamp in frame.index[missing]:
        fills.extend(Fill(timestamp.to_pydatetime(), column, "zero") for column in columns)
    return frame.fillna(0.0)


def merge_all(gnews_hourly: Sequence, reddit_hourly: Sequence, btc_bars: Sequence[OhlcvBar],
              ltc_bars: Sequence[OhlcvBar], eth_bars: Sequence[OhlcvBar],
              max_gap_hours: int = MAX_GAP_HOURS) -> MergeResult:
    """
    Inner-join every source on the hours they all cover.
    Isolated price gaps (at most max_gap_hours consecutive hours) are linearly interpolated with a zero volume,
    sentiment gaps are zero-filled. Price gaps wholly outside the shared hours are ignored. Every filled cell of the
    merged table is reported.

    Args:
        gnews_hourly: hourly news vectors (see expand_daily_to_hourly).
        reddit_hourly: hourly Reddit vectors or buckets.
        btc_bars: BTCUSDT bars.
        ltc_bars: LTCUSD bars.
        eth_bars: ETHUSD bars.
        max_gap_hours: longest price gap that may be filled.

    Returns:
        the merged table (timestamp column then the feature columns) and the fills inside it.

    Raises:
        DataError: empty intersection, price gap too long, duplicated hour or residual NaN.
    """
    fills: List[Fill] = []
    prices = [(pair, columns, _price_frame(bars, pair, columns))
              for (pair, columns), bars in zip(PAIR_COLUMNS, (btc_bars, ltc_bars, eth_bars))]
    sentiments = [_sentiment_frame(gnews_hourly, NEWS_PREFIX, fills),
                  _sentiment_frame(reddit_hourly, REDDIT_PREFIX, fills)]
    indexes = [frame.index for _, _, frame in prices] + [frame.index for frame in sentiments]
    span = (max(index[0] for index in indexes), min(index[-1] for index in indexes))
    if span[0] > span[1]:
        raise DataError("The sources do not share any hour")

    frames = [_fill_prices(frame, pair, columns, max_gap_hours, span, fills) for pair, columns, frame in prices]
    merged = pd.concat(frames + sentiments, axis=1, join="inner")
    merged = merged[list(FEATURE_COLUMNS)]

    residual = np.argwhere(merged.isna().to_numpy())
    if len(residual):
        row, column = residual[0]
        raise DataError("NaN left at {} in column {}".format(merged.index[row].strftime(ISO_FORMAT),
                                                            FEATURE_COLUMNS[column]))

    start, end = merged.index[0].to_pydatetime(), merged.index[-1].to_pydatetime()
    column_order = {c: k for k, c in enumerate(FEATURE_COLUMNS)}
    fills = sorted((f for f in fills if start <= f.timestamp <= end),
                   key=lambda f: (f.timestamp, column_order[f.column]))
    table = merged.reset_index()
    SentiforgeLogger.log("Merged table: {} hour(s) from {} to {}, {} filled cell(s)".format(
        len(table), start.strftime(ISO_FORMAT), end.strftime(ISO_FORMAT), len(fills)), logging.INFO)
    return MergeResult(table, fills)


def iter_feature_rows(table: pd.DataFrame) -> Iterator[FeatureRow]:
    for row in table[list(MERGED_COLUMNS)].itertuples(index=False):
        yield FeatureRow(row[0].to_pydatetime(), *[float(v) for v in row[1:]])


def write_merged(table: pd.DataFrame, path: str) -> None:
    rows = [[row.timestamp.strftime(ISO_FORMAT)] + [repr(v) for v in row[1:]] for row in iter_feature_rows(table)]
    write_csv(rows, MERGED_COLUMNS, path)
    SentiforgeLogger.log("{} merged row(s) written to {}".format(len(rows), path), logging.DEBUG)


def read_merged(path: str) -> pd.DataFrame:
    """
        Load a merged table, checking its header, its values and its hourly contiguity.

        Raises:
            SchemaError: header mismatch.
            DataError: non-numeric or missing value, or hours not contiguous.
    """
    frame = read_csv(path, MERGED_COLUMNS)
    try:
        table = frame.astype({c: np.float64 for c in FEATURE_COLUMNS})
        table["timestamp"] = pd.to_datetime(frame["timestamp"], utc=True, format=ISO_FORMAT)
    except ValueError as e:
        raise DataError("{}: {}".format(path, e)) from e
    if table[list(FEATURE_COLUMNS)].isna().any().any():
        raise DataError("{}: missing values".format(path))
    steps = table["timestamp"].diff().dropna()
    if (steps != pd.Timedelta(hours=1)).any():
        raise DataError("{}: rows are not hourly contiguous".format(path))
    return table


def write_fills(fills: Sequence[Fill], path: str) -> None:
    write_csv([[f.timestamp.strftime(ISO_FORMAT), f.column, f.method] for f in fills], FILL_COLUMNS, path)

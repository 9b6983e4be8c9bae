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
    This module downloads hourly candles (klines) of the supported trading pairs from the exchange REST API.
"""
import os
import logging
from datetime import datetime, timedelta
from typing import List
from sentiforge.ingest.http_client import RateLimitedSession
from sentiforge.ingest.records import OhlcvBar, check_pair
from sentiforge.ingest import storage
from sentiforge.utils.exceptions import ConfigError, DataError, RetryableError
from sentiforge.utils.helper import ENV_EXCHANGE_URL, ENV_FIXTURES_DIR, env_value, epoch_seconds, floor_hour, to_utc
from sentiforge.utils.sentiforge_logger import SentiforgeLogger

DEFAULT_EXCHANGE_URL = "https://api.binance.com"
KLINES_PATH = "/api/v3/klines"
INTERVAL = "1h"
HOUR_MS = 3600 * 1000
MAX_LIMIT = 1000


def parse_kline(pair: str, raw: list) -> OhlcvBar:
    """
        Convert one kline array [open_time_ms, open, high, low, close, volume, ...] to an OhlcvBar.
    """
    try:
        return OhlcvBar(timestamp=int(raw[0]) // 1000, pair=pair, open=float(raw[1]), high=float(raw[2]),
                        low=float(raw[3]), close=float(raw[4]), volume=float(raw[5]))
    except (IndexError, TypeError, ValueError) as e:
        if isinstance(e, DataError):
            raise
        raise DataError("Malformed {} kline {!r}: {}".format(pair, raw, e)) from e


def hourly_gaps(bars: List[OhlcvBar], start: datetime, end: datetime) -> List[datetime]:
    """
        List the hours of [start, end) without a bar.

        Args:
            bars: candles of one pair.
            start: first expected hour (floored to the hour).
            end: exclusive end of the range.

        Returns:
            the missing bar open times, ascending.
    """
    present = {bar.timestamp for bar in bars}
    hour, end = floor_hour(start), to_utc(end)
    if hour < to_utc(start):
        hour += timedelta(hours=1)
    missing = []
    while hour < end:
        if hour not in present:
            missing.append(hour)
        hour += timedelta(hours=1)
    return missing


class KlineFetcher:
    """
        Hourly kline collector. In fixture mode, candles are read from <fixtures_dir>/klines/<PAIR>.csv.
    """

    def __init__(self, session: RateLimitedSession = None, base_url: str = None, fixtures_dir: str = None) -> None:
        self.session = session
        self.base_url = base_url or env_value(ENV_EXCHANGE_URL, DEFAULT_EXCHANGE_URL)
        self.fixtures_dir = fixtures_dir if fixtures_dir is not None else env_value(ENV_FIXTURES_DIR)
        self.gaps: List[datetime] = []

    def fetch(self, pair: str, start: datetime, end: datetime) -> List[OhlcvBar]:
        """
            Collect the bars opening in [start, end) and record the missing hours in self.gaps.

            Raises:
                ConfigError: unsupported pair or reversed range.
                RetryableError: exchange error payload or unavailable endpoint.
        """
        check_pair(pair)
        start, end = to_utc(start), to_utc(end)
        if end < start:
            raise ConfigError("Reversed kline range: {} > {}".format(start, end))
        if end == start:
            self.gaps = []
            return []

        if self.fixtures_dir:
            bars = self._from_fixtures(pair)
        else:
            bars = self._from_exchange(pair, start, end)
        by_hour = {bar.timestamp: bar for bar in bars if start <= bar.timestamp < end}
        bars = [by_hour[t] for t in sorted(by_hour)]

        self.gaps = hourly_gaps(bars, start, end)
        if self.gaps:
            SentiforgeLogger.log("{}: {} missing hour(s) between {} and {}".format(pair, len(self.gaps), start, end),
                                 logging.WARNING)
        return bars

    def _from_fixtures(self, pair: str) -> List[OhlcvBar]:
        path = os.path.join(self.fixtures_dir, "klines", "{}.csv".format(pair))
        if not os.path.isfile(path):
            return []
        return storage.load(path, OhlcvBar, pair=pair)

    def _from_exchange(self, pair: str, start: datetime, end: datetime) -> List[OhlcvBar]:
        if self.session is None:
            self.session = RateLimitedSession()
        url = self.base_url.rstrip("/") + KLINES_PATH
        cursor_ms, end_ms = epoch_seconds(start) * 1000, epoch_seconds(end) * 1000
        bars = []
        while cursor_ms < end_ms:
            payload = self.session.get_json(url, {"symbol": pair, "interval": INTERVAL, "startTime": cursor_ms,
                                                  "endTime": end_ms - 1, "limit": MAX_LIMIT})
            if isinstance(payload, dict):
                raise RetryableError("Exchange error for {}: {} ({})".format(pair, payload.get("msg"),
                                                                               payload.get("code")))
            if not payload:
                break
            page = [parse_kline(pair, raw) for raw in payload]
            bars.extend(page)
            cursor_ms = epoch_seconds(page[-1].timestamp) * 1000 + HOUR_MS
        return bars


def fetch_klines(pair: str, start: datetime, end: datetime, session: RateLimitedSession = None,
                 base_url: str = None, fixtures_dir: str = None) -> List[OhlcvBar]:
    return KlineFetcher(session=session, base_url=base_url, fixtures_dir=fixtures_dir).fetch(pair, start, end)

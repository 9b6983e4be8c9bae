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
    This module contains the canonical records produced by the fetchers (news articles, Reddit submissions and
    exchange candles) together with their CSV schemas.
"""
import math
from dataclasses import dataclass
from datetime import date, datetime
from sentiforge.utils.exceptions import ConfigError, DataError
from sentiforge.utils.helper import to_day, to_utc

SUPPORTED_PAIRS = ("BTCUSDT", "LTCUSD", "ETHUSD")
MAX_NEWS_RANK = 10

NEWS_COLUMNS = ("date", "rank", "url", "text")
REDDIT_COLUMNS = ("post_id", "title", "selftext", "url", "author", "score", "publish_date", "num_of_comments",
                  "permalink", "flair")
OHLCV_COLUMNS = ("timestamp", "open", "high", "low", "close", "volume")


@dataclass(frozen=True)
class NewsArticle:
    """
        One search result of a day, resolved to its readable body.
    """
    date: date
    rank: int
    url: str
    full_text: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "date", to_day(self.date))
        object.__setattr__(self, "rank", int(self.rank))
        if not 1 <= self.rank <= MAX_NEWS_RANK:
            raise DataError("News rank must be in 1..{} (here: {})".format(MAX_NEWS_RANK, self.rank))


@dataclass(frozen=True)
class RedditPost:
    """
        One archived Reddit submission.
    """
    post_id: str
    title: str
    selftext: str
    url: str
    author: str
    score: int
    publish_date: datetime
    num_of_comments: int
    permalink: str
    flair_tag: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "publish_date", to_utc(self.publish_date).replace(microsecond=0))
        object.__setattr__(self, "score", int(self.score))
        object.__setattr__(self, "num_of_comments", int(self.num_of_comments))
        if not self.post_id:
            raise DataError("Reddit post without identifier")
        if self.num_of_comments < 0:
            raise DataError("Post {}: negative comment count {}".format(self.post_id, self.num_of_comments))

    @property
    def text(self) -> str:
        """
            Text scored for sentiment: title and selftext joined by a single newline.
        """
        return "{}\n{}".format(self.title, self.selftext)


@dataclass(frozen=True)
class OhlcvBar:
    """
        One hourly candle for one trading pair. The timestamp is the bar open time.
    """
    timestamp: datetime
    pair: str
    open: float
    high: float
    low: float
    close: float
    volume: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "timestamp", to_utc(self.timestamp))
        check_pair(self.pair)
        for field_name in ("open", "high", "low", "close", "volume"):
            value = float(getattr(self, field_name))
            if not math.isfinite(value):
                raise DataError("{} bar at {}: non-finite {}".format(self.pair, self.timestamp, field_name))
            object.__setattr__(self, field_name, value)
        if self.timestamp.minute or self.timestamp.second or self.timestamp.microsecond:
            raise DataError("{} bar at {} is not aligned to the hour".format(self.pair, self.timestamp))
        if self.low > min(self.open, self.close) or self.high < max(self.open, self.close):
            raise DataError("{} bar at {}: inconsistent range low={} high={} open={} close={}".format(
                self.pair, self.timestamp, self.low, self.high, self.open, self.close))
        if self.volume < 0:
            raise DataError("{} bar at {}: negative volume {}".format(self.pair, self.timestamp, self.volume))


def check_pair(pair: str) -> str:
    """
        Check that the trading pair is one of the supported symbols.

        Raises:
            ConfigError: unknown pair.
    """
    if pair not in SUPPORTED_PAIRS:
        raise ConfigError("Unsupported trading pair '{}' (expected one of {})".format(pair, ", ".join(SUPPORTED_PAIRS)))
    return pair

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
    This module groups different generic methods used in sentiforge (UTC time handling, environment lookup and
    output directories).
"""
import os
from datetime import date, datetime, timedelta, timezone
from typing import Iterator, Union
import pandas as pd

ISO_FORMAT = "%Y-%m-%dT%H:%M:%SZ"
DAY_FORMAT = "%Y-%m-%d"

TimeLike = Union[str, int, float, date, datetime, pd.Timestamp]

# Environment variables read by the fetchers and the CLI
ENV_EXCHANGE_URL = "SENTIFORGE_EXCHANGE_URL"
ENV_PUSHSHIFT_URL = "SENTIFORGE_PUSHSHIFT_URL"
ENV_NEWS_URL = "SENTIFORGE_NEWS_URL"
ENV_FIXTURES_DIR = "SENTIFORGE_FIXTURES_DIR"
ENV_SEED = "SENTIFORGE_SEED"

DEFAULT_SEED = 42


def to_utc(value: TimeLike) -> datetime:
    """
    Normalize a timestamp to a timezone-aware UTC datetime.
    Naive values are interpreted as UTC; integers and floats are epoch seconds.

    Args:
        value: ISO-8601 string, epoch seconds, date, datetime or pandas Timestamp.

    Returns:
        the UTC datetime.
    """
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return datetime.fromtimestamp(value, tz=timezone.utc)
    stamp = pd.Timestamp(value)
    if stamp.tzinfo is None:
        stamp = stamp.tz_localize("UTC")
    else:
        stamp = stamp.tz_convert("UTC")
    return stamp.to_pydatetime()


def to_day(value: TimeLike) -> date:
    if isinstance(value, date) and not isinstance(value, datetime):
        return value
    return to_utc(value).date()


def format_utc(value: TimeLike) -> str:
    return to_utc(value).strftime(ISO_FORMAT)


def epoch_seconds(value: TimeLike) -> int:
    return int(to_utc(value).timestamp())


def floor_hour(value: TimeLike) -> datetime:
    return to_utc(value).replace(minute=0, second=0, microsecond=0)


def iter_days(start: TimeLike, end: TimeLike) -> Iterator[date]:
    """
    Iterate over calendar days in [start, end] (both inclusive).
    """
    day, last = to_day(start), to_day(end)
    while day <= last:
        yield day
        day += timedelta(days=1)


def env_value(name: str, default: str = None) -> str:
    value = os.environ.get(name)
    return value if value else default


def env_seed() -> int:
    return int(env_value(ENV_SEED, str(DEFAULT_SEED)))


def ensure_dir(path: str) -> str:
    """
    Create the directory if it does not exist yet.

    Args:
        path: directory path.

    Returns:
        the same path.
    """
    if path and not os.path.isdir(path):
        os.makedirs(path)
    return path

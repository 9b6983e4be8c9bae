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
    This module combines the three scorers into sentiment vectors and aggregates them per news day and per
    Reddit hour.
"""
import math
import logging
from dataclasses import dataclass, astuple
from datetime import date, datetime, timedelta
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple
import numpy as np
from tqdm import tqdm
from sentiforge.ingest.records import NewsArticle, RedditPost
from sentiforge.sentiment.external_scorer import ExternalScoreStore, news_key
from sentiforge.sentiment.pattern_scorer import PatternScore, PatternScorer
from sentiforge.sentiment.vader_scorer import VaderScore, VaderScorer
from sentiforge.utils.exceptions import DataError
from sentiforge.utils.helper import floor_hour, iter_days, to_day
from sentiforge.utils.sentiforge_logger import SentiforgeLogger

CHANNELS = ("flair", "tb_polarity", "tb_subjectivity", "sid_pos", "sid_neg", "sid_neu", "sid_com")

HOUR = timedelta(hours=1)


@dataclass(frozen=True)
class SentimentVector:
    """
        The seven sentiment channels of one text, one day or one hour.
    """
    flair: float = 0.0
    tb_polarity: float = 0.0
    tb_subjectivity: float = 0.0
    sid_pos: float = 0.0
    sid_neg: float = 0.0
    sid_neu: float = 0.0
    sid_com: float = 0.0

    def __post_init__(self) -> None:
        for channel in CHANNELS:
            value = float(getattr(self, channel))
            if math.isnan(value):
                raise DataError("NaN in sentiment channel '{}'".format(channel))
            object.__setattr__(self, channel, value)

    @classmethod
    def from_scores(cls, flair: float, pattern: PatternScore, vader: VaderScore) -> "SentimentVector":
        return cls(flair=flair, tb_polarity=pattern.polarity, tb_subjectivity=pattern.subjectivity,
                   sid_pos=vader.pos, sid_neg=vader.neg, sid_neu=vader.neu, sid_com=vader.compound)

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "SentimentVector":
        if len(values) != len(CHANNELS):
            raise DataError("Expected {} sentiment channels, got {}".format(len(CHANNELS), len(values)))
        return cls(*[float(v) for v in values])

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=np.float64)


ZERO_VECTOR = SentimentVector()


class HourlyBucket(NamedTuple):
    hour: datetime
    vector: SentimentVector
    count: int

    @property
    def empty(self) -> bool:
        return self.count == 0


def mean_vector(vectors: Sequence[SentimentVector]) -> SentimentVector:
    """
        Per-channel arithmetic mean. Sums are exactly rounded (math.fsum) so the result does not depend
        on the order of the vectors.
    """
    count = len(vectors)
    return SentimentVector(*[math.fsum(getattr(v, c) for v in vectors) / count for c in CHANNELS])


def aggregate_daily_news(scores: Sequence[SentimentVector], day: date = None) -> SentimentVector:
    """
    Average the article vectors of one news day.

    Args:
        scores: vectors of the day's articles.
        day: day label used in the warning.

    Returns:
        the per-channel mean, the zero vector for a day without articles.
    """
    if not scores:
        SentiforgeLogger.log("No news article scored for {}, using a zero vector".format(
            day if day is not None else "this day"), logging.WARNING)
        return ZERO_VECTOR
    return mean_vector(scores)


def bucketize_hourly(posts: Iterable[Tuple[datetime, SentimentVector]]) -> List[HourlyBucket]:
    """
    Group post vectors per UTC hour and average them.
    Every hour between the first and the last post hour is returned; hours without posts carry the zero
    vector and a count of 0.

    Args:
        posts: (publish time, vector) pairs.

    Returns:
        the hourly buckets in ascending order.
    """
    groups: Dict[datetime, List[SentimentVector]] = {}
    for timestamp, vector in posts:
        groups.setdefault(floor_hour(timestamp), []).append(vector)
    if not groups:
        return []

    buckets = []
    hour, last = min(groups), max(groups)
    while hour <= last:
        members = groups.get(hour, [])
        buckets.append(HourlyBucket(hour, mean_vector(members) if members else ZERO_VECTOR, len(members)))
        hour += HOUR
    empty = sum(1 for b in buckets if b.empty)
    if empty:
        SentiforgeLogger.log("{} empty hour bucket(s) zero-filled".format(empty), logging.WARNING)
    return buckets


class SentimentAnalyzer:
    """
        Bundles the rule scorer, the pattern scorer and the external score store.
        Without a store the flair channel is 0.0.
    """

    def __init__(self, vader: VaderScorer = None, pattern: PatternScorer = None,
                 external: Optional[ExternalScoreStore] = None) -> None:
        self.vader = vader if vader is not None else VaderScorer()
        self.pattern = pattern if pattern is not None else PatternScorer()
        self.external = external
        if external is None:
            SentiforgeLogger.log("No external score store given, flair channel set to 0.0", logging.WARNING)

    def score_text(self, text: str, external_key: str = None) -> SentimentVector:
        flair = 0.0
        if self.external is not None and external_key is not None:
            flair = self.external.lookup(external_key).value
        return SentimentVector.from_scores(flair, self.pattern.score(text), self.vader.score(text))


class NewsScores(NamedTuple):
    daily: List[Tuple[date, SentimentVector]]
    empty_days: List[date]


class RedditScores(NamedTuple):
    posts: List[Tuple[datetime, SentimentVector]]
    hourly: List[HourlyBucket]


def score_news(articles: Sequence[NewsArticle], analyzer: SentimentAnalyzer,
               days: Sequence[date] = None, progress: bool = False) -> NewsScores:
    """
    Score every article and average them per day.

    Args:
        articles: the ingested articles.
        analyzer: scorers to use, article keys are news:<date>:<rank>.
        days: days to report, defaults to every day from the first to the last article.
        progress: display a progress bar.

    Returns:
        daily vectors in ascending day order and the days without any article.
    """
    per_day: Dict[date, List[SentimentVector]] = {}
    for article in tqdm(articles, desc="Scoring news", disable=not progress):
        vector = analyzer.score_text(article.full_text, news_key(article.date, article.rank))
        per_day.setdefault(article.date, []).append(vector)

    if days is None:
        days = list(iter_days(min(per_day), max(per_day))) if per_day else []
    days = sorted(to_day(d) for d in days)
    daily = [(day, aggregate_daily_news(per_day.get(day, []), day)) for day in days]
    return NewsScores(daily, [day for day in days if day not in per_day])


def score_reddit(posts: Sequence[RedditPost], analyzer: SentimentAnalyzer, progress: bool = False) -> RedditScores:
    """
    Score every post (title and selftext) and bucketize the vectors per hour.

    Args:
        posts: the ingested posts, their keys in the external store are their identifiers.
        analyzer: scorers to use.
        progress: display a progress bar.

    Returns:
        per-post vectors sorted by publish time and the hourly buckets.
    """
    scored = [(post.publish_date, analyzer.score_text(post.text, post.post_id))
              for post in tqdm(posts, desc="Scoring posts", disable=not progress)]
    scored.sort(key=lambda item: item[0])
    return RedditScores(scored, bucketize_hourly(scored))

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
Test module for sentiforge/sentiment/aggregation.py and sentiforge/sentiment/sentiment_tables.py
"""
import statistics
from datetime import date, datetime, timedelta, timezone
from pathlib import Path
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sentiforge.ingest.news_fetcher import NewsFetcher
from sentiforge.ingest.reddit_fetcher import RedditFetcher
from sentiforge.sentiment import sentiment_tables
from sentiforge.sentiment.aggregation import (CHANNELS, ZERO_VECTOR, SentimentAnalyzer, SentimentVector,
                                              aggregate_daily_news, bucketize_hourly, score_news, score_reddit)
from sentiforge.sentiment.external_scorer import ExternalScoreStore
from sentiforge.utils.exceptions import DataError, SchemaError

T0 = datetime(2018, 1, 1, tzinfo=timezone.utc)
TABLE4_FLAIR = [-0.9971, -0.9999, -0.9991, -0.9909, 0.9731]


@pytest.fixture
def setup(tmp_path) -> None:
    """
        Provides the ingest fixtures, the external score store and a scratch directory.
    """
    here = Path(__file__).parent
    store = ExternalScoreStore.from_csv(str(here / "data" / "flair_scores.csv"))
    yield {"fixtures": str(here.parent / "ingest" / "data"), "analyzer": SentimentAnalyzer(external=store),
           "store": store, "out": tmp_path}


def channel_values():
    return st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


def vectors():
    return st.builds(SentimentVector, *[channel_values() for _ in CHANNELS])


def test_vector() -> None:
    vector = SentimentVector(flair=0.5, sid_neu=1.0)
    assert vector.as_array().tolist() == [0.5, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]
    assert SentimentVector.from_array(vector.as_array()) == vector
    pytest.raises(DataError, lambda: SentimentVector(flair=float("nan")))
    pytest.raises(DataError, lambda: SentimentVector.from_array([0.0, 1.0]))


def test_aggregate_daily_news() -> None:
    one = SentimentVector(flair=0.2, tb_polarity=0.1)
    assert aggregate_daily_news([one]) == one
    assert aggregate_daily_news([one, SentimentVector(flair=0.6)]).flair == pytest.approx(0.4)
    assert aggregate_daily_news([]) == ZERO_VECTOR


@settings(max_examples=200, deadline=None)
@given(st.lists(vectors(), min_size=1, max_size=12).flatmap(lambda v: st.tuples(st.just(v), st.permutations(v))))
def test_aggregate_permutation(pair) -> None:
    original, shuffled = pair
    assert aggregate_daily_news(original) == aggregate_daily_news(shuffled)


def test_bucketize_fixture_hour() -> None:
    posts = [(T0 + timedelta(minutes=10 + 4 * i), SentimentVector(flair=v)) for i, v in enumerate(TABLE4_FLAIR)]
    buckets = bucketize_hourly(posts)
    assert len(buckets) == 1
    assert buckets[0].hour == T0
    assert buckets[0].count == 5
    assert buckets[0].vector.flair == pytest.approx(-0.80278, abs=1e-12)


def test_bucketize_edges() -> None:
    assert bucketize_hourly([]) == []
    single = SentimentVector(flair=0.3, sid_com=-0.1)
    assert bucketize_hourly([(T0 + timedelta(minutes=59), single)])[0].vector == single

    buckets = bucketize_hourly([(T0 + timedelta(minutes=5), single),
                                (T0 + timedelta(hours=2, minutes=1), SentimentVector(flair=0.9))])
    assert [b.hour for b in buckets] == [T0, T0 + timedelta(hours=1), T0 + timedelta(hours=2)]
    assert buckets[1].empty
    assert buckets[1].vector == ZERO_VECTOR
    assert not buckets[0].empty and not buckets[2].empty


def brute_force(posts):
    groups = {}
    for timestamp, vector in posts:
        groups.setdefault(timestamp.replace(minute=0, second=0, microsecond=0), []).append(vector)
    result = {}
    for hour, members in groups.items():
        result[hour] = SentimentVector(*[statistics.fmean(getattr(m, c) for m in members) for c in CHANNELS])
    return result


@settings(max_examples=1000, deadline=None)
@given(st.lists(st.tuples(st.integers(min_value=0, max_value=6 * 3600 - 1), vectors()), min_size=1, max_size=30))
def test_bucketize_matches_group_by(raw) -> None:
    posts = sorted([(T0 + timedelta(seconds=s), v) for s, v in raw], key=lambda p: p[0])
    expected = brute_force(posts)
    buckets = bucketize_hourly(posts)
    assert buckets[0].hour == min(expected)
    assert buckets[-1].hour == max(expected)
    for bucket in buckets:
        assert bucket.vector == expected.get(bucket.hour, ZERO_VECTOR)
        assert bucket.empty == (bucket.hour not in expected)


def test_score_news(setup) -> None:
    fetcher = NewsFetcher(fixtures_dir=setup["fixtures"])
    articles = [a for day in ("2018-01-01", "2018-01-02", "2018-01-03") for a in fetcher.fetch("bitcoin", day)]
    analyzer = setup["analyzer"]
    days = [date(2018, 1, 1) + timedelta(days=k) for k in range(4)]
    result = score_news(articles, analyzer, days)

    assert [d for d, _ in result.daily] == days
    assert result.empty_days == [date(2018, 1, 4)]
    assert result.daily[3][1] == ZERO_VECTOR

    first_day = [a for a in articles if a.date == date(2018, 1, 1)]
    assert len(first_day) == 9
    recomputed = np.mean([analyzer.score_text(a.full_text, "news:2018-01-01:{}".format(a.rank)).as_array()
                          for a in first_day], axis=0)
    np.testing.assert_allclose(result.daily[0][1].as_array(), recomputed, rtol=0, atol=1e-12)
    assert result.daily[0][1].flair == pytest.approx(0.0426, abs=1e-12)
    # only the first day carries external scores
    assert setup["store"].missing == 5


def test_score_reddit(setup) -> None:
    posts = RedditFetcher(fixtures_dir=setup["fixtures"]).fetch("Bitcoin", "bitcoin", T0, T0 + timedelta(hours=2))
    result = score_reddit(posts, setup["analyzer"])
    assert len(result.posts) == 6
    assert [b.count for b in result.hourly] == [5, 1]
    assert result.hourly[0].vector.flair == pytest.approx(-0.80278, abs=1e-12)
    # 7ne9zz has no external score
    assert result.hourly[1].vector.flair == 0.0
    assert setup["store"].missing == 1
    for _, vector in result.posts:
        assert vector.sid_pos + vector.sid_neg + vector.sid_neu == pytest.approx(1.0, abs=1e-6)


def test_analyzer_without_store() -> None:
    vector = SentimentAnalyzer().score_text("The book was good.", "7ne3y9")
    assert vector.flair == 0.0
    assert vector.sid_com > 0
    assert vector.tb_polarity == pytest.approx(0.7)


def test_tables(setup) -> None:
    daily = [(date(2018, 1, 1), SentimentVector(0.0426, 0.1, 0.4, 0.1, 0.02, 0.88, 0.6247)),
             (date(2018, 1, 2), ZERO_VECTOR)]
    news_path = setup["out"] / "gnews.csv"
    sentiment_tables.write_news_table(daily, str(news_path))
    assert news_path.read_text().splitlines()[0] == ("date,gnews_flair,gnews_tb_polarity,gnews_tb_subjectivity,"
                                                     "gnews_sid_pos,gnews_sid_neg,gnews_sid_neu,gnews_sid_com")
    assert sentiment_tables.read_news_table(str(news_path)) == daily

    buckets = bucketize_hourly([(T0, SentimentVector(flair=-0.2672)), (T0 + timedelta(hours=2), ZERO_VECTOR)])
    hourly_path = setup["out"] / "reddit.csv"
    empty_path = setup["out"] / "reddit.empty.csv"
    sentiment_tables.write_hourly_table(buckets, str(hourly_path), str(empty_path))
    assert hourly_path.read_text().splitlines()[0] == ("timestamp,reddit_flair,reddit_tb_polarity,"
                                                       "reddit_tb_subjectivity,reddit_sid_pos,reddit_sid_neg,"
                                                       "reddit_sid_neu,reddit_sid_com")
    rows = sentiment_tables.read_reddit_table(str(hourly_path))
    assert [r[0] for r in rows] == [b.hour for b in buckets]
    assert rows[0][1].flair == -0.2672
    assert empty_path.read_text().splitlines() == ["timestamp", "2018-01-01T01:00:00Z"]

    pytest.raises(SchemaError, lambda: sentiment_tables.read_reddit_table(str(news_path)))
    hourly_path.write_text("timestamp,reddit_flair,reddit_tb_polarity,reddit_tb_subjectivity,reddit_sid_pos,"
                           "reddit_sid_neg,reddit_sid_neu,reddit_sid_com\n2018-01-01T00:00:00Z,x,0,0,0,0,1,0\n")
    pytest.raises(DataError, lambda: sentiment_tables.read_reddit_table(str(hourly_path)))

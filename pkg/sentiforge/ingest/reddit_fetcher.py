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
    This module downloads the submissions of a subreddit matching a keyword from a Pushshift-compatible archive,
    paginating on the publication time.
"""
import os
import json
import logging
from datetime import datetime
from typing import Dict, List, Optional
from sentiforge.ingest.http_client import RateLimitedSession
from sentiforge.ingest.records import RedditPost
from sentiforge.utils.exceptions import ConfigError, DataError, RetryableError
from sentiforge.utils.helper import ENV_FIXTURES_DIR, ENV_PUSHSHIFT_URL, env_value, epoch_seconds
from sentiforge.utils.sentiforge_logger import SentiforgeLogger

DEFAULT_PUSHSHIFT_URL = "https://api.pushshift.io"
SEARCH_PATH = "/reddit/search/submission"
DEFAULT_PAGE_SIZE = 100


def parse_submission(raw: dict) -> RedditPost:
    """
        Convert one archive submission to a RedditPost.

        Raises:
            DataError: missing or malformed mandatory field.
    """
    if not isinstance(raw, dict):
        raise DataError("Submission is not an object: {!r}".format(raw))
    try:
        return RedditPost(post_id=str(raw["id"]),
                          title=str(raw["title"]),
                          selftext=raw.get("selftext") or "",
                          url=raw.get("url") or "",
                          author=raw.get("author") or "",
                          score=int(raw.get("score") or 0),
                          publish_date=int(raw["created_utc"]),
                          num_of_comments=int(raw.get("num_comments") or 0),
                          permalink=raw.get("permalink") or "",
                          flair_tag=raw.get("link_flair_text") or "")
    except (KeyError, TypeError, ValueError) as e:
        raise DataError("Malformed submission {}: {}".format(raw.get("id", "?"), e)) from e


class JsonlArchive:
    """
        Local stand-in for the archive endpoint, serving <fixtures_dir>/reddit/<subreddit>.jsonl
        with the same query semantics (exclusive after/before bounds, ascending order, page size).
    """

    def __init__(self, fixtures_dir: str) -> None:
        self.fixtures_dir = fixtures_dir
        self.request_count = 0

    def search(self, params: dict) -> dict:
        self.request_count += 1
        path = os.path.join(self.fixtures_dir, "reddit", "{}.jsonl".format(params["subreddit"]))
        if not os.path.isfile(path):
            return {"data": []}
        with open(path, "r", encoding="utf-8") as stream:
            submissions = [json.loads(line) for line in stream if line.strip()]
        keyword = str(params.get("q") or "").lower()
        selected = []
        for raw in submissions:
            created = raw.get("created_utc") if isinstance(raw, dict) else None
            if isinstance(created, (int, float)) and not params["after"] < created < params["before"]:
                continue
            if keyword and isinstance(raw, dict):
                text = "{} {}".format(raw.get("title") or "", raw.get("selftext") or "").lower()
                if keyword not in text:
                    continue
            selected.append(raw)
        selected.sort(key=lambda r: r.get("created_utc", 0) if isinstance(r, dict) else 0)
        return {"data": selected[:int(params["size"])]}


class RedditFetcher:
    """
        Submission collector for one subreddit.
    """

    def __init__(self, session: RateLimitedSession = None, base_url: str = None, fixtures_dir: str = None,
                 page_size: int = DEFAULT_PAGE_SIZE) -> None:
        self.session = session
        self.base_url = base_url or env_value(ENV_PUSHSHIFT_URL, DEFAULT_PUSHSHIFT_URL)
        fixtures_dir = fixtures_dir if fixtures_dir is not None else env_value(ENV_FIXTURES_DIR)
        self.archive = JsonlArchive(fixtures_dir) if fixtures_dir else None
        self.page_size = page_size
        self.warnings = 0
        self.request_count = 0

    def _page(self, params: dict) -> list:
        self.request_count += 1
        if self.archive is not None:
            payload = self.archive.search(params)
        else:
            if self.session is None:
                self.session = RateLimitedSession()
            payload = self.session.get_json(self.base_url.rstrip("/") + SEARCH_PATH, params)
        if not isinstance(payload, dict) or not isinstance(payload.get("data"), list):
            raise RetryableError("Unexpected archive payload: {!r}".format(payload)[:200])
        return payload["data"]

    def fetch(self, subreddit: str, keyword: str, start: datetime, end: datetime) -> List[RedditPost]:
        """
            Collect every matching submission published in [start, end), ascending by publication date.
            After each page the time cursor is moved to the second before the last returned submission, so that
            submissions sharing that second are requested again; identifiers already collected are skipped.

            Raises:
                ConfigError: empty range.
                RetryableError: the endpoint stayed unavailable.
        """
        start_s, end_s = epoch_seconds(start), epoch_seconds(end)
        if start_s >= end_s:
            raise ConfigError("Empty Reddit range: start {} must precede end {}".format(start, end))

        posts: Dict[str, RedditPost] = {}
        # "after" is exclusive
        cursor = start_s - 1
        while True:
            page = self._page({"subreddit": subreddit, "q": keyword, "after": cursor, "before": end_s,
                               "size": self.page_size, "sort": "asc"})
            if not page:
                break
            latest: Optional[int] = None
            for raw in page:
                try:
                    post = parse_submission(raw)
                except DataError as e:
                    self.warnings += 1
                    SentiforgeLogger.log(str(e), logging.WARNING)
                    continue
                created = epoch_seconds(post.publish_date)
                latest = created if latest is None else max(latest, created)
                if start_s <= created < end_s:
                    posts.setdefault(post.post_id, post)
            if latest is None or len(page) < self.page_size:
                break
            if latest - 1 > cursor:
                cursor = latest - 1
            else:
                # a full page inside a single second: the cursor cannot split it
                SentiforgeLogger.log("r/{}: {} submissions or more at {}, later ones in that second may be missed"
                                     .format(subreddit, self.page_size, latest), logging.WARNING)
                cursor = latest
            if cursor >= end_s - 1:
                break

        result = sorted(posts.values(), key=lambda p: (p.publish_date, p.post_id))
        SentiforgeLogger.log("r/{} '{}': {} post(s) in {} request(s), {} malformed".format(
            subreddit, keyword, len(result), self.request_count, self.warnings), logging.INFO)
        return result


def fetch_reddit_posts(subreddit: str, keyword: str, start: datetime, end: datetime,
                       session: RateLimitedSession = None, base_url: str = None,
                       fixtures_dir: str = None) -> List[RedditPost]:
    return RedditFetcher(session=session, base_url=base_url, fixtures_dir=fixtures_dir).fetch(
        subreddit, keyword, start, end)

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
    This module collects the top search results of a news query for one calendar day and resolves each result to
    the readable body of the article.
"""
import os
import logging
from datetime import date
from typing import List, Optional
from urllib.parse import parse_qs, urlsplit
from bs4 import BeautifulSoup
from sentiforge.ingest.http_client import RateLimitedSession
from sentiforge.ingest.records import NewsArticle, MAX_NEWS_RANK
from sentiforge.ingest import storage
from sentiforge.utils.exceptions import ConfigError, RetryableError
from sentiforge.utils.helper import DAY_FORMAT, ENV_FIXTURES_DIR, ENV_NEWS_URL, env_value, to_day
from sentiforge.utils.sentiforge_logger import SentiforgeLogger

DEFAULT_NEWS_URL = "https://www.google.com"
SEARCH_TEMPLATE = "{base}/search?q={query}&hl=en&gl=us&as_drrb=b&tbas=0&tbs=cdr:1,cd_min:{day},cd_max:{day}"

# Paragraphs shorter than this are treated as navigation or captions
MIN_PARAGRAPH_LENGTH = 40
NOISE_TAGS = ("script", "style", "noscript", "nav", "header", "footer", "aside", "form", "figure", "iframe")


def build_search_url(query: str, day: date, base_url: str = DEFAULT_NEWS_URL) -> str:
    """
        Render the dated search URL of a query.

        Args:
            query: keywords, separated by blanks.
            day: searched calendar day (used for both range bounds).
            base_url: search host.

        Returns:
            the search URL.
    """
    day = to_day(day)
    return SEARCH_TEMPLATE.format(base=base_url.rstrip("/"),
                                  query="+".join(query.split()),
                                  day="{}/{}/{}".format(day.month, day.day, day.year))


def parse_search_results(html: str, search_host: str = None) -> List[str]:
    """
        Extract the outbound result links of a search page, in page order and without duplicates.
        Redirect links (/url?q=<target>) are unwrapped; links back to the search host are dropped.
    """
    soup = BeautifulSoup(html, "html.parser")
    links = []
    for anchor in soup.find_all("a", href=True):
        href = anchor["href"]
        if href.startswith("/url?"):
            target = parse_qs(urlsplit(href).query).get("q", [None])[0]
        elif href.startswith("http://") or href.startswith("https://"):
            target = href
        else:
            continue
        if not target or not target.startswith("http"):
            continue
        if search_host and urlsplit(target).netloc == search_host:
            continue
        if target not in links:
            links.append(target)
    return links


def extract_readable_text(html: str) -> str:
    """
        Readable-body heuristic: drop boilerplate elements, prefer the <article> element, keep paragraphs long enough
        to be prose and fall back to the whole visible body text.

        Args:
            html: article page.

        Returns:
            the article text, paragraphs separated by newlines (empty string when nothing readable remains).
    """
    soup = BeautifulSoup(html, "html.parser")
    for tag in soup(NOISE_TAGS):
        tag.decompose()
    root = soup.find("article") or soup.body or soup
    paragraphs = [p.get_text(" ", strip=True) for p in root.find_all("p")]
    paragraphs = [p for p in paragraphs if len(p) >= MIN_PARAGRAPH_LENGTH]
    if paragraphs:
        return "\n".join(paragraphs)
    return root.get_text("\n", strip=True)


class NewsFetcher:
    """
        Daily news collector. In fixture mode, articles are read from <fixtures_dir>/news/<YYYY-MM-DD>.csv.
    """

    def __init__(self, session: RateLimitedSession = None, base_url: str = None, fixtures_dir: str = None,
                 max_articles: int = MAX_NEWS_RANK) -> None:
        self.session = session
        self.base_url = base_url or env_value(ENV_NEWS_URL, DEFAULT_NEWS_URL)
        self.fixtures_dir = fixtures_dir if fixtures_dir is not None else env_value(ENV_FIXTURES_DIR)
        self.max_articles = max_articles
        self.skipped = 0

    def fetch(self, query: str, day: date) -> List[NewsArticle]:
        """
            Collect at most max_articles articles for the day, ranked by result order.
            Results whose body cannot be retrieved are skipped; the survivors keep their rank.

            Raises:
                ConfigError: empty query.
                RetryableError: the search page itself could not be retrieved.
        """
        if not query or not query.strip():
            raise ConfigError("The news query must not be empty")
        day = to_day(day)
        if self.fixtures_dir:
            return self._from_fixtures(day)

        if self.session is None:
            self.session = RateLimitedSession()
        search_url = build_search_url(query, day, self.base_url)
        response = self.session.get(search_url)
        if response.status_code != 200:
            SentiforgeLogger.log("Search for {} returned HTTP {}".format(day, response.status_code), logging.WARNING)
            return []
        links = parse_search_results(response.text, urlsplit(self.base_url).netloc)[:self.max_articles]

        articles = []
        for rank, url in enumerate(links, start=1):
            text = self._download(url)
            if not text:
                self.skipped += 1
                SentiforgeLogger.log("{} rank {}: no readable body at {}, skipped".format(day, rank, url),
                                     logging.WARNING)
                continue
            articles.append(NewsArticle(date=day, rank=rank, url=url, full_text=text))
        SentiforgeLogger.log("{}: {} article(s) out of {} result(s)".format(day, len(articles), len(links)),
                             logging.INFO)
        return articles

    def _download(self, url: str) -> Optional[str]:
        try:
            response = self.session.get(url)
        except RetryableError as e:
            SentiforgeLogger.log(str(e), logging.DEBUG)
            return None
        if response.status_code != 200:
            return None
        return extract_readable_text(response.text)

    def _from_fixtures(self, day: date) -> List[NewsArticle]:
        path = os.path.join(self.fixtures_dir, "news", day.strftime(DAY_FORMAT) + ".csv")
        if not os.path.isfile(path):
            return []
        articles = storage.load(path, NewsArticle)
        return articles[:self.max_articles]


def fetch_news(query: str, day: date, session: RateLimitedSession = None, base_url: str = None,
               fixtures_dir: str = None) -> List[NewsArticle]:
    return NewsFetcher(session=session, base_url=base_url, fixtures_dir=fixtures_dir).fetch(query, day)

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
    This module provides the HTTP session shared by the fetchers: per-host request pacing and bounded exponential
    backoff on throttling, server errors and connection failures.
"""
import logging
import threading
import time
from typing import Callable, Dict
from urllib.parse import urlsplit
import requests
from sentiforge.utils.exceptions import RetryableError
from sentiforge.utils.sentiforge_logger import SentiforgeLogger

DEFAULT_MIN_INTERVAL = 1.0
DEFAULT_MAX_RETRIES = 5
DEFAULT_BACKOFF = 1.0
DEFAULT_TIMEOUT = 30.0
USER_AGENT = "Mozilla/5.0 (X11; Linux x86_64) sentiforge"


def is_retryable_status(status_code: int) -> bool:
    return status_code == 429 or 500 <= status_code < 600


class RateLimitedSession:
    """
        GET-only wrapper around a requests session.
        Requests to the same host are spaced by at least min_interval seconds, across threads.
    """

    def __init__(self,
                 session: requests.Session = None,
                 min_interval: float = DEFAULT_MIN_INTERVAL,
                 max_retries: int = DEFAULT_MAX_RETRIES,
                 backoff: float = DEFAULT_BACKOFF,
                 timeout: float = DEFAULT_TIMEOUT,
                 sleep: Callable[[float], None] = time.sleep,
                 clock: Callable[[], float] = time.monotonic) -> None:
        """
            RateLimitedSession constructor.

            Args:
                session: underlying session (any object exposing get(url, params, headers, timeout)).
                min_interval: minimum delay between two requests to the same host (seconds).
                max_retries: number of retries after the first attempt.
                backoff: first backoff delay, doubled after each retry (seconds).
                timeout: per-request timeout (seconds).
                sleep: sleep function, injectable for tests.
                clock: monotonic clock, injectable for tests.
        """
        self.session = session if session is not None else requests.Session()
        self.min_interval = min_interval
        self.max_retries = max_retries
        self.backoff = backoff
        self.timeout = timeout
        self.sleep = sleep
        self.clock = clock
        self.request_count = 0
        self._last_request: Dict[str, float] = {}
        self._host_locks: Dict[str, threading.Lock] = {}
        self._lock = threading.Lock()

    def _host_lock(self, host: str) -> threading.Lock:
        with self._lock:
            return self._host_locks.setdefault(host, threading.Lock())

    def _pace(self, host: str) -> None:
        last = self._last_request.get(host)
        if last is not None:
            wait = self.min_interval - (self.clock() - last)
            if wait > 0:
                self.sleep(wait)
        self._last_request[host] = self.clock()

    def get(self, url: str, params: dict = None) -> requests.Response:
        """
            Send a GET request with pacing and retries.

            Args:
                url: target URL.
                params: query parameters.

            Returns:
                the successful (non-retryable) response; 4xx other than 429 are returned as is.

            Raises:
                RetryableError: the endpoint kept failing after max_retries retries.
        """
        host = urlsplit(url).netloc
        delay = self.backoff
        last_failure = None
        for attempt in range(self.max_retries + 1):
            if attempt > 0:
                SentiforgeLogger.log("Retrying {} in {}s (attempt {}/{}): {}".format(
                    url, delay, attempt, self.max_retries, last_failure), logging.WARNING)
                self.sleep(delay)
                delay *= 2
            # pacing and sending are serialized per host
            with self._host_lock(host):
                self._pace(host)
                self.request_count += 1
                try:
                    response = self.session.get(url, params=params, headers={"User-Agent": USER_AGENT},
                                                timeout=self.timeout)
                except (requests.ConnectionError, requests.Timeout) as e:
                    last_failure = str(e)
                    continue
            if is_retryable_status(response.status_code):
                last_failure = "HTTP {}".format(response.status_code)
                continue
            return response
        raise RetryableError("GET {} failed after {} retries ({})".format(url, self.max_retries, last_failure))

    def get_json(self, url: str, params: dict = None):
        response = self.get(url, params)
        try:
            response.raise_for_status()
            return response.json()
        except (requests.HTTPError, ValueError) as e:
            raise RetryableError("GET {}: unusable response ({})".format(url, e)) from e

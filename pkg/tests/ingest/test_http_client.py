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
Test module for sentiforge/ingest/http_client.py
"""
import pytest
import requests

from sentiforge.ingest.http_client import RateLimitedSession
from sentiforge.utils.exceptions import RetryableError
from tests.ingest.fake_http import FakeClock, FakeResponse, FakeSession


@pytest.fixture
def setup() -> None:
    clock = FakeClock()
    yield {"clock": clock}


def test_retry_then_success(setup) -> None:
    answers = [FakeResponse(503), FakeResponse(429), FakeResponse(200, text="ok")]
    fake = FakeSession(lambda url, params: answers.pop(0))
    clock = setup["clock"]
    session = RateLimitedSession(fake, min_interval=0.0, sleep=clock.sleep, clock=clock)
    response = session.get("https://api.example.com/x")
    assert response.text == "ok"
    assert len(fake.calls) == 3
    # exponential backoff, first delay 1s
    assert clock.sleeps == [1.0, 2.0]


def test_retries_exhausted(setup) -> None:
    fake = FakeSession(lambda url, params: requests.ConnectionError("refused"))
    clock = setup["clock"]
    session = RateLimitedSession(fake, min_interval=0.0, sleep=clock.sleep, clock=clock)
    pytest.raises(RetryableError, lambda: session.get("https://api.example.com/x"))
    # first attempt plus five retries
    assert len(fake.calls) == 6
    assert clock.sleeps == [1.0, 2.0, 4.0, 8.0, 16.0]


def test_client_error_not_retried(setup) -> None:
    fake = FakeSession(lambda url, params: FakeResponse(404))
    clock = setup["clock"]
    session = RateLimitedSession(fake, min_interval=0.0, sleep=clock.sleep, clock=clock)
    assert session.get("https://api.example.com/x").status_code == 404
    assert len(fake.calls) == 1
    pytest.raises(RetryableError, lambda: session.get_json("https://api.example.com/x"))


def test_per_host_pacing(setup) -> None:
    fake = FakeSession(lambda url, params: FakeResponse(200, payload={"ok": True}))
    clock = setup["clock"]
    session = RateLimitedSession(fake, min_interval=1.0, sleep=clock.sleep, clock=clock)
    session.get("https://a.example.com/1")
    session.get("https://b.example.com/1")
    assert clock.sleeps == []
    session.get("https://a.example.com/2")
    assert clock.sleeps == [1.0]
    assert session.get_json("https://a.example.com/3") == {"ok": True}
    assert session.request_count == 4

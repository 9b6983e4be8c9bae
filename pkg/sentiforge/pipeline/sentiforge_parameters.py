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
    This module contains the sentiforge parameter structure and the tables of CLI/YAML parameters per command.
"""
from sentiforge.ingest.records import MAX_NEWS_RANK
from sentiforge.utils.helper import (DEFAULT_SEED, ENV_EXCHANGE_URL, ENV_FIXTURES_DIR, ENV_NEWS_URL,
                                     ENV_PUSHSHIFT_URL, ENV_SEED)


class SentiforgeParam:
    """
        sentiforge pipeline parameter structure.
    """

    def __init__(self, name: str, alias: str, label: str, description: str, param_type: type,
                 default_value: object, env_var: str = None) -> None:
        """
            SentiforgeParam constructor.

            Args:
                name: parameter name (key in the yaml configuration file and long option in the CLI).
                alias: short option used by the CLI (None when the parameter only has a long option).
                label: parameter label suitable for display.
                description: complete parameter description displayed in the helper.
                param_type: parameter type.
                default_value: parameter default value.
                env_var: environment variable consulted before the default value (optional).
        """
        self.name = name
        self.alias = alias
        self.label = label
        self.description = description
        self.param_type = param_type
        self.default_value = default_value
        self.env_var = env_var

    def __str__(self) -> str:
        return f"{self.name} {self.param_type.__name__} (default: {self.default_value})"

    def __repr__(self) -> str:
        return (f"SentiforgeParam(name=\"{self.name}\", alias=\"{self.alias}\", label=\"{self.label}\", "
                f"description=\"{self.description}\", param_type={self.param_type.__name__}, "
                f"default_value={self.default_value!r}, env_var={self.env_var!r})")


# Parameters shared by the three ingest commands
FETCH_SETTINGS = [
    SentiforgeParam("fixtures_dir", None, "Fixtures directory",
                    "Read recorded responses from this directory instead of the network", str, None,
                    ENV_FIXTURES_DIR),
    SentiforgeParam("min_interval", None, "Minimum request interval (s)",
                    "Minimum delay between two requests to the same host", float, 1.0),
    SentiforgeParam("max_retries", None, "Max retries", "Retries on HTTP 429/5xx or connection errors", int, 5),
]

PERIOD = [
    SentiforgeParam("start", "s", "Start", "First instant of the range (ISO-8601, UTC)", str, None),
    SentiforgeParam("end", "e", "End", "Last instant of the range (ISO-8601, UTC)", str, None),
]

OUTPUT_FILE = SentiforgeParam("out", "o", "Output file", "Output CSV path", str, None)
OUTPUT_DIR = SentiforgeParam("out_dir", "o", "Output directory", "Output directory path", str, None)

# Parameters of every command. Groups whose name starts with "REQUIRED" must be resolved to a value
sentiforge_pipeline_params = {
    "ingest news": {
        "REQUIRED": [SentiforgeParam("query", "q", "Query", "Search query, words joined by '+'", str, None),
                     *PERIOD, OUTPUT_FILE],
        "SETTINGS": [SentiforgeParam("news_url", None, "Search host", "Search engine host", str,
                                     "https://www.google.com", ENV_NEWS_URL),
                     SentiforgeParam("max_articles", None, "Articles per day", "Maximum articles kept per day",
                                     int, MAX_NEWS_RANK),
                     *FETCH_SETTINGS],
    },
    "ingest reddit": {
        "REQUIRED": [SentiforgeParam("subreddit", "r", "Subreddit", "Subreddit name without prefix", str, None),
                     SentiforgeParam("keyword", "k", "Keyword", "Search keyword", str, None),
                     *PERIOD, OUTPUT_FILE],
        "SETTINGS": [SentiforgeParam("pushshift_url", None, "Archive host", "Reddit archive host", str,
                                     "https://api.pushshift.io", ENV_PUSHSHIFT_URL),
                     SentiforgeParam("page_size", None, "Page size", "Submissions per archive request", int, 100),
                     *FETCH_SETTINGS],
    },
    "ingest klines": {
        "REQUIRED": [SentiforgeParam("pair", "p", "Pair", "Trading pair (BTCUSDT, LTCUSD or ETHUSD)", str, None),
                     *PERIOD, OUTPUT_FILE],
        "SETTINGS": [SentiforgeParam("exchange_url", None, "Exchange host", "Exchange REST host", str,
                                     "https://api.binance.com", ENV_EXCHANGE_URL),
                     *FETCH_SETTINGS],
    },
    "score news": {
        "REQUIRED": [SentiforgeParam("articles", "a", "Articles", "News CSV written by 'ingest news'", str, None),
                     OUTPUT_FILE],
        "SETTINGS": [SentiforgeParam("external", "x", "External scores",
                                     "key,value CSV of external scores (flair channel is 0.0 without it)",
                                     str, None)],
    },
    "score reddit": {
        "REQUIRED": [SentiforgeParam("posts", "i", "Posts", "Reddit CSV written by 'ingest reddit'", str, None),
                     OUTPUT_FILE],
        "SETTINGS": [SentiforgeParam("external", "x", "External scores",
                                     "key,value CSV of external scores (flair channel is 0.0 without it)",
                                     str, None)],
    },
    "fuse": {
        "REQUIRED": [SentiforgeParam("gnews", None, "News sentiment", "Daily news sentiment CSV", str, None),
                     SentiforgeParam("reddit", None, "Reddit sentiment", "Hourly reddit sentiment CSV", str, None),
                     SentiforgeParam("btc", None, "BTCUSDT bars", "BTCUSDT hourly OHLCV CSV", str, None),
                     SentiforgeParam("ltc", None, "LTCUSD bars", "LTCUSD hourly OHLCV CSV", str, None),
                     SentiforgeParam("eth", None, "ETHUSD bars", "ETHUSD hourly OHLCV CSV", str, None),
                     OUTPUT_DIR],
        "SETTINGS": [SentiforgeParam("max_gap_hours", None, "Max price gap (h)",
                                     "Longest price gap filled by linear interpolation", int, 2)],
    },
    "experiment list": {
        "SETTINGS": [SentiforgeParam("config", "c", "Experiment file",
                                     "YAML file whose 'experiments' entries override the built-in matrix",
                                     str, None)],
    },
    "experiment run": {
        "REQUIRED": [SentiforgeParam("merged", "m", "Merged table", "merged.csv written by 'fuse'", str, None),
                     OUTPUT_DIR],
        "SETTINGS": [
            SentiforgeParam("id", None, "Experiment ids", "Experiment id to run (repeatable)", list, None),
            SentiforgeParam("all", None, "All experiments", "Run every experiment of the matrix", bool, False),
            SentiforgeParam("config", "c", "Experiment file",
                            "YAML file holding run settings and/or an 'experiments' list", str, None),
            SentiforgeParam("lookback_hours", None, "Look-back (h)",
                            "Replace every experiment look-back window", int, None),
            SentiforgeParam("epochs", None, "Epochs", "Replace every experiment epoch count", int, None),
            SentiforgeParam("stride", None, "Stride", "Step between two window starts", int, 1),
            SentiforgeParam("max_rows", None, "Max rows", "Keep only the most recent rows of the table", int, None),
            SentiforgeParam("train_fraction", None, "Train fraction", "Share of windows used for training",
                            float, 0.8),
            SentiforgeParam("learning_rate", None, "Learning rate", "Adam learning rate", float, 1e-3),
            SentiforgeParam("parallel", "j", "Parallel experiments", "Experiments run concurrently", int, 1),
            SentiforgeParam("seed", None, "Seed", "Seed of weight init and shuffling", int, DEFAULT_SEED,
                            ENV_SEED),
            SentiforgeParam("record_timing", None, "Record timing",
                            "Write wall times to summary.csv (reruns are then not byte-identical)", bool, True),
            SentiforgeParam("plots", None, "Plots", "Write the prediction plots", bool, True),
        ],
    },
    "report": {
        "REQUIRED": [SentiforgeParam("runs_dir", None, "Runs directory",
                                     "Directory holding the experiment_<id> run directories", str, None),
                     OUTPUT_DIR],
        "SETTINGS": [SentiforgeParam("plots", None, "Plots", "Write the prediction plots", bool, True)],
    },
}


def command_params(command: str) -> list:
    """
        Every parameter of a command, all groups included.
    """
    return [param for group in sentiforge_pipeline_params[command].values() for param in group]

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
    This module is the sentiforge command line entry point: one sub-command per pipeline stage
    (ingest, score, fuse, experiment, report).
"""
import os
import sys
import logging
import argparse
from datetime import datetime
from typing import List, Sequence
import argcomplete
from yaml import YAMLError
from sentiforge._version import __version__
from sentiforge.pipeline.sentiforge_parameters import command_params, sentiforge_pipeline_params
from sentiforge.utils.config_parser import ConfigParser
from sentiforge.utils.exceptions import ConfigError, DataError, DivergenceError, RetryableError, SentiforgeError
from sentiforge.utils.helper import ISO_FORMAT, ensure_dir, env_value, format_utc, iter_days, to_utc
from sentiforge.utils.sentiforge_logger import SentiforgeLogger, Runtime

from sentiforge.ingest.http_client import RateLimitedSession
from sentiforge.ingest.kline_fetcher import KlineFetcher
from sentiforge.ingest.news_fetcher import NewsFetcher
from sentiforge.ingest.records import NewsArticle, OhlcvBar, RedditPost, check_pair
from sentiforge.ingest.reddit_fetcher import RedditFetcher
from sentiforge.ingest.storage import load, persist, write_csv
from sentiforge.sentiment.aggregation import SentimentAnalyzer, score_news, score_reddit
from sentiforge.sentiment.external_scorer import ExternalScoreStore
from sentiforge.sentiment.sentiment_tables import (read_news_table, read_reddit_table, write_hourly_table,
                                                   write_news_table, write_reddit_table)
from sentiforge.fusion.merger import expand_daily_to_hourly, merge_all, read_merged, write_fills, write_merged
from sentiforge.runner.experiment_matrix import builtin_matrix, load_matrix, select_configs
from sentiforge.runner.experiment_runner import RunOverrides, run_experiments, save_run
from sentiforge.runner.report import emit_report, rebuild_report

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_DIVERGENCE = 4

GAPS_COLUMNS = ("timestamp",)


def _coerce(param, value: object, source: str) -> object:
    if value is None:
        return None
    try:
        if param.param_type is bool:
            if isinstance(value, bool):
                return value
            if isinstance(value, str) and value.lower() in ("true", "false"):
                return value.lower() == "true"
            raise ValueError(value)
        if param.param_type is list:
            values = value if isinstance(value, (list, tuple)) else [value]
            return [int(v) for v in values]
        if param.param_type is int and isinstance(value, float) and not value.is_integer():
            raise ValueError(value)
        return param.param_type(value)
    except (TypeError, ValueError) as e:
        raise ConfigError("Invalid {} value for '{}' ({}): {!r}".format(param.param_type.__name__, param.name,
                                                                       source, value)) from e


def retrieve_params(command: str, config_path: str = None, **kwargs) -> dict:
    """
        Resolve the parameters of a command. For each parameter the first available value wins:
        keyword argument (CLI or Python API), YAML configuration file, environment variable, default value.

        Args:
            command: command name, a key of sentiforge_pipeline_params (e.g. "experiment run").
            config_path: YAML configuration file (optional).
            **kwargs: explicit parameter values, None means "not provided".

        Returns:
            the resolved parameters. Unknown YAML keys are listed under "ignored_params".

        Raises:
            ConfigError: unknown command, unreadable configuration file, invalid value or missing required parameter.
    """
    if command not in sentiforge_pipeline_params:
        raise ConfigError("Unknown command '{}', expected one of {}".format(command,
                                                                           sorted(sentiforge_pipeline_params)))
    file_params = {}
    if config_path:
        try:
            file_params, _ = ConfigParser(False).read_sections(config_path)
        except (FileNotFoundError, YAMLError, ValueError) as e:
            raise ConfigError("Cannot read the configuration file '{}': {}".format(config_path, e)) from e

    params = {}
    for param in command_params(command):
        if kwargs.get(param.name) is not None:
            params[param.name] = _coerce(param, kwargs[param.name], "argument")
        elif file_params.get(param.name) is not None:
            params[param.name] = _coerce(param, file_params[param.name], config_path)
        elif param.env_var and env_value(param.env_var) is not None:
            params[param.name] = _coerce(param, env_value(param.env_var), param.env_var)
        else:
            params[param.name] = param.default_value
    if "config" in params and params["config"] is None:
        params["config"] = config_path

    for group_name, group in sentiforge_pipeline_params[command].items():
        if group_name.startswith("REQUIRED"):
            for param in group:
                if params[param.name] is None:
                    raise ConfigError("No {} provided for '{}'. Expected: --{} <{}> or '{}' in the configuration "
                                      "file".format(param.label.lower(), command, param.name.replace("_", "-"),
                                                    param.param_type.__name__, param.name))

    known = {param.name for param in command_params(command)}
    ignored_params = set(file_params).difference(known)
    if ignored_params:
        params["ignored_params"] = ignored_params
    return params


def _start_logger(params: dict, output: str) -> None:
    """
        Create the logger, with a log file in the output directory when there is one, and log the parameters.
    """
    log_path = None
    if output is not None:
        log_dir = ensure_dir(output)
        log_path = os.path.join(log_dir, "sentiforge_" + datetime.now().strftime("%Y-%m-%dT%H:%M:%S") + ".log")
    SentiforgeLogger.getInstance(logger_file_path=log_path)
    SentiforgeLogger.log("sentiforge input parameters: \n" + "".join(
        "\t- {}: {}\n".format(key, value) for key, value in params.items()), logging.DEBUG)
    if "ignored_params" in params:
        SentiforgeLogger.log("The following input parameters are ignored: {}. \nPlease refer to the documentation "
                             "for the list of valid parameters.".format(", ".join(sorted(params["ignored_params"]))),
                             logging.WARNING)


def _file_dir(path: str) -> str:
    return os.path.dirname(os.path.abspath(path))


def _sibling(path: str, suffix: str) -> str:
    """
        <dir>/<stem><suffix>, e.g. btc.csv -> btc.gaps.csv.
    """
    return os.path.splitext(path)[0] + suffix


def _period(params: dict) -> tuple:
    try:
        start, end = to_utc(params["start"]), to_utc(params["end"])
    except (TypeError, ValueError) as e:
        raise ConfigError("Invalid period [{}, {}]: {}".format(params["start"], params["end"], e)) from e
    if end < start:
        raise ConfigError("Reversed period: {} > {}".format(format_utc(start), format_utc(end)))
    return start, end


def _session(params: dict) -> RateLimitedSession:
    if params["min_interval"] < 0 or params["max_retries"] < 0:
        raise ConfigError("min_interval and max_retries must not be negative")
    return RateLimitedSession(min_interval=params["min_interval"], max_retries=params["max_retries"])


@Runtime
def ingest_news(config_path: str = None, **kwargs) -> List[NewsArticle]:
    """
        Collect the news articles of every day of the period and persist them.
    """
    params = retrieve_params("ingest news", config_path, **kwargs)
    _start_logger(params, _file_dir(params["out"]))
    start, end = _period(params)
    fetcher = NewsFetcher(session=_session(params), base_url=params["news_url"],
                          fixtures_dir=params["fixtures_dir"], max_articles=params["max_articles"])
    articles = []
    for day in iter_days(start, end):
        articles.extend(fetcher.fetch(params["query"], day))
    persist(articles, params["out"], NewsArticle)
    SentiforgeLogger.log("{} article(s) written to {} ({} skipped)".format(len(articles), params["out"],
                                                                           fetcher.skipped), logging.INFO)
    return articles


@Runtime
def ingest_reddit(config_path: str = None, **kwargs) -> List[RedditPost]:
    """
        Collect the submissions of a subreddit matching a keyword and persist them.
    """
    params = retrieve_params("ingest reddit", config_path, **kwargs)
    _start_logger(params, _file_dir(params["out"]))
    start, end = _period(params)
    if params["page_size"] < 1:
        raise ConfigError("page_size must be positive, got {}".format(params["page_size"]))
    fetcher = RedditFetcher(session=_session(params), base_url=params["pushshift_url"],
                            fixtures_dir=params["fixtures_dir"], page_size=params["page_size"])
    posts = fetcher.fetch(params["subreddit"], params["keyword"], start, end)
    persist(posts, params["out"], RedditPost)
    return posts


@Runtime
def ingest_klines(config_path: str = None, **kwargs) -> List[OhlcvBar]:
    """
        Collect the hourly bars of a pair, persist them and write the missing hours to <out stem>.gaps.csv.
    """
    params = retrieve_params("ingest klines", config_path, **kwargs)
    _start_logger(params, _file_dir(params["out"]))
    check_pair(params["pair"])
    start, end = _period(params)
    fetcher = KlineFetcher(session=_session(params), base_url=params["exchange_url"],
                           fixtures_dir=params["fixtures_dir"])
    bars = fetcher.fetch(params["pair"], start, end)
    persist(bars, params["out"], OhlcvBar)
    write_csv([[gap.strftime(ISO_FORMAT)] for gap in fetcher.gaps], GAPS_COLUMNS, _sibling(params["out"], ".gaps.csv"))
    return bars


def _analyzer(params: dict) -> SentimentAnalyzer:
    external = ExternalScoreStore.from_csv(params["external"]) if params["external"] else None
    return SentimentAnalyzer(external=external)


@Runtime
def score_news_articles(config_path: str = None, **kwargs) -> None:
    """
        Score the ingested articles and write the daily news sentiment table.
    """
    params = retrieve_params("score news", config_path, **kwargs)
    _start_logger(params, _file_dir(params["out"]))
    analyzer = _analyzer(params)
    scores = score_news(load(params["articles"], NewsArticle), analyzer, progress=True)
    write_news_table(scores.daily, params["out"])
    if analyzer.external is not None and analyzer.external.missing:
        SentiforgeLogger.log("{} article(s) without external score".format(analyzer.external.missing),
                             logging.WARNING)
    SentiforgeLogger.log("{} day(s) scored, {} without article".format(len(scores.daily), len(scores.empty_days)),
                         logging.INFO)


@Runtime
def score_reddit_posts(config_path: str = None, **kwargs) -> None:
    """
        Score the ingested posts. The hourly table goes to --out, the per-post table to <out stem>.posts.csv
        and the zero-filled hours to <out stem>.empty.csv.
    """
    params = retrieve_params("score reddit", config_path, **kwargs)
    _start_logger(params, _file_dir(params["out"]))
    analyzer = _analyzer(params)
    scores = score_reddit(load(params["posts"], RedditPost), analyzer, progress=True)
    write_reddit_table(scores.posts, _sibling(params["out"], ".posts.csv"))
    write_hourly_table(scores.hourly, params["out"], _sibling(params["out"], ".empty.csv"))
    if analyzer.external is not None and analyzer.external.missing:
        SentiforgeLogger.log("{} post(s) without external score".format(analyzer.external.missing), logging.WARNING)
    SentiforgeLogger.log("{} post(s) scored into {} hour(s), {} empty".format(
        len(scores.posts), len(scores.hourly), sum(b.empty for b in scores.hourly)), logging.INFO)


@Runtime
def fuse(config_path: str = None, **kwargs) -> str:
    """
        Merge the sentiment tables and the three price series into <out_dir>/merged.csv
        (filled cells in <out_dir>/merged.fills.csv).

        Returns:
            the merged table path.
    """
    params = retrieve_params("fuse", config_path, **kwargs)
    _start_logger(params, params["out_dir"])
    if params["max_gap_hours"] < 0:
        raise ConfigError("max_gap_hours must not be negative, got {}".format(params["max_gap_hours"]))
    gnews = expand_daily_to_hourly(read_news_table(params["gnews"]))
    reddit = read_reddit_table(params["reddit"])
    btc, ltc, eth = (load(params[key], OhlcvBar, pair=pair)
                     for key, pair in (("btc", "BTCUSDT"), ("ltc", "LTCUSD"), ("eth", "ETHUSD")))
    result = merge_all(gnews, reddit, btc, ltc, eth, max_gap_hours=params["max_gap_hours"])
    merged_path = os.path.join(params["out_dir"], "merged.csv")
    write_merged(result.table, merged_path)
    write_fills(result.fills, os.path.join(params["out_dir"], "merged.fills.csv"))
    return merged_path


def _experiment_matrix(config_path: str) -> list:
    if config_path:
        _, experiments = ConfigParser(False).read_sections(config_path)
        if experiments is not None:
            return load_matrix(config_path)
    return builtin_matrix()


def list_experiments(config_path: str = None, **kwargs) -> List[str]:
    """
        Describe the experiment matrix, one line per experiment.

        Returns:
            the printed lines.
    """
    params = retrieve_params("experiment list", config_path, **kwargs)
    _start_logger(params, None)
    lines = ["{:>3}  {:<12} {:>3}d {:>4}u  notes={:<8} features={}".format(
        c.id, c.architecture, c.lookback_days, c.units, ",".join(str(n) for n in c.notes) or "-", ",".join(c.features))
        for c in _experiment_matrix(params["config"])]
    for line in lines:
        print(line)
    return lines


@Runtime
def run(config_path: str = None, **kwargs) -> list:
    """
        Run the selected experiments on a merged table, save every run and emit the report.

        Returns:
            the experiment results sorted by id.
    """
    params = retrieve_params("experiment run", config_path, **kwargs)
    _start_logger(params, params["out_dir"])
    if bool(params["id"]) == bool(params["all"]):
        raise ConfigError("Select the experiments with either --id N (repeatable) or --all")
    configs = _experiment_matrix(params["config"])
    if not params["all"]:
        configs = select_configs(configs, params["id"])

    overrides = RunOverrides(lookback_hours=params["lookback_hours"], epochs=params["epochs"],
                             stride=params["stride"], max_rows=params["max_rows"],
                             learning_rate=params["learning_rate"], train_fraction=params["train_fraction"])
    table = read_merged(params["merged"])
    results = run_experiments(configs, table, overrides, parallel=params["parallel"], seed=params["seed"],
                              progress=True)
    for result in results:
        save_run(result, params["out_dir"], record_timing=params["record_timing"])
    emit_report(results, params["out_dir"], record_timing=params["record_timing"], plots=params["plots"])
    return results


@Runtime
def report(config_path: str = None, **kwargs) -> List[str]:
    """
        Rebuild summary.csv, reference_results.csv and the plots from stored run directories.
    """
    params = retrieve_params("report", config_path, **kwargs)
    _start_logger(params, params["out_dir"])
    return rebuild_report(params["runs_dir"], params["out_dir"], plots=params["plots"])


# (command, sub-command) -> stage function
COMMANDS = {
    "ingest news": ingest_news,
    "ingest reddit": ingest_reddit,
    "ingest klines": ingest_klines,
    "score news": score_news_articles,
    "score reddit": score_reddit_posts,
    "fuse": fuse,
    "experiment list": list_experiments,
    "experiment run": run,
    "report": report,
}

HELP = {
    "ingest": "Collect raw data",
    "score": "Compute the sentiment tables",
    "fuse": "Build the hourly merged table",
    "experiment": "List or run the forecasting experiments",
    "report": "Rebuild the report from stored runs",
}


def _add_params(parser: argparse.ArgumentParser, command: str) -> None:
    names = {param.name for param in command_params(command)}
    if "config" not in names:
        parser.add_argument("-c", "--config", type=str, metavar="VALUE", default=None,
                            help="YAML file with the command parameters")
    for group_name, list_params in sentiforge_pipeline_params[command].items():
        group = parser.add_argument_group(description=f"*** {group_name} ***")
        for param in list_params:
            flags = ([f"-{param.alias}"] if param.alias else []) + [f"--{param.name.replace('_', '-')}"]
            if param.param_type is bool:
                if param.default_value:
                    group.add_argument(f"--no-{param.name.replace('_', '-')}", dest=param.name,
                                       action="store_false", default=None, help="Disable: " + param.description)
                else:
                    group.add_argument(*flags, dest=param.name, action="store_true", default=None,
                                       help=param.description)
            elif param.param_type is list:
                group.add_argument(*flags, dest=param.name, type=int, metavar="N", action="append", default=None,
                                   help=param.description)
            else:
                # None defaults so that the YAML file and the environment are consulted
                group.add_argument(*flags, dest=param.name, type=param.param_type, metavar="VALUE", default=None,
                                   help="{} (default: {})".format(param.description, param.default_value))


def get_parser() -> argparse.ArgumentParser:
    """
    Argument parser for sentiforge (CLI).

    Returns:
        the parser.
    """
    parser = argparse.ArgumentParser(prog="sentiforge",
                                     description="sentiforge: sentiment-augmented cryptocurrency price forecasting")
    parser.add_argument("-v", "--version", action="version", version="%(prog)s {version}".format(version=__version__))
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    nested = {}
    for key in COMMANDS:
        name, _, sub = key.partition(" ")
        if not sub:
            leaf = commands.add_parser(name, help=HELP[name])
        else:
            if name not in nested:
                nested[name] = commands.add_parser(name, help=HELP[name]).add_subparsers(dest="sub_command",
                                                                                        metavar="SUB_COMMAND")
                nested[name].required = True
            leaf = nested[name].add_parser(sub)
        leaf.set_defaults(command_key=key)
        _add_params(leaf, key)
    return parser


def main(argv: Sequence[str] = None) -> int:
    """
        Parse the arguments, run the command and map the errors to exit codes:
        0 success, 2 configuration error, 3 data or network error, 4 training divergence.
    """
    parser = get_parser()
    argcomplete.autocomplete(parser)
    try:
        args = vars(parser.parse_args(argv))
    except SystemExit as e:
        return EXIT_CONFIG if e.code not in (0, None) else EXIT_OK

    key = args.pop("command_key")
    args.pop("command")
    args.pop("sub_command", None)
    config_path = args.pop("config", None)
    try:
        COMMANDS[key](config_path, **args)
    except ConfigError as e:
        SentiforgeLogger.log("Configuration error: {}".format(e), logging.ERROR)
        print("sentiforge: configuration error: {}".format(e), file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, RetryableError, FileNotFoundError) as e:
        SentiforgeLogger.log("Data error: {}".format(e), logging.ERROR)
        print("sentiforge: data error: {}".format(e), file=sys.stderr)
        return EXIT_DATA
    except DivergenceError as e:
        SentiforgeLogger.log("Training diverged: {}".format(e), logging.ERROR)
        print("sentiforge: training diverged: {}".format(e), file=sys.stderr)
        return EXIT_DIVERGENCE
    except SentiforgeError as e:
        SentiforgeLogger.log(str(e), logging.ERROR)
        print("sentiforge: {}".format(e), file=sys.stderr)
        return 1
    return EXIT_OK


def sentiforge_cli() -> None:
    """
        Call the sentiforge command line.
    """
    sys.exit(main())


if __name__ == "__main__":
    sentiforge_cli()

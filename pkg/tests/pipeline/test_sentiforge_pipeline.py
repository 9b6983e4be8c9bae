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
Test module for sentiforge/pipeline/sentiforge_pipeline.py
"""
import filecmp
import glob
import os
from datetime import datetime, timedelta, timezone
from pathlib import Path
import pytest

from sentiforge.dataset.synthetic import random_walk_table
from sentiforge.fusion.merger import FILL_COLUMNS, read_merged, write_merged
from sentiforge.ingest import storage
from sentiforge.ingest.reddit_fetcher import fetch_reddit_posts
from sentiforge.pipeline import sentiforge_pipeline as pipeline
from sentiforge.pipeline.sentiforge_parameters import command_params, sentiforge_pipeline_params
from sentiforge.runner.experiment_matrix import ExperimentConfig, builtin_matrix, dump_matrix, select_configs
from sentiforge.runner.experiment_runner import RunOverrides, run_experiments
from sentiforge.runner.report import SUMMARY_FILE, emit_report
from sentiforge.sentiment.aggregation import SentimentAnalyzer, score_news, score_reddit
from sentiforge.sentiment.external_scorer import ExternalScoreStore
from sentiforge.sentiment.sentiment_tables import read_news_table, read_reddit_table
from sentiforge.utils.exceptions import ConfigError, DivergenceError

TESTS = Path(__file__).parent.parent
START = datetime(2018, 1, 1, tzinfo=timezone.utc)


def read_text(path) -> str:
    with open(path, encoding="utf-8") as stream:
        return stream.read()


def write_yaml(path, text: str) -> str:
    with open(path, "w", encoding="utf-8") as stream:
        stream.write(text)
    return str(path)


@pytest.fixture
def setup(tmp_path, monkeypatch) -> None:
    """
        Provides the ingest/sentiment/fusion fixtures and a clean environment.
    """
    for name in ("SENTIFORGE_FIXTURES_DIR", "SENTIFORGE_SEED", "SENTIFORGE_EXCHANGE_URL",
                 "SENTIFORGE_PUSHSHIFT_URL", "SENTIFORGE_NEWS_URL"):
        monkeypatch.delenv(name, raising=False)
    yield {"ingest": TESTS / "ingest" / "data", "sentiment": TESTS / "sentiment" / "data",
           "fusion": TESTS / "fusion" / "data", "out": tmp_path}


def test_parameter_table() -> None:
    assert set(pipeline.COMMANDS) == set(sentiforge_pipeline_params)
    for command in sentiforge_pipeline_params:
        names = [param.name for param in command_params(command)]
        assert len(names) == len(set(names)), command
    seed = next(p for p in command_params("experiment run") if p.name == "seed")
    assert (seed.default_value, seed.env_var) == (42, "SENTIFORGE_SEED")
    assert "name=\"seed\"" in repr(seed)
    assert str(seed) == "seed int (default: 42)"


def test_resolution_order(setup, monkeypatch) -> None:
    path = write_yaml(setup["out"] / "run.yaml", "epochs: 3\nstride: 2\nparallel: 2\nunknown_key: 1\n")
    monkeypatch.setenv("SENTIFORGE_SEED", "7")
    params = pipeline.retrieve_params("experiment run", path, merged="m.csv", out_dir="out", epochs=5)
    assert params["epochs"] == 5
    assert params["stride"] == 2
    assert params["parallel"] == 2
    assert params["seed"] == 7
    assert params["train_fraction"] == 0.8
    assert params["record_timing"] is True
    assert params["config"] == path
    assert params["ignored_params"] == {"unknown_key"}

    path = write_yaml(setup["out"] / "seeded.yaml", "seed: 9\nmerged: from_file.csv\nexperiments: []\n")
    params = pipeline.retrieve_params("experiment run", path, out_dir="out")
    assert (params["seed"], params["merged"]) == (9, "from_file.csv")
    assert "ignored_params" not in params

    monkeypatch.delenv("SENTIFORGE_SEED")
    assert pipeline.retrieve_params("experiment run", None, merged="m", out_dir="o")["seed"] == 42


def test_resolution_errors(setup, monkeypatch) -> None:
    pytest.raises(ConfigError, lambda: pipeline.retrieve_params("experiment run", None, merged="m.csv"))
    pytest.raises(ConfigError, lambda: pipeline.retrieve_params("train", None))
    pytest.raises(ConfigError, lambda: pipeline.retrieve_params("fuse", str(setup["out"] / "missing.yaml")))
    pytest.raises(ConfigError, lambda: pipeline.retrieve_params("fuse", str(setup["out"] / "fuse.txt")))

    path = write_yaml(setup["out"] / "bad.yaml", "epochs: many\n")
    with pytest.raises(ConfigError, match="epochs"):
        pipeline.retrieve_params("experiment run", path, merged="m", out_dir="o")
    path = write_yaml(setup["out"] / "fraction.yaml", "stride: 1.5\n")
    pytest.raises(ConfigError, lambda: pipeline.retrieve_params("experiment run", path, merged="m", out_dir="o"))

    monkeypatch.setenv("SENTIFORGE_SEED", "forty-two")
    with pytest.raises(ConfigError, match="SENTIFORGE_SEED"):
        pipeline.retrieve_params("experiment run", None, merged="m", out_dir="o")


def test_parser() -> None:
    parser = pipeline.get_parser()
    args = parser.parse_args(["experiment", "run", "--id", "4", "--id", "5", "-m", "merged.csv", "-o", "out",
                              "--no-plots", "--lookback-hours", "48"])
    assert args.command_key == "experiment run"
    assert args.id == [4, 5]
    assert args.plots is False
    assert args.record_timing is None
    assert args.lookback_hours == 48
    assert args.epochs is None

    args = parser.parse_args(["ingest", "klines", "-p", "BTCUSDT", "-s", "2018-01-01", "-e", "2018-01-02",
                              "-o", "btc.csv", "--fixtures-dir", "fx"])
    assert (args.command_key, args.pair, args.fixtures_dir) == ("ingest klines", "BTCUSDT", "fx")


def test_usage_errors(capsys) -> None:
    assert pipeline.main([]) == pipeline.EXIT_CONFIG
    assert pipeline.main(["ingest"]) == pipeline.EXIT_CONFIG
    assert pipeline.main(["experiment", "run", "--epochs", "two"]) == pipeline.EXIT_CONFIG
    assert pipeline.main(["--version"]) == pipeline.EXIT_OK
    assert "sentiforge" in capsys.readouterr().out


def test_ingest_klines(setup) -> None:
    out = setup["out"] / "bars" / "btc.csv"
    code = pipeline.main(["ingest", "klines", "-p", "BTCUSDT", "-s", "2018-01-01T00:00:00Z",
                          "-e", "2018-01-02T00:00:00Z", "-o", str(out), "--fixtures-dir", str(setup["ingest"] / "gap")])
    assert code == pipeline.EXIT_OK
    assert len(storage.load(str(out))) == 23
    assert read_text(setup["out"] / "bars" / "btc.gaps.csv") == "timestamp\n2018-01-01T05:00:00Z\n"
    assert len(glob.glob(str(setup["out"] / "bars" / "sentiforge_*.log"))) == 1

    assert pipeline.main(["ingest", "klines", "-p", "DOGEUSD", "-s", "2018-01-01", "-e", "2018-01-02",
                          "-o", str(out)]) == pipeline.EXIT_CONFIG
    assert pipeline.main(["ingest", "klines", "-p", "BTCUSDT", "-s", "2018-01-02", "-e", "2018-01-01",
                          "-o", str(out)]) == pipeline.EXIT_CONFIG


def test_ingest_news(setup, monkeypatch) -> None:
    monkeypatch.setenv("SENTIFORGE_FIXTURES_DIR", str(setup["ingest"]))
    out = setup["out"] / "news.csv"
    assert pipeline.main(["ingest", "news", "-q", "bitcoin cryptocurrency", "-s", "2018-01-01",
                          "-e", "2018-01-03", "-o", str(out)]) == pipeline.EXIT_OK
    expected = []
    for name in ("2018-01-01.csv", "2018-01-02.csv", "2018-01-03.csv"):
        expected += storage.load(str(setup["ingest"] / "news" / name))
    assert storage.load(str(out)) == expected


def test_ingest_reddit(setup, monkeypatch) -> None:
    monkeypatch.setenv("SENTIFORGE_FIXTURES_DIR", str(setup["ingest"]))
    out = setup["out"] / "reddit.csv"
    assert pipeline.main(["ingest", "reddit", "-r", "Bitcoin", "-k", "Bitcoin", "-s", "2018-01-01T00:00:00Z",
                          "-e", "2018-01-02T00:00:00Z", "-o", str(out)]) == pipeline.EXIT_OK
    expected = fetch_reddit_posts("Bitcoin", "Bitcoin", START, START + timedelta(days=1),
                                  fixtures_dir=str(setup["ingest"]))
    assert expected
    assert storage.load(str(out)) == expected


def test_score_news(setup) -> None:
    articles = str(setup["ingest"] / "news" / "2018-01-01.csv")
    store = str(setup["sentiment"] / "flair_scores.csv")
    out = setup["out"] / "gnews.csv"
    assert pipeline.main(["score", "news", "-a", articles, "-x", store, "-o", str(out)]) == pipeline.EXIT_OK

    analyzer = SentimentAnalyzer(external=ExternalScoreStore.from_csv(store))
    expected = score_news(storage.load(articles), analyzer).daily
    assert read_news_table(str(out)) == [(day, vector) for day, vector in expected]

    assert pipeline.main(["score", "news", "-a", str(setup["out"] / "none.csv"),
                          "-o", str(out)]) == pipeline.EXIT_DATA


def test_score_reddit(setup) -> None:
    posts_path = str(setup["out"] / "posts.csv")
    posts = fetch_reddit_posts("Bitcoin", "Bitcoin", START, START + timedelta(days=1),
                               fixtures_dir=str(setup["ingest"]))
    storage.persist(posts, posts_path)
    out = setup["out"] / "reddit_hourly.csv"
    assert pipeline.main(["score", "reddit", "-i", posts_path, "-o", str(out)]) == pipeline.EXIT_OK

    scores = score_reddit(posts, SentimentAnalyzer())
    hourly = read_reddit_table(str(out))
    assert [hour for hour, _ in hourly] == [bucket.hour for bucket in scores.hourly]
    assert len(read_reddit_table(str(setup["out"] / "reddit_hourly.posts.csv"))) == len(posts)
    empty = read_text(setup["out"] / "reddit_hourly.empty.csv").splitlines()
    assert len(empty) == 1 + sum(bucket.empty for bucket in scores.hourly)


def test_fuse(setup) -> None:
    data = setup["fusion"]
    out_dir = setup["out"] / "fused"
    args = ["fuse", "--gnews", str(data / "gnews.csv"), "--reddit", str(data / "reddit.csv"),
            "--btc", str(data / "klines" / "BTCUSDT.csv"), "--ltc", str(data / "klines" / "LTCUSD.csv"),
            "--eth", str(data / "klines" / "ETHUSD.csv"), "-o", str(out_dir)]
    assert pipeline.main(args) == pipeline.EXIT_OK
    assert filecmp.cmp(out_dir / "merged.csv", data / "merged_expected.csv", shallow=False)
    assert read_text(out_dir / "merged.fills.csv") == ",".join(FILL_COLUMNS) + "\n"

    config = write_yaml(setup["out"] / "fuse.yaml", "max_gap_hours: -1\n")
    assert pipeline.main(args + ["-c", config]) == pipeline.EXIT_CONFIG


def test_experiment_list(setup, capsys) -> None:
    assert pipeline.main(["experiment", "list"]) == pipeline.EXIT_OK
    lines = [line for line in capsys.readouterr().out.splitlines() if line.split() and line.split()[0].isdigit()]
    assert len(lines) == 17
    assert lines[0].split()[0] == "1"

    extra = builtin_matrix()[3].to_dict()
    extra["id"] = 42
    path = str(setup["out"] / "matrix.yaml")
    dump_matrix([ExperimentConfig.from_dict(extra)], path)
    assert pipeline.main(["experiment", "list", "-c", path]) == pipeline.EXIT_OK
    lines = [line for line in capsys.readouterr().out.splitlines() if line.split() and line.split()[0].isdigit()]
    assert len(lines) == 18
    assert lines[-1].split()[0] == "42"


@pytest.fixture
def merged(setup) -> str:
    path = str(setup["out"] / "merged.csv")
    write_merged(random_walk_table(400, seed=1), path)
    return path


def test_experiment_run_and_report(setup, merged) -> None:
    out_dir = setup["out"] / "runs"
    code = pipeline.main(["experiment", "run", "--id", "5", "--id", "11", "-m", merged, "-o", str(out_dir),
                          "--lookback-hours", "12", "--epochs", "1", "--no-record-timing", "--no-plots"])
    assert code == pipeline.EXIT_OK
    for name in ("result.json", "history.csv", "model.sfnn", "model.sfnn.json", "predictions.csv"):
        assert (out_dir / "experiment_5" / name).is_file()
    assert len(glob.glob(str(out_dir / "sentiforge_*.log"))) == 1

    expected_dir = setup["out"] / "expected"
    results = run_experiments(select_configs(builtin_matrix(), [5, 11]), read_merged(merged),
                              RunOverrides(lookback_hours=12, epochs=1))
    emit_report(results, str(expected_dir), record_timing=False, plots=False)
    assert read_text(out_dir / SUMMARY_FILE) == read_text(expected_dir / SUMMARY_FILE)

    rebuilt = setup["out"] / "rebuilt"
    assert pipeline.main(["report", "--runs-dir", str(out_dir), "-o", str(rebuilt), "--no-plots"]) == pipeline.EXIT_OK
    assert read_text(rebuilt / SUMMARY_FILE) == read_text(expected_dir / SUMMARY_FILE)
    assert not os.path.exists(rebuilt / "experiment_5" / "predictions.svg")


def test_experiment_run_errors(setup, merged, monkeypatch) -> None:
    out_dir = str(setup["out"] / "runs")
    base = ["experiment", "run", "-m", merged, "-o", out_dir, "--lookback-hours", "12", "--epochs", "1"]
    assert pipeline.main(base) == pipeline.EXIT_CONFIG
    assert pipeline.main(base + ["--id", "5", "--all"]) == pipeline.EXIT_CONFIG
    assert pipeline.main(base + ["--id", "99"]) == pipeline.EXIT_CONFIG
    assert pipeline.main(base + ["--id", "5", "--parallel", "0"]) == pipeline.EXIT_CONFIG

    missing = ["experiment", "run", "--id", "5", "-m", str(setup["out"] / "nowhere.csv"), "-o", out_dir]
    assert pipeline.main(missing) == pipeline.EXIT_DATA

    short = str(setup["out"] / "short.csv")
    write_merged(random_walk_table(30, seed=1), short)
    assert pipeline.main(["experiment", "run", "--id", "5", "-m", short, "-o", out_dir,
                          "--lookback-hours", "48"]) == pipeline.EXIT_DATA

    def diverge(*args, **kwargs):
        raise DivergenceError("Training diverged at epoch 1, batch 1: loss nan")

    monkeypatch.setattr(pipeline, "run_experiments", diverge)
    assert pipeline.main(base + ["--id", "5"]) == pipeline.EXIT_DIVERGENCE


def test_configuration_templates(setup) -> None:
    conf = TESTS.parent / "conf"
    params = pipeline.retrieve_params("experiment run", str(conf / "configuration_template.yaml"))
    assert "ignored_params" not in params
    assert (params["all"], params["parallel"], params["seed"], params["lookback_hours"]) == (True, 4, 42, None)
    assert len(pipeline._experiment_matrix(params["config"])) == 18

    params = pipeline.retrieve_params("experiment run", str(conf / "basic_conf_template.yaml"), parallel=2)
    assert (params["id"], params["parallel"], params["all"]) == ([1, 5, 17], 2, False)
    assert len(pipeline._experiment_matrix(params["config"])) == 17

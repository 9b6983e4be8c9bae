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
Test module for sentiforge/runner/experiment_matrix.py
"""
import os
import pytest
import yaml

from sentiforge.dataset.feature_mask import SELECTABLE_FEATURES
from sentiforge.runner import experiment_matrix as em
from sentiforge.runner.experiment_matrix import ExperimentConfig
from sentiforge.utils.exceptions import ConfigError

# x-marks of the published experiment tables, one string per feature, experiments 1 to 17
MARKS = {
    "open_BTCUSDT": "...xxx.....xxxx.x",
    "high_BTCUSDT": "...xxx.....xxxx.x",
    "low_BTCUSDT": "...xxx.....xxxx.x",
    "close_BTCUSDT": "xxxxxxxxxxxxxxxxx",
    "volume_BTCUSDT": "xxxxxxxxxxxxxxxxx",
    "close_LTCUSD": "xxxx.xxxxxxxxxxxx",
    "volume_LTCUSD": "xxxx.xxxxxxxxxxxx",
    "close_ETHUSD": "xxxx.xxxxxxxxxxxx",
    "volume_ETHUSD": "xxxx.xxxxxxxxxxxx",
    "gnews_flair": "xxxx..x.x..xxxxxx",
    "gnews_tb_polarity": "xxxx..x..x.xxxx.x",
    "gnews_tb_subjectivity": "xxxx..x..x.xxxx.x",
    "gnews_sid_pos": "xxxx..x...xxxxx.x",
    "gnews_sid_neg": "xxxx..x...xxxxx.x",
    "reddit_flair": "xxxx...xx..xxxxxx",
    "reddit_tb_polarity": "xxxx...x.x.xxxx.x",
    "reddit_tb_subjectivity": "xxxx...x.x.xxxx.x",
    "reddit_sid_pos": "xxxx...x..xxxxx.x",
    "reddit_sid_neg": "xxxx...x..xxxxx.x",
}
LOOKBACK_DAYS = [60, 60, 120, 120, 60, 60, 60, 60, 60, 60, 60, 120, 60, 60, 60, 60, 60]
UNITS = [32, 64, 64, 64, 32, 32, 32, 32, 32, 32, 32, 64, 32, 32, 32, 32, 32]
NOTES = [(1, 2), (1, 2), (1, 2), (1, 2), (2,), (2,), (2,), (2,), (1, 2), (1, 2), (1, 2), (1, 3), (1, 4), (1, 5),
         (1, 6), (1, 7), (1, 8)]


@pytest.fixture
def setup(tmp_path):
    yield {"matrix": em.builtin_matrix(), "path": os.path.join(str(tmp_path), "experiments.yaml")}


def test_matrix_transcription(setup) -> None:
    matrix = setup["matrix"]
    assert [config.id for config in matrix] == list(range(1, 18))
    for index, config in enumerate(matrix):
        expected = tuple(f for f in SELECTABLE_FEATURES if MARKS[f][index] == "x")
        assert config.features == expected, config.id
        assert config.lookback_days == LOOKBACK_DAYS[index]
        assert config.units == UNITS[index]
        assert config.notes == NOTES[index]
        assert config.sum_sentiment == (1 in NOTES[index])
        assert config.batch_size == 128
        assert config.epochs == 5


def test_named_experiments(setup) -> None:
    matrix = {config.id: config for config in setup["matrix"]}
    assert len(matrix[4].features) == 19
    assert matrix[4].lookback_hours == 2880
    assert matrix[5].features == ("open_BTCUSDT", "high_BTCUSDT", "low_BTCUSDT", "close_BTCUSDT", "volume_BTCUSDT")
    assert matrix[5].sum_sentiment is False
    assert matrix[17].architecture == "conv1d_lstm"
    assert matrix[13].architecture == matrix[16].architecture == "lstm_gru"
    assert [matrix[i].architecture for i in (2, 12, 14, 15)] == ["lstm", "lstm_lstm", "gru", "gru_gru"]
    assert matrix[9].mask.output_columns() == ["close_BTCUSDT", "volume_BTCUSDT", "close_LTCUSD", "volume_LTCUSD",
                                               "close_ETHUSD", "volume_ETHUSD", "sum_flair"]


def test_reference_results() -> None:
    assert sorted(em.REFERENCE_RESULTS) == list(range(1, 18))
    assert em.REFERENCE_RESULTS[4].test_rmse == 434.87
    assert em.REFERENCE_RESULTS[5].test_rmse == 173.72
    assert em.REFERENCE_RESULTS[17].test_rmse == 2615.3
    best = min(em.REFERENCE_RESULTS, key=lambda key: em.REFERENCE_RESULTS[key].test_rmse)
    worst = max(em.REFERENCE_RESULTS, key=lambda key: em.REFERENCE_RESULTS[key].test_rmse)
    assert (best, worst) == (5, 3)
    for metrics in em.REFERENCE_RESULTS.values():
        assert metrics.test_mae <= metrics.test_rmse
        assert metrics.train_mae <= metrics.train_rmse


def test_yaml_round_trip(setup) -> None:
    em.dump_matrix(setup["matrix"], setup["path"])
    assert em.load_matrix(setup["path"], base=[]) == setup["matrix"]
    with open(setup["path"], encoding="utf-8") as stream:
        document = yaml.safe_load(stream)
    assert list(document["experiments"][0]) == list(em.CONFIG_KEYS)


def test_yaml_overrides(setup) -> None:
    document = {"experiments": [
        {"id": 4, "features": ["close_BTCUSDT"], "lookback_days": 1, "units": 8, "architecture": "gru"},
        {"id": 42, "features": ["close_BTCUSDT", "gnews_flair", "reddit_flair"], "sum_sentiment": True,
         "lookback_days": 2, "units": 4, "notes": [1, 8], "epochs": 1, "comment": "ignored"},
    ]}
    with open(setup["path"], "w", encoding="utf-8") as stream:
        yaml.safe_dump(document, stream)
    configs = em.load_matrix(setup["path"])
    assert [config.id for config in configs] == list(range(1, 18)) + [42]
    assert configs[3].features == ("close_BTCUSDT",)
    assert configs[3].architecture == "gru"
    assert configs[3].batch_size == 128
    assert configs[-1].architecture == "conv1d_lstm"
    assert configs[-1].mask.output_columns() == ["close_BTCUSDT", "sum_flair"]
    assert configs[4] == setup["matrix"][4]


def test_invalid_configs() -> None:
    base = {"id": 1, "features": ("close_BTCUSDT",), "sum_sentiment": False, "lookback_days": 60, "units": 32}
    pytest.raises(ConfigError, lambda: ExperimentConfig(**base))
    pytest.raises(ConfigError, lambda: ExperimentConfig(**dict(base, notes=(2, 3))))
    pytest.raises(ConfigError, lambda: ExperimentConfig(**dict(base, notes=(9,))))
    pytest.raises(ConfigError, lambda: ExperimentConfig(**dict(base, notes=(2,), architecture="gru")))
    pytest.raises(ConfigError, lambda: ExperimentConfig(**dict(base, notes=(1, 2))))
    pytest.raises(ConfigError, lambda: ExperimentConfig(**dict(base, notes=(2,), units=0)))
    pytest.raises(ConfigError, lambda: ExperimentConfig(**dict(base, notes=(2,), features=("close",))))
    pytest.raises(ConfigError, lambda: ExperimentConfig(**dict(base, architecture="mlp")))
    pytest.raises(ConfigError, lambda: ExperimentConfig(**dict(base, architecture="lstm", sum_sentiment=True,
                                                               features=("close_BTCUSDT", "gnews_flair"))))
    assert ExperimentConfig(**dict(base, architecture="lstm")).notes == ()
    pytest.raises(ConfigError, lambda: ExperimentConfig.from_dict({"id": 3, "features": "close_BTCUSDT"}))
    pytest.raises(ConfigError, lambda: em.matrix_from_dict({"experiments": {"id": 1}}))
    duplicated = [dict(base, notes=[2]), dict(base, notes=[2])]
    pytest.raises(ConfigError, lambda: em.matrix_from_dict({"experiments": duplicated}))


def test_select_configs(setup) -> None:
    assert [config.id for config in em.select_configs(setup["matrix"], [17, 4, 4])] == [4, 17]
    pytest.raises(ConfigError, lambda: em.select_configs(setup["matrix"], [18]))

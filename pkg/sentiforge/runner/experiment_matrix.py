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
    This module encodes the seventeen built-in experiments and their YAML representation.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Tuple
import yaml
from sentiforge.dataset.feature_mask import (NEWS_FEATURES, REDDIT_FEATURES, SELECTABLE_FEATURES, FeatureMask)
from sentiforge.dataset.windowing import HOURS_PER_DAY
from sentiforge.fusion.merger import PRICE_COLUMNS
from sentiforge.neural.metrics import Metrics
from sentiforge.neural.model import ARCHITECTURES, NOTE_ARCHITECTURES
from sentiforge.utils.config_parser import EXPERIMENTS_KEY, ConfigParser
from sentiforge.utils.exceptions import ConfigError
from sentiforge.utils.sentiforge_logger import SentiforgeLogger

DEFAULT_BATCH_SIZE = 128
DEFAULT_EPOCHS = 5
SUM_NOTE = 1
KNOWN_NOTES = (SUM_NOTE,) + tuple(NOTE_ARCHITECTURES)
CONFIG_KEYS = ("id", "features", "sum_sentiment", "lookback_days", "units", "batch_size", "epochs", "notes",
               "architecture")
NOT_REPRODUCIBLE = "not reproducible - source data unavailable"


@dataclass(frozen=True)
class ExperimentConfig:
    """
        One experiment: feature selection, look-back, hidden units, training budget and model notes.
        The architecture defaults to the one named by the model note.
    """
    id: int
    features: Tuple[str, ...]
    sum_sentiment: bool
    lookback_days: int
    units: int
    notes: Tuple[int, ...] = ()
    architecture: str = None
    batch_size: int = DEFAULT_BATCH_SIZE
    epochs: int = DEFAULT_EPOCHS

    def __post_init__(self) -> None:
        for name in ("id", "lookback_days", "units", "batch_size", "epochs"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError("Experiment {}: '{}' must be a positive integer, got {!r}".format(
                    self.id, name, value))
        # canonical feature order, validated by the mask
        mask = FeatureMask(frozenset(self.features), bool(self.sum_sentiment))
        object.__setattr__(self, "features", tuple(mask.ordered()))
        object.__setattr__(self, "sum_sentiment", bool(self.sum_sentiment))
        notes = tuple(sorted(set(int(note) for note in self.notes)))
        unknown = [note for note in notes if note not in KNOWN_NOTES]
        if unknown:
            raise ConfigError("Experiment {}: unknown note(s) {}".format(self.id, unknown))
        object.__setattr__(self, "notes", notes)

        model_notes = [note for note in notes if note in NOTE_ARCHITECTURES]
        if len(model_notes) > 1:
            raise ConfigError("Experiment {}: several model notes {}".format(self.id, model_notes))
        architecture = self.architecture
        if architecture is None:
            if not model_notes:
                raise ConfigError("Experiment {}: no architecture and no model note".format(self.id))
            architecture = NOTE_ARCHITECTURES[model_notes[0]]
        if architecture not in ARCHITECTURES:
            raise ConfigError("Experiment {}: unknown architecture '{}'".format(self.id, architecture))
        if model_notes and NOTE_ARCHITECTURES[model_notes[0]] != architecture:
            raise ConfigError("Experiment {}: note {} names '{}', not '{}'".format(
                self.id, model_notes[0], NOTE_ARCHITECTURES[model_notes[0]], architecture))
        if notes and (SUM_NOTE in notes) != self.sum_sentiment:
            raise ConfigError("Experiment {}: note {} and sum_sentiment disagree".format(self.id, SUM_NOTE))
        object.__setattr__(self, "architecture", architecture)

    @property
    def mask(self) -> FeatureMask:
        return FeatureMask(frozenset(self.features), self.sum_sentiment)

    @property
    def lookback_hours(self) -> int:
        return self.lookback_days * HOURS_PER_DAY

    def to_dict(self) -> dict:
        return {"id": self.id, "features": list(self.features), "sum_sentiment": self.sum_sentiment,
                "lookback_days": self.lookback_days, "units": self.units, "batch_size": self.batch_size,
                "epochs": self.epochs, "notes": list(self.notes), "architecture": self.architecture}

    @staticmethod
    def from_dict(entry: dict) -> "ExperimentConfig":
        if not isinstance(entry, dict):
            raise ConfigError("An experiment entry must be a mapping, got {!r}".format(entry))
        ignored = sorted(set(entry) - set(CONFIG_KEYS))
        if ignored:
            SentiforgeLogger.log("Experiment {}: ignored key(s) {}".format(entry.get("id"), ignored), logging.WARNING)
        missing = [key for key in ("id", "features", "lookback_days", "units") if key not in entry]
        if missing:
            raise ConfigError("Experiment {}: missing key(s) {}".format(entry.get("id"), missing))
        features = entry["features"]
        if isinstance(features, str) or not isinstance(features, (list, tuple)):
            raise ConfigError("Experiment {}: 'features' must be a list of column names".format(entry["id"]))
        notes = entry.get("notes") or ()
        return ExperimentConfig(id=entry["id"], features=tuple(features),
                                sum_sentiment=entry.get("sum_sentiment", SUM_NOTE in notes),
                                lookback_days=entry["lookback_days"], units=entry["units"], notes=tuple(notes),
                                architecture=entry.get("architecture"),
                                batch_size=entry.get("batch_size", DEFAULT_BATCH_SIZE),
                                epochs=entry.get("epochs", DEFAULT_EPOCHS))


BTC_OHLCV = PRICE_COLUMNS[:5]
# every price but the BTC open, high and low
CLOSE_VOLUME = PRICE_COLUMNS[3:]
SENTIMENT = NEWS_FEATURES + REDDIT_FEATURES


def _both(*channels: str) -> Tuple[str, ...]:
    return tuple(prefix + channel for prefix in ("gnews_", "reddit_") for channel in channels)


# id: features, lookback days, units, notes
_MATRIX = {
    1: (CLOSE_VOLUME + SENTIMENT, 60, 32, (1, 2)),
    2: (CLOSE_VOLUME + SENTIMENT, 60, 64, (1, 2)),
    3: (CLOSE_VOLUME + SENTIMENT, 120, 64, (1, 2)),
    4: (SELECTABLE_FEATURES, 120, 64, (1, 2)),
    5: (BTC_OHLCV, 60, 32, (2,)),
    6: (PRICE_COLUMNS, 60, 32, (2,)),
    7: (CLOSE_VOLUME + NEWS_FEATURES, 60, 32, (2,)),
    8: (CLOSE_VOLUME + REDDIT_FEATURES, 60, 32, (2,)),
    9: (CLOSE_VOLUME + _both("flair"), 60, 32, (1, 2)),
    10: (CLOSE_VOLUME + _both("tb_polarity", "tb_subjectivity"), 60, 32, (1, 2)),
    11: (CLOSE_VOLUME + _both("sid_pos", "sid_neg"), 60, 32, (1, 2)),
    12: (SELECTABLE_FEATURES, 120, 64, (1, 3)),
    13: (SELECTABLE_FEATURES, 60, 32, (1, 4)),
    14: (SELECTABLE_FEATURES, 60, 32, (1, 5)),
    15: (SELECTABLE_FEATURES, 60, 32, (1, 6)),
    16: (CLOSE_VOLUME + _both("flair"), 60, 32, (1, 7)),
    17: (SELECTABLE_FEATURES, 60, 32, (1, 8)),
}

# published metrics, kept for reference only: the source corpora cannot be fetched again
REFERENCE_RESULTS: Dict[int, Metrics] = {
    1: Metrics(769.11, 2490.4, 572.49, 2454.6),
    2: Metrics(829.19, 2632.1, 679.46, 2597.7),
    3: Metrics(1254.8, 3541.8, 1027.4, 3530.9),
    4: Metrics(231.42, 434.87, 181.29, 421.56),
    5: Metrics(154.11, 173.72, 82.72, 116.36),
    6: Metrics(642.9, 556.5, 510.85, 477.92),
    7: Metrics(766.14, 2406.1, 600.18, 2369.2),
    8: Metrics(706.31, 1943.3, 571.6, 1892.5),
    9: Metrics(813.34, 1746.0, 624.37, 1703.6),
    10: Metrics(814.08, 2282.4, 646.16, 2248.5),
    11: Metrics(751.09, 789.86, 561.81, 745.71),
    12: Metrics(534.23, 1514.8, 399.22, 1507.4),
    13: Metrics(377.4, 983.94, 270.37, 977.53),
    14: Metrics(440.89, 1314.9, 350.08, 1308.5),
    15: Metrics(433.69, 1177.0, 329.24, 1171.0),
    16: Metrics(788.32, 2146.1, 614.04, 2137.6),
    17: Metrics(1249.3, 2615.3, 1003.9, 2605.0),
}


def builtin_matrix() -> List[ExperimentConfig]:
    return [ExperimentConfig(id=key, features=features, sum_sentiment=SUM_NOTE in notes, lookback_days=days,
                             units=units, notes=notes)
            for key, (features, days, units, notes) in _MATRIX.items()]


def merge_configs(base: Iterable[ExperimentConfig], overrides: Iterable[ExperimentConfig]) -> List[ExperimentConfig]:
    """
        Overrides replace the base entries with the same id, new ids extend the matrix. Sorted by id.
    """
    merged = {config.id: config for config in base}
    for config in overrides:
        merged[config.id] = config
    return [merged[key] for key in sorted(merged)]


def select_configs(configs: Iterable[ExperimentConfig], ids: Iterable[int]) -> List[ExperimentConfig]:
    by_id = {config.id: config for config in configs}
    unknown = sorted(set(ids) - set(by_id))
    if unknown:
        raise ConfigError("Unknown experiment id(s) {}, available: {}".format(unknown, sorted(by_id)))
    return [by_id[key] for key in sorted(set(ids))]


def matrix_to_dict(configs: Iterable[ExperimentConfig]) -> dict:
    return {EXPERIMENTS_KEY: [config.to_dict() for config in configs]}


def matrix_from_dict(document: dict) -> List[ExperimentConfig]:
    entries = document.get(EXPERIMENTS_KEY)
    if not isinstance(entries, list):
        raise ConfigError("An experiment file needs an 'experiments' list")
    configs = [ExperimentConfig.from_dict(entry) for entry in entries]
    ids = [config.id for config in configs]
    if len(set(ids)) != len(ids):
        raise ConfigError("Duplicated experiment id(s) in {}".format(sorted(ids)))
    return configs


def dump_matrix(configs: Iterable[ExperimentConfig], path: str) -> None:
    with open(path, "w", encoding="utf-8") as stream:
        yaml.safe_dump(matrix_to_dict(configs), stream, sort_keys=False, default_flow_style=None)


def load_matrix(path: str, base: Iterable[ExperimentConfig] = None) -> List[ExperimentConfig]:
    """
    Read an experiment file and merge it over a base matrix.

    Args:
        path: YAML file with an 'experiments' list.
        base: configs to override, the built-in matrix when None.

    Returns:
        the merged configs sorted by id.
    """
    configs = matrix_from_dict(ConfigParser(False).read(path))
    SentiforgeLogger.log("{} experiment(s) read from {}".format(len(configs), path), logging.DEBUG)
    return merge_configs(builtin_matrix() if base is None else base, configs)

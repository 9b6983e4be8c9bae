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
    This module is used to retrieve the sentiforge parameters and experiment definitions from a YAML configuration file.

    A configuration file is a mapping of pipeline parameters (merged, out_dir, epochs, ...) with an optional
    "experiments" list of experiment definitions. Keys may be written the command-line way ("record-timing").
"""

import os
import logging
from typing import List, Optional, Tuple
from yaml import safe_load, YAMLError
from sentiforge.utils.sentiforge_logger import SentiforgeLogger
from sentiforge.utils.exceptions import ConfigError

EXPERIMENTS_KEY = "experiments"


def normalize_key(key: str) -> str:
    return key.strip().replace("-", "_")


class ConfigParser(object):
    """
        Configuration file parser. Used to read the sentiforge parameters and the experiment definitions.
    """

    def __init__(self, verbose: bool = False) -> None:
        """
            Parser constructor.

            Args:
                verbose (default=False): increase output verbosity if true.
        """
        if verbose:
            self.level = logging.DEBUG
        else:
            self.level = logging.INFO

    def read(self, path: str) -> dict:
        """
            This method returns the dict containing the sentiforge parameters extracted from
            the input YAML configuration file, keys normalized ("record-timing" is read as "record_timing").

            Args:
                path: path to the configuration file (expected YAML file).

            Returns:
                cfg: configuration parameters (empty dict for an empty file).

            Raises:
                ConfigError: bad input path, document that is not a mapping, non-string or duplicated key,
                    or malformed experiments section.
                FileNotFoundError: if the input file doesn't exist.
                YAMLError: if an error occured while reading the yaml file.
        """
        document = self._load(path)
        cfg = self._normalize(document, path)
        if EXPERIMENTS_KEY in cfg:
            entries = cfg[EXPERIMENTS_KEY]
            if not isinstance(entries, list):
                raise ConfigError("'{}' in '{}' must be a list of experiments".format(EXPERIMENTS_KEY, path))
            cfg[EXPERIMENTS_KEY] = [self._normalize(entry, "{} experiment #{}".format(path, rank))
                                    for rank, entry in enumerate(entries, start=1)]
        return cfg

    def read_sections(self, path: str) -> Tuple[dict, Optional[List[dict]]]:
        """
            Split a configuration file into its pipeline parameters and its experiment definitions
            (None when the file has no experiments section).
        """
        cfg = self.read(path)
        experiments = cfg.pop(EXPERIMENTS_KEY, None)
        if self.level == logging.DEBUG:
            SentiforgeLogger.log("{}: {} parameter(s), {} experiment(s)".format(
                path, len(cfg), "no" if experiments is None else len(experiments)), self.level)
        return cfg, experiments

    def _load(self, path: str):
        if isinstance(path, os.PathLike):
            path = os.fspath(path)
        # input file format check
        if not (isinstance(path, str) and (path.endswith('.yaml') or path.endswith('.yml'))):
            SentiforgeLogger.log('\'path\' argument should be a path to the YAML config file (here: {})'.format(path),
                                 logging.ERROR)
            raise ConfigError("Expected a YAML configuration file (here: {})".format(path))
        # input file existence check
        if not os.path.isfile(path):
            SentiforgeLogger.log('The input config file \'{}\' doesn\'t exist'.format(path), logging.ERROR)
            raise FileNotFoundError("The input configuration file '{}' doesn't exist".format(path))

        if self.level == logging.DEBUG:
            SentiforgeLogger.log('Check input config file => Passed', self.level)

        with open(path, 'r', encoding="utf-8") as stream:
            try:
                document = safe_load(stream)
                if self.level == logging.DEBUG:
                    SentiforgeLogger.log('Retrieved data: {}'.format(document), self.level)
            except YAMLError as e:
                SentiforgeLogger.log('Exception occured while reading the configuration file: {}\nException: {}'
                                     .format(path, str(e)), logging.ERROR)
                raise YAMLError(str(e))
        return {} if document is None else document

    @staticmethod
    def _normalize(document, where: str) -> dict:
        if not isinstance(document, dict):
            raise ConfigError("'{}' must contain a key/value mapping".format(where))
        cfg = {}
        for key, value in document.items():
            if not isinstance(key, str):
                raise ConfigError("'{}': keys must be names (here: {!r})".format(where, key))
            name = normalize_key(key)
            if name in cfg:
                raise ConfigError("'{}': '{}' is given twice".format(where, name))
            cfg[name] = value
        return cfg

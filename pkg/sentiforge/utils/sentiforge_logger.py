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
This module aims to centralize the use of the logger in sentiforge.
"""
from __future__ import annotations
import sys
import getpass
import platform
import time
import multiprocessing
import logging
from typing import Any, Callable
import psutil
from git import Repo
from git.exc import InvalidGitRepositoryError
from sentiforge._version import __version__

LOG_FORMAT = '%(asctime)s [%(levelname)s] %(module)s - %(funcName)s (line %(lineno)d): %(message)s'
STREAM_FORMAT = '%(asctime)s [%(levelname)s] - %(message)s'


class SentiforgeLogger:
    """
        sentiforge logger singleton.
        Library calls go through SentiforgeLogger.log, which stays silent until the CLI (or a user script) creates
        the instance.
    """
    __instance = None
    __file_handler = None

    @staticmethod
    def getInstance(logger_file_path: str = None) -> logging.Logger:
        """
            Return the logger or create it if the instance does not exist.
            When a logfile path is provided and differs from the current one, the file handler is replaced.

            Args:
                logger_file_path: path to the output logfile (optional).

            Returns:
                the sentiforge logger.
        """
        if SentiforgeLogger.__instance is None:
            # Sub modules inherit from the "sentiforge" logger configuration
            logger = logging.getLogger("sentiforge")
            logger.setLevel(logging.DEBUG)
            logger.propagate = False

            sh = logging.StreamHandler(sys.stdout)
            sh.setLevel(logging.INFO)
            sh.setFormatter(logging.Formatter(STREAM_FORMAT, datefmt="%H:%M:%S"))
            logger.addHandler(sh)

            SentiforgeLogger.__instance = logger
            if logger_file_path is not None:
                SentiforgeLogger._attach_file(logger_file_path)
            SentiforgeLogger.init_logger()
        elif logger_file_path is not None:
            current = SentiforgeLogger.__file_handler
            if current is None or current.baseFilename != logger_file_path:
                SentiforgeLogger._attach_file(logger_file_path)
                SentiforgeLogger.init_logger()

        return SentiforgeLogger.__instance

    @staticmethod
    def _attach_file(logger_file_path: str) -> None:
        logger = SentiforgeLogger.__instance
        if SentiforgeLogger.__file_handler is not None:
            logger.removeHandler(SentiforgeLogger.__file_handler)
            SentiforgeLogger.__file_handler.close()
        # file handler which logs even debug messages
        fh = logging.FileHandler(filename=logger_file_path, mode='w', encoding="utf-8")
        fh.setLevel(logging.DEBUG)
        fh.setFormatter(logging.Formatter(LOG_FORMAT, datefmt="%Y-%m-%dT%H:%M:%S"))
        logger.addHandler(fh)
        SentiforgeLogger.__file_handler = fh

    @staticmethod
    def log(msg: str, level: int) -> None:
        """
            sentiforge logger log function.
            The following logging levels are used:
                DEBUG
                INFO
                WARNING
                ERROR

            Args:
                msg: log message.
                level: criticity level.
        """
        if SentiforgeLogger.__instance is not None:
            SentiforgeLogger.__instance.log(level, msg)

    @staticmethod
    def init_logger() -> None:
        """
            This method stores the environment state in the logfile.
        """
        info = {}
        try:
            # Git info
            try:
                repo = Repo(search_parent_directories=True)
                info['commit_sha'] = repo.head.object.hexsha
                info['branch'] = repo.active_branch
            except InvalidGitRepositoryError as e:
                info['commit_sha'] = "No git repo found ({})".format(e)
                info['branch'] = "No git repo found ({})".format(e)
            except Exception:
                info['commit_sha'] = "unknown"
                info['branch'] = "unknown"

            # Node info
            try:
                info['user'] = getpass.getuser()
            except Exception:
                info['user'] = 'unknown'
            info['node'] = platform.node()
            info['cpu_count'] = multiprocessing.cpu_count()
            info['ram'] = str(round(psutil.virtual_memory().total / (1024 ** 3))) + " GB"

            # OS info
            info['system'] = platform.system()
            info['release'] = platform.release()

            init = ("\n" + "#" * 18 + "\n#   SENTIFORGE   #\n" + "#" * 18
                    + "\n# <sentiforge info>\n#\t- version: {}"
                    + "\n#\n# <Git info>\n#\t- branch: {}\n#\t- commit SHA: {}"
                    + "\n#\n# <Node info>\n#\t - user: {}\n#\t - node: {}\n#\t - CPU count: {}\n#\t - RAM: {}"
                    + "\n#\n# <OS info>\n#\t - system: {}\n#\t - release: {}\n"
                    + "#" * 18).format(__version__, info['branch'], info['commit_sha'], info['user'], info['node'],
                                       info['cpu_count'], info['ram'], info['system'], info['release'])
            SentiforgeLogger.log(init, logging.DEBUG)

        except Exception as e:
            SentiforgeLogger.log("Error occured during logger init: \n" + str(e), logging.DEBUG)


class Runtime:
    """
    This class is used as decorator to monitor the runtime.
    """

    def __init__(self, function: Callable) -> None:
        """
            Decorator constructor.

            Args:
                function: the function to call.
        """
        self.function = function
        self.__name__ = function.__name__
        self.__doc__ = function.__doc__

    def __call__(self, *args, **kwargs) -> Any:
        """
            Log the start and end of the function with the associated runtime.

            Args:
                args: function arguments.
                kwargs: function key arguments.

            Returns:
                the function output.
        """
        func_start = time.perf_counter()
        SentiforgeLogger.log("{}: Starting...".format(self.function.__name__), logging.DEBUG)
        result = self.function(*args, **kwargs)
        func_end = time.perf_counter()
        SentiforgeLogger.log("{}: Done (Runtime: {}s)".format(self.function.__name__,
                                                              round(func_end - func_start, 2)), logging.INFO)
        return result

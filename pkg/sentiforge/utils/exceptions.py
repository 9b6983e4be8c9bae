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
    This module groups the exceptions raised by sentiforge.
    Each exception also derives from a built-in exception so that callers may catch either.
"""


class SentiforgeError(Exception):
    """
        Root of the sentiforge exception hierarchy.
    """


class ConfigError(SentiforgeError, ValueError):
    """
        Invalid parameter, configuration file, feature mask or unsupported trading pair.
    """


class DataError(SentiforgeError, ValueError):
    """
        Input data is malformed, inconsistent or too short for the requested operation.
    """


class SchemaError(DataError):
    """
        A CSV file does not match its expected header.
    """

    def __init__(self, column: str, path: str = None) -> None:
        """
            SchemaError constructor.

            Args:
                column: name of the offending (missing or unexpected) column.
                path: file in which the mismatch was found.
        """
        self.column = column
        self.path = path
        where = " in '{}'".format(path) if path else ""
        super().__init__("Schema mismatch{}: column '{}'".format(where, column))


class RetryableError(SentiforgeError, IOError):
    """
        Remote endpoint failure that persisted after the bounded number of retries.
    """


class DivergenceError(SentiforgeError, ArithmeticError):
    """
        Training produced a non-finite loss, activation or gradient.
    """


class ShapeError(SentiforgeError, ValueError):
    """
        Tensor shape mismatch.
    """

    def __init__(self, expected: tuple, actual: tuple, where: str = "") -> None:
        self.expected = tuple(expected)
        self.actual = tuple(actual)
        prefix = "{}: ".format(where) if where else ""
        super().__init__("{}expected shape {}, got {}".format(prefix, self.expected, self.actual))

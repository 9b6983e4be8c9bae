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
    This module implements the Adam update rule on lists of float64 parameter arrays.
"""
from typing import List
import numpy as np
from sentiforge.utils.exceptions import ConfigError, ShapeError


class Adam(object):
    """
    Adam with bias-corrected step size, parameters are updated in place.

    Args:
        learning_rate: step size.
        beta1: decay of the first moment estimate.
        beta2: decay of the second moment estimate.
        epsilon: denominator offset.
    """

    def __init__(self, learning_rate: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999,
                 epsilon: float = 1e-8) -> None:
        if learning_rate <= 0:
            raise ConfigError("The learning rate must be positive, got {}".format(learning_rate))
        if not (0.0 <= beta1 < 1.0 and 0.0 <= beta2 < 1.0):
            raise ConfigError("Adam decays must lie in [0, 1[, got {} and {}".format(beta1, beta2))
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.iterations = 0
        self._m: List[np.ndarray] = None
        self._v: List[np.ndarray] = None

    def step(self, params: List[np.ndarray], grads: List[np.ndarray]) -> None:
        if self._m is None:
            self._m = [np.zeros_like(p) for p in params]
            self._v = [np.zeros_like(p) for p in params]
        if len(params) != len(self._m) or len(grads) != len(params):
            raise ShapeError((len(self._m),), (len(params), len(grads)), "adam parameter list")
        self.iterations += 1
        t = self.iterations
        step_size = self.learning_rate * np.sqrt(1.0 - self.beta2 ** t) / (1.0 - self.beta1 ** t)
        for param, grad, m, v in zip(params, grads, self._m, self._v):
            if grad.shape != param.shape:
                raise ShapeError(param.shape, grad.shape, "adam gradient")
            m *= self.beta1
            m += (1.0 - self.beta1) * grad
            v *= self.beta2
            v += (1.0 - self.beta2) * grad * grad
            param -= step_size * m / (np.sqrt(v) + self.epsilon)

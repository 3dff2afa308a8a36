# -*- coding: utf-8 -*-
# ==============================================================================
# MIT License
#
# Copyright (c) 2026 Attribution Audit developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
# ==============================================================================

"""
    Normalization
    ~~~~~~~~~~~~~
"""

import numpy as np

from ..common.errors import MetricError


def normalize_second_moment(values: np.ndarray) -> np.ndarray:
    """ divide by the root of the mean squared value """
    values = np.asarray(values, dtype=np.float64)
    moment = float(np.mean(values * values)) if values.size > 0 else 0.0
    if moment <= 0.0:
        raise MetricError('cannot normalize an all-zero map by its second moment')
    return values / np.sqrt(moment)


def normalize_max_abs(values: np.ndarray) -> np.ndarray:
    """ divide by the largest absolute value """
    values = np.asarray(values, dtype=np.float64)
    peak = float(np.max(np.abs(values))) if values.size > 0 else 0.0
    if peak <= 0.0:
        raise MetricError('cannot normalize an all-zero map by its maximum')
    return values / peak

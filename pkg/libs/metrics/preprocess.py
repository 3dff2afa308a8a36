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
    Preprocessing Pipelines
    ~~~~~~~~~~~~~~~~~~~~~~~

    '<sign>-<reduction>-<normalization>' ids applied to a map before comparison.
"""

from typing import Union

import numpy as np

from ..attribution import AttributionMap, ChannelReduction, reduce_channels
from ..common.errors import ConfigError

from .normalize import normalize_second_moment, normalize_max_abs


class PrepId:

    SIGNED_SUM_M2 = 'signed-sum-m2'
    ABS_SUM_M2 = 'abs-sum-m2'
    SIGNED_L2_M2 = 'signed-l2-m2'
    SIGNED_SUM_MAX = 'signed-sum-max'
    SIGNED_SUM_RAW = 'signed-sum-raw'

    DEFAULT = SIGNED_SUM_M2

    ALL = (SIGNED_SUM_M2, ABS_SUM_M2, SIGNED_L2_M2, SIGNED_SUM_MAX, SIGNED_SUM_RAW)


_PIPELINES = {
    PrepId.SIGNED_SUM_M2: (ChannelReduction.SUM, normalize_second_moment),
    PrepId.ABS_SUM_M2: (ChannelReduction.ABS_SUM, normalize_second_moment),
    PrepId.SIGNED_L2_M2: (ChannelReduction.L2, normalize_second_moment),
    PrepId.SIGNED_SUM_MAX: (ChannelReduction.SUM, normalize_max_abs),
    PrepId.SIGNED_SUM_RAW: (ChannelReduction.SUM, None),
}


def preprocess(amap: Union[AttributionMap, np.ndarray], prep: str = PrepId.DEFAULT) -> np.ndarray:
    """ channel reduction then normalization; MetricError for all-zero maps """
    pipeline = _PIPELINES.get(prep)
    if pipeline is None:
        raise ConfigError('unknown preprocessing pipeline: %s' % prep)
    reduction, normalize = pipeline
    if not isinstance(amap, AttributionMap):
        amap = AttributionMap(values=amap, method='raw', target='none')
    values = reduce_channels(amap, mode=reduction).values
    if normalize is not None:
        values = normalize(values)
    return values

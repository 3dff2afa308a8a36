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
    Adaptive Beta
    ~~~~~~~~~~~~~

    Per-neuron beta from the ratio of negative to positive input contributions:

        p = sum of positive w_i x_i,  n = -(sum of negative w_i x_i)

        displayed:  beta = n / (p + n)     (never above 1)
        algebraic:  beta = n / (p - n)     (solves beta / (1 + beta) = n / p)

    and beta* = min(beta, cap).
"""

from typing import Sequence

import numpy as np

from ..common.errors import ConfigError


class BetaVariant:

    DISPLAYED = 'displayed'
    ALGEBRAIC = 'algebraic'

    ALL = (DISPLAYED, ALGEBRAIC)


DEFAULT_CAP = 3.0


def adaptive_beta_array(positive: np.ndarray, negative: np.ndarray, cap: float = DEFAULT_CAP,
                        variant: str = BetaVariant.DISPLAYED) -> np.ndarray:
    """ elementwise beta*; `positive` and `negative` are both >= 0 magnitudes """
    p = np.asarray(positive, dtype=np.float64)
    n = np.asarray(negative, dtype=np.float64)
    if variant == BetaVariant.DISPLAYED:
        den = p + n
        ok = den > 0
        beta = np.where(ok, n / np.where(ok, den, 1.0), 0.0)
    elif variant == BetaVariant.ALGEBRAIC:
        den = p - n
        ok = den > 0
        # negatives outweigh positives: the ratio has no finite solution, cap binds
        beta = np.where(ok, n / np.where(ok, den, 1.0), np.where(n > 0, cap, 0.0))
    else:
        raise ConfigError('unknown beta variant: %s' % variant)
    return np.minimum(beta, cap)


def adaptive_beta(contributions: Sequence[float], cap: float = DEFAULT_CAP,
                  variant: str = BetaVariant.DISPLAYED) -> float:
    """ beta* for one neuron from its contributions w_i x_i; all zero gives 0 """
    values = np.asarray(contributions, dtype=np.float64)
    p = float(np.sum(values[values > 0]))
    n = -float(np.sum(values[values < 0]))
    return float(adaptive_beta_array(positive=np.float64(p), negative=np.float64(n), cap=cap, variant=variant))

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
    Cauchy Tails
    ~~~~~~~~~~~~

    P(Z >= K) = 0.5 - arctan(K / gamma) / pi for a zero-centred Cauchy
    variable of scale gamma.
"""

from dataclasses import dataclass

from scipy.stats import cauchy

from ..common.errors import PreconditionError


@dataclass(frozen=True)
class CauchyParams:
    gamma: float
    k: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise PreconditionError('Cauchy scale must be positive: %s' % self.gamma)

    def tail(self) -> float:
        return cauchy_tail(self.k, self.gamma)


def cauchy_tail(k: float, gamma: float) -> float:
    if not gamma > 0:
        raise PreconditionError('Cauchy scale must be positive: %s' % gamma)
    return float(cauchy.sf(k, loc=0.0, scale=gamma))


def cauchy_cdf(k: float, gamma: float) -> float:
    if not gamma > 0:
        raise PreconditionError('Cauchy scale must be positive: %s' % gamma)
    return float(cauchy.cdf(k, loc=0.0, scale=gamma))

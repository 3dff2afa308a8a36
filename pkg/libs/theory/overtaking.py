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
    Overtaking Probability
    ~~~~~~~~~~~~~~~~~~~~~~

    Chance that small activations X_S outweigh large activations X_L under
    i.i.d. zero-mean normal weights:

        event:  sum w_s x_s >= sum w_l x_l,  given  sum w_l x_l > 0

    The ratio of the two sums is Cauchy with gamma_1 = sqrt(sum x_s^2 / sum x_l^2),
    so the conditional probability is exactly cauchy_tail(1, gamma_1); the
    separation K = min X_L / max X_S bounds it by cauchy_tail(K, sqrt(|X_S| / |X_L|)).
    The averaged variant compares per-set means; its bound uses the inverted
    gamma sqrt(|X_L| / |X_S|).
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..common.errors import PreconditionError
from ..utils import Log, TaskPool, derive_seed, new_rng

from .cauchy import cauchy_tail


# weight draws per chunk; every chunk has its own derived seed
CHUNK = 100000

MIN_TRIALS = 100000


@dataclass(frozen=True)
class ActivationSplit:

    large: Tuple[float, ...]
    small: Tuple[float, ...]
    k: float
    sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, 'large', tuple(float(v) for v in self.large))
        object.__setattr__(self, 'small', tuple(float(v) for v in self.small))
        if len(self.large) == 0 or len(self.small) == 0:
            raise PreconditionError('both activation sets must be non-empty')
        if min(self.large) < 0 or min(self.small) < 0:
            raise PreconditionError('activations must be non-negative')
        if self.k < 1:
            raise PreconditionError('separation factor K must be >= 1: %s' % self.k)
        if min(self.large) < self.k * max(self.small):
            raise PreconditionError('min(X_L) = %s < K * max(X_S) = %s' % (min(self.large), self.k * max(self.small)))
        if not self.sigma > 0:
            raise PreconditionError('weight std must be positive: %s' % self.sigma)
        if sum(v * v for v in self.large) == 0:
            raise PreconditionError('X_L must hold a positive activation')

    @classmethod
    def tight(cls, large: Sequence[float], small: Sequence[float], sigma: float = 1.0):
        """ split with the largest valid K """
        top = max(small)
        k = min(large) / top if top > 0 else 1.0
        return cls(large=tuple(large), small=tuple(small), k=max(1.0, k), sigma=sigma)

    @property
    def gamma_exact(self) -> float:
        return float(np.sqrt(np.sum(np.square(self.small)) / np.sum(np.square(self.large))))

    @property
    def gamma_bound(self) -> float:
        return float(np.sqrt(len(self.small) / len(self.large)))

    @property
    def gamma_exact_avg(self) -> float:
        ns, nl = len(self.small), len(self.large)
        return float(np.sqrt((np.sum(np.square(self.small)) / ns ** 2) / (np.sum(np.square(self.large)) / nl ** 2)))

    @property
    def gamma_bound_avg(self) -> float:
        return float(np.sqrt(len(self.large) / len(self.small)))


@dataclass(frozen=True)
class OvertakingResult:
    """
        empirical:     P(event | sum w_l x_l > 0)
        unconditional: P(event and sum w_l x_l > 0), half of the conditional value in expectation
    """

    empirical: float
    unconditional: float
    exact: float
    bound: float
    std_error: float
    trials: int
    conditioned: int


def _chunk(item: Tuple[ActivationSplit, int, int, bool]) -> Tuple[int, int]:
    split, seed, size, averaged = item
    rng = new_rng(seed)
    xs = np.asarray(split.small)
    xl = np.asarray(split.large)
    ws = rng.normal(0.0, split.sigma, size=(size, xs.size))
    wl = rng.normal(0.0, split.sigma, size=(size, xl.size))
    s = ws @ xs
    l = wl @ xl
    if averaged and xs.size != xl.size:
        s = s / xs.size
        l = l / xl.size
    positive = l > 0
    events = positive & (s >= l)
    return int(positive.sum()), int(events.sum())


def _run(split: ActivationSplit, n_trials: int, seed: int, averaged: bool, pool: Optional[TaskPool]):
    if n_trials < MIN_TRIALS:
        raise PreconditionError('overtaking Monte Carlo needs at least %d trials: %d' % (MIN_TRIALS, n_trials))
    if pool is None:
        pool = TaskPool()
    items = []
    for index, start in enumerate(range(0, n_trials, CHUNK)):
        size = min(CHUNK, n_trials - start)
        items.append((index, (split, derive_seed(seed, index), size, averaged)))
    results = pool.map(_chunk, items)
    conditioned = sum(result[0] for _, result in results)
    events = sum(result[1] for _, result in results)
    p = events / conditioned if conditioned > 0 else float('nan')
    se = float(np.sqrt(p * (1 - p) / conditioned)) if conditioned > 0 else float('nan')
    Log.info('overtaking MC: %d trials, %d conditioned, p=%.6f', n_trials, conditioned, p)
    return p, events / n_trials, se, conditioned


def overtaking_probability_mc(split: ActivationSplit, n_trials: int, seed: int,
                              pool: Optional[TaskPool] = None) -> OvertakingResult:
    p, unconditional, se, conditioned = _run(split, n_trials=n_trials, seed=seed, averaged=False, pool=pool)
    return OvertakingResult(empirical=p, unconditional=unconditional, exact=cauchy_tail(1.0, split.gamma_exact),
                            bound=cauchy_tail(split.k, split.gamma_bound), std_error=se, trials=n_trials,
                            conditioned=conditioned)


def overtaking_probability_avg(split: ActivationSplit, n_trials: int, seed: int,
                               pool: Optional[TaskPool] = None) -> OvertakingResult:
    p, unconditional, se, conditioned = _run(split, n_trials=n_trials, seed=seed, averaged=True, pool=pool)
    return OvertakingResult(empirical=p, unconditional=unconditional,
                            exact=cauchy_tail(1.0, split.gamma_exact_avg),
                            bound=cauchy_tail(split.k, split.gamma_bound_avg), std_error=se, trials=n_trials,
                            conditioned=conditioned)

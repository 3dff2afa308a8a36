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
    Similarity Metrics on Independent Maps
    ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

    Monte Carlo checks of how SSIM, Spearman and normalized MSE behave when the
    two maps share nothing, and how stable the two normalization statistics are.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..common.errors import PreconditionError
from ..metrics import DEFAULT_C1, DEFAULT_C2
from ..metrics import patch_stats, spearman, mse_normalized
from ..utils import Log, TaskPool, derive_seed, new_rng


# trials per task
BATCH = 250


class Distribution:

    NORMAL = 'normal'
    UNIFORM = 'uniform'
    LAPLACE = 'laplace'

    ALL = (NORMAL, UNIFORM, LAPLACE)


def draw(rng: np.random.Generator, distribution: str, size) -> np.ndarray:
    """ zero-mean, unit-variance samples """
    if distribution == Distribution.NORMAL:
        return rng.normal(0.0, 1.0, size=size)
    elif distribution == Distribution.UNIFORM:
        half = np.sqrt(3.0)
        return rng.uniform(-half, half, size=size)
    elif distribution == Distribution.LAPLACE:
        return rng.laplace(0.0, 1.0 / np.sqrt(2.0), size=size)
    raise PreconditionError('unknown distribution: %s' % distribution)


def _batches(n_trials: int, seed: int):
    if n_trials < 1:
        raise PreconditionError('need at least one trial: %d' % n_trials)
    for index, start in enumerate(range(0, n_trials, BATCH)):
        yield index, (derive_seed(seed, index), min(BATCH, n_trials - start))


def _mean_se(values: np.ndarray):
    n = values.size
    se = float(values.std(ddof=1) / np.sqrt(n)) if n > 1 else float('nan')
    return float(values.mean()), se


def _gather(pool: Optional[TaskPool], fn, n_trials: int, seed: int) -> np.ndarray:
    if pool is None:
        pool = TaskPool()
    results = pool.map(fn, _batches(n_trials=n_trials, seed=seed))
    return np.concatenate([value for _, value in results], axis=0)


#
#   SSIM
#

@dataclass(frozen=True)
class SsimResult:
    """
        abs_mean:  |mean SSIM| over trials, the quantity held against `bound`
        mean_abs:  mean |SSIM| per trial, shrinks like 1 / patch side
    """

    mean: float
    abs_mean: float
    mean_abs: float
    std_error: float
    bound: float
    luminance: float
    structure: float
    trials: int


def ssim_mc(patch: int, n_trials: int, seed: int, distribution: str = Distribution.NORMAL,
            c1: float = DEFAULT_C1, c2: float = DEFAULT_C2, center: bool = True,
            pool: Optional[TaskPool] = None) -> SsimResult:
    """
        SSIM between two independent patch x patch maps, one window per map;
        `center` subtracts each map's sample mean so the luminance term is 1
    """
    if patch < 2:
        raise PreconditionError('patch side must be >= 2: %d' % patch)

    def run(item) -> np.ndarray:
        batch_seed, size = item
        rng = new_rng(batch_seed)
        rows = np.empty((size, 5), dtype=np.float64)
        for t in range(size):
            a = draw(rng, distribution, (patch, patch))
            b = draw(rng, distribution, (patch, patch))
            if center:
                a = a - a.mean()
                b = b - b.mean()
            stats = patch_stats(a, b, window=None, c1=c1, c2=c2)
            lum = float(stats.luminance()[0])
            struct = float(stats.structure()[0])
            rows[t] = (lum * struct, lum, struct, float(stats.var_a[0]), float(stats.var_b[0]))
        return rows

    rows = _gather(pool, run, n_trials=n_trials, seed=seed)
    mean, se = _mean_se(rows[:, 0])
    var_a = float(rows[:, 3].mean())
    var_b = float(rows[:, 4].mean())
    bound = c2 / (var_a + var_b + c2)
    Log.info('SSIM MC: patch=%d, %s, mean=%.6f, bound=%.6f', patch, distribution, mean, bound)
    return SsimResult(mean=mean, abs_mean=abs(mean), mean_abs=float(np.abs(rows[:, 0]).mean()), std_error=se,
                      bound=bound, luminance=float(rows[:, 1].mean()), structure=float(rows[:, 2].mean()),
                      trials=n_trials)


#
#   Spearman
#

@dataclass(frozen=True)
class RankResult:
    """ independent pair vs. correlated control B = A + noise * N(0, 1) """

    mean_independent: float
    se_independent: float
    mean_control: float
    se_control: float
    trials: int


def spearman_mc(n: int, n_trials: int, seed: int, noise: float = 0.5, pool: Optional[TaskPool] = None) -> RankResult:
    if n < 3:
        raise PreconditionError('need at least 3 elements: %d' % n)

    def run(item) -> np.ndarray:
        batch_seed, size = item
        rng = new_rng(batch_seed)
        rows = np.empty((size, 2), dtype=np.float64)
        for t in range(size):
            a = rng.normal(size=n)
            b = rng.normal(size=n)
            control = a + noise * rng.normal(size=n)
            rows[t] = (spearman(a, b).value, spearman(a, control).value)
        return rows

    rows = _gather(pool, run, n_trials=n_trials, seed=seed)
    mean, se = _mean_se(rows[:, 0])
    control, control_se = _mean_se(rows[:, 1])
    Log.info('Spearman MC: n=%d, independent=%.6f, control=%.6f', n, mean, control)
    return RankResult(mean_independent=mean, se_independent=se, mean_control=control, se_control=control_se,
                      trials=n_trials)


#
#   Normalized MSE
#

@dataclass(frozen=True)
class MseResult:
    """ E = 2 for independent maps, 4 for B = -A, 0 for B = A """

    mean_independent: float
    se_independent: float
    mean_negated: float
    mean_identical: float
    trials: int


def mse_mc(n: int, n_trials: int, seed: int, pool: Optional[TaskPool] = None) -> MseResult:
    if n < 1:
        raise PreconditionError('need at least 1 element: %d' % n)

    def run(item) -> np.ndarray:
        batch_seed, size = item
        rng = new_rng(batch_seed)
        rows = np.empty((size, 3), dtype=np.float64)
        for t in range(size):
            a = rng.normal(size=n)
            b = rng.normal(size=n)
            rows[t] = (mse_normalized(a, b).value, mse_normalized(a, -a).value, mse_normalized(a, a).value)
        return rows

    rows = _gather(pool, run, n_trials=n_trials, seed=seed)
    mean, se = _mean_se(rows[:, 0])
    Log.info('MSE MC: n=%d, independent=%.6f', n, mean)
    return MseResult(mean_independent=mean, se_independent=se, mean_negated=float(rows[:, 1].mean()),
                     mean_identical=float(rows[:, 2].mean()), trials=n_trials)


#
#   Normalization statistics
#

@dataclass(frozen=True)
class NormalizationVariance:
    """ variance across resamples of max|A| and of sqrt(mean A^2) """

    max_abs: float
    second_moment: float
    resamples: int


def normalization_variance_mc(n: int, n_resamples: int, seed: int,
                              pool: Optional[TaskPool] = None) -> NormalizationVariance:
    if n_resamples < 2:
        raise PreconditionError('need at least 2 resamples: %d' % n_resamples)

    def run(item) -> np.ndarray:
        batch_seed, size = item
        rng = new_rng(batch_seed)
        a = rng.normal(size=(size, n))
        return np.stack([np.abs(a).max(axis=1), np.sqrt(np.mean(a * a, axis=1))], axis=1)

    rows = _gather(pool, run, n_trials=n_resamples, seed=seed)
    return NormalizationVariance(max_abs=float(rows[:, 0].var(ddof=1)), second_moment=float(rows[:, 1].var(ddof=1)),
                                 resamples=n_resamples)

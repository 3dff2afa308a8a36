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
    Similarity Metrics
    ~~~~~~~~~~~~~~~~~~

    SSIM with uniform windows and population statistics, Spearman rank
    correlation, second-moment-normalized and raw MSE, Pearson and cosine.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.stats import rankdata

from ..common.errors import ConfigError, MetricError, ShapeError

from .normalize import normalize_second_moment


# dynamic range L = 2 after second-moment normalization
DEFAULT_WINDOW = 7
DEFAULT_C1 = (0.01 * 2.0) ** 2
DEFAULT_C2 = (0.03 * 2.0) ** 2


class MetricId:

    SSIM = 'ssim'
    SSIM_GLOBAL = 'ssim-global'     # one window over the whole map
    SPEARMAN = 'spearman'
    MSE_NORMALIZED = 'mse-normalized'
    MSE_RAW = 'mse-raw'

    ALL = (SSIM, SSIM_GLOBAL, SPEARMAN, MSE_NORMALIZED, MSE_RAW)

    # value when both maps are identical
    IDENTITY = {SSIM: 1.0, SSIM_GLOBAL: 1.0, SPEARMAN: 1.0, MSE_NORMALIZED: 0.0, MSE_RAW: 0.0}


@dataclass(frozen=True)
class PatchStats:
    """ per-window statistics; arrays shaped like the window grid """

    mu_a: np.ndarray
    mu_b: np.ndarray
    var_a: np.ndarray
    var_b: np.ndarray
    cov: np.ndarray
    c1: float
    c2: float
    window: Optional[int]
    stride: int

    def luminance(self) -> np.ndarray:
        return (2.0 * self.mu_a * self.mu_b + self.c1) / (self.mu_a * self.mu_a + self.mu_b * self.mu_b + self.c1)

    def structure(self) -> np.ndarray:
        """ covariance term (2 s_ab + C2) / (s_a^2 + s_b^2 + C2) """
        return (2.0 * self.cov + self.c2) / (self.var_a + self.var_b + self.c2)


@dataclass(frozen=True)
class SimilarityReport:

    metric: str
    value: float
    patches: Optional[np.ndarray] = None
    normalization: str = 'none'


def _pair(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeError('map shapes differ: %s vs %s' % (a.shape, b.shape))
    if a.size == 0:
        raise ShapeError('empty maps')
    return a, b


def patch_stats(a: np.ndarray, b: np.ndarray, window: Optional[int] = DEFAULT_WINDOW, stride: int = 1,
                c1: float = DEFAULT_C1, c2: float = DEFAULT_C2) -> PatchStats:
    """ window=None: the whole map is one window """
    a, b = _pair(a, b)
    if window is None:
        wa = a.reshape(1, -1)
        wb = b.reshape(1, -1)
    else:
        if a.ndim != 2:
            raise ShapeError('windowed SSIM needs 2-D maps, got %s' % (a.shape, ))
        if window < 1 or window > min(a.shape) or stride < 1:
            raise ShapeError('window %d / stride %d does not fit map %s' % (window, stride, a.shape))
        wa = sliding_window_view(a, (window, window))[::stride, ::stride]
        wb = sliding_window_view(b, (window, window))[::stride, ::stride]
        grid = wa.shape[:2]
        wa = wa.reshape(grid + (-1, ))
        wb = wb.reshape(grid + (-1, ))
    mu_a = wa.mean(axis=-1)
    mu_b = wb.mean(axis=-1)
    da = wa - mu_a[..., np.newaxis]
    db = wb - mu_b[..., np.newaxis]
    # population (1/n) statistics
    var_a = (da * da).mean(axis=-1)
    var_b = (db * db).mean(axis=-1)
    cov = (da * db).mean(axis=-1)
    return PatchStats(mu_a=mu_a, mu_b=mu_b, var_a=var_a, var_b=var_b, cov=cov, c1=c1, c2=c2,
                      window=window, stride=stride)


def ssim(a: np.ndarray, b: np.ndarray, window: Optional[int] = DEFAULT_WINDOW, c1: float = DEFAULT_C1,
         c2: float = DEFAULT_C2, stride: int = 1) -> SimilarityReport:
    stats = patch_stats(a, b, window=window, stride=stride, c1=c1, c2=c2)
    num = (2.0 * stats.mu_a * stats.mu_b + c1) * (2.0 * stats.cov + c2)
    den = (stats.mu_a * stats.mu_a + stats.mu_b * stats.mu_b + c1) * (stats.var_a + stats.var_b + c2)
    if np.any(den == 0):
        raise MetricError('SSIM undefined: zero denominator (constant window with C1 = C2 = 0)')
    values = num / den
    metric = MetricId.SSIM if window is not None else MetricId.SSIM_GLOBAL
    return SimilarityReport(metric=metric, value=float(np.mean(values)), patches=values)


def spearman(a: np.ndarray, b: np.ndarray) -> SimilarityReport:
    """ Pearson correlation of ranks, ties get their average rank """
    a, b = _pair(a, b)
    if a.size < 2:
        raise MetricError('Spearman needs at least 2 elements')
    ra = rankdata(a.ravel(), method='average')
    rb = rankdata(b.ravel(), method='average')
    return SimilarityReport(metric=MetricId.SPEARMAN, value=pearson(ra, rb))


def mse_raw(a: np.ndarray, b: np.ndarray) -> SimilarityReport:
    a, b = _pair(a, b)
    diff = a - b
    return SimilarityReport(metric=MetricId.MSE_RAW, value=float(np.mean(diff * diff)))


def mse_normalized(a: np.ndarray, b: np.ndarray) -> SimilarityReport:
    a, b = _pair(a, b)
    diff = normalize_second_moment(a) - normalize_second_moment(b)
    return SimilarityReport(metric=MetricId.MSE_NORMALIZED, value=float(np.mean(diff * diff)),
                            normalization='second-moment')


def pearson(a: np.ndarray, b: np.ndarray) -> float:
    a, b = _pair(a, b)
    da = a.ravel() - a.mean()
    db = b.ravel() - b.mean()
    va = float(np.dot(da, da))
    vb = float(np.dot(db, db))
    if va <= 0.0 or vb <= 0.0:
        raise MetricError('correlation undefined for a constant input')
    if np.array_equal(a, b):
        return 1.0
    return float(np.clip(np.dot(da, db) / np.sqrt(va * vb), -1.0, 1.0))


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    a, b = _pair(a, b)
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise MetricError('cosine undefined for an all-zero input')
    if np.array_equal(a, b):
        return 1.0
    return float(np.clip(np.dot(a.ravel(), b.ravel()) / (na * nb), -1.0, 1.0))


def compare(metric: str, a: np.ndarray, b: np.ndarray, window: int = DEFAULT_WINDOW,
            c1: float = DEFAULT_C1, c2: float = DEFAULT_C2) -> SimilarityReport:
    if metric == MetricId.SSIM:
        a = np.asarray(a)
        # small maps: the window shrinks to the map
        if a.ndim == 2:
            window = min(window, *a.shape)
        return ssim(a, b, window=window, c1=c1, c2=c2)
    elif metric == MetricId.SSIM_GLOBAL:
        return ssim(a, b, window=None, c1=c1, c2=c2)
    elif metric == MetricId.SPEARMAN:
        return spearman(a, b)
    elif metric == MetricId.MSE_NORMALIZED:
        return mse_normalized(a, b)
    elif metric == MetricId.MSE_RAW:
        return mse_raw(a, b)
    raise ConfigError('unknown metric: %s' % metric)

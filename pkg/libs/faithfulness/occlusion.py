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
    Blur Occlusion
    ~~~~~~~~~~~~~~

    Regions of a non-overlapping k x k grid are ranked by mean attribution and
    replaced, one after another and cumulatively, by the same region of a
    box-blurred copy; the score of the originally predicted class is tracked.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy.ndimage import uniform_filter

from ..attribution import AttributionMap
from ..common.errors import ConfigError, MetricError, ShapeError
from ..metrics import pearson
from ..tensor import ModelGraph, predict, softmax


class ScoreMode:

    SOFTMAX = 'softmax'
    LOGIT = 'logit'

    ALL = (SOFTMAX, LOGIT)


@dataclass(frozen=True)
class OcclusionConfig:

    blur: int = 15
    patch: int = 8
    steps: int = 30
    score: str = ScoreMode.SOFTMAX

    def __post_init__(self):
        if self.blur < 1 or self.blur % 2 == 0:
            raise ConfigError('blur kernel must be odd and positive: %d' % self.blur)
        if self.patch < 1:
            raise ConfigError('patch size must be positive: %d' % self.patch)
        if self.steps < 1:
            raise ConfigError('steps must be positive: %d' % self.steps)
        if self.score not in ScoreMode.ALL:
            raise ConfigError('unknown score mode: %s' % self.score)


@dataclass(frozen=True)
class Region:
    index: int      # row-major position in the grid
    top: int
    left: int
    size: int
    mean: float

    def slices(self) -> Tuple[slice, slice]:
        return slice(self.top, self.top + self.size), slice(self.left, self.left + self.size)


@dataclass(frozen=True)
class OcclusionCurve:
    """ scores s_0 (clean) .. s_n; lower area means a more faithful map """

    scores: Tuple[float, ...]
    target: int
    method: str
    image_id: int
    order: Tuple[int, ...]      # region indices in occlusion order
    excluded: int = 0           # partial grid cells left out

    @property
    def auc(self) -> float:
        return float(np.mean(self.scores[1:]))


def blur_image(x: np.ndarray, kernel: int) -> np.ndarray:
    """ per-channel box filter with zero-padded borders """
    x = np.asarray(x, dtype=np.float64)
    if kernel < 1 or kernel % 2 == 0:
        raise ConfigError('blur kernel must be odd and positive: %d' % kernel)
    if x.ndim != 3:
        raise ShapeError('blur needs a C x H x W image, got %s' % (x.shape, ))
    if kernel == 1:
        return x.copy()
    return uniform_filter(x, size=(1, kernel, kernel), mode='constant', cval=0.0)


def _spatial(amap: Union[AttributionMap, np.ndarray]) -> np.ndarray:
    values = amap.values if isinstance(amap, AttributionMap) else np.asarray(amap, dtype=np.float64)
    if values.ndim == 3:
        values = values.sum(axis=0)
    if values.ndim != 2:
        raise ShapeError('region ranking needs an H x W (or C x H x W) map, got %s' % (values.shape, ))
    return values


def grid_regions(amap: Union[AttributionMap, np.ndarray], patch: int) -> Tuple[List[Region], int]:
    """ full k x k cells in row-major order plus the number of excluded partial cells """
    values = _spatial(amap)
    height, width = values.shape
    if patch > height or patch > width:
        raise ShapeError('patch %d larger than map %s' % (patch, values.shape))
    rows, cols = height // patch, width // patch
    cells = values[:rows * patch, :cols * patch].reshape(rows, patch, cols, patch).mean(axis=(1, 3))
    regions = []
    for r in range(rows):
        for c in range(cols):
            regions.append(Region(index=r * cols + c, top=r * patch, left=c * patch, size=patch,
                                  mean=float(cells[r, c])))
    excluded = -(-height // patch) * -(-width // patch) - rows * cols
    return regions, excluded


def rank_regions(amap: Union[AttributionMap, np.ndarray], patch: int) -> List[Region]:
    """ highest mean attribution first; ties keep row-major order """
    regions, _ = grid_regions(amap, patch=patch)
    means = np.array([region.mean for region in regions])
    order = np.argsort(-means, kind='stable')
    return [regions[i] for i in order]


def _score(model: ModelGraph, batch: np.ndarray, target: int, mode: str) -> np.ndarray:
    logits = predict(model=model, batch=batch)
    if mode == ScoreMode.SOFTMAX:
        return softmax(logits)[:, target]
    return logits[:, target]


def clean_prediction(model: ModelGraph, x: np.ndarray, mode: str) -> Tuple[int, float]:
    logits = predict(model=model, batch=x[np.newaxis])
    target = int(np.argmax(logits[0]))
    return target, float(_score(model=model, batch=x[np.newaxis], target=target, mode=mode)[0])


def run_occlusion(model: ModelGraph, x: np.ndarray, amap: Union[AttributionMap, np.ndarray],
                  config: OcclusionConfig, method: str = '', image_id: int = 0) -> OcclusionCurve:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != model.input_shape:
        raise ShapeError('input shape %s does not match model input %s' % (x.shape, model.input_shape))
    regions, excluded = grid_regions(amap, patch=config.patch)
    if config.steps > len(regions):
        raise ConfigError('%d occlusion steps but only %d regions of size %d' % (config.steps, len(regions),
                                                                                 config.patch))
    ranked = rank_regions(amap, patch=config.patch)[:config.steps]
    target, clean = clean_prediction(model=model, x=x, mode=config.score)
    blurred = blur_image(x, kernel=config.blur)
    current = x.copy()
    batch = np.empty((config.steps, ) + x.shape, dtype=np.float64)
    for step, region in enumerate(ranked):
        rows, cols = region.slices()
        current[:, rows, cols] = blurred[:, rows, cols]
        batch[step] = current
    scores = _score(model=model, batch=batch, target=target, mode=config.score)
    return OcclusionCurve(scores=(clean, ) + tuple(float(s) for s in scores), target=target, method=method,
                          image_id=image_id, order=tuple(region.index for region in ranked), excluded=excluded)


def region_drops(model: ModelGraph, x: np.ndarray, patch: int, blur: int,
                 mode: str = ScoreMode.SOFTMAX) -> np.ndarray:
    """ score drop when each region alone is blurred, row-major """
    x = np.asarray(x, dtype=np.float64)
    regions, _ = grid_regions(np.zeros(x.shape[1:]), patch=patch)
    target, clean = clean_prediction(model=model, x=x, mode=mode)
    blurred = blur_image(x, kernel=blur)
    batch = np.repeat(x[np.newaxis], len(regions), axis=0)
    for i, region in enumerate(regions):
        rows, cols = region.slices()
        batch[i, :, rows, cols] = blurred[:, rows, cols]
    return clean - _score(model=model, batch=batch, target=target, mode=mode)


def region_correlation(model: ModelGraph, x: np.ndarray, amap: Union[AttributionMap, np.ndarray],
                       config: OcclusionConfig, drops: Optional[np.ndarray] = None) -> float:
    """ Pearson r of region attribution means vs single-region occlusion drops; NaN when undefined """
    regions, _ = grid_regions(amap, patch=config.patch)
    if drops is None:
        drops = region_drops(model=model, x=x, patch=config.patch, blur=config.blur, mode=config.score)
    means = np.array([region.mean for region in regions])
    try:
        return pearson(means, drops)
    except MetricError:
        return float('nan')

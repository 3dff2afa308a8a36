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
    Logit-preservation Diagnostics
    ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

    logit correlation, stability of the skip-path explanation component and
    overlap of irrelevant pixels before / after randomization.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..attribution import LrpConfig, MethodOptions, compute_attribution, skip_split
from ..common.errors import ConfigError, MetricError
from ..metrics import PrepId, cosine, pearson, preprocess
from ..tensor import ModelGraph, predict
from ..utils import Log, new_rng
from ..zoo import Dataset, RandomizationMode, RandomizationPlan, randomize


@dataclass(frozen=True)
class Summary:
    """ mean / std over images of a per-image statistic; NaN entries are flagged cells """

    values: Tuple[float, ...]
    mean: float
    std: float
    flagged: int

    @classmethod
    def of(cls, values):
        array = np.asarray(values, dtype=np.float64)
        valid = array[~np.isnan(array)]
        flagged = int(array.size - valid.size)
        if valid.size == 0:
            return cls(values=tuple(array.tolist()), mean=float('nan'), std=float('nan'), flagged=flagged)
        return cls(values=tuple(array.tolist()), mean=float(np.mean(valid)), std=float(np.std(valid)),
                   flagged=flagged)


def logit_correlation(model: ModelGraph, plan: RandomizationPlan, stage: int, dataset: Dataset,
                      mode: str = RandomizationMode.CASCADING) -> Summary:
    """ per-image Pearson r between the class-logit vectors before and after randomization """
    randomized = randomize(model=model, plan=plan, stage=stage, mode=mode)
    before = predict(model=model, batch=dataset.images)
    after = predict(model=randomized, batch=dataset.images)
    values = []
    for index in range(len(dataset)):
        try:
            values.append(pearson(before[index], after[index]))
        except MetricError:
            Log.warning('constant logit vector for image %d, stage %d', index, stage)
            values.append(float('nan'))
    return Summary.of(values)


@dataclass(frozen=True)
class SkipStability:
    skip: Summary
    weighted: Summary


def _cosine_or_nan(a: np.ndarray, b: np.ndarray) -> float:
    try:
        return cosine(a, b)
    except MetricError:
        return float('nan')


def skip_component_stability(model: ModelGraph, plan: RandomizationPlan, stage: int, dataset: Dataset,
                             config: LrpConfig, mode: str = RandomizationMode.CASCADING,
                             node: Optional[str] = None) -> SkipStability:
    """ cosine similarity of the skip / weighted components before vs after randomization """
    randomized = randomize(model=model, plan=plan, stage=stage, mode=mode)
    targets = np.argmax(predict(model=model, batch=dataset.images), axis=1)
    skips = []
    weights = []
    for index in range(len(dataset)):
        x = dataset.images[index]
        target = int(targets[index])
        before = skip_split(model=model, x=x, target=target, config=config, node=node)
        after = skip_split(model=randomized, x=x, target=target, config=config, node=node)
        skips.append(_cosine_or_nan(before.skip.values, after.skip.values))
        weights.append(_cosine_or_nan(before.weighted.values, after.weighted.values))
    return SkipStability(skip=Summary.of(skips), weighted=Summary.of(weights))


@dataclass(frozen=True)
class IrrelevanceOverlap:
    overlap: Summary
    baseline: Summary   # same statistic against a pixel-shuffled map


def _overlap(before: np.ndarray, after: np.ndarray, tau: float) -> float:
    quiet = np.abs(before) < tau
    count = int(quiet.sum())
    if count == 0:
        return float('nan')
    return float(np.sum(quiet & (np.abs(after) < tau))) / count


def irrelevance_overlap(model: ModelGraph, plan: RandomizationPlan, stage: int, dataset: Dataset,
                        method: str = 'lrp-gamma', tau: float = 0.1, mode: str = RandomizationMode.CASCADING,
                        options: Optional[MethodOptions] = None, seed: int = 0) -> IrrelevanceOverlap:
    """
        fraction of pixels with |R| < tau (channel-sum, second-moment normalized)
        before randomization that stay below tau afterwards
    """
    if tau <= 0:
        raise ConfigError('tau must be positive: %s' % tau)
    randomized = randomize(model=model, plan=plan, stage=stage, mode=mode)
    targets = np.argmax(predict(model=model, batch=dataset.images), axis=1)
    rng = new_rng(seed, 'shuffle', stage)
    values = []
    baseline = []
    for index in range(len(dataset)):
        x = dataset.images[index]
        target = int(targets[index])
        try:
            before = preprocess(compute_attribution(method, model, x, target, seed=seed, options=options),
                                prep=PrepId.SIGNED_SUM_M2)
            after = preprocess(compute_attribution(method, randomized, x, target, seed=seed, options=options),
                               prep=PrepId.SIGNED_SUM_M2)
        except MetricError:
            Log.warning('degenerate %s map for image %d, stage %d', method, index, stage)
            values.append(float('nan'))
            baseline.append(float('nan'))
            continue
        values.append(_overlap(before, after, tau))
        shuffled = rng.permutation(after.ravel()).reshape(after.shape)
        baseline.append(_overlap(before, shuffled, tau))
    return IrrelevanceOverlap(overlap=Summary.of(values), baseline=Summary.of(baseline))

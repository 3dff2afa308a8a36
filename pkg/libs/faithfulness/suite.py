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
    Faithfulness Suite
    ~~~~~~~~~~~~~~~~~~

    Occlusion curves for every (model, method, seed, image); lower AUC is better.
"""

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..attribution import MethodOptions, compute_attribution, check_methods
from ..common.errors import AuditError, ConfigError
from ..tensor import ModelGraph
from ..utils import Logging, TaskPool, derive_seed
from ..utils import get_exception_traceback
from ..zoo import Dataset

from .occlusion import OcclusionConfig, OcclusionCurve, clean_prediction, run_occlusion
from .occlusion import region_correlation, region_drops


CURVE_COLUMNS = ('model', 'method', 'patch_k', 'blur_k', 'seed', 'image_id', 'step', 'score')
AUC_COLUMNS = ('model', 'method', 'patch_k', 'blur_k', 'seed', 'image_id', 'auc', 'region_correlation')

MEAN_IMAGE = 'mean'


@dataclass(frozen=True)
class FailedCurve:
    model: str
    method: str
    seed: int
    image: int
    reason: str

    def __str__(self) -> str:
        return '%s %s seed=%d image=%d: %s' % (self.model, self.method, self.seed, self.image, self.reason)


@dataclass(frozen=True)
class FaithfulnessResult:

    curves: Tuple[Tuple[str, int, OcclusionCurve], ...]     # (model, seed, curve)
    correlations: Tuple[float, ...]                          # aligned with curves
    config: OcclusionConfig
    failed: Tuple[FailedCurve, ...] = ()

    def curve_rows(self) -> List[tuple]:
        rows = []
        k, blur = self.config.patch, self.config.blur
        for model, seed, curve in self.curves:
            for step, score in enumerate(curve.scores):
                rows.append((model, curve.method, k, blur, seed, curve.image_id, step, score))
        return rows

    def auc_rows(self) -> List[tuple]:
        rows = []
        k, blur = self.config.patch, self.config.blur
        groups: Dict[Tuple[str, str, int], List[Tuple[float, float]]] = {}
        order = []
        for (model, seed, curve), r in zip(self.curves, self.correlations):
            rows.append((model, curve.method, k, blur, seed, curve.image_id, curve.auc, r))
            key = (model, curve.method, seed)
            if key not in groups:
                groups[key] = []
                order.append(key)
            groups[key].append((curve.auc, r))
        for model, method, seed in order:
            values = np.array(groups[(model, method, seed)], dtype=np.float64)
            corr = values[:, 1]
            corr = corr[~np.isnan(corr)]
            mean_corr = float(np.mean(corr)) if corr.size > 0 else float('nan')
            rows.append((model, method, k, blur, seed, MEAN_IMAGE, float(np.mean(values[:, 0])), mean_corr))
        return rows

    def mean_auc(self, model: str, method: str, seed: int) -> float:
        aucs = [curve.auc for name, s, curve in self.curves if name == model and s == seed and curve.method == method]
        return float(np.mean(aucs))


class FaithfulnessSuite(Logging):

    def __init__(self, models: Mapping[str, ModelGraph], methods: Sequence[str], dataset: Dataset,
                 config: OcclusionConfig, seeds: Sequence[int] = (0, ), options: Optional[MethodOptions] = None,
                 pool: Optional[TaskPool] = None):
        super().__init__()
        self.__models = dict(models)
        self.__methods = check_methods(methods)
        self.__dataset = dataset
        self.__config = config
        self.__seeds = list(seeds)
        self.__options = options if options is not None else MethodOptions()
        self.__pool = pool if pool is not None else TaskPool()
        # single-region drops depend on (model, image) only
        self.__drops: Dict[Tuple[str, int], np.ndarray] = {}

    def _evaluate(self, key: Tuple[str, str, int, int]) -> Union[Tuple[OcclusionCurve, float], FailedCurve]:
        name, method, seed, image = key
        try:
            return self.__curve(name=name, method=method, seed=seed, image=image)
        except ConfigError:
            raise
        except AuditError as error:
            self.error('curve failed: %s %s seed=%d image=%d: %s', name, method, seed, image, error)
            reason = str(error)
        except Exception as error:
            self.error('curve crashed: %s %s seed=%d image=%d: %s', name, method, seed, image, error)
            self.error('traceback: %s', get_exception_traceback())
            reason = '%s: %s' % (type(error).__name__, error)
        return FailedCurve(model=name, method=method, seed=seed, image=image, reason=reason)

    def __curve(self, name: str, method: str, seed: int, image: int) -> Tuple[OcclusionCurve, float]:
        model = self.__models[name]
        x = self.__dataset.images[image]
        config = self.__config
        curve_seed = derive_seed(seed, method, image)
        # attribution target: the class the model predicts on the clean image
        target, _ = clean_prediction(model=model, x=x, mode=config.score)
        amap = compute_attribution(name=method, model=model, x=x, target=target, seed=curve_seed,
                                   options=self.__options)
        curve = run_occlusion(model=model, x=x, amap=amap, config=config, method=method, image_id=image)
        r = region_correlation(model=model, x=x, amap=amap, config=config, drops=self.__drops.get((name, image)))
        return curve, r

    def run(self) -> FaithfulnessResult:
        config = self.__config
        names = list(self.__models.keys())
        images = range(len(self.__dataset))
        for name in names:
            for image in images:
                try:
                    self.__drops[(name, image)] = region_drops(model=self.__models[name],
                                                               x=self.__dataset.images[image], patch=config.patch,
                                                               blur=config.blur, mode=config.score)
                except ConfigError:
                    raise
                except AuditError as error:
                    # the cells of this image fail on their own
                    self.warning('region drops failed for %s image %d: %s', name, image, error)
        # keys are position tuples so duplicated method names keep their own rows
        keys = []
        for m, name in enumerate(names):
            for k, method in enumerate(self.__methods):
                for s, seed in enumerate(self.__seeds):
                    for image in images:
                        keys.append(((m, k, s, image), (name, method, seed, image)))
        self.info('occlusion: %d curve(s), patch=%d, blur=%d, steps=%d', len(keys), config.patch, config.blur,
                  config.steps)
        results = self.__pool.map(self._evaluate, keys)
        curves = []
        correlations = []
        failed = []
        for (m, _, s, _), outcome in results:
            if isinstance(outcome, FailedCurve):
                failed.append(outcome)
                continue
            curve, r = outcome
            curves.append((names[m], self.__seeds[s], curve))
            correlations.append(r)
        if len(failed) > 0:
            self.warning('occlusion: %d of %d curve(s) failed', len(failed), len(keys))
        return FaithfulnessResult(curves=tuple(curves), correlations=tuple(correlations), config=config,
                                  failed=tuple(failed))


def faithfulness_suite(models: Mapping[str, ModelGraph], methods: Sequence[str], dataset: Dataset,
                       config: OcclusionConfig, seeds: Sequence[int] = (0, ), options: Optional[MethodOptions] = None,
                       pool: Optional[TaskPool] = None) -> FaithfulnessResult:
    suite = FaithfulnessSuite(models=models, methods=methods, dataset=dataset, config=config, seeds=seeds,
                              options=options, pool=pool)
    return suite.run()

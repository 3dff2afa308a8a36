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
    Randomization Sanity Checks
    ~~~~~~~~~~~~~~~~~~~~~~~~~~~

    For every (seed, stage): randomize the model top-down, recompute the
    attributions and compare them with the original-model attributions.
    Images are averaged first, then seeds.
"""

import dataclasses
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..attribution import Method, MethodOptions, compute_attribution, check_methods
from ..common.errors import ConfigError, MetricError
from ..metrics import MetricId, PrepId, DEFAULT_WINDOW, compare, preprocess
from ..tensor import ModelGraph, predict
from ..utils import Logging, TaskPool, derive_seed
from ..zoo import Dataset, RandomizationMode, RandomizationPlan, randomize


SANITY_COLUMNS = ('model', 'method', 'mode', 'stage', 'metric', 'prep', 'seed', 'n_images', 'mean', 'std')

ALL_SEEDS = 'all'


@dataclass(frozen=True)
class SanityRunConfig:

    model: ModelGraph
    dataset: Dataset
    methods: Tuple[str, ...]
    plan: RandomizationPlan
    metrics: Tuple[str, ...]
    seeds: Tuple[int, ...]
    mode: str = RandomizationMode.CASCADING
    prep: str = PrepId.DEFAULT
    stages: Optional[Tuple[int, ...]] = None    # None: every stage of the plan
    options: MethodOptions = field(default_factory=MethodOptions)
    window: int = DEFAULT_WINDOW
    model_name: str = 'model'

    def __post_init__(self):
        for name in ('methods', 'metrics', 'seeds'):
            value = tuple(getattr(self, name))
            if len(value) == 0:
                raise ConfigError('sanity run needs at least one of: %s' % name)
            object.__setattr__(self, name, value)
        check_methods(self.methods)
        for metric in self.metrics:
            if metric not in MetricId.ALL:
                raise ConfigError('unknown metric: %s' % metric)
        if self.prep not in PrepId.ALL:
            raise ConfigError('unknown preprocessing pipeline: %s' % self.prep)
        if self.mode not in RandomizationMode.ALL:
            raise ConfigError('unknown randomization mode: %s' % self.mode)
        if self.stages is not None:
            stages = tuple(self.stages)
            if len(stages) == 0:
                raise ConfigError('stage list is empty')
            for stage in stages:
                if not 0 <= stage < self.plan.stages:
                    raise ConfigError('stage %d out of range [0, %d)' % (stage, self.plan.stages))
            object.__setattr__(self, 'stages', stages)
        if len(self.dataset) == 0:
            raise ConfigError('sanity run needs at least one image')
        self.plan.validate(model=self.model)

    @property
    def stage_list(self) -> Tuple[int, ...]:
        if self.stages is None:
            return tuple(range(self.plan.stages))
        return self.stages


@dataclass(frozen=True)
class SanityRow:
    model: str
    method: str
    mode: str
    stage: int
    metric: str
    prep: str
    seed: str
    n_images: int
    mean: float
    std: float

    def cells(self) -> tuple:
        return dataclasses.astuple(self)


@dataclass(frozen=True)
class FlaggedCell:
    """ a comparison that could not be computed (degenerate map) """
    method: str
    stage: int
    metric: str
    seed: int
    image: int
    reason: str


@dataclass(frozen=True)
class SanityResult:

    rows: Tuple[SanityRow, ...]
    flagged: Tuple[FlaggedCell, ...] = ()

    def select(self, method: str, stage: int, metric: str, seed=ALL_SEEDS) -> SanityRow:
        for row in self.rows:
            if row.method == method and row.stage == stage and row.metric == metric and row.seed == str(seed):
                return row
        raise KeyError('no row for %s/%d/%s/%s' % (method, stage, metric, seed))


def method_seed(plan_seed: int, method: str, image: int, run_seed: Optional[int] = None,
                stage: Optional[int] = None) -> int:
    """
        Stochastic methods reuse the same noise before and after randomization,
        so only the model changes; the random reference map draws fresh noise per call.
    """
    if method != Method.RANDOM:
        return derive_seed(plan_seed, method, image)
    if run_seed is None:
        return derive_seed(plan_seed, method, 'original', image)
    return derive_seed(run_seed, method, stage, image)


def _stats(values: Sequence[float]) -> Tuple[int, float, float]:
    array = np.asarray(values, dtype=np.float64)
    valid = array[~np.isnan(array)]
    if valid.size == 0:
        return 0, float('nan'), float('nan')
    return int(valid.size), float(np.mean(valid)), float(np.std(valid))


class SanityHarness(Logging):

    def __init__(self, config: SanityRunConfig, pool: Optional[TaskPool] = None):
        super().__init__()
        self.__config = config
        self.__pool = pool if pool is not None else TaskPool()
        self.__targets: Optional[np.ndarray] = None
        # (method, image) -> preprocessed original map, or None when degenerate
        self.__originals: Dict[Tuple[str, int], Optional[np.ndarray]] = {}

    @property
    def config(self) -> SanityRunConfig:
        return self.__config

    def __attribute(self, model: ModelGraph, method: str, image: int, seed: int) -> Optional[np.ndarray]:
        config = self.__config
        x = config.dataset.images[image]
        amap = compute_attribution(name=method, model=model, x=x, target=int(self.__targets[image]), seed=seed,
                                   options=config.options)
        try:
            return preprocess(amap, prep=config.prep)
        except MetricError as error:
            self.warning('degenerate %s map for image %d: %s', method, image, error)
            return None

    def __prepare(self):
        config = self.__config
        logits = predict(model=config.model, batch=config.dataset.images)
        self.__targets = np.argmax(logits, axis=1)
        for method in config.methods:
            for image in range(len(config.dataset)):
                seed = method_seed(plan_seed=config.plan.seed, method=method, image=image)
                self.__originals[(method, image)] = self.__attribute(model=config.model, method=method,
                                                                     image=image, seed=seed)

    def _cell(self, key: Tuple[int, int]) -> Tuple[Dict[Tuple[str, str], List[float]], List[FlaggedCell]]:
        """ every (method, metric) value list for one (seed, stage) """
        run_seed, stage = key
        config = self.__config
        plan = dataclasses.replace(config.plan, seed=derive_seed(config.plan.seed, run_seed))
        model = randomize(model=config.model, plan=plan, stage=stage, mode=config.mode)
        values: Dict[Tuple[str, str], List[float]] = {}
        flagged = []
        for method in config.methods:
            for image in range(len(config.dataset)):
                seed = method_seed(plan_seed=config.plan.seed, method=method, image=image,
                                   run_seed=run_seed, stage=stage)
                before = self.__originals[(method, image)]
                after = self.__attribute(model=model, method=method, image=image, seed=seed)
                for metric in config.metrics:
                    value = float('nan')
                    if before is None or after is None:
                        flagged.append(FlaggedCell(method=method, stage=stage, metric=metric, seed=run_seed,
                                                   image=image, reason='constant or all-zero map'))
                    else:
                        try:
                            value = compare(metric, before, after, window=config.window).value
                        except MetricError as error:
                            self.warning('%s/%s undefined at seed %d, stage %d, image %d: %s',
                                         method, metric, run_seed, stage, image, error)
                            flagged.append(FlaggedCell(method=method, stage=stage, metric=metric, seed=run_seed,
                                                       image=image, reason=str(error)))
                    values.setdefault((method, metric), []).append(value)
        self.info('seed %d, stage %d done: %d flagged cell(s)', run_seed, stage, len(flagged))
        return values, flagged

    def run(self) -> SanityResult:
        config = self.__config
        self.info('sanity run: model=%s, methods=%s, stages=%s, seeds=%s', config.model_name, config.methods,
                  config.stage_list, config.seeds)
        self.__prepare()
        keys = [((seed, stage), (seed, stage)) for seed in config.seeds for stage in config.stage_list]
        results = dict(self.__pool.map(self._cell, keys))
        rows = []
        flagged = []
        for seed in config.seeds:
            for stage in config.stage_list:
                flagged.extend(results[(seed, stage)][1])
        for method in config.methods:
            for stage in config.stage_list:
                for metric in config.metrics:
                    seed_means = []
                    total = 0
                    for seed in config.seeds:
                        n, mean, std = _stats(results[(seed, stage)][0][(method, metric)])
                        rows.append(SanityRow(model=config.model_name, method=method, mode=config.mode,
                                              stage=stage, metric=metric, prep=config.prep, seed=str(seed),
                                              n_images=n, mean=mean, std=std))
                        seed_means.append(mean)
                        total += n
                    _, mean, std = _stats(seed_means)
                    rows.append(SanityRow(model=config.model_name, method=method, mode=config.mode, stage=stage,
                                          metric=metric, prep=config.prep, seed=ALL_SEEDS, n_images=total,
                                          mean=mean, std=std))
        return SanityResult(rows=tuple(rows), flagged=tuple(flagged))


def run_sanity(config: SanityRunConfig, pool: Optional[TaskPool] = None) -> SanityResult:
    return SanityHarness(config=config, pool=pool).run()

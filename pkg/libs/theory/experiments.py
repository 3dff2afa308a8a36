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
    Theory Experiments
    ~~~~~~~~~~~~~~~~~~

    Named experiments with default parameters; every one of them yields rows
    of (experiment, param_json, seed, trials, value, analytic, bound).
"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Mapping, Optional

import numpy as np

from ..common.errors import ConfigError
from ..tensor import predict
from ..utils import Log, TaskPool, derive_seed, new_rng, json_encode
from ..zoo import ArchitectureId, ArchitectureSpec, build

from .cauchy import cauchy_tail
from .montecarlo import ssim_mc, spearman_mc, mse_mc, normalization_variance_mc
from .overtaking import ActivationSplit, overtaking_probability_mc, overtaking_probability_avg
from .properties import monotonicity_test, positive_dominance_check, DominanceRule
from .quantiles import QuantileTable, quantile_overtaking, HIGH_QUANTILES, LOW_QUANTILES
from .shapley import Activation, coalition_values, shapley_values


THEORY_COLUMNS = ('experiment', 'param_json', 'seed', 'trials', 'value', 'analytic', 'bound')

NAN = float('nan')


@dataclass(frozen=True)
class TheoryRow:

    experiment: str
    param_json: str
    seed: int
    trials: int
    value: float
    analytic: float = NAN
    bound: float = NAN

    def cells(self) -> tuple:
        return self.experiment, self.param_json, self.seed, self.trials, self.value, self.analytic, self.bound


def param_json(params: Mapping[str, Any]) -> str:
    return json_encode(container={key: params[key] for key in sorted(params)})


def _cauchy(params: Dict, seed: int, pool: TaskPool) -> List[TheoryRow]:
    value = cauchy_tail(params['k'], params['gamma'])
    return [TheoryRow('cauchy', param_json(params), seed, 0, value, 0.5 - np.arctan(params['k'] / params['gamma']) / np.pi)]


def _ssim(params: Dict, seed: int, pool: TaskPool) -> List[TheoryRow]:
    result = ssim_mc(patch=params['patch'], n_trials=params['trials'], seed=seed, distribution=params['distribution'],
                     c1=params['c1'], c2=params['c2'], center=params['center'], pool=pool)
    js = param_json(params)
    n = result.trials
    return [
        TheoryRow('ssim-independent', js, seed, n, result.abs_mean, NAN, result.bound),
        TheoryRow('ssim-independent-abs', js, seed, n, result.mean_abs),
        TheoryRow('ssim-luminance', js, seed, n, result.luminance, 1.0 if params['center'] else NAN),
        TheoryRow('ssim-structure', js, seed, n, result.structure),
    ]


def _spearman(params: Dict, seed: int, pool: TaskPool) -> List[TheoryRow]:
    result = spearman_mc(n=params['n'], n_trials=params['trials'], seed=seed, noise=params['noise'], pool=pool)
    js = param_json(params)
    return [
        TheoryRow('spearman-independent', js, seed, result.trials, result.mean_independent, 0.0),
        TheoryRow('spearman-control', js, seed, result.trials, result.mean_control),
    ]


def _mse(params: Dict, seed: int, pool: TaskPool) -> List[TheoryRow]:
    result = mse_mc(n=params['n'], n_trials=params['trials'], seed=seed, pool=pool)
    js = param_json(params)
    return [
        TheoryRow('mse-independent', js, seed, result.trials, result.mean_independent, 2.0, 4.0),
        TheoryRow('mse-negated', js, seed, result.trials, result.mean_negated, 4.0, 4.0),
        TheoryRow('mse-identical', js, seed, result.trials, result.mean_identical, 0.0, 4.0),
    ]


def _split(params: Dict) -> ActivationSplit:
    if params['k'] is None:
        return ActivationSplit.tight(large=params['large'], small=params['small'], sigma=params['sigma'])
    return ActivationSplit(large=tuple(params['large']), small=tuple(params['small']), k=params['k'],
                           sigma=params['sigma'])


def _overtaking(name: str, fn: Callable) -> Callable:

    def run(params: Dict, seed: int, pool: TaskPool) -> List[TheoryRow]:
        result = fn(_split(params), n_trials=params['trials'], seed=seed, pool=pool)
        js = param_json(params)
        return [
            TheoryRow(name, js, seed, result.trials, result.empirical, result.exact, result.bound),
            TheoryRow(name + '-unconditional', js, seed, result.trials, result.unconditional, result.exact / 2.0),
        ]

    return run


def _normalization(params: Dict, seed: int, pool: TaskPool) -> List[TheoryRow]:
    result = normalization_variance_mc(n=params['n'], n_resamples=params['resamples'], seed=seed, pool=pool)
    js = param_json(params)
    return [
        TheoryRow('normalization-max-abs', js, seed, result.resamples, result.max_abs),
        # delta method: Var(sqrt(mean A^2)) ~ 1 / (2n)
        TheoryRow('normalization-second-moment', js, seed, result.resamples, result.second_moment,
                  1.0 / (2.0 * params['n'])),
    ]


def _monotonicity(params: Dict, seed: int, pool: TaskPool) -> List[TheoryRow]:
    result = monotonicity_test(method=params['method'], n_instances=params['instances'], seed=seed,
                               strong=params['strong'])
    return [TheoryRow('monotonicity', param_json(params), seed, result.instances, float(result.violations), 0.0)]


def _shapley(params: Dict, seed: int, pool: TaskPool) -> List[TheoryRow]:
    w = np.asarray(params['weights'], dtype=np.float64)
    x = np.asarray(params['x'], dtype=np.float64)
    phi = shapley_values(weights=w, bias=params['bias'], activation=params['activation'], x=x)
    values = coalition_values(weights=w, bias=params['bias'], activation=params['activation'], x=x)
    rows = []
    for i, value in enumerate(phi):
        # linear g with b = 0 splits the output as w_i x_i
        exact = float(w[i] * x[i]) if params['activation'] == Activation.LINEAR and params['bias'] == 0 else NAN
        rows.append(TheoryRow('shapley', param_json(dict(params, feature=i)), seed, 0, float(value), exact))
    rows.append(TheoryRow('shapley-efficiency', param_json(params), seed, 0, float(phi.sum()),
                          float(values[-1] - values[0])))
    return rows


def _dominance(params: Dict, seed: int, pool: TaskPool) -> List[TheoryRow]:
    arch = ArchitectureSpec(kind=ArchitectureId.MLP_SMALL, input_shape=(1, 4, 4), classes=params['classes'],
                            hidden=params['hidden'])
    rows = []
    skipped = 0
    for index in range(params['models']):
        model = build(arch, seed=derive_seed(seed, 'dominance', index))
        x = new_rng(seed, 'dominance-input', index).uniform(0.0, 1.0, size=arch.input_shape)
        logits = predict(model, x[np.newaxis])[0]
        target = int(np.argmax(logits))
        if not logits[target] > 0:
            skipped += 1
            continue
        result = positive_dominance_check(model, x, target=target, rule=params['rule'], beta=params['beta'])
        js = param_json(dict(params, model=index))
        rows.append(TheoryRow('dominance-deviation', js, seed, 1, result.max_deviation, 0.0, 1e-6))
        rows.append(TheoryRow('dominance-min-sum', js, seed, 1, min(v for _, v in result.sums), result.logit))
    if skipped > 0:
        Log.warning('dominance: %d model(s) without a positive logit skipped', skipped)
    return rows


_SPLIT = {'large': [2.0], 'small': [1.0, 1.0, 1.0, 1.0], 'k': None, 'sigma': 1.0, 'trials': 1000000}

EXPERIMENTS: Dict[str, tuple] = {
    'cauchy': (_cauchy, {'k': 1.0, 'gamma': 1.0}),
    'ssim': (_ssim, {'patch': 16, 'distribution': 'normal', 'trials': 1000, 'c1': 0.01, 'c2': 0.01,
                     'center': True}),
    'spearman': (_spearman, {'n': 1024, 'trials': 200, 'noise': 0.5}),
    'mse': (_mse, {'n': 1024, 'trials': 200}),
    'overtaking': (_overtaking('overtaking', overtaking_probability_mc), dict(_SPLIT)),
    'overtaking-avg': (_overtaking('overtaking-avg', overtaking_probability_avg), dict(_SPLIT)),
    'normalization-variance': (_normalization, {'n': 10000, 'resamples': 200}),
    'monotonicity': (_monotonicity, {'method': 'gi', 'instances': 1000, 'strong': False}),
    'shapley': (_shapley, {'weights': [3.0, -1.0], 'x': [1.0, 1.0], 'bias': 0.0, 'activation': 'relu'}),
    'dominance': (_dominance, {'models': 50, 'rule': DominanceRule.LRP_0, 'beta': 1.0, 'hidden': 16, 'classes': 2}),
}


def experiment_params(name: str, params: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    entry = EXPERIMENTS.get(name)
    if entry is None:
        raise ConfigError('unknown experiment: %s' % name)
    merged = dict(entry[1])
    if params is not None:
        unknown = sorted(set(params.keys()) - set(merged.keys()))
        if len(unknown) > 0:
            raise ConfigError('unknown parameter(s) for %s: %s' % (name, unknown))
        merged.update(params)
    return merged


def run_experiment(name: str, params: Optional[Mapping[str, Any]] = None, seed: int = 0,
                   pool: Optional[TaskPool] = None) -> List[TheoryRow]:
    merged = experiment_params(name, params)
    if pool is None:
        pool = TaskPool()
    Log.info('theory experiment %s: %s', name, merged)
    return EXPERIMENTS[name][0](merged, seed, pool)


#
#   Activation statistics
#

QUANTILE_COLUMNS = ('model', 'layer', 'q', 'value', 'n_images')
FRACTION_COLUMNS = ('model', 'layer', 'fraction_nonpositive', 'n_images')
GRID_COLUMNS = ('model', 'layer', 'q_high', 'q_low', 'k', 'gamma', 'probability')


def quantile_rows(table: QuantileTable, model: str) -> List[tuple]:
    return [(model, layer, '%.2f' % q, float(table.values[row, col]), table.n_images)
            for row, layer in enumerate(table.layers) for col, q in enumerate(table.quantiles)]


def fraction_rows(table: QuantileTable, model: str) -> List[tuple]:
    return [(model, layer, float(table.fractions[row]), table.n_images) for row, layer in enumerate(table.layers)]


def overtaking_grid(table: QuantileTable, model: str, q_high=HIGH_QUANTILES, q_low=LOW_QUANTILES) -> List[tuple]:
    cells = quantile_overtaking(table, q_high=q_high, q_low=q_low)
    return [(model, c.layer, '%.2f' % c.q_high, '%.2f' % c.q_low, c.k, c.gamma, c.probability) for c in cells]

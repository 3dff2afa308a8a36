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
    Command Handlers
    ~~~~~~~~~~~~~~~~

    One handler per subcommand; each returns the process exit code
    (0: every row produced, 1: some cells or experiments failed).
"""

import os
import sys
from typing import List

from libs.utils import Log
from libs.utils import CsvEmitter
from libs.utils import TaskPool
from libs.utils import get_exception_traceback
from libs.common import AuditError, ConfigError
from libs.common import ExperimentConfig
from libs.attribution import Method, MethodOptions, check_methods, lrp_config_for
from libs.metrics import MetricId, PrepId
from libs.zoo import RandomizationMode, default_plan, plan_for_nodes, residual_adds
from libs.zoo import serialize
from libs.sanity import SANITY_COLUMNS, SanityRunConfig, run_sanity
from libs.sanity import logit_correlation, skip_component_stability, irrelevance_overlap
from libs.faithfulness import CURVE_COLUMNS, AUC_COLUMNS, OcclusionConfig, faithfulness_suite
from libs.theory import EXPERIMENTS, THEORY_COLUMNS, run_experiment
from libs.theory import QUANTILE_COLUMNS, FRACTION_COLUMNS, GRID_COLUMNS, HIGH_QUANTILES, LOW_QUANTILES
from libs.theory import activation_stats, quantile_rows, fraction_rows, overtaking_grid

from audit.shared import create_dataset, create_model, train_model


EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2

TRAIN_COLUMNS = ('epoch', 'loss', 'accuracy')
DIAGNOSTIC_COLUMNS = ('model', 'diagnostic', 'mode', 'stage', 'mean', 'std', 'flagged')

DEFAULT_METHODS = [Method.GRADIENT, Method.LRP_GAMMA]
DEFAULT_METRICS = [MetricId.SSIM, MetricId.SPEARMAN, MetricId.MSE_NORMALIZED]


def report_failures(failures: List[str]) -> int:
    """ failed cells go to stderr, one per line """
    if len(failures) == 0:
        return EXIT_OK
    for item in failures:
        print('FAILED: %s' % item, file=sys.stderr)
    Log.error('%d cell(s) failed', len(failures))
    return EXIT_PARTIAL


def _images(config: ExperimentConfig, dataset):
    n_images = config.get_integer(option='n_images')
    return dataset if n_images is None else dataset.subset(n_images)


#
#   train
#

async def cmd_train(config: ExperimentConfig, pool: TaskPool) -> int:
    out = config.prepare_out()
    dataset = await create_dataset(config=config)
    model, rows = train_model(config=config, dataset=dataset)
    emitter = CsvEmitter(path=os.path.join(out, 'train_log.csv'), columns=TRAIN_COLUMNS)
    emitter.extend([(row.epoch, row.loss, row.accuracy) for row in rows])
    await emitter.flush()
    model_file = config.get_string(option='model_file', default=os.path.join(out, 'model.bin'))
    await serialize(model=model, path=model_file)
    Log.info('model saved: %s', model_file)
    return EXIT_OK


#
#   sanity
#

async def cmd_sanity(config: ExperimentConfig, pool: TaskPool) -> int:
    out = config.prepare_out()
    dataset = await create_dataset(config=config)
    name, model = await create_model(config=config, dataset=dataset)
    images = _images(config=config, dataset=dataset)
    groups = config.get_list(option='plan')
    if groups is None:
        plan = default_plan(model=model, seed=config.seed)
    else:
        plan = plan_for_nodes(model=model, node_groups=groups, seed=config.seed)
    stages = config.get_list(option='stages')
    options = MethodOptions.from_dict(config.get_section(section='options'))
    mode = config.get_string(option='mode', default=RandomizationMode.CASCADING)
    run = SanityRunConfig(model=model, dataset=images, plan=plan,
                          methods=tuple(config.get_list(option='methods', default=DEFAULT_METHODS)),
                          metrics=tuple(config.get_list(option='metrics', default=DEFAULT_METRICS)),
                          seeds=tuple(config.get_list(option='seeds', default=[config.seed])),
                          mode=mode, prep=config.get_string(option='prep', default=PrepId.DEFAULT),
                          stages=None if stages is None else tuple(stages), options=options, model_name=name)
    result = run_sanity(config=run, pool=pool)
    emitter = CsvEmitter(path=os.path.join(out, 'sanity.csv'), columns=SANITY_COLUMNS)
    emitter.extend([row.cells() for row in result.rows])
    await emitter.flush()
    failures = ['%s stage=%d metric=%s seed=%d image=%d: %s' % (cell.method, cell.stage, cell.metric, cell.seed,
                                                                 cell.image, cell.reason) for cell in result.flagged]
    if config.get_boolean(option='diagnostics'):
        tau = config.get_float(option='tau', default=0.1)
        rows = []
        for stage in run.stage_list:
            summary = logit_correlation(model=model, plan=plan, stage=stage, dataset=images, mode=mode)
            rows.append((name, 'logit-correlation', mode, stage, summary.mean, summary.std, summary.flagged))
            if len(residual_adds(model)) > 0:
                skip = skip_component_stability(model=model, plan=plan, stage=stage, dataset=images,
                                                config=lrp_config_for(Method.LRP_COMPOSITE, options), mode=mode)
                rows.append((name, 'skip-cosine', mode, stage, skip.skip.mean, skip.skip.std, skip.skip.flagged))
                rows.append((name, 'weighted-cosine', mode, stage, skip.weighted.mean, skip.weighted.std,
                             skip.weighted.flagged))
            overlap = irrelevance_overlap(model=model, plan=plan, stage=stage, dataset=images, tau=tau, mode=mode,
                                          options=options, seed=config.seed)
            rows.append((name, 'irrelevance-overlap', mode, stage, overlap.overlap.mean, overlap.overlap.std,
                         overlap.overlap.flagged))
            rows.append((name, 'irrelevance-baseline', mode, stage, overlap.baseline.mean, overlap.baseline.std,
                         overlap.baseline.flagged))
        emitter = CsvEmitter(path=os.path.join(out, 'diagnostics.csv'), columns=DIAGNOSTIC_COLUMNS)
        emitter.extend(rows)
        await emitter.flush()
    return report_failures(failures)


#
#   faithfulness
#

async def cmd_faithfulness(config: ExperimentConfig, pool: TaskPool) -> int:
    out = config.prepare_out()
    dataset = await create_dataset(config=config)
    name, model = await create_model(config=config, dataset=dataset)
    images = _images(config=config, dataset=dataset)
    methods = check_methods(config.get_list(option='methods', default=DEFAULT_METHODS))
    occlusion = OcclusionConfig(blur=config.get_integer(option='blur', section='occlusion', default=15),
                                patch=config.get_integer(option='patch', section='occlusion', default=8),
                                steps=config.get_integer(option='steps', section='occlusion', default=30),
                                score=config.get_string(option='score', section='occlusion', default='softmax'))
    result = faithfulness_suite(models={name: model}, methods=methods, dataset=images, config=occlusion,
                                seeds=config.get_list(option='seeds', default=[config.seed]),
                                options=MethodOptions.from_dict(config.get_section(section='options')), pool=pool)
    emitter = CsvEmitter(path=os.path.join(out, 'occlusion_curves.csv'), columns=CURVE_COLUMNS)
    emitter.extend(result.curve_rows())
    await emitter.flush()
    emitter = CsvEmitter(path=os.path.join(out, 'occlusion_auc.csv'), columns=AUC_COLUMNS)
    emitter.extend(result.auc_rows())
    await emitter.flush()
    return report_failures([str(cell) for cell in result.failed])


#
#   theory
#

async def cmd_theory(config: ExperimentConfig, pool: TaskPool) -> int:
    out = config.prepare_out()
    names = config.get_list(option='experiments', default=list(EXPERIMENTS.keys()))
    params = config.get_section(section='params')
    for name in names:
        if name not in EXPERIMENTS:
            raise ConfigError('unknown experiment: %s' % name)
    for name in params:
        if name not in names:
            raise ConfigError('parameters given for an experiment not requested: %s' % name)
    failures = []
    for name in names:
        try:
            rows = run_experiment(name=name, params=params.get(name), seed=config.seed, pool=pool)
        except ConfigError:
            raise
        except AuditError as error:
            Log.error('experiment %s failed: %s', name, error)
            failures.append('%s: %s' % (name, error))
            continue
        except Exception as error:
            Log.error('experiment %s crashed: %s', name, error)
            Log.error('traceback: %s', get_exception_traceback())
            failures.append('%s: %s' % (name, error))
            continue
        emitter = CsvEmitter(path=os.path.join(out, 'theory_%s.csv' % name), columns=THEORY_COLUMNS)
        emitter.extend([row.cells() for row in rows])
        await emitter.flush()
    return report_failures(failures)


#
#   stats
#

async def cmd_stats(config: ExperimentConfig, pool: TaskPool) -> int:
    out = config.prepare_out()
    dataset = await create_dataset(config=config)
    name, model = await create_model(config=config, dataset=dataset)
    table = activation_stats(model=model, dataset=dataset, n_images=config.get_integer(option='n_images'))
    emitter = CsvEmitter(path=os.path.join(out, 'quantiles.csv'), columns=QUANTILE_COLUMNS)
    emitter.extend(quantile_rows(table, model=name))
    await emitter.flush()
    emitter = CsvEmitter(path=os.path.join(out, 'nonpositive_fractions.csv'), columns=FRACTION_COLUMNS)
    emitter.extend(fraction_rows(table, model=name))
    await emitter.flush()
    q_high = config.get_list(option='q_high', default=list(HIGH_QUANTILES))
    q_low = config.get_list(option='q_low', default=list(LOW_QUANTILES))
    emitter = CsvEmitter(path=os.path.join(out, 'overtaking_grid.csv'), columns=GRID_COLUMNS)
    emitter.extend(overtaking_grid(table, model=name, q_high=q_high, q_low=q_low))
    await emitter.flush()
    return EXIT_OK


COMMANDS = {
    'train': cmd_train,
    'sanity': cmd_sanity,
    'faithfulness': cmd_faithfulness,
    'theory': cmd_theory,
    'stats': cmd_stats,
}

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

import os
from typing import Optional, Tuple

from libs.utils import SysArgvParser
from libs.utils import Log
from libs.utils import Singleton
from libs.utils import TaskPool, derive_seed
from libs.common import ConfigError
from libs.common import ExperimentConfig
from libs.zoo import ArchitectureId, ArchitectureSpec, build
from libs.zoo import Dataset, SyntheticKind, synth_dataset, load_idx
from libs.zoo import Trainer, TrainingConfig, TrainingRow
from libs.zoo import deserialize
from libs.tensor import ModelGraph


IDX = 'idx'


@Singleton
class GlobalVariable:

    def __init__(self):
        super().__init__()
        self.__config: Optional[ExperimentConfig] = None
        self.__pool: Optional[TaskPool] = None

    @property
    def config(self) -> ExperimentConfig:
        return self.__config

    @property
    def pool(self) -> TaskPool:
        return self.__pool

    def prepare(self, config: ExperimentConfig):
        self.__config = config
        self.__pool = TaskPool.from_env(threads=config.threads)
        Log.info('worker pool: %d thread(s)', self.__pool.threads)


def _flag_integer(sys_argv: SysArgvParser, opt: str) -> Optional[int]:
    text = sys_argv.get_opt(opt=opt)
    if text is None:
        return None
    try:
        return int(text)
    except ValueError:
        raise ConfigError('--%s expects an integer: %s' % (opt, text))


async def create_config(sys_argv: SysArgvParser, command: str, default_config: str) -> ExperimentConfig:
    """ load config, apply flag overrides, check paths and output directory """
    path = sys_argv.get_opt(opt='config')
    if path is None:
        path = default_config
    config = await ExperimentConfig.load(command=command, path=path)
    config.override(seed=_flag_integer(sys_argv, 'seed'), out=sys_argv.get_opt(opt='out'),
                    threads=_flag_integer(sys_argv, 'threads'))
    await check_paths(config=config)
    config.prepare_out()
    Log.warning('>>> config loaded: %s => %s', path, config)
    shared = GlobalVariable()
    shared.prepare(config=config)
    return config


async def check_paths(config: ExperimentConfig):
    model_path = config.get_string(option='model_path')
    if model_path is not None:
        await config.check_file(path=model_path, name='model_path')
    if config.get_string(option='kind', section='dataset') == IDX:
        await config.check_file(path=config.get_string(option='images', section='dataset'), name='dataset.images')
        await config.check_file(path=config.get_string(option='labels', section='dataset'), name='dataset.labels')


#
#   Dataset & model
#

async def create_dataset(config: ExperimentConfig) -> Dataset:
    kind = config.get_string(option='kind', section='dataset', default=SyntheticKind.BAR_SHAPES)
    if kind == IDX:
        return await load_idx(images_path=config.get_string(option='images', section='dataset'),
                              labels_path=config.get_string(option='labels', section='dataset'),
                              limit=config.get_integer(option='limit', section='dataset'))
    if kind not in SyntheticKind.ALL:
        raise ConfigError('unknown dataset kind: %s' % kind)
    return synth_dataset(kind=kind, n=config.get_integer(option='n', section='dataset', default=64),
                         seed=config.get_integer(option='seed', section='dataset', default=config.seed),
                         size=config.get_integer(option='size', section='dataset'),
                         classes=config.get_integer(option='classes', section='arch', default=2))


def create_architecture(config: ExperimentConfig, dataset: Dataset) -> ArchitectureSpec:
    kind = config.get_string(option='kind', section='arch', default=ArchitectureId.CONV_PLAIN)
    if kind not in ArchitectureId.ALL:
        raise ConfigError('unknown architecture: %s' % kind)
    return ArchitectureSpec(kind=kind, input_shape=dataset.image_shape,
                            classes=config.get_integer(option='classes', section='arch', default=dataset.classes),
                            width=config.get_integer(option='width', section='arch', default=8),
                            hidden=config.get_integer(option='hidden', section='arch', default=32))


def training_config(config: ExperimentConfig) -> TrainingConfig:
    return TrainingConfig(epochs=config.get_integer(option='epochs', section='train', default=30),
                          lr=config.get_float(option='lr', section='train', default=0.05),
                          batch=config.get_integer(option='batch', section='train', default=16),
                          seed=config.get_integer(option='seed', section='train', default=config.seed))


def train_model(config: ExperimentConfig, dataset: Dataset) -> Tuple[ModelGraph, list]:
    arch = create_architecture(config=config, dataset=dataset)
    model = build(arch=arch, seed=derive_seed(config.seed, 'init'))
    trainer = Trainer(config=training_config(config=config))
    return trainer.train(model=model, dataset=dataset)


async def create_model(config: ExperimentConfig, dataset: Dataset) -> Tuple[str, ModelGraph]:
    """ serialized model from `model_path`, or a model trained from the inline sections """
    model_path = config.get_string(option='model_path')
    if model_path is not None:
        model = await deserialize(path=model_path)
        name = os.path.splitext(os.path.basename(model_path))[0]
        Log.info('model loaded: %s => %s', model_path, model)
        return name, model
    if not config.has_option(option='kind', section='arch'):
        raise ConfigError('config needs either "model_path" or an "arch" section')
    model, rows = train_model(config=config, dataset=dataset)
    if len(rows) > 0:
        last: TrainingRow = rows[-1]
        Log.info('model trained: %s, accuracy=%.4f', model, last.accuracy)
    return model.arch.get('kind', 'model'), model

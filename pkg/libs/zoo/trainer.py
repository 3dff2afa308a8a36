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
    Trainer
    ~~~~~~~

    Plain minibatch SGD on softmax cross-entropy; no momentum, no augmentation.
"""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..common.errors import DatasetError, TrainingError
from ..tensor import ModelGraph, forward_batch, parameter_gradients, predict, softmax
from ..utils import Logging, new_rng, text_key

from .datasets import Dataset


@dataclass(frozen=True)
class TrainingConfig:
    epochs: int = 30
    lr: float = 0.05
    batch: int = 16
    seed: int = 0


@dataclass(frozen=True)
class TrainingRow:
    epoch: int
    loss: float
    accuracy: float


def cross_entropy(logits: np.ndarray, labels: np.ndarray) -> Tuple[float, np.ndarray]:
    """ mean loss and its gradient w.r.t. the logits """
    probs = softmax(logits)
    n = logits.shape[0]
    picked = probs[np.arange(n), labels]
    loss = float(-np.mean(np.log(np.maximum(picked, 1e-300))))
    grad = probs.copy()
    grad[np.arange(n), labels] -= 1.0
    return loss, grad / n


def accuracy(model: ModelGraph, dataset: Dataset) -> float:
    logits = predict(model=model, batch=dataset.images)
    return float(np.mean(np.argmax(logits, axis=1) == dataset.labels))


class Trainer(Logging):

    def __init__(self, config: TrainingConfig):
        super().__init__()
        self.__config = config

    @property
    def config(self) -> TrainingConfig:
        return self.__config

    def train(self, model: ModelGraph, dataset: Dataset) -> Tuple[ModelGraph, List[TrainingRow]]:
        config = self.__config
        if len(dataset) == 0:
            raise DatasetError('cannot train on an empty dataset')
        if config.batch <= 0 or config.epochs < 0:
            raise TrainingError('bad training config: %s' % (config, ))
        rng = new_rng(config.seed, text_key('shuffle'))
        params = {slot: np.array(value) for slot, value in model.params.items()}
        current = model
        rows = []
        for epoch in range(config.epochs):
            order = rng.permutation(len(dataset))
            losses = []
            for start in range(0, len(order), config.batch):
                index = order[start:start + config.batch]
                acts = forward_batch(model=current, batch=dataset.images[index])
                logits = acts[current.output].reshape(len(index), -1)
                loss, seed = cross_entropy(logits=logits, labels=dataset.labels[index])
                if not np.isfinite(loss):
                    raise TrainingError('non-finite loss at epoch %d, batch %d (lr=%s)'
                                        % (epoch, start // config.batch, config.lr))
                _, grads = parameter_gradients(model=current, acts=acts, seed=seed)
                for slot, grad in grads.items():
                    params[slot] = params[slot] - config.lr * grad
                try:
                    current = model.replace(params=params)
                except ValueError as error:
                    raise TrainingError('parameters diverged at epoch %d: %s' % (epoch, error))
                losses.append(loss)
            row = TrainingRow(epoch=epoch, loss=float(np.mean(losses)), accuracy=accuracy(current, dataset))
            self.info('epoch %d: loss=%.6f, accuracy=%.4f', row.epoch, row.loss, row.accuracy)
            rows.append(row)
        return current, rows


def train(model: ModelGraph, dataset: Dataset, epochs: int, lr: float, seed: int, batch: int = 16) -> ModelGraph:
    """ trained copy of the model; deterministic per seed """
    trainer = Trainer(config=TrainingConfig(epochs=epochs, lr=lr, batch=batch, seed=seed))
    trained, _ = trainer.train(model=model, dataset=dataset)
    return trained

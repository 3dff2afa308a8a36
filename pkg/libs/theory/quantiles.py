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
    Activation Quantiles
    ~~~~~~~~~~~~~~~~~~~~

    Post-activation values of every ReLU layer are pooled across channels and
    space, 18 quantiles are estimated per image (linear interpolation between
    order statistics) and averaged over the dataset. The ratio of a high and a
    low quantile stands in for the separation K of the overtaking result.
"""

from dataclasses import dataclass
from typing import List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..common.errors import DatasetError, PreconditionError
from ..tensor import LayerKind, ModelGraph, forward_batch
from ..utils import Log
from ..zoo import Dataset

from .cauchy import cauchy_tail


QUANTILES = np.round(np.arange(0.10, 0.951, 0.05), 2)

HIGH_QUANTILES = (0.85, 0.9, 0.95)
LOW_QUANTILES = (0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5)

# V(q_l) at or below this counts as vanished
VANISHED = 1e-9

# images per forward pass
BATCH = 32


@dataclass(frozen=True)
class QuantileTable:
    """
        values:    layers x 18, mean over images of the per-image quantile estimates
        fractions: per layer, mean fraction of non-positive activations
    """

    layers: Tuple[str, ...]
    quantiles: np.ndarray
    values: np.ndarray
    fractions: np.ndarray
    n_images: int

    def value(self, layer: str, q: float) -> float:
        row = self.layers.index(layer)
        return float(self.values[row, self.column(q)])

    def column(self, q: float) -> int:
        hits = np.flatnonzero(np.isclose(self.quantiles, q))
        if hits.size == 0:
            raise PreconditionError('quantile %s not in table grid' % q)
        return int(hits[0])

    def fraction(self, layer: str) -> float:
        return float(self.fractions[self.layers.index(layer)])

    @classmethod
    def from_samples(cls, samples: Mapping[str, np.ndarray]):
        """ samples: {layer: n_images x values}, every row one image """
        layers = tuple(samples.keys())
        if len(layers) == 0:
            raise DatasetError('no layers to summarize')
        values = []
        fractions = []
        n_images = None
        for name in layers:
            block = np.asarray(samples[name], dtype=np.float64)
            block = block.reshape(block.shape[0], -1)
            if block.shape[0] == 0 or block.shape[1] == 0:
                raise DatasetError('no activations for layer: %s' % name)
            if n_images is None:
                n_images = block.shape[0]
            elif n_images != block.shape[0]:
                raise DatasetError('layer %s has %d images, expected %d' % (name, block.shape[0], n_images))
            estimates = np.quantile(block, QUANTILES, axis=1, method='linear')   # 18 x n_images
            values.append(estimates.mean(axis=1))
            fractions.append(float(np.mean(np.mean(block <= 0.0, axis=1))))
        table = np.stack(values, axis=0)
        # averaging per-image sorted estimates keeps every row sorted
        table = np.maximum.accumulate(table, axis=1)
        return cls(layers=layers, quantiles=QUANTILES.copy(), values=table, fractions=np.asarray(fractions),
                   n_images=int(n_images))


def activation_stats(model: ModelGraph, dataset: Dataset, n_images: Optional[int] = None) -> QuantileTable:
    images = dataset.images
    if n_images is not None:
        images = images[:n_images]
    if images.shape[0] == 0:
        raise DatasetError('activation statistics need at least one image')
    layers = [node.name for node in model.nodes_of_kind(LayerKind.RELU)]
    if len(layers) == 0:
        raise PreconditionError('model has no ReLU layer')
    chunks = {name: [] for name in layers}
    for start in range(0, images.shape[0], BATCH):
        acts = forward_batch(model=model, batch=images[start:start + BATCH])
        for name in layers:
            value = acts[name]
            chunks[name].append(value.reshape(value.shape[0], -1))
    samples = {name: np.concatenate(chunks[name], axis=0) for name in layers}
    Log.info('activation statistics: %d layer(s), %d image(s)', len(layers), images.shape[0])
    return QuantileTable.from_samples(samples)


@dataclass(frozen=True)
class OvertakingCell:
    layer: str
    q_high: float
    q_low: float
    k: float
    gamma: float
    probability: float


def quantile_overtaking(table: QuantileTable, q_high: Sequence[float] = HIGH_QUANTILES,
                        q_low: Sequence[float] = LOW_QUANTILES) -> List[OvertakingCell]:
    """ one cell per (layer, q_h, q_l); P = 0 where V(q_l) vanishes """
    cells = []
    for qh in q_high:
        for ql in q_low:
            if qh <= ql:
                raise PreconditionError('high quantile must exceed low quantile: %s <= %s' % (qh, ql))
            high = table.column(qh)
            low = table.column(ql)
            gamma = float(np.sqrt(ql / (1.0 - qh)))
            for row, layer in enumerate(table.layers):
                v_high = float(table.values[row, high])
                v_low = float(table.values[row, low])
                if v_low <= VANISHED:
                    cells.append(OvertakingCell(layer=layer, q_high=qh, q_low=ql, k=float('inf'), gamma=gamma,
                                                probability=0.0))
                    continue
                k = v_high / v_low
                cells.append(OvertakingCell(layer=layer, q_high=qh, q_low=ql, k=k, gamma=gamma,
                                            probability=cauchy_tail(k, gamma)))
    return cells

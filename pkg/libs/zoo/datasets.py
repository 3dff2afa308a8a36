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
    Datasets
    ~~~~~~~~

    Synthetic image sets (blobs, bar-shapes) and IDX file ingestion.
"""

import struct
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..common.errors import DatasetError
from ..tensor import freeze
from ..utils import Log, new_rng, text_key
from ..utils import Path, File


class Provenance:

    SYNTHETIC = 'synthetic'
    IDX_FILE = 'idx-file'


class SyntheticKind:

    BLOBS = 'blobs'
    BAR_SHAPES = 'bar-shapes'

    ALL = (BLOBS, BAR_SHAPES)


@dataclass(frozen=True)
class Dataset:
    """
        images: N x C x H x W in [0, 1];
        masks (bar-shapes only): N x H x W, True on class-discriminative pixels
    """

    images: np.ndarray
    labels: np.ndarray
    provenance: str
    classes: int
    masks: Optional[np.ndarray] = None

    def __post_init__(self):
        images = np.asarray(self.images, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if images.ndim != 4:
            raise DatasetError('images must be N x C x H x W: %s' % (images.shape, ))
        if images.shape[0] != labels.shape[0]:
            raise DatasetError('%d images but %d labels' % (images.shape[0], labels.shape[0]))
        if labels.size > 0 and (labels.min() < 0 or labels.max() >= self.classes):
            raise DatasetError('labels out of range [0, %d)' % self.classes)
        if not np.all(np.isfinite(images)):
            raise DatasetError('image values must be finite')
        if images.size > 0 and (images.min() < 0.0 or images.max() > 1.0):
            raise DatasetError('image values outside [0, 1]')
        object.__setattr__(self, 'images', freeze(images))
        object.__setattr__(self, 'labels', freeze(labels))
        if self.masks is not None:
            object.__setattr__(self, 'masks', freeze(np.asarray(self.masks, dtype=bool)))

    def __len__(self) -> int:
        return int(self.images.shape[0])

    @property
    def image_shape(self) -> Tuple[int, ...]:
        return tuple(self.images.shape[1:])

    def subset(self, n: int):
        """ first n samples """
        if n <= 0:
            raise DatasetError('subset size must be positive: %d' % n)
        n = min(n, len(self))
        masks = None if self.masks is None else self.masks[:n]
        return Dataset(images=self.images[:n], labels=self.labels[:n], provenance=self.provenance,
                       classes=self.classes, masks=masks)


#
#   Synthetic sets
#

def _balanced_labels(n: int, classes: int, rng: np.random.Generator) -> np.ndarray:
    return rng.permutation(np.arange(n) % classes)


def _blobs(n: int, classes: int, size: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """ class c lights up horizontal band c; linearly separable by band sums """
    if size % classes != 0:
        raise DatasetError('blobs image size %d not divisible by %d classes' % (size, classes))
    labels = _balanced_labels(n=n, classes=classes, rng=rng)
    images = rng.uniform(0.0, 0.3, size=(n, 1, size, size))
    band = size // classes
    for index, label in enumerate(labels):
        images[index, 0, label * band:(label + 1) * band, :] += 0.6
    return images, labels


def _bar(size: int, label: int, rng: np.random.Generator) -> np.ndarray:
    """ boolean mask of one oriented bar: 0 horizontal, 1 vertical, 2/3 diagonals """
    length = size // 2
    thick = max(2, size // 16)
    mask = np.zeros((size, size), dtype=bool)
    top = int(rng.integers(0, size - length + 1))
    left = int(rng.integers(0, size - length + 1))
    pos = int(rng.integers(0, length - thick + 1))
    orientation = label % 4
    if orientation == 0:
        mask[top + pos:top + pos + thick, left:left + length] = True
    elif orientation == 1:
        mask[top:top + length, left + pos:left + pos + thick] = True
    else:
        steps = np.arange(length)
        for t in range(thick):
            rows = top + steps
            cols = left + (steps if orientation == 2 else length - 1 - steps)
            cols = np.clip(cols + t, 0, size - 1)
            mask[rows, cols] = True
    return mask


def _bar_shapes(n: int, classes: int, size: int,
                rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """ one bright oriented bar per image on a textured background in [0, 0.5] """
    if classes > 4:
        raise DatasetError('bar-shapes supports at most 4 classes: %d' % classes)
    labels = _balanced_labels(n=n, classes=classes, rng=rng)
    images = rng.uniform(0.0, 0.5, size=(n, 1, size, size))
    masks = np.zeros((n, size, size), dtype=bool)
    for index, label in enumerate(labels):
        mask = _bar(size=size, label=int(label), rng=rng)
        values = rng.uniform(0.9, 1.0, size=int(mask.sum()))
        images[index, 0][mask] = values
        masks[index] = mask
    return images, labels, masks


DEFAULT_SIZES = {
    SyntheticKind.BLOBS: 4,
    SyntheticKind.BAR_SHAPES: 48,
}


def synth_dataset(kind: str, n: int, seed: int, size: Optional[int] = None, classes: int = 2) -> Dataset:
    if n <= 0:
        raise DatasetError('dataset size must be positive: %d' % n)
    if kind not in SyntheticKind.ALL:
        raise DatasetError('unknown synthetic dataset: %s' % kind)
    if size is None:
        size = DEFAULT_SIZES[kind]
    rng = new_rng(seed, text_key(kind))
    if kind == SyntheticKind.BLOBS:
        images, labels = _blobs(n=n, classes=classes, size=size, rng=rng)
        masks = None
    else:
        images, labels, masks = _bar_shapes(n=n, classes=classes, size=size, rng=rng)
    return Dataset(images=images, labels=labels, provenance=Provenance.SYNTHETIC, classes=classes, masks=masks)


#
#   IDX files: big-endian magic, big-endian u32 dims, unsigned bytes
#

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801


async def _read_idx(path: str, magic: int) -> np.ndarray:
    if not await Path.exists(path=path):
        raise DatasetError('IDX file not found: %s' % path)
    data = await File(path=path).read()
    if data is None:
        raise DatasetError('cannot read IDX file: %s' % path)
    if len(data) < 4:
        raise DatasetError('IDX file truncated: %s' % path)
    found, = struct.unpack('>I', data[:4])
    if found != magic:
        raise DatasetError('IDX magic 0x%08X, expected 0x%08X: %s' % (found, magic, path))
    ndim = magic & 0xFF
    head = 4 + 4 * ndim
    if len(data) < head:
        raise DatasetError('IDX header truncated: %s' % path)
    dims = struct.unpack('>%dI' % ndim, data[4:head])
    count = int(np.prod(dims, dtype=np.int64))
    if len(data) - head < count:
        raise DatasetError('IDX body truncated: %s (%d < %d bytes)' % (path, len(data) - head, count))
    return np.frombuffer(data, dtype=np.uint8, count=count, offset=head).reshape(dims)


async def load_idx(images_path: str, labels_path: str, limit: Optional[int] = None) -> Dataset:
    images = await _read_idx(path=images_path, magic=IDX_IMAGES_MAGIC)
    labels = await _read_idx(path=labels_path, magic=IDX_LABELS_MAGIC)
    if images.shape[0] != labels.shape[0]:
        raise DatasetError('IDX count mismatch: %d images, %d labels' % (images.shape[0], labels.shape[0]))
    if limit is not None:
        images = images[:limit]
        labels = labels[:limit]
    images = images.astype(np.float64)[:, np.newaxis, :, :] / 255.0
    labels = labels.astype(np.int64)
    classes = max(2, int(labels.max()) + 1) if labels.size > 0 else 2
    Log.info('IDX loaded: %s, %d images, %d classes', images_path, images.shape[0], classes)
    return Dataset(images=images, labels=labels, provenance=Provenance.IDX_FILE, classes=classes)

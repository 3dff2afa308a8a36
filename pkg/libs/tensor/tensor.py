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
    Tensor
    ~~~~~~

    Dense float64 arrays are the universal value carrier; a Tensor is a
    numpy array that passed the finiteness check and is frozen.
"""

from typing import Optional, Sequence, Union

import numpy as np

from ..common.errors import ShapeError


Tensor = np.ndarray

ArrayLike = Union[np.ndarray, Sequence[float], float]


def as_tensor(data: ArrayLike, shape: Optional[Sequence[int]] = None, copy: bool = True) -> Tensor:
    """ build a read-only float64 tensor, rejecting NaN/Inf """
    array = np.array(data, dtype=np.float64, copy=copy)
    if shape is not None:
        shape = tuple(int(n) for n in shape)
        if any(n < 0 for n in shape):
            raise ShapeError('negative extent in shape %s' % (shape,))
        if int(np.prod(shape, dtype=np.int64)) != array.size:
            raise ShapeError('data length %d does not match shape %s' % (array.size, shape))
        array = array.reshape(shape)
    if not np.all(np.isfinite(array)):
        raise ShapeError('tensor contains non-finite values')
    return freeze(array)


def freeze(array: np.ndarray) -> Tensor:
    array.setflags(write=False)
    return array


def zeros(shape: Sequence[int]) -> Tensor:
    return freeze(np.zeros(tuple(shape), dtype=np.float64))

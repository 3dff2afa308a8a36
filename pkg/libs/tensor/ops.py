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
    Kernels
    ~~~~~~~

    im2col / col2im for convolutions and window views for pooling, shared by
    the forward/backward engine and the relevance rules.
    All arrays are batched: N x C x H x W.
"""

from typing import Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .layers import LayerSpec


def pad(x: np.ndarray, padding: int) -> np.ndarray:
    if padding == 0:
        return x
    return np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding)))


def conv_output_size(layer: LayerSpec, height: int, width: int) -> Tuple[int, int]:
    k, s, p = layer.kernel, layer.stride, layer.padding
    return (height + 2 * p - k) // s + 1, (width + 2 * p - k) // s + 1


def im2col(x: np.ndarray, layer: LayerSpec) -> np.ndarray:
    """ (N, C, H, W) -> (N * Ho * Wo, C * k * k) patch matrix """
    k, s = layer.kernel, layer.stride
    n, c, h, w = x.shape
    ho, wo = conv_output_size(layer=layer, height=h, width=w)
    xp = pad(x, padding=layer.padding)
    windows = sliding_window_view(xp, (k, k), axis=(2, 3))[:, :, ::s, ::s][:, :, :ho, :wo]
    # N, C, Ho, Wo, k, k -> N, Ho, Wo, C, k, k
    windows = windows.transpose(0, 2, 3, 1, 4, 5)
    return np.ascontiguousarray(windows).reshape(n * ho * wo, c * k * k)


def col2im(cols: np.ndarray, layer: LayerSpec, input_shape: Tuple[int, ...]) -> np.ndarray:
    """ adjoint of im2col: fold patch rows back, summing overlaps """
    k, s, p = layer.kernel, layer.stride, layer.padding
    n, c, h, w = input_shape
    ho, wo = conv_output_size(layer=layer, height=h, width=w)
    patches = cols.reshape(n, ho, wo, c, k, k).transpose(0, 3, 1, 2, 4, 5)
    out = np.zeros((n, c, h + 2 * p, w + 2 * p), dtype=np.float64)
    for i in range(k):
        for j in range(k):
            out[:, :, i:i + s * (ho - 1) + 1:s, j:j + s * (wo - 1) + 1:s] += patches[:, :, :, :, i, j]
    if p > 0:
        out = out[:, :, p:-p, p:-p]
    return out


def conv_forward(x: np.ndarray, weight: np.ndarray, bias: np.ndarray, layer: LayerSpec) -> np.ndarray:
    n, _, h, w = x.shape
    ho, wo = conv_output_size(layer=layer, height=h, width=w)
    cols = im2col(x, layer=layer)
    out = cols @ weight.reshape(weight.shape[0], -1).T + bias
    return out.reshape(n, ho, wo, -1).transpose(0, 3, 1, 2)


def to_rows(g: np.ndarray) -> np.ndarray:
    """ (N, O, Ho, Wo) -> (N * Ho * Wo, O), matching im2col row order """
    return g.transpose(0, 2, 3, 1).reshape(-1, g.shape[1])


def from_rows(rows: np.ndarray, n: int, ho: int, wo: int) -> np.ndarray:
    return rows.reshape(n, ho, wo, -1).transpose(0, 3, 1, 2)


def pool_windows(x: np.ndarray, kernel: int) -> np.ndarray:
    """ (N, C, H, W) -> (N, C, H/k, W/k, k*k), window elements row-major """
    n, c, h, w = x.shape
    k = kernel
    blocks = x.reshape(n, c, h // k, k, w // k, k).transpose(0, 1, 2, 4, 3, 5)
    return blocks.reshape(n, c, h // k, w // k, k * k)


def unpool_windows(windows: np.ndarray, kernel: int) -> np.ndarray:
    """ inverse of pool_windows """
    n, c, ho, wo, _ = windows.shape
    k = kernel
    blocks = windows.reshape(n, c, ho, wo, k, k).transpose(0, 1, 2, 4, 3, 5)
    return blocks.reshape(n, c, ho * k, wo * k)


def channel_view(bias: np.ndarray, ndim: int) -> np.ndarray:
    """ broadcast a per-channel vector against a batched tensor of `ndim` dims """
    return bias.reshape((1, -1) + (1, ) * (ndim - 2))

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
    Seed Derivation
    ~~~~~~~~~~~~~~~

    Every random stream is derived from one base seed and a tuple of task keys,
    hashed through numpy's SeedSequence, so results never depend on the order
    or the thread in which tasks run.
"""

import zlib
from typing import Union

import numpy as np


Key = Union[int, str]


def text_key(text: str) -> int:
    """ stable integer key for a name (method id, experiment id) """
    return zlib.crc32(text.encode('utf-8'))


def _entropy(base: int, keys) -> list:
    array = [int(base) & 0xFFFFFFFFFFFFFFFF]
    for item in keys:
        if isinstance(item, str):
            item = text_key(item)
        assert item >= 0, 'seed key must be non-negative: %s' % item
        array.append(int(item))
    return array


def derive_seed(base: int, *keys: Key) -> int:
    """ derive a 63-bit child seed from (base, keys...) """
    seq = np.random.SeedSequence(entropy=_entropy(base=base, keys=keys))
    state = seq.generate_state(n_words=1, dtype=np.uint64)
    return int(state[0] >> np.uint64(1))


def new_rng(base: int, *keys: Key) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=_entropy(base=base, keys=keys))
    return np.random.default_rng(seq)

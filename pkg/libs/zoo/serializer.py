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
    Model Files
    ~~~~~~~~~~~

    Layout:
        line 1: magic + format version
        line 2: JSON header (architecture descriptor, blob size, sha256 over
                descriptor and blob)
        rest:   parameters as little-endian float64, slots in node order
"""

import hashlib
from typing import Dict

import numpy as np

from ..common.errors import ChecksumError, ModelFormatError
from ..tensor import ModelGraph
from ..utils import File
from ..utils import json_encode, json_decode, utf8_encode, utf8_decode


MAGIC = 'ATTRIB-AUDIT-MODEL'
VERSION = 1


def _digest(descriptor: dict, blob: bytes) -> str:
    sha = hashlib.sha256(utf8_encode(string=json_encode(container=descriptor)))
    sha.update(b'\n')
    sha.update(blob)
    return sha.hexdigest()


def dumps(model: ModelGraph) -> bytes:
    blob = b''.join(np.ascontiguousarray(model.param(slot), dtype='<f8').tobytes() for slot in model.slots())
    header = {
        'version': VERSION,
        'descriptor': model.descriptor(),
        'blob_bytes': len(blob),
        'sha256': _digest(descriptor=model.descriptor(), blob=blob),
    }
    first = utf8_encode(string='%s %d\n' % (MAGIC, VERSION))
    second = utf8_encode(string=json_encode(container=header) + '\n')
    return first + second + blob


def loads(data: bytes) -> ModelGraph:
    if len(data) == 0:
        raise ModelFormatError('empty model file')
    first_end = data.find(b'\n')
    second_end = data.find(b'\n', first_end + 1) if first_end >= 0 else -1
    if first_end < 0 or second_end < 0:
        raise ModelFormatError('model header truncated')
    try:
        magic, version = utf8_decode(data=data[:first_end]).split(' ')
        version = int(version)
    except ValueError:
        raise ModelFormatError('not a model file')
    if magic != MAGIC:
        raise ModelFormatError('not a model file: %s' % magic)
    if version != VERSION:
        raise ModelFormatError('model format version %d, expected %d' % (version, VERSION))
    try:
        header = json_decode(string=utf8_decode(data=data[first_end + 1:second_end]))
        descriptor = header['descriptor']
        size = int(header['blob_bytes'])
        digest = header['sha256']
    except (ValueError, KeyError, TypeError) as error:
        raise ModelFormatError('model header corrupted: %s' % error)
    blob = data[second_end + 1:]
    if len(blob) != size:
        raise ModelFormatError('parameter blob has %d bytes, expected %d' % (len(blob), size))
    if _digest(descriptor=descriptor, blob=blob) != digest:
        raise ChecksumError('model checksum mismatch')
    values = np.frombuffer(blob, dtype='<f8').astype(np.float64)
    params: Dict[str, np.ndarray] = {}
    offset = 0
    for item in descriptor['slots']:
        shape = tuple(item['shape'])
        count = int(np.prod(shape, dtype=np.int64))
        params[item['name']] = values[offset:offset + count].reshape(shape)
        offset += count
    if offset != values.size:
        raise ModelFormatError('parameter blob does not match the slot table')
    return ModelGraph.from_descriptor(info=descriptor, params=params)


async def serialize(model: ModelGraph, path: str):
    if not await File(path=path).write(data=dumps(model=model)):
        raise ModelFormatError('cannot write model file: %s' % path)


async def deserialize(path: str) -> ModelGraph:
    try:
        data = await File(path=path).read()
    except OSError as error:
        raise ModelFormatError('cannot read model file %s: %s' % (path, error))
    if data is None:
        raise ModelFormatError('cannot read model file: %s' % path)
    return loads(data=data)

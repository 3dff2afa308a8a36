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
    Utils
    ~~~~~

    Logging, argv parsing and singletons are borrowed from <dimples>;
    seeds, worker pool and CSV emitter live here.
"""

from dimples.utils import Singleton, Runner
from dimples.utils import Path
from dimples.utils import File, TextFile, JSONFile

from dimples.utils import SysArgvParser
from dimples.utils import Log, LogLevel, Logging
from dimples.utils import init_logger

from dimples.utils import utf8_encode, utf8_decode
from dimples.utils import json_encode, json_decode

from dimples.utils import get_exception_traceback

from .seeds import derive_seed, new_rng, text_key
from .pool import TaskPool
from .emitter import CsvEmitter, format_float


__all__ = [

    'Singleton', 'Runner',
    'Path',
    'File', 'TextFile', 'JSONFile',

    'SysArgvParser',
    'Log', 'LogLevel', 'Logging',
    'init_logger',

    'utf8_encode', 'utf8_decode',
    'json_encode', 'json_decode',

    'get_exception_traceback',

    'derive_seed', 'new_rng', 'text_key',
    'TaskPool',
    'CsvEmitter', 'format_float',

]

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
    Worker Pool
    ~~~~~~~~~~~

    Maps a pure function over keyed work items on a thread pool;
    results come back sorted by key, whatever order the workers finish in.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Tuple, TypeVar

from dimples.utils import Logging


T = TypeVar('T')
R = TypeVar('R')

THREADS_ENV = 'ATTRIB_AUDIT_THREADS'


class TaskPool(Logging):

    def __init__(self, threads: int = 1):
        super().__init__()
        assert threads > 0, 'threads error: %d' % threads
        self.__threads = threads

    @property
    def threads(self) -> int:
        return self.__threads

    @classmethod
    def from_env(cls, threads: Optional[int] = None):
        if threads is None:
            text = os.environ.get(THREADS_ENV)
            threads = int(text) if text else 1
        return cls(threads=max(1, threads))

    def map(self, fn: Callable[[T], R], items: Iterable[Tuple[Hashable, T]]) -> List[Tuple[Hashable, R]]:
        """ run fn(item) for every (key, item); returns [(key, result)] sorted by key """
        tasks = list(items)
        results: Dict[Hashable, R] = {}
        if self.__threads == 1 or len(tasks) < 2:
            for key, item in tasks:
                results[key] = fn(item)
        else:
            self.info('dispatching %d task(s) to %d thread(s)', len(tasks), self.__threads)
            with ThreadPoolExecutor(max_workers=self.__threads) as executor:
                futures = [(key, executor.submit(fn, item)) for key, item in tasks]
                for key, future in futures:
                    results[key] = future.result()
        return sorted(results.items(), key=lambda pair: pair[0])

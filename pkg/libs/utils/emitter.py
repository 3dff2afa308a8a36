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
    CSV Emitter
    ~~~~~~~~~~~

    One writer per output file: header row, UTF-8, '.' decimal point,
    floats with 17 significant digits so reruns are byte-identical.
"""

import csv
import io
import math
import os
import threading
from typing import Any, Iterable, List, Sequence

from dimples.utils import Logging
from dimples.utils import TextFile


def format_float(value: float) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return 'nan'
    return '%.17g' % value


def format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return format_float(value)
    if value is None:
        return ''
    return str(value)


class CsvEmitter(Logging):

    def __init__(self, path: str, columns: Sequence[str]):
        super().__init__()
        self.__path = path
        self.__columns = list(columns)
        self.__rows: List[List[str]] = []
        self.__lock = threading.Lock()

    @property
    def path(self) -> str:
        return self.__path

    @property
    def columns(self) -> List[str]:
        return self.__columns

    def append(self, row: Sequence[Any]):
        assert len(row) == len(self.__columns), 'row size error: %s, columns: %s' % (row, self.__columns)
        cells = [format_cell(value=item) for item in row]
        with self.__lock:
            self.__rows.append(cells)

    def extend(self, rows: Iterable[Sequence[Any]]):
        for row in rows:
            self.append(row=row)

    async def flush(self) -> str:
        with self.__lock:
            rows = list(self.__rows)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(self.__columns)
        writer.writerows(rows)
        directory = os.path.dirname(self.__path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        if not await TextFile(path=self.__path).write(text=buffer.getvalue()):
            raise OSError('cannot write csv file: %s' % self.__path)
        self.info('wrote %d row(s) to %s', len(rows), self.__path)
        return self.__path

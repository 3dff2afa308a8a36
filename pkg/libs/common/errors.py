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
    Errors
    ~~~~~~

    One hierarchy for every failure the toolkit reports on purpose.
"""


class AuditError(ValueError):
    """ base of all reported failures """
    pass


class ShapeError(AuditError):
    pass


class SelectorError(AuditError):
    pass


class GraphError(AuditError):
    pass


class PlanError(AuditError):
    pass


class DatasetError(AuditError):
    pass


class ModelFormatError(AuditError):
    pass


class ChecksumError(ModelFormatError):
    pass


class TrainingError(AuditError):
    pass


class MetricError(AuditError):
    """ metric undefined for the given maps (constant / all-zero) """
    pass


class PreconditionError(AuditError):
    pass


class ConfigError(AuditError):
    pass

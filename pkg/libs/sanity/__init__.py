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
    Sanity Harness
    ~~~~~~~~~~~~~~
"""

from .harness import SANITY_COLUMNS, ALL_SEEDS
from .harness import SanityRunConfig, SanityRow, FlaggedCell, SanityResult, SanityHarness
from .harness import run_sanity, method_seed
from .diagnostics import Summary, SkipStability, IrrelevanceOverlap
from .diagnostics import logit_correlation, skip_component_stability, irrelevance_overlap


__all__ = [

    'SANITY_COLUMNS', 'ALL_SEEDS',
    'SanityRunConfig', 'SanityRow', 'FlaggedCell', 'SanityResult', 'SanityHarness',
    'run_sanity', 'method_seed',

    'Summary', 'SkipStability', 'IrrelevanceOverlap',
    'logit_correlation', 'skip_component_stability', 'irrelevance_overlap',

]

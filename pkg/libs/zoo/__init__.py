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
    Model Zoo
    ~~~~~~~~~

    Toy architectures, re-randomization plans, a minimal trainer,
    datasets and model files.
"""

from .architectures import ArchitectureId, ArchitectureSpec, build, he_normal, residual_adds
from .datasets import Dataset, Provenance, SyntheticKind, synth_dataset, load_idx
from .randomizer import RandomizationMode, RandomizationPlan, InitPolicy
from .randomizer import randomize, default_plan, plan_for_nodes
from .trainer import TrainingConfig, TrainingRow, Trainer, train, accuracy
from .split import split_at
from .serializer import serialize, deserialize, dumps, loads


__all__ = [

    'ArchitectureId', 'ArchitectureSpec', 'build', 'he_normal', 'residual_adds',
    'Dataset', 'Provenance', 'SyntheticKind', 'synth_dataset', 'load_idx',
    'RandomizationMode', 'RandomizationPlan', 'InitPolicy',
    'randomize', 'default_plan', 'plan_for_nodes',
    'TrainingConfig', 'TrainingRow', 'Trainer', 'train', 'accuracy',
    'split_at',
    'serialize', 'deserialize', 'dumps', 'loads',

]

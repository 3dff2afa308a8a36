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
    Pinned Outputs
    ~~~~~~~~~~~~~~

    Small runs whose CSV files are compared with the copies under tests/golden.
    Models and images are hand-wired so every value is exact in float64.
"""

import csv
import os

import numpy as np

from libs.utils import TaskPool, json_encode, json_decode
from libs.common import ExperimentConfig
from libs.tensor import LayerSpec
from libs.zoo import serialize

from audit.handler import EXIT_OK
from audit.handler import cmd_sanity, cmd_faithfulness, cmd_theory, cmd_stats

from tests.shared import chain, sync, write_idx


GOLDEN = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'golden')

IMAGES_MAGIC = 0x803
LABELS_MAGIC = 0x801


def make_config(command: str, info: dict, out) -> ExperimentConfig:
    return ExperimentConfig.parse(command=command, text=json_encode(container=dict(info, out=str(out))))


def read_bytes(path) -> bytes:
    with open(path, 'rb') as file:
        return file.read()


def assert_golden(out, name: str, golden: str):
    assert read_bytes(os.path.join(out, name)) == read_bytes(os.path.join(GOLDEN, golden))


def write_dataset(directory, dims, pixels, labels) -> dict:
    images_path = os.path.join(directory, 'images.idx')
    labels_path = os.path.join(directory, 'labels.idx')
    write_idx(images_path, IMAGES_MAGIC, dims, pixels)
    write_idx(labels_path, LABELS_MAGIC, (len(labels), ), labels)
    return {'kind': 'idx', 'images': images_path, 'labels': labels_path}


def save_model(directory, name: str, model) -> str:
    path = os.path.join(directory, '%s.bin' % name)
    sync(serialize(model=model, path=path))
    return path


#
#   theory
#

def test_theory_matches_golden(tmp_path):
    info = {
        'seed': 1,
        'experiments': ['cauchy', 'shapley', 'monotonicity'],
        'params': {'cauchy': {'k': 0.0}, 'monotonicity': {'strong': True, 'instances': 50}},
    }
    assert sync(cmd_theory(make_config('theory', info, out=tmp_path), TaskPool())) == EXIT_OK
    for name in info['experiments']:
        with open(os.path.join(tmp_path, 'theory_%s.csv' % name), 'r', encoding='utf-8', newline='') as file:
            rows = list(csv.reader(file))
        with open(os.path.join(GOLDEN, 'theory_%s.csv' % name), 'r', encoding='utf-8', newline='') as file:
            expected = list(csv.reader(file))
        assert len(rows) == len(expected)
        assert rows[0] == expected[0]
        for row, want in zip(rows[1:], expected[1:]):
            # param_json is compared as data; its whitespace is the encoder's business
            assert json_decode(string=row[1]) == json_decode(string=want[1])
            assert row[:1] + row[2:] == want[:1] + want[2:]


#
#   stats
#

def two_level_model():
    """ 1 pixel -> 61 units: 32 die (-x), 29 fire (2x) on a white pixel """
    weight = np.array([[-1.0]] * 32 + [[2.0]] * 29)
    layers = [
        ('flatten', LayerSpec.flatten()),
        ('fc', LayerSpec.dense(1, 61)),
        ('relu', LayerSpec.relu()),
    ]
    return chain(layers=layers, params={'fc.weight': weight, 'fc.bias': np.zeros(61)}, input_shape=(1, 1, 1))


def test_stats_match_golden(tmp_path):
    dataset = write_dataset(tmp_path, dims=(2, 1, 1), pixels=[255, 255], labels=[0, 1])
    info = {
        'seed': 1,
        'model_path': save_model(tmp_path, 'twolevel', two_level_model()),
        'dataset': dataset,
        'q_high': [0.75],
        'q_low': [0.25, 0.5],
    }
    assert sync(cmd_stats(make_config('stats', info, out=tmp_path), TaskPool())) == EXIT_OK
    assert_golden(tmp_path, 'quantiles.csv', 'stats_quantiles.csv')
    assert_golden(tmp_path, 'nonpositive_fractions.csv', 'stats_nonpositive_fractions.csv')
    assert_golden(tmp_path, 'overtaking_grid.csv', 'stats_overtaking_grid.csv')


#
#   faithfulness
#

def test_faithfulness_matches_golden(tmp_path):
    # blur 1 leaves every region as it is, so the logit curves stay flat
    # and the single-region drops are all zero (no correlation)
    weight = np.array([[1.0] * 16, [3.0] * 4 + [0.0] * 12])
    layers = [
        ('flatten', LayerSpec.flatten()),
        ('fc', LayerSpec.dense(16, 2)),
    ]
    model = chain(layers=layers, params={'fc.weight': weight, 'fc.bias': np.zeros(2)}, input_shape=(1, 4, 4))
    pixels = [255] * 16 + [255] * 4 + [0] * 12
    info = {
        'seed': 1,
        'model_path': save_model(tmp_path, 'linear', model),
        'dataset': write_dataset(tmp_path, dims=(2, 4, 4), pixels=pixels, labels=[0, 1]),
        'methods': ['gradient'],
        'occlusion': {'blur': 1, 'patch': 2, 'steps': 4, 'score': 'logit'},
    }
    assert sync(cmd_faithfulness(make_config('faithfulness', info, out=tmp_path), TaskPool())) == EXIT_OK
    assert_golden(tmp_path, 'occlusion_curves.csv', 'faithfulness_occlusion_curves.csv')
    assert_golden(tmp_path, 'occlusion_auc.csv', 'faithfulness_occlusion_auc.csv')


#
#   sanity
#

def test_sanity_matches_golden(tmp_path):
    # only the output shift is re-initialized: gradients of a linear model
    # do not see it, so every comparison is against an identical map
    weight = np.array([np.arange(1.0, 50.0), np.arange(49.0, 0.0, -1.0)])
    layers = [
        ('flatten', LayerSpec.flatten()),
        ('fc', LayerSpec.dense(49, 2)),
        ('shift', LayerSpec.bias_only(2)),
    ]
    params = {'fc.weight': weight, 'fc.bias': np.zeros(2), 'shift.bias': np.array([0.5, -0.5])}
    model = chain(layers=layers, params=params, input_shape=(1, 7, 7))
    pixels = [255] * 49 + [255] * 21 + [0] * 28
    info = {
        'seed': 1,
        'model_path': save_model(tmp_path, 'shifted', model),
        'dataset': write_dataset(tmp_path, dims=(2, 7, 7), pixels=pixels, labels=[0, 1]),
        'methods': ['gradient', 'gradient_x_input'],
        'metrics': ['ssim', 'spearman', 'mse-normalized'],
        'plan': [['shift']],
        'seeds': [1, 2],
    }
    assert sync(cmd_sanity(make_config('sanity', info, out=tmp_path), TaskPool())) == EXIT_OK
    assert_golden(tmp_path, 'sanity.csv', 'sanity.csv')

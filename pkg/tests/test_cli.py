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

import csv
import os

import numpy as np
import pytest

from libs.utils import TaskPool, json_encode
from libs.common import ConfigError, MetricError, ExperimentConfig
from libs.attribution import compute_attribution
from libs.sanity import SANITY_COLUMNS
from libs.faithfulness import CURVE_COLUMNS, AUC_COLUMNS, grid_regions
from libs.theory import THEORY_COLUMNS, QUANTILES

from audit.shared import check_paths, create_dataset, create_model
from audit.handler import EXIT_OK, EXIT_PARTIAL, COMMANDS
from audit.handler import cmd_train, cmd_sanity, cmd_faithfulness, cmd_theory, cmd_stats

from tests.shared import sync


def make_config(command: str, info: dict, out) -> ExperimentConfig:
    return ExperimentConfig.parse(command=command, text=json_encode(container=dict(info, out=str(out))))


def read_rows(path):
    with open(path, 'r', encoding='utf-8', newline='') as file:
        return list(csv.reader(file))


def read_bytes(path) -> bytes:
    with open(path, 'rb') as file:
        return file.read()


BLOBS = {'kind': 'blobs', 'n': 16, 'size': 8}
ARCH = {'kind': 'MlpSmall', 'hidden': 8}


@pytest.fixture(scope='module')
def model_file(tmp_path_factory):
    out = tmp_path_factory.mktemp('train')
    path = str(out / 'mlp.bin')
    config = make_config('train', {'seed': 1, 'arch': ARCH, 'dataset': BLOBS, 'train': {'epochs': 3},
                                   'model_file': path}, out=out)
    assert sync(cmd_train(config, TaskPool())) == EXIT_OK
    rows = read_rows(out / 'train_log.csv')
    assert rows[0] == ['epoch', 'loss', 'accuracy']
    assert len(rows) == 1 + 3
    return path


#
#   Config
#

def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        ExperimentConfig.parse(command='theory', text='{"bogus": 1}')
    with pytest.raises(ConfigError):
        ExperimentConfig.parse(command='sanity', text='{"options": {"gamma": 0.1}}')
    with pytest.raises(ConfigError):
        ExperimentConfig.parse(command='sanity', text='{"options": 3}')
    with pytest.raises(ConfigError):
        ExperimentConfig.parse(command='deploy', text='{}')


def test_config_must_be_a_json_object():
    with pytest.raises(ConfigError):
        ExperimentConfig.parse(command='theory', text='[1, 2]')
    with pytest.raises(ConfigError):
        sync(ExperimentConfig.load(command='theory', path='/nonexistent/theory.json'))


def test_flags_override_file(tmp_path):
    config = make_config('theory', {'seed': 7, 'threads': 4}, out=tmp_path)
    assert config.seed == 7
    assert config.threads == 4
    config.override(seed=3, out=str(tmp_path / 'other'), threads=None)
    assert config.seed == 3
    assert config.out == str(tmp_path / 'other')
    assert config.threads == 4


def test_typed_getters():
    config = ExperimentConfig(command='sanity', info={'seed': 'x', 'diagnostics': 1, 'methods': 'gradient',
                                                      'tau': True})
    with pytest.raises(ConfigError):
        _ = config.seed
    with pytest.raises(ConfigError):
        config.get_boolean(option='diagnostics')
    with pytest.raises(ConfigError):
        config.get_list(option='methods')
    with pytest.raises(ConfigError):
        config.get_float(option='tau')
    assert config.get_float(option='missing', default=0.5) == 0.5
    assert config.get_section(section='options') == {}


def test_missing_dataset_files_are_config_errors(tmp_path):
    config = make_config('stats', {'dataset': {'kind': 'idx', 'images': str(tmp_path / 'images.idx'),
                                               'labels': str(tmp_path / 'labels.idx')}}, out=tmp_path)
    with pytest.raises(ConfigError):
        sync(check_paths(config=config))
    config = make_config('stats', {'model_path': str(tmp_path / 'model.bin')}, out=tmp_path)
    with pytest.raises(ConfigError):
        sync(check_paths(config=config))


def test_model_source_is_required(tmp_path):
    config = make_config('sanity', {'dataset': BLOBS}, out=tmp_path)
    dataset = sync(create_dataset(config=config))
    assert dataset.image_shape == (1, 8, 8)
    with pytest.raises(ConfigError):
        sync(create_model(config=config, dataset=dataset))
    config = make_config('sanity', {'dataset': {'kind': 'noise'}}, out=tmp_path)
    with pytest.raises(ConfigError):
        sync(create_dataset(config=config))


def test_every_command_has_a_handler():
    assert set(COMMANDS.keys()) == {'train', 'sanity', 'faithfulness', 'theory', 'stats'}


#
#   theory
#

THEORY = {
    'seed': 3,
    'experiments': ['cauchy', 'shapley', 'mse', 'overtaking'],
    'params': {
        'cauchy': {'k': 2.0},
        'mse': {'n': 64, 'trials': 20},
        'overtaking': {'trials': 200000},
    },
}


def test_theory_command(tmp_path):
    config = make_config('theory', THEORY, out=tmp_path)
    assert sync(cmd_theory(config, TaskPool())) == EXIT_OK
    rows = read_rows(tmp_path / 'theory_cauchy.csv')
    assert tuple(rows[0]) == THEORY_COLUMNS
    assert len(rows) == 2
    assert rows[1][0] == 'cauchy'
    assert rows[1][2] == '3'
    assert len(read_rows(tmp_path / 'theory_shapley.csv')) == 1 + 3
    assert len(read_rows(tmp_path / 'theory_mse.csv')) == 1 + 3
    assert len(read_rows(tmp_path / 'theory_overtaking.csv')) == 1 + 2


def test_theory_rerun_is_byte_identical(tmp_path):
    first = tmp_path / 'first'
    second = tmp_path / 'second'
    assert sync(cmd_theory(make_config('theory', THEORY, out=first), TaskPool())) == EXIT_OK
    assert sync(cmd_theory(make_config('theory', THEORY, out=second), TaskPool(threads=3))) == EXIT_OK
    for name in sorted(os.listdir(first)):
        assert read_bytes(first / name) == read_bytes(second / name)


def test_theory_partial_failure(tmp_path, capsys):
    info = {'experiments': ['cauchy', 'overtaking'], 'params': {'overtaking': {'trials': 1000}}}
    assert sync(cmd_theory(make_config('theory', info, out=tmp_path), TaskPool())) == EXIT_PARTIAL
    assert 'FAILED: overtaking' in capsys.readouterr().err
    assert os.path.isfile(tmp_path / 'theory_cauchy.csv')
    assert not os.path.exists(tmp_path / 'theory_overtaking.csv')


def test_theory_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        sync(cmd_theory(make_config('theory', {'experiments': ['nope']}, out=tmp_path), TaskPool()))
    info = {'experiments': ['cauchy'], 'params': {'mse': {'n': 10}}}
    with pytest.raises(ConfigError):
        sync(cmd_theory(make_config('theory', info, out=tmp_path), TaskPool()))
    info = {'experiments': ['cauchy'], 'params': {'cauchy': {'scale': 1.0}}}
    with pytest.raises(ConfigError):
        sync(cmd_theory(make_config('theory', info, out=tmp_path), TaskPool()))


#
#   stats
#

def test_stats_command(tmp_path, model_file):
    info = {'model_path': model_file, 'dataset': BLOBS, 'n_images': 8, 'q_high': [0.9], 'q_low': [0.1, 0.5]}
    assert sync(cmd_stats(make_config('stats', info, out=tmp_path), TaskPool())) == EXIT_OK
    rows = read_rows(tmp_path / 'quantiles.csv')
    assert rows[0] == ['model', 'layer', 'q', 'value', 'n_images']
    assert len(rows) == 1 + 2 * len(QUANTILES)
    assert {row[1] for row in rows[1:]} == {'relu1', 'relu2'}
    assert all(row[0] == 'mlp' and row[4] == '8' for row in rows[1:])
    assert len(read_rows(tmp_path / 'nonpositive_fractions.csv')) == 1 + 2
    grid = read_rows(tmp_path / 'overtaking_grid.csv')
    assert len(grid) == 1 + 2 * 2
    assert [row[2:4] for row in grid[1:3]] == [['0.90', '0.10'], ['0.90', '0.10']]


#
#   sanity
#

def test_sanity_command(tmp_path, model_file):
    info = {'seed': 2, 'model_path': model_file, 'dataset': BLOBS, 'n_images': 4,
            'methods': ['gradient', 'lrp-eps'], 'metrics': ['ssim', 'spearman'], 'seeds': [0, 1],
            'diagnostics': True}
    code = sync(cmd_sanity(make_config('sanity', info, out=tmp_path / 'a'), TaskPool()))
    assert code in (EXIT_OK, EXIT_PARTIAL)
    rows = read_rows(tmp_path / 'a' / 'sanity.csv')
    assert tuple(rows[0]) == SANITY_COLUMNS
    assert {row[1] for row in rows[1:]} == {'gradient', 'lrp-eps'}
    assert {row[4] for row in rows[1:]} == {'ssim', 'spearman'}
    assert {row[6] for row in rows[1:]} == {'0', '1', 'all'}
    diagnostics = read_rows(tmp_path / 'a' / 'diagnostics.csv')
    assert {row[1] for row in diagnostics[1:]} == {'logit-correlation', 'irrelevance-overlap',
                                                   'irrelevance-baseline'}
    # same config, more threads
    assert sync(cmd_sanity(make_config('sanity', info, out=tmp_path / 'b'), TaskPool(threads=4))) == code
    for name in ('sanity.csv', 'diagnostics.csv'):
        assert read_bytes(tmp_path / 'a' / name) == read_bytes(tmp_path / 'b' / name)


def test_sanity_rejects_unknown_method(tmp_path, model_file):
    info = {'model_path': model_file, 'dataset': BLOBS, 'methods': ['deconvnet']}
    with pytest.raises(ConfigError):
        sync(cmd_sanity(make_config('sanity', info, out=tmp_path), TaskPool()))


#
#   faithfulness
#

def test_faithfulness_command(tmp_path, model_file):
    info = {'model_path': model_file, 'dataset': BLOBS, 'n_images': 3, 'methods': ['gradient', 'random'],
            'seeds': [0], 'occlusion': {'blur': 3, 'patch': 4, 'steps': 4}}
    assert sync(cmd_faithfulness(make_config('faithfulness', info, out=tmp_path), TaskPool())) == EXIT_OK
    curves = read_rows(tmp_path / 'occlusion_curves.csv')
    assert tuple(curves[0]) == CURVE_COLUMNS
    # 2 methods x 3 images x (steps + 1) points
    assert len(curves) == 1 + 2 * 3 * 5
    auc = read_rows(tmp_path / 'occlusion_auc.csv')
    assert tuple(auc[0]) == AUC_COLUMNS
    assert {row[5] for row in auc[1:]} == {'0', '1', '2', 'mean'}


def test_faithfulness_rejects_bad_occlusion(tmp_path, model_file):
    info = {'model_path': model_file, 'dataset': BLOBS, 'occlusion': {'blur': 4}}
    with pytest.raises(ConfigError):
        sync(cmd_faithfulness(make_config('faithfulness', info, out=tmp_path), TaskPool()))


def test_faithfulness_failed_cells_give_partial_exit(tmp_path, model_file, monkeypatch, capsys):
    attribute = compute_attribution

    def no_gradient(name, **kwargs):
        if name == 'gradient':
            raise MetricError('all-zero map')
        return attribute(name=name, **kwargs)

    monkeypatch.setattr('libs.faithfulness.suite.compute_attribution', no_gradient)
    info = {'model_path': model_file, 'dataset': BLOBS, 'n_images': 3, 'methods': ['gradient', 'random'],
            'seeds': [0], 'occlusion': {'blur': 3, 'patch': 4, 'steps': 4}}
    assert sync(cmd_faithfulness(make_config('faithfulness', info, out=tmp_path), TaskPool())) == EXIT_PARTIAL
    failed = [line for line in capsys.readouterr().err.splitlines() if line.startswith('FAILED: ')]
    assert failed == ['FAILED: mlp gradient seed=0 image=%d: all-zero map' % image for image in range(3)]
    auc = read_rows(tmp_path / 'occlusion_auc.csv')
    assert {row[1] for row in auc[1:]} == {'random'}
    assert len(read_rows(tmp_path / 'occlusion_curves.csv')) == 1 + 3 * 5


#
#   shipped configs
#

ETC = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'etc')


def shipped(command: str) -> ExperimentConfig:
    return sync(ExperimentConfig.load(command=command, path=os.path.join(ETC, '%s.json' % command)))


@pytest.mark.parametrize('command', ['train', 'sanity', 'faithfulness', 'theory', 'stats'])
def test_shipped_configs_parse(command):
    assert shipped(command).seed == 7


def test_shipped_occlusion_fits_the_trained_images():
    size = shipped('train').get_integer(option='size', section='dataset')
    faithfulness = shipped('faithfulness')
    assert faithfulness.get_integer(option='size', section='dataset') == size
    patch = faithfulness.get_integer(option='patch', section='occlusion')
    steps = faithfulness.get_integer(option='steps', section='occlusion')
    assert patch == 8 and steps == 30
    regions, _ = grid_regions(np.zeros((size, size)), patch=patch)
    assert len(regions) >= steps

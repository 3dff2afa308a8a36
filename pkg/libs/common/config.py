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
    Experiment Config
    ~~~~~~~~~~~~~~~~~

    JSON config per subcommand, flags override the file.
"""

import os
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from dimples.utils import json_decode
from dimples.utils import Path, JSONFile

from .errors import ConfigError


#
#   Allowed keys, per subcommand.
#   A tuple value means "section with these keys", None means a plain value.
#

ARCH_KEYS = ('kind', 'width', 'hidden', 'classes')
DATASET_KEYS = ('kind', 'n', 'size', 'seed', 'images', 'labels', 'limit')
TRAIN_KEYS = ('epochs', 'lr', 'batch', 'seed')
OPTION_KEYS = ('baseline', 'steps', 'sigma', 'samples', 'eps', 'beta', 'beta_variant', 'cap')
OCCLUSION_KEYS = ('blur', 'patch', 'steps', 'score')

COMMON = {'seed': None, 'out': None, 'threads': None}
MODEL_SOURCE = {'model_path': None, 'arch': ARCH_KEYS, 'train': TRAIN_KEYS, 'dataset': DATASET_KEYS}

SCHEMAS: Dict[str, Dict[str, Optional[Tuple[str, ...]]]] = {
    'train': {
        **COMMON, 'arch': ARCH_KEYS, 'dataset': DATASET_KEYS, 'train': TRAIN_KEYS, 'model_file': None,
    },
    'sanity': {
        **COMMON, **MODEL_SOURCE,
        'methods': None, 'metrics': None, 'seeds': None, 'stages': None, 'mode': None, 'prep': None,
        'plan': None, 'n_images': None, 'options': OPTION_KEYS, 'diagnostics': None, 'tau': None,
    },
    'faithfulness': {
        **COMMON, **MODEL_SOURCE,
        'methods': None, 'seeds': None, 'n_images': None, 'options': OPTION_KEYS, 'occlusion': OCCLUSION_KEYS,
    },
    'theory': {
        **COMMON, 'experiments': None, 'params': None,
    },
    'stats': {
        **COMMON, **MODEL_SOURCE, 'n_images': None, 'q_high': None, 'q_low': None,
    },
}


class ExperimentConfig:

    def __init__(self, command: str, info: Mapping[str, Any], source: Optional[str] = None):
        super().__init__()
        schema = SCHEMAS.get(command)
        if schema is None:
            raise ConfigError('unknown command: %s' % command)
        self.__command = command
        self.__info = dict(info)
        self.__source = source
        self.__check_keys(schema=schema)

    def __str__(self) -> str:
        cname = self.__class__.__name__
        return '<%s command="%s" source="%s" seed=%s out="%s" />' % (cname, self.__command, self.__source,
                                                                     self.seed, self.out)

    def __repr__(self) -> str:
        return self.__str__()

    def __check_keys(self, schema: Mapping[str, Optional[Tuple[str, ...]]]):
        for key, value in self.__info.items():
            if key not in schema:
                raise ConfigError('unknown key "%s" for command "%s"' % (key, self.__command))
            allowed = schema[key]
            if allowed is None:
                continue
            if not isinstance(value, Mapping):
                raise ConfigError('"%s" must be an object' % key)
            for option in value:
                if option not in allowed:
                    raise ConfigError('unknown key "%s.%s" for command "%s"' % (key, option, self.__command))

    @property
    def command(self) -> str:
        return self.__command

    @property
    def info(self) -> Dict[str, Any]:
        return dict(self.__info)

    @property
    def seed(self) -> int:
        return self.get_integer(option='seed', default=0)

    @property
    def out(self) -> str:
        return self.get_string(option='out', default='out')

    @property
    def threads(self) -> Optional[int]:
        return self.get_integer(option='threads')

    def override(self, seed: Optional[int] = None, out: Optional[str] = None, threads: Optional[int] = None):
        """ flags win over the file """
        if seed is not None:
            self.__info['seed'] = seed
        if out is not None:
            self.__info['out'] = out
        if threads is not None:
            self.__info['threads'] = threads

    #
    #   Getters
    #

    def get_section(self, section: str) -> Dict[str, Any]:
        value = self.__info.get(section)
        if value is None:
            return {}
        if not isinstance(value, Mapping):
            raise ConfigError('"%s" must be an object' % section)
        return dict(value)

    def has_option(self, option: str, section: Optional[str] = None) -> bool:
        return self.__get(section=section, option=option) is not None

    def __get(self, section: Optional[str], option: str) -> Any:
        if section is None:
            return self.__info.get(option)
        return self.get_section(section=section).get(option)

    def get_string(self, option: str, section: Optional[str] = None, default: Optional[str] = None) -> Optional[str]:
        value = self.__get(section=section, option=option)
        if value is None:
            return default
        if not isinstance(value, str):
            raise ConfigError('"%s" must be a string: %s' % (_key(section, option), value))
        return value

    def get_integer(self, option: str, section: Optional[str] = None,
                    default: Optional[int] = None) -> Optional[int]:
        value = self.__get(section=section, option=option)
        if value is None:
            return default
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError('"%s" must be an integer: %s' % (_key(section, option), value))
        return value

    def get_float(self, option: str, section: Optional[str] = None,
                  default: Optional[float] = None) -> Optional[float]:
        value = self.__get(section=section, option=option)
        if value is None:
            return default
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError('"%s" must be a number: %s' % (_key(section, option), value))
        return float(value)

    def get_boolean(self, option: str, section: Optional[str] = None, default: bool = False) -> bool:
        value = self.__get(section=section, option=option)
        if value is None:
            return default
        if not isinstance(value, bool):
            raise ConfigError('"%s" must be true or false: %s' % (_key(section, option), value))
        return value

    def get_list(self, option: str, section: Optional[str] = None,
                 default: Optional[List] = None) -> Optional[List]:
        value = self.__get(section=section, option=option)
        if value is None:
            return default
        if not isinstance(value, list):
            raise ConfigError('"%s" must be a list: %s' % (_key(section, option), value))
        return list(value)

    #
    #   Paths
    #

    async def check_file(self, path: Optional[str], name: str) -> str:
        if path is None:
            raise ConfigError('missing path: %s' % name)
        if not await Path.exists(path=path):
            raise ConfigError('%s not found: %s' % (name, path))
        return path

    def prepare_out(self) -> str:
        out = self.out
        try:
            os.makedirs(out, exist_ok=True)
        except OSError as error:
            raise ConfigError('cannot create output directory %s: %s' % (out, error))
        return out

    #
    #   Factories
    #

    @classmethod
    def parse(cls, command: str, text: Union[str, bytes], source: Optional[str] = None):
        try:
            info = json_decode(string=text) if isinstance(text, str) else json_decode(string=text.decode('utf-8'))
        except ValueError as error:
            raise ConfigError('config %s is not valid JSON: %s' % (source, error))
        if not isinstance(info, Mapping):
            raise ConfigError('config %s must hold a JSON object' % source)
        return cls(command=command, info=info, source=source)

    @classmethod
    async def load(cls, command: str, path: str):
        if not await Path.exists(path=path):
            raise ConfigError('config file not exists: %s' % path)
        try:
            info = await JSONFile(path=path).read()
        except ValueError as error:
            raise ConfigError('config %s is not valid JSON: %s' % (path, error))
        if info is None:
            raise ConfigError('cannot read config file: %s' % path)
        if not isinstance(info, Mapping):
            raise ConfigError('config %s must hold a JSON object' % path)
        return cls(command=command, info=info, source=path)


def _key(section: Optional[str], option: str) -> str:
    return option if section is None else '%s.%s' % (section, option)

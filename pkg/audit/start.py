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
    Attribution Audit
    ~~~~~~~~~~~~~~~~~

    Sanity checks, occlusion faithfulness and the supporting theory
    experiments for attribution methods
"""

import sys

from dimples.utils import SysArgvParser
from dimples.utils import init_logger
from dimples.utils import Log, LogLevel
from dimples.utils import Runner
from dimples.utils import Path

path = Path.abs(path=__file__)
path = Path.dir(path=path)
path = Path.dir(path=path)
Path.add(path=path)

from libs.common import AuditError

from audit.shared import GlobalVariable
from audit.shared import create_config
from audit.handler import COMMANDS, EXIT_CONFIG


#
#  show logs
#
LOG_LEVEL = LogLevel.DEVELOP
LOGGER_NAME = 'audit'

APP_NAME = 'Attribution Audit'

DEFAULT_CONFIG = 'etc/%s.json'


def show_help():
    cmd = sys.argv[0]
    print('')
    print('    %s' % APP_NAME)
    print('')
    print('usages:')
    print('    %s <command> [--config=<FILE>] [--seed=N] [--out=DIR] [--threads=N]' % cmd)
    print('    %s [-h|--help]' % cmd)
    print('')
    print('commands:')
    print('    train           train a model and save it')
    print('    sanity          model randomization sanity check')
    print('    faithfulness    blur-occlusion curves and AUC')
    print('    theory          Monte Carlo and analytic experiments')
    print('    stats           activation quantiles and overtaking probabilities')
    print('')
    print('optional arguments:')
    print('    --config, -f    config file path (default: "%s")' % (DEFAULT_CONFIG % '<command>'))
    print('    --seed          base seed, overrides the config')
    print('    --out           output directory, overrides the config')
    print('    --threads       worker threads (fallback: $ATTRIB_AUDIT_THREADS, then 1)')
    print('    --log-location  show source location in log lines')
    print('    --log-dir, -d   write logs into this directory')
    print('    --help, -h      show this help message and exit')
    print('')


async def async_main():
    #
    #  parse cmd parameters
    #
    sys_argv = SysArgvParser.parse(shortopts='hf:ld:',
                                   longopts=['help', 'config=', 'seed=', 'out=', 'threads=',
                                             'log-location', 'log-dir='])
    if sys_argv is None or sys_argv.has_opt(opt='help'):
        show_help()
        sys.exit(EXIT_CONFIG if sys_argv is None else 0)
    args = sys_argv.args
    if len(args) != 1 or args[0] not in COMMANDS:
        Log.error('expected one command of: %s, got: %s', list(COMMANDS.keys()), args)
        show_help()
        sys.exit(EXIT_CONFIG)
    command = args[0]
    #
    #  init logger
    #
    show_location = sys_argv.has_opt(opt='log-location')
    log_directory = sys_argv.get_opt(opt='log-dir')
    init_logger(name=LOGGER_NAME, level=LOG_LEVEL, show_location=show_location, directory=log_directory)
    #
    #  create config
    #
    try:
        config = await create_config(sys_argv=sys_argv, command=command, default_config=DEFAULT_CONFIG % command)
    except AuditError as error:
        print('config error: %s' % error, file=sys.stderr)
        sys.exit(EXIT_CONFIG)
    #
    #  run command
    #
    shared = GlobalVariable()
    try:
        code = await COMMANDS[command](config, shared.pool)
    except AuditError as error:
        Log.error('%s failed: %s', command, error)
        print('error: %s' % error, file=sys.stderr)
        sys.exit(EXIT_CONFIG)
    Log.info('======== %s finished, exit code %d', command, code)
    sys.exit(code)


def main():
    Runner.sync_run(main=async_main())


if __name__ == '__main__':
    main()

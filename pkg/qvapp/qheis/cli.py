"""
Command line front end: ``qheis <command> [options]``.

Flags come from ``QHeis.custom_settings()``; the command name picks the
controller from ``QHeis.command_maps()``. Exit codes: 0 when every check
passes, 1 for usage, configuration or engine errors, 2 when a check fails.
"""
import argparse
import logging
import os
import sys

from .app import CustomSetting, QHeis, RunConfig
from .errors import CacheError, ConfigError, ParseError, QHeisError

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2


class _ArgumentParser(argparse.ArgumentParser):
    # usage errors share exit code 1 with bad configuration
    def error(self, message):
        raise ConfigError(message)


def _add_setting(parser, setting):
    flag = '--' + setting.name.replace('_', '-')
    if setting.type == CustomSetting.TYPE_BOOLEAN:
        parser.add_argument(flag, dest=setting.name, action='store_true', default=None,
                            help=setting.description)
    elif setting.type == CustomSetting.TYPE_INTEGER:
        parser.add_argument(flag, dest=setting.name, type=int, default=None, help=setting.description)
    else:
        parser.add_argument(flag, dest=setting.name, default=None, help=setting.description)


def build_parser(app=None):
    app = app or QHeis()
    common = _ArgumentParser(add_help=False)
    for setting in app.custom_settings():
        _add_setting(common, setting)

    parser = _ArgumentParser(prog='qheis', description=app.description)
    subparsers = parser.add_subparsers(dest='command', metavar='command', parser_class=_ArgumentParser)
    subparsers.required = True
    for command in app.command_maps():
        sub = subparsers.add_parser(command.name, parents=[common], help=command.help,
                                    description=command.help)
        if command.name == 'verify':
            sub.add_argument('suite', help='Suite to run, e.g. ybe or assoc.')
        elif command.name == 'pbw-reduce':
            sub.add_argument('word', help='Word in the modes, e.g. "y1(1) y1(-1)".')
    return parser


def _write(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, 'w') as f:
        f.write(text)


def run(argv=None, app=None):
    """
    Parse ``argv``, run the command and return (exit code, report or None).
    """
    app = app or QHeis()
    try:
        namespace = build_parser(app).parse_args(argv)
        config = RunConfig.from_namespace(namespace).validate()
        logging.basicConfig(level=getattr(logging, config.log_level.upper(), logging.WARNING),
                            format='%(levelname)s %(name)s: %(message)s')
        controller = app.controller_for(config.command)
        report = controller(config)
    except (ConfigError, ParseError, CacheError) as e:
        print('qheis: error: {}'.format(e), file=sys.stderr)
        return EXIT_USAGE, None
    except QHeisError as e:
        print('qheis: error: {}: {}'.format(type(e).__name__, e), file=sys.stderr)
        return EXIT_USAGE, None

    text = report.to_json()
    if config.json:
        _write(config.json, text)
        log.info('report written to %s', config.json)
    else:
        sys.stdout.write(text)
    if not report.passed:
        failed = [check.axiom for check in report.checks if not check.passed]
        log.warning('failing checks: %s', ', '.join(failed))
        return EXIT_FAILED, report
    return EXIT_OK, report


def main(argv=None):
    code, _ = run(argv)
    return code


if __name__ == '__main__':
    sys.exit(main())

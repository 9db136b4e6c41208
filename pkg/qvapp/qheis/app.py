import importlib
import os
from dataclasses import asdict, dataclass
from typing import NamedTuple

from .errors import ConfigError, ParseError
from .series import as_rational

TOOL_VERSION = '0.1.0'
CACHE_DIR_ENV = 'QHEIS_CACHE_DIR'


class CommandMap(NamedTuple):
    name: str
    controller: str
    help: str = ''


class CustomSetting(NamedTuple):
    TYPE_STRING = 'string'
    TYPE_INTEGER = 'integer'
    TYPE_BOOLEAN = 'boolean'

    name: str
    type: str
    description: str
    required: bool = False
    default: object = None


class QHeis:
    """
    App class for the qheis command line tool.
    """

    name = 'qheis - deformed Heisenberg quantum vertex algebra'
    package = 'qheis'
    description = ('Exact truncation-level construction of the rational R-matrix deformation of the '
                   'Heisenberg quantum vertex algebra and verification of its axioms.')
    tags = 'quantum vertex algebra, Yang R-matrix, Heisenberg'

    def command_maps(self):
        """
        Subcommands of the qheis CLI, each naming the dotted path of its
        controller; the CLI builds one subparser per entry.
        """
        command_maps = (
            CommandMap(
                name='gseries',
                controller='qvapp.qheis.controllers.cmd_gseries',
                help='Solve the trace normalization for G and print its coefficients.'
            ),
            CommandMap(
                name='verify',
                controller='qvapp.qheis.controllers.cmd_verify',
                help='Run one verification suite and report pass/fail with witnesses.'
            ),
            CommandMap(
                name='pbw-reduce',
                controller='qvapp.qheis.controllers.cmd_pbw_reduce',
                help='Reduce a word in the modes y_i^(r) to ordered monomials.'
            ),
        )

        return command_maps

    def custom_settings(self):
        """
        Settings shared by every command; the CLI turns each one into a flag.
        """
        custom_settings = (
            CustomSetting(
                name='N',
                type=CustomSetting.TYPE_INTEGER,
                description='Matrix size N >= 2.',
                default=2
            ),
            CustomSetting(
                name='c',
                type=CustomSetting.TYPE_STRING,
                description='Level c as a rational "p/q".',
                default='1'
            ),
            CustomSetting(
                name='formal_C',
                type=CustomSetting.TYPE_BOOLEAN,
                description='Keep C formal instead of specializing to c.',
                default=False
            ),
            CustomSetting(
                name='K',
                type=CustomSetting.TYPE_INTEGER,
                description='Work modulo h^(K+1).',
                default=4
            ),
            CustomSetting(
                name='caps',
                type=CustomSetting.TYPE_STRING,
                description='Degree caps: "3" for every variable class or e.g. "u=3,z=4".',
                default='3'
            ),
            CustomSetting(
                name='samples',
                type=CustomSetting.TYPE_INTEGER,
                description='Number of sampled states or words per check.',
                default=10
            ),
            CustomSetting(
                name='seed',
                type=CustomSetting.TYPE_INTEGER,
                description='Random seed; a fixed seed makes the run deterministic.',
                default=0
            ),
            CustomSetting(
                name='jobs',
                type=CustomSetting.TYPE_INTEGER,
                description='Worker processes for verification batches.',
                default=1
            ),
            CustomSetting(
                name='n_target',
                type=CustomSetting.TYPE_INTEGER,
                description='Compare associativity and locality modulo h^n_target.',
                default=3
            ),
            CustomSetting(
                name='bound',
                type=CustomSetting.TYPE_INTEGER,
                description='Largest exponent s or r scanned; defaults to 2*degree + K.'
            ),
            CustomSetting(
                name='strategy',
                type=CustomSetting.TYPE_STRING,
                description='Swap order for pbw-reduce: leftmost, rightmost or random.',
                default='leftmost'
            ),
            CustomSetting(
                name='cache_dir',
                type=CustomSetting.TYPE_STRING,
                description='Directory of the bundle cache (falls back to ${}).'.format(CACHE_DIR_ENV)
            ),
            CustomSetting(
                name='json',
                type=CustomSetting.TYPE_STRING,
                description='Write the JSON report to this path.'
            ),
            CustomSetting(
                name='timing',
                type=CustomSetting.TYPE_BOOLEAN,
                description='Add timing and cache statistics to the report.',
                default=False
            ),
            CustomSetting(
                name='log_level',
                type=CustomSetting.TYPE_STRING,
                description='Logging level.',
                default='WARNING'
            ),
        )
        return custom_settings

    def controller_for(self, name):
        """
        Import the controller mapped to command ``name``.
        """
        for command in self.command_maps():
            if command.name == name:
                module_name, _, func = command.controller.rpartition('.')
                return getattr(importlib.import_module(module_name), func)
        raise ConfigError('unknown command {!r}'.format(name))

    @staticmethod
    def get_cache_dir(config):
        return config.cache_dir or os.environ.get(CACHE_DIR_ENV) or None


def parse_caps(text):
    """
    "3" -> {None: 3}; "u=3,z=4" -> {'u': 3, 'z': 4}; "3,z=5" mixes both.
    """
    caps = {}
    for token in str(text).split(','):
        token = token.strip()
        if not token:
            continue
        name, sep, value = token.partition('=')
        if not sep:
            name, value = None, token
        try:
            caps[name.strip() if name else None] = int(value)
        except ValueError:
            raise ConfigError('cannot read degree cap {!r}'.format(token))
    if not caps:
        raise ConfigError('no degree caps given')
    return caps


def _parse_level(text):
    try:
        return as_rational(text)
    except (ParseError, TypeError) as e:
        raise ConfigError(str(e)) from e


@dataclass(frozen=True)
class RunConfig:
    command: str = 'verify'
    N: int = 2
    c: str = '1'
    formal_C: bool = False
    K: int = 4
    caps: str = '3'
    samples: int = 10
    seed: int = 0
    jobs: int = 1
    n_target: int = 3
    bound: int = None
    strategy: str = 'leftmost'
    suite: str = None
    word: str = None
    cache_dir: str = None
    json: str = None
    timing: bool = False
    log_level: str = 'WARNING'

    @classmethod
    def from_namespace(cls, namespace):
        values = {k: v for k, v in vars(namespace).items() if k in cls.__dataclass_fields__ and v is not None}
        return cls(**values)

    def validate(self):
        """
        Raise ConfigError for any setting out of range.
        """
        if self.N < 2:
            raise ConfigError('N must be at least 2, got {}'.format(self.N))
        if self.K < 0:
            raise ConfigError('K must be nonnegative, got {}'.format(self.K))
        if any(cap < 1 for cap in parse_caps(self.caps).values()):
            raise ConfigError('degree caps must be positive: {!r}'.format(self.caps))
        for name in ('samples', 'jobs', 'n_target'):
            if getattr(self, name) < 1:
                raise ConfigError('{} must be positive, got {}'.format(name, getattr(self, name)))
        if self.bound is not None and self.bound < 0:
            raise ConfigError('bound must be nonnegative, got {}'.format(self.bound))
        if self.strategy not in ('leftmost', 'rightmost', 'random'):
            raise ConfigError('unknown strategy {!r}'.format(self.strategy))
        if not self.formal_C:
            _parse_level(self.c)
        return self

    @property
    def level(self):
        """
        The rational level, or None with formal C.
        """
        if self.formal_C:
            return None
        return _parse_level(self.c)

    def cap(self, variable_class, default=3):
        caps = parse_caps(self.caps)
        return caps.get(variable_class, caps.get(None, default))

    def echo(self):
        """
        Settings that determine the report content; paths and switches are left out.
        """
        data = asdict(self)
        for name in ('cache_dir', 'json', 'timing', 'log_level', 'jobs'):
            data.pop(name)
        return {k: v for k, v in data.items() if v is not None}

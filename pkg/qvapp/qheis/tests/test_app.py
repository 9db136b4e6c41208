import os
import unittest
from unittest import mock

from qvapp.qheis.app import CACHE_DIR_ENV, QHeis, RunConfig, parse_caps
from qvapp.qheis.controllers import cmd_gseries
from qvapp.qheis.errors import ConfigError


class ParseCapsTestCase(unittest.TestCase):

    def test_forms(self):
        self.assertEqual(parse_caps('3'), {None: 3})
        self.assertEqual(parse_caps('u=3, z=4'), {'u': 3, 'z': 4})
        self.assertEqual(parse_caps('3,z=5'), {None: 3, 'z': 5})

    def test_errors(self):
        with self.assertRaises(ConfigError):
            parse_caps('u=three')
        with self.assertRaises(ConfigError):
            parse_caps(' , ')


class RunConfigTestCase(unittest.TestCase):

    def test_defaults_validate(self):
        config = RunConfig().validate()
        self.assertEqual(config.level, 1)
        self.assertEqual(config.cap('z'), 3)

    def test_out_of_range(self):
        for bad in (dict(N=1), dict(K=-1), dict(caps='u=0'), dict(samples=0), dict(jobs=0), dict(n_target=0),
                    dict(bound=-1), dict(strategy='greedy'), dict(c='a/b')):
            with self.assertRaises(ConfigError, msg=str(bad)):
                RunConfig(**bad).validate()

    def test_formal_level(self):
        config = RunConfig(formal_C=True, c='junk').validate()
        self.assertIsNone(config.level)

    def test_caps_per_class(self):
        config = RunConfig(caps='3,z=5')
        self.assertEqual(config.cap('z'), 5)
        self.assertEqual(config.cap('u'), 3)
        self.assertEqual(RunConfig(caps='z=5').cap('u'), 3)

    def test_echo(self):
        config = RunConfig(command='gseries', cache_dir='/tmp/x', json='out.json', timing=True)
        echo = config.echo()
        for name in ('cache_dir', 'json', 'timing', 'log_level', 'jobs', 'suite', 'word', 'bound'):
            self.assertNotIn(name, echo)
        self.assertEqual(echo['command'], 'gseries')


class AppTestCase(unittest.TestCase):

    def test_controller_for(self):
        app = QHeis()
        self.assertIs(app.controller_for('gseries'), cmd_gseries)
        with self.assertRaises(ConfigError):
            app.controller_for('serve')

    def test_every_command_resolves(self):
        app = QHeis()
        for command in app.command_maps():
            self.assertTrue(callable(app.controller_for(command.name)))

    def test_cache_dir_from_environment(self):
        with mock.patch.dict(os.environ, {CACHE_DIR_ENV: '/var/cache/qheis'}):
            self.assertEqual(QHeis.get_cache_dir(RunConfig()), '/var/cache/qheis')
            self.assertEqual(QHeis.get_cache_dir(RunConfig(cache_dir='here')), 'here')
        with mock.patch.dict(os.environ, {}, clear=True):
            self.assertIsNone(QHeis.get_cache_dir(RunConfig()))


if __name__ == '__main__':
    unittest.main()

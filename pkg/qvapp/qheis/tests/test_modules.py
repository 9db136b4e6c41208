import random
import unittest
from fractions import Fraction

from qvapp.qheis.errors import CharacterError, NotDiagonalError
from qvapp.qheis.fock import FockSpace, Generator, make_monomial
from qvapp.qheis.heisenberg import HeisenbergAlgebra, Mode
from qvapp.qheis.modules import (HeisenbergModule, ZeroModeCharacter, diagonal_states, roundtrip_check,
                                 sample_modules, verify_classical_action, verify_defining_relations,
                                 verify_independence)
from qvapp.qheis.rmatrix import build_bundle
from qvapp.qheis.series import HSeries
from qvapp.qheis.tests.test_vertex import ScaledKernel
from qvapp.qheis.vertex import verify_weak_assoc

K = 2


def module_for(pairings, N=2, c=1):
    return HeisenbergModule(build_bundle(N, K, Fraction(c)), ZeroModeCharacter.from_pairings(pairings, K))


class CharacterTestCase(unittest.TestCase):

    def test_from_alpha(self):
        character = ZeroModeCharacter.from_alpha([1, 0], K)
        self.assertEqual(character.values, (HSeries([Fraction(1, 2)], K), HSeries([Fraction(-1, 2)], K)))

    def test_h_dependent_pairings(self):
        character = ZeroModeCharacter.from_pairings([['1', '1/3'], ['-1', '-1/3']], K)
        self.assertEqual(character.value(1)[1], Fraction(1, 3))

    def test_pairings_must_cancel(self):
        with self.assertRaises(CharacterError):
            ZeroModeCharacter.from_pairings(['1', '1'], K)

    def test_rank_mismatch(self):
        with self.assertRaises(CharacterError):
            module_for(['1', '-2', '1'])


class ActionTestCase(unittest.TestCase):

    def setUp(self):
        self.module = module_for(['1', '-1'])

    def test_zero_mode(self):
        vacuum = self.module.vacuum()
        self.assertEqual(self.module.act_mode(1, 0, vacuum), vacuum)
        self.assertEqual(self.module.act_mode(2, 0, vacuum), vacuum.scale(-1))

    def test_creation_and_contraction(self):
        vacuum = self.module.vacuum()
        x = self.module.monomial_state([(1, 1, 1)])
        self.assertEqual(self.module.act_mode(1, -1, vacuum), x)
        self.assertEqual(self.module.act_mode(1, 1, x), vacuum.scale(Fraction(1, 2)))
        self.assertEqual(self.module.act_monomial([(1, 1), (1, -1)], vacuum), vacuum.scale(Fraction(1, 2)))

    def test_combination_matches_word(self):
        algebra = HeisenbergAlgebra(2, K)
        vacuum = self.module.vacuum()
        reduced = algebra.pbw_reduce('y1(1) y1(-1)')
        self.assertEqual(self.module.act_combination(reduced, vacuum),
                         self.module.act_monomial([Mode(1, 1), Mode(1, -1)], vacuum))

    def test_off_diagonal_rejected(self):
        with self.assertRaises(NotDiagonalError):
            self.module.act_mode(1, 1, self.module.monomial_state([(1, 2, 1)]))
        with self.assertRaises(NotDiagonalError):
            self.module.raise_by(1, 2, 1, self.module.vacuum())

    def test_zero_mode_in_vertex_map(self):
        image = self.module.Y_W_apply((Generator(1, 1, 1),), 'z', self.module.vacuum(), 2)
        self.assertEqual(image.extract('z', -1), self.module.vacuum())

    def test_diagonal_states(self):
        states = diagonal_states(self.module, 2, max_depth=1)
        self.assertEqual(len(states), 3)
        sampled = diagonal_states(self.module, 2, max_depth=2, count=3, rng=random.Random(1))
        self.assertEqual(len(sampled), 3)


class ModuleAxiomTestCase(unittest.TestCase):

    def test_relations_hold(self):
        for module in (module_for(['1', '-1']), module_for(['1/2', '0', '-1/2'], N=3, c=2)):
            states = diagonal_states(module, 2, max_depth=1)
            report = verify_defining_relations(module, states, {'u1': 2, 'u2': 2})
            self.assertTrue(report.passed, report.witness)
            report = verify_classical_action(module, states, max_level=2)
            self.assertTrue(report.passed, report.witness)

    def test_roundtrip(self):
        module = sample_modules(build_bundle(2, K, Fraction(1)), 1, seed=3)[0]
        report = roundtrip_check(module, diagonal_states(module, 1, max_depth=2), zcap=2)
        self.assertTrue(report.passed, report.witness)
        self.assertEqual(report.axiom, 'roundtrip')

    def test_roundtrip_detects_inconsistent_kernel(self):
        module = module_for(['1', '-1'])
        module.kernel = ScaledKernel(module.bundle, 7)
        report = roundtrip_check(module, diagonal_states(module, 1, max_depth=2), zcap=2)
        self.assertFalse(report.passed)
        self.assertEqual(report.witness['check'], 'Y_W(y1 y1)')

    def test_vertex_map_of_pair(self):
        module = module_for(['1', '-1'])
        pair = make_monomial((1, 1, 1), (1, 1, 1))
        image = module.Y_W_apply(pair, 'z', module.vacuum(), {'z': 2})
        self.assertEqual(image.caps, {'z': 2})
        self.assertEqual(image.restrict(h_below=1).extract('z', -2), module.vacuum())
        self.assertEqual(image.extract('z', 0).h_part(0), module.monomial_state([(1, 1, 1), (1, 1, 1)]) +
                         module.monomial_state([(1, 1, 2)]).scale(2))

    def test_independence(self):
        modules = [module_for(p) for p in (['1', '-1'], ['2', '-2'], ['1/2', '-1/2'])]
        monomials = HeisenbergAlgebra(2, K).normal_monomials(2, 1)
        report = verify_independence(modules, monomials, diagonal_states(modules[0], 2, max_depth=1))
        self.assertTrue(report.passed, report.witness)

    def test_dependence_detected(self):
        modules = [module_for(['1', '-1']), module_for(['1', '-1'])]
        report = verify_independence(modules, [(), (Mode(1, 0),)], [modules[0].vacuum()])
        self.assertFalse(report.passed)
        self.assertEqual(report.witness['rank'], 1)


class ModuleAssociativityTestCase(unittest.TestCase):

    caps = {'z0': 3, 'z2': 3}
    X11 = make_monomial((1, 1, 1))

    def check(self, pairings):
        module = module_for(pairings)
        space = FockSpace(module.bundle)
        return verify_weak_assoc(space, self.X11, self.X11, module.vacuum(), 1, 8, self.caps, module=module)

    def test_zero_character(self):
        report = self.check(['0', '0'])
        self.assertTrue(report.passed, report.witness)
        self.assertEqual(report.exponent, 0)

    def test_zero_mode_pole(self):
        report = self.check(['1', '-1'])
        self.assertTrue(report.passed, report.witness)
        self.assertEqual(report.exponent, 1)


if __name__ == '__main__':
    unittest.main()

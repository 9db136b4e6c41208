import unittest
from fractions import Fraction

from qvapp.qheis.braiding import Braiding
from qvapp.qheis.fock import ContractionKernel, FieldResult, FockSpace, make_monomial, monomial_basis
from qvapp.qheis.rmatrix import build_bundle
from qvapp.qheis.vertex import (Y_apply, classical_limit_check, classical_limit_report, shifted_apply,
                                verify_normal_ordering, verify_s_locality, verify_translation, verify_vacuum,
                                verify_weak_assoc, verify_ymap, wick_ordered_apply)

X11 = make_monomial((1, 1, 1))


def space_for(N=2, K=2, c=1):
    return FockSpace(build_bundle(N, K, Fraction(c)))


class ScaledKernel(ContractionKernel):
    """
    Contractions multiplied by a constant, out of step with the S entries.
    """

    def __init__(self, bundle, factor):
        super().__init__(bundle)
        self.factor = factor

    def contractions(self, a, b, gen):
        return tuple((m, k, weight * self.factor) for m, k, weight in super().contractions(a, b, gen))


class VertexOperatorTestCase(unittest.TestCase):

    def setUp(self):
        self.space = space_for()

    def test_vacuum_field_is_identity(self):
        w = self.space.monomial_state([(1, 2, 1), (2, 1, 2)])
        image = wick_ordered_apply(self.space, (), 'z', w, 2)
        self.assertEqual(image, FieldResult(2, 2, ('z',), {(k, h, (0,)): v for (k, h, _), v in w.terms.items()}))

    def test_creation_part_on_vacuum(self):
        image = Y_apply(self.space, [(1, 1, 1)], 'z', self.space.vacuum(), {'z': 1})
        self.assertEqual(image.extract('z', 0), self.space.monomial_state([(1, 1, 1)]))
        self.assertEqual(image.extract('z', 1), self.space.monomial_state([(1, 1, 2)]))

    def test_pole_on_single_generator(self):
        w = self.space.monomial_state([(1, 1, 1)])
        image = Y_apply(self.space, [(1, 1, 1)], 'z', w, 2).restrict(h_below=1)
        self.assertEqual(image.extract('z', -2), self.space.vacuum().scale(Fraction(1, 2)))

    def test_target_variable_clash(self):
        image = Y_apply(self.space, [(1, 1, 1)], 'z', self.space.vacuum(), 1)
        with self.assertRaises(ValueError):
            wick_ordered_apply(self.space, X11, 'z', image, 1)

    def test_shifted_creation_part(self):
        image = shifted_apply(self.space, X11, 'z', self.space.vacuum(), 1)
        self.assertEqual(image.variables, ('z',))
        self.assertEqual(image.caps, {'z': 1})
        self.assertEqual(image.extract('z', 0), self.space.monomial_state([(1, 1, 1)]))
        self.assertEqual(image.extract('z', 1), self.space.monomial_state([(1, 1, 2)]))

    def test_shifted_vacuum_field(self):
        w = self.space.monomial_state([(1, 2, 1)])
        self.assertEqual(shifted_apply(self.space, (), 'z', w, 2).extract('z', 0), w)
        with self.assertRaises(ValueError):
            shifted_apply(self.space, X11, 'z', Y_apply(self.space, [(1, 1, 1)], 'z', w, 1), 1)


class AxiomTestCase(unittest.TestCase):

    def setUp(self):
        self.space = space_for()

    def test_normal_ordering(self):
        states = [self.space.vacuum(), self.space.monomial_state([(1, 1, 1)])]
        report = verify_normal_ordering(self.space, [(1, 1), (1, 2)], states, {'u1': 2, 'u2': 2})
        self.assertTrue(report.passed, report.witness)

    def test_shifted_matching_sum(self):
        monos = [X11, make_monomial((1, 2, 1), (2, 1, 2)), make_monomial((1, 1, 1), (1, 1, 1))]
        states = [self.space.vacuum(), self.space.monomial_state([(2, 1, 1)]), self.space.monomial_state([(1, 1, 2)])]
        report = verify_ymap(self.space, monos, states, 2)
        self.assertTrue(report.passed, report.witness)
        self.assertEqual(report.axiom, 'ymap')

    def test_shifted_matching_sum_other_rank(self):
        space = space_for(3, 1, 2)
        monos = [make_monomial((1, 3, 1), (3, 2, 1)), make_monomial((2, 2, 2))]
        report = verify_ymap(space, monos, [space.vacuum(), space.monomial_state([(2, 3, 1)])], 2)
        self.assertTrue(report.passed, report.witness)

    def test_ymap_detects_inconsistent_kernel(self):
        self.space.kernel = ScaledKernel(self.space.bundle, 7)
        report = verify_ymap(self.space, [make_monomial((1, 1, 1), (1, 1, 1))], [self.space.vacuum()], 2)
        self.assertFalse(report.passed)

    def test_vacuum_axiom(self):
        monos = [X11, make_monomial((1, 2, 1), (2, 1, 1))]
        states = [self.space.vacuum(), self.space.monomial_state([(2, 1, 2)])]
        report = verify_vacuum(self.space, monos, states, 3)
        self.assertTrue(report.passed, report.witness)

    def test_translation(self):
        states = [self.space.vacuum(), self.space.monomial_state([(1, 1, 1)])]
        report = verify_translation(self.space, [X11, make_monomial((1, 2, 1))], states, 2)
        self.assertTrue(report.passed, report.witness)

    def test_classical_limit(self):
        for N in (2, 3):
            space = space_for(N, 2, 1)
            self.assertTrue(classical_limit_check(space, 1, [1], [1]).passed)
            monos = monomial_basis(N, 2, max_depth=2, diagonal=True)
            for i in range(1, N):
                report = classical_limit_report(space, i, monos)
                self.assertTrue(report.passed, report.witness)

    def test_classical_limit_arguments(self):
        with self.assertRaises(ValueError):
            classical_limit_check(self.space, 1, [1, 1], [1])


class ExponentTestCase(unittest.TestCase):

    caps_assoc = {'z0': 3, 'z2': 3}
    caps_local = {'z1': 3, 'z2': 3}

    def setUp(self):
        self.space = space_for()
        self.braiding = Braiding(self.space.bundle)

    def test_assoc_on_vacuum(self):
        report = verify_weak_assoc(self.space, X11, X11, self.space.vacuum(), 1, 8, self.caps_assoc)
        self.assertTrue(report.passed, report.witness)
        self.assertEqual(report.exponent, 0)

    def test_assoc_on_generator(self):
        w = self.space.monomial_state([(1, 1, 1)])
        report = verify_weak_assoc(self.space, X11, X11, w, 1, 8, self.caps_assoc)
        self.assertTrue(report.passed, report.witness)
        self.assertEqual(report.exponent, 2)

    def test_assoc_scan_exhausted(self):
        w = self.space.monomial_state([(1, 1, 1)])
        report = verify_weak_assoc(self.space, X11, X11, w, 1, 1, self.caps_assoc)
        self.assertFalse(report.passed)
        self.assertEqual(report.witness['s_max'], 1)

    def test_locality_exponents(self):
        vacuum = self.space.vacuum()
        report = verify_s_locality(self.space, self.braiding, X11, X11, vacuum, 1, 8, self.caps_local)
        self.assertTrue(report.passed, report.witness)
        self.assertEqual(report.exponent, 2)
        report = verify_s_locality(self.space, self.braiding, X11, X11, vacuum, 3, 8, self.caps_local)
        self.assertTrue(report.passed, report.witness)
        self.assertEqual(report.exponent, 4)

    def test_locality_off_diagonal(self):
        u, v = make_monomial((1, 2, 1)), make_monomial((2, 1, 1))
        report = verify_s_locality(self.space, self.braiding, u, v, self.space.vacuum(), 1, 6, self.caps_local)
        self.assertTrue(report.passed, report.witness)
        self.assertEqual(report.exponent, 2)


if __name__ == '__main__':
    unittest.main()

import unittest
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from qvapp.qheis.errors import KernelError, NotDiagonalError
from qvapp.qheis.fock import (D_apply, FieldResult, FockSpace, Generator, State, make_monomial, monomial_basis,
                              normalize, require_diagonal, shift_substitute, verify_annihilators_commute,
                              verify_commutation, verify_normal_order_symmetry, verify_quotient,
                              verify_trace_relation)
from qvapp.qheis.rmatrix import build_bundle
from qvapp.qheis.series import LaurentExpr


def space_for(N=2, K=2, c=1):
    return FockSpace(build_bundle(N, K, Fraction(c)))


class NormalizeTestCase(unittest.TestCase):

    def test_last_diagonal_eliminated(self):
        s = normalize(State.from_monomial(3, 2, make_monomial((3, 3, 1))))
        expected = State.from_dict(3, 2, {((1, 1, 1),): -1, ((2, 2, 1),): -1})
        self.assertEqual(s, expected)

    def test_trace_vanishes(self):
        N = 3
        total = State(N, 2)
        for i in range(1, N + 1):
            total = total + State.from_monomial(N, 2, make_monomial((i, i, 2)))
        self.assertFalse(normalize(total))

    def test_off_diagonal_untouched(self):
        s = State.from_monomial(3, 2, make_monomial((1, 2, 3)))
        self.assertEqual(normalize(s), s)

    def test_products_expand(self):
        s = normalize(State.from_monomial(2, 2, make_monomial((2, 2, 1), (2, 2, 1))))
        self.assertEqual(s, State.from_dict(2, 2, {((1, 1, 1), (1, 1, 1)): 1}))

    def test_monomial_validation(self):
        with self.assertRaises(ValueError):
            make_monomial((1, 1, 0))
        with self.assertRaises(NotDiagonalError):
            require_diagonal(make_monomial((1, 2, 1)))

    def test_translation_is_derivation(self):
        s = State.from_monomial(2, 2, make_monomial((1, 2, 1), (1, 2, 1)))
        self.assertEqual(D_apply(s), State.from_dict(2, 2, {((1, 2, 1), (1, 2, 2)): 2}))

    def test_monomial_basis(self):
        self.assertEqual(len(monomial_basis(2, 1, max_depth=1)), 1 + 3)
        self.assertEqual(len(monomial_basis(3, 2, max_depth=1, diagonal=True, min_degree=1)), 2 + 3)
        self.assertNotIn((Generator(2, 2, 1),), monomial_basis(2, 1))


class FieldTestCase(unittest.TestCase):

    def setUp(self):
        self.space = space_for()

    def test_formal_bundle_rejected(self):
        with self.assertRaises(KernelError):
            FockSpace(build_bundle(2, 1))

    def test_vacuum_is_annihilated(self):
        self.assertFalse(self.space.annihilate(1, 1, self.space.vacuum()))
        self.assertFalse(self.space.annihilate(1, 2, self.space.vacuum()))

    def test_single_contraction(self):
        w = self.space.monomial_state([(1, 1, 1)])
        self.assertEqual(self.space.mode_apply(1, 1, 1, w), self.space.vacuum().scale(Fraction(1, 2)))
        self.assertFalse(self.space.mode_apply(1, 1, 0, w))

    def test_contraction_before_normalization(self):
        raw = State.from_monomial(2, 2, make_monomial((2, 2, 1)))
        self.assertEqual(self.space.mode_apply(1, 1, 1, raw), self.space.vacuum().scale(Fraction(-1, 2)))
        self.assertEqual(self.space.mode_apply(1, 1, 1, normalize(raw)), self.space.vacuum().scale(Fraction(-1, 2)))

    def test_creation_on_vacuum(self):
        caps = {'u': 2}
        image = self.space.field_apply(1, 2, self.space.vacuum(), 'u', caps)
        expected = FieldResult(2, 2, ('u',), {((Generator(1, 2, r),), 0, (r - 1,)): 1 for r in (1, 2, 3)}, caps)
        self.assertEqual(image, expected)

    def test_annihilation_exponents(self):
        w = self.space.monomial_state([(1, 1, 1)])
        image = self.space.annihilate(1, 1, w, 'u', {'u': 3})
        self.assertEqual(image.coefficient((), 0), LaurentExpr(('u',), {(-2,): Fraction(1, 2)}))

    def test_two_point_normal_order_on_vacuum(self):
        caps = {'u1': 2, 'u2': 2}
        vacuum = self.space.vacuum()
        ordered = self.space.normal_ordered_apply([(1, 2), (2, 1)], ('u1', 'u2'), vacuum, caps)
        creation = self.space.create(1, 2, self.space.create(2, 1, vacuum, 'u2', caps), 'u1', caps)
        self.assertIsNone(ordered.restrict(box=caps).witness(creation.restrict(box=caps)))

    def test_extract_and_derivative(self):
        image = self.space.field_apply(1, 1, self.space.vacuum(), 'u', {'u': 2})
        self.assertEqual(image.extract('u', 1), self.space.monomial_state([(1, 1, 2)]))
        self.assertEqual(image.derivative('u').extract('u', 0), self.space.monomial_state([(1, 1, 2)]))


class RelationsTestCase(unittest.TestCase):

    def test_commutation_and_trace(self):
        for N, c in ((2, 1), (2, Fraction(1, 2)), (3, -2)):
            space = space_for(N, 2, c)
            caps = {'u1': 2, 'u2': 2}
            states = [space.vacuum(), space.monomial_state([(1, 1, 1)]), space.monomial_state([(1, 2, 1), (2, 1, 2)])]
            entries = [(1, 1, 1, 1), (1, 2, 2, 1), (1, 1, 2, 2)]
            report = verify_commutation(space, entries, states, caps)
            self.assertTrue(report.passed, report.witness)
            report = verify_trace_relation(space, states, caps, var='u1')
            self.assertTrue(report.passed, report.witness)

    def test_annihilators_and_quotient(self):
        space = space_for(3, 2, 1)
        states = [space.monomial_state([(1, 1, 1), (2, 3, 1)]), space.monomial_state([(3, 3, 2)])]
        self.assertTrue(verify_annihilators_commute(space, [(1, 2, 2, 1), (3, 3, 1, 1)], states).passed)
        raw = [State.from_monomial(3, 2, make_monomial((3, 3, 1), (1, 2, 1)))]
        self.assertTrue(verify_quotient(space, raw).passed)

    def test_normal_order_symmetry(self):
        space = space_for(2, 1, 1)
        caps = {'u1': 1, 'u2': 1, 'u3': 1}
        states = [space.vacuum(), space.monomial_state([(2, 1, 1)])]
        report = verify_normal_order_symmetry(space, [(1, 2), (2, 1), (1, 1)], states, caps)
        self.assertTrue(report.passed, report.witness)

    def test_shift_substitute_regions(self):
        space = space_for()
        image = space.field_apply(1, 1, space.vacuum(), 'u', {'u': 3})
        shifted = shift_substitute(image, z_dominant=False, caps={'z': 1})
        self.assertEqual(shifted.caps['z'], 1)
        self.assertEqual(shifted.extract('z', 0).extract('u', 0), space.monomial_state([(1, 1, 1)]))
        self.assertEqual(shifted.extract('z', 1).extract('u', 0), space.monomial_state([(1, 1, 2)]))

    @given(st.sampled_from(monomial_basis(2, 2, max_depth=2, min_degree=1)))
    @settings(max_examples=20, deadline=None)
    def test_trace_sum_of_modes_vanishes(self, mono):
        space = space_for()
        w = normalize(State.from_monomial(2, 2, mono))
        for m in range(0, 4):
            total = space.mode_apply(1, 1, m, w) + space.mode_apply(2, 2, m, w)
            self.assertFalse(total)


if __name__ == '__main__':
    unittest.main()

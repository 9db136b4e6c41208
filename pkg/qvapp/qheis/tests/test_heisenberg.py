import random
import unittest
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from qvapp.qheis.errors import IndexRangeError, ParseError, TruncationError
from qvapp.qheis.heisenberg import (HeisenbergAlgebra, Mode, format_combination, parse_word,
                                    specialize_central)
from qvapp.qheis.series import C, HSeries


class ParseTestCase(unittest.TestCase):

    def test_parse_word(self):
        self.assertEqual(parse_word('y1(1) y1(-1)', 2), (Mode(1, 1), Mode(1, -1)))
        self.assertEqual(parse_word(' yN(-2) ', 3), (Mode(3, -2),))
        self.assertEqual(parse_word('1', 2), ())
        self.assertEqual(parse_word('', 2), ())

    def test_parse_errors(self):
        with self.assertRaises(ParseError):
            parse_word('x1(1)', 2)
        with self.assertRaises(ParseError):
            parse_word('y4(1)', 3)
        with self.assertRaises(ParseError):
            parse_word('y1(1)y1(2)', 2)

    def test_mode_str(self):
        self.assertEqual(str(Mode(2, -3)), 'y2(-3)')


class BracketTestCase(unittest.TestCase):

    def setUp(self):
        self.algebra = HeisenbergAlgebra(2, 4)

    def test_classical_bracket(self):
        bracket = self.algebra.mode_bracket(1, 1, 1, -1)
        self.assertEqual(bracket, HSeries.monomial(0, C * Fraction(1, 2), 4))
        self.assertEqual(self.algebra.mode_bracket(1, -1, 1, 1), -bracket)

    def test_bracket_support(self):
        self.assertFalse(self.algebra.mode_bracket(1, -1, 1, -1))
        self.assertFalse(self.algebra.mode_bracket(1, 2, 1, 2))
        bracket = self.algebra.mode_bracket(1, 2, 1, -1)
        self.assertEqual(bracket.valuation(), 1)
        self.assertEqual(bracket, self.algebra.bracket_by_extraction(1, 2, 1, -1))

    def test_beyond_cap(self):
        self.assertFalse(HeisenbergAlgebra(2, 1).mode_bracket(1, 3, 1, -1))
        with self.assertRaises(TruncationError):
            HeisenbergAlgebra(2, 1, strict=True).mode_bracket(1, 3, 1, -1)

    def test_starred_has_no_level_zero(self):
        algebra = HeisenbergAlgebra(2, 2, starred=True)
        with self.assertRaises(IndexRangeError):
            algebra.word('y1(0)')
        with self.assertRaises(IndexRangeError):
            self.algebra.word([(3, 1)])

    def test_extraction_agrees(self):
        algebra = HeisenbergAlgebra(3, 3)
        for r, s in ((1, -1), (2, -1), (-2, 3), (0, 1)):
            self.assertEqual(algebra.mode_bracket(1, r, 2, s), algebra.bracket_by_extraction(1, r, 2, s))


class ReductionTestCase(unittest.TestCase):

    def test_swap_produces_central_term(self):
        algebra = HeisenbergAlgebra(2, 4)
        reduced = algebra.pbw_reduce('y1(1) y1(-1)')
        self.assertEqual(format_combination(reduced), 'y1(-1) y1(1) + [C/2 + O(h^5)]')

    def test_ordered_word_unchanged(self):
        algebra = HeisenbergAlgebra(2, 2)
        (mono,) = algebra.pbw_reduce('y1(-2) y1(-1) y1(3)')
        self.assertEqual(mono.factors, (Mode(1, -2), Mode(1, -1), Mode(1, 3)))
        self.assertEqual(mono.coefficient, algebra.one())

    def test_last_index_eliminated(self):
        algebra = HeisenbergAlgebra(3, 2)
        self.assertEqual(format_combination(algebra.pbw_reduce('yN(-1)')), '-y1(-1) - y2(-1)')
        self.assertEqual(format_combination(algebra.pbw_reduce('1')), '1')

    def test_unknown_strategy(self):
        with self.assertRaises(ValueError):
            HeisenbergAlgebra(2, 2).pbw_reduce('y1(1)', strategy='greedy')

    def test_specialize_central(self):
        algebra = HeisenbergAlgebra(2, 4)
        reduced = specialize_central(algebra.pbw_reduce('y1(1) y1(-1)'), 0)
        self.assertEqual([m.factors for m in reduced], [(Mode(1, -1), Mode(1, 1))])

    def test_normal_monomials(self):
        algebra = HeisenbergAlgebra(3, 2)
        monomials = algebra.normal_monomials(1, 1)
        self.assertEqual(len(monomials), 1 + 6)
        self.assertEqual(monomials[0], ())
        starred = HeisenbergAlgebra(2, 2, starred=True).normal_monomials(2, 1)
        self.assertEqual(len(starred), 1 + 2 + 3)
        for mono in algebra.normal_monomials(2, 1):
            (reduced,) = algebra.pbw_reduce(mono)
            self.assertEqual(reduced.factors, mono)

    def test_verifiers(self):
        for algebra in (HeisenbergAlgebra(2, 3), HeisenbergAlgebra(3, 2, starred=True)):
            rng = random.Random(5)
            words = [algebra.random_word(rng, n) for n in (1, 2, 3, 4)]
            for report in (algebra.verify_confluence(words, seed=5), algebra.verify_bracket_support(3),
                           algebra.verify_trace_relation(range(-2, 3)), algebra.verify_level_zero(2)):
                self.assertTrue(report.passed, report.witness)
                self.assertEqual(report.axiom, 'pbw')

    @given(st.lists(st.tuples(st.integers(1, 3), st.integers(-2, 2)), max_size=4), st.integers(0, 1000))
    @settings(max_examples=25, deadline=None)
    def test_strategies_agree(self, factors, seed):
        algebra = HeisenbergAlgebra(3, 2)
        left = algebra.pbw_reduce(factors, 'leftmost')
        for strategy in ('rightmost', 'random'):
            other = algebra.pbw_reduce(factors, strategy, seed=seed)
            self.assertEqual(format_combination(left), format_combination(other))


if __name__ == '__main__':
    unittest.main()

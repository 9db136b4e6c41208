import unittest
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from qvapp.qheis.errors import NonUnitError, ParseError, RegionRequiredError, TruncationError
from qvapp.qheis.series import (C, CPoly, HSeries, LaurentExpr, Region, as_rational, binom, binomial_expand,
                                extract_coefficient, format_rational, series_invert, series_mul, substitute_shift)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def series_of(values, cap=4):
    return HSeries(values, cap)


class RationalTestCase(unittest.TestCase):

    def test_as_rational(self):
        self.assertEqual(as_rational('3/4'), Fraction(3, 4))
        self.assertEqual(as_rational(-2), Fraction(-2))
        self.assertEqual(as_rational(' -1/2 '), Fraction(-1, 2))

    def test_as_rational_rejects_garbage(self):
        with self.assertRaises(ParseError):
            as_rational('one half')
        with self.assertRaises(ParseError):
            as_rational('1/0')

    def test_format_rational(self):
        self.assertEqual(format_rational(2), '2/1')
        self.assertEqual(format_rational(Fraction(-3, 6)), '-1/2')

    def test_binom(self):
        self.assertEqual(binom(5, 2), 10)
        self.assertEqual(binom(-1, 3), -1)
        self.assertEqual(binom(-2, 2), 3)
        self.assertEqual(binom(3, 5), 0)
        self.assertEqual(binom(4, -1), 0)


class CPolyTestCase(unittest.TestCase):

    def test_arithmetic(self):
        self.assertEqual((C + 2) * (C - 2), C * C - 4)
        self.assertEqual(C - C, CPoly())
        self.assertFalse(C - C)

    def test_str(self):
        self.assertEqual(str(C * Fraction(1, 2) + 1), 'C/2 + 1')
        self.assertEqual(str(-C * (C + 2) * Fraction(1, 2)), '-C^2/2 - C')
        self.assertEqual(str(CPoly()), '0')

    def test_evaluate(self):
        self.assertEqual((C * C + 1).evaluate('1/2'), Fraction(5, 4))

    def test_unit_inverse(self):
        self.assertEqual(CPoly.constant(4).unit_inverse(), CPoly.constant(Fraction(1, 4)))
        with self.assertRaises(NonUnitError):
            C.unit_inverse()

    def test_json(self):
        p = C * C * Fraction(-1, 3) + 7
        self.assertEqual(CPoly.from_json(p.to_json()), p)


class HSeriesTestCase(unittest.TestCase):

    def test_geometric_inverse(self):
        self.assertEqual(series_invert(series_of([1, -1], 5)), series_of([1] * 6, 5))

    def test_non_unit(self):
        with self.assertRaises(NonUnitError):
            series_invert(series_of([0, 1]))

    def test_beyond_cap(self):
        s = series_of([1, 2], 2)
        self.assertEqual(s[1], 2)
        with self.assertRaises(TruncationError):
            s[3]

    def test_shift(self):
        s = series_of([0, 0, 3], 4)
        self.assertEqual(s.shift(-2), HSeries([3], 2))
        with self.assertRaises(ValueError):
            series_of([1]).shift(-1)

    def test_mixed_caps_truncate(self):
        total = HSeries([1, 1, 1], 2) + HSeries([1, 1], 1)
        self.assertEqual(total.cap, 1)

    def test_cpoly_payloads(self):
        s = HSeries([CPoly.constant(1), C], 3)
        self.assertEqual((s * s)[2], C * C)

    @given(st.lists(rationals, min_size=1, max_size=5).filter(lambda v: v[0] != 0))
    @settings(max_examples=50, deadline=None)
    def test_inverse_is_two_sided(self, values):
        a = series_of(values)
        one = HSeries.one(4)
        self.assertEqual(series_mul(a, series_invert(a)), one)
        self.assertEqual(series_mul(series_invert(a), a), one)

    @given(st.lists(rationals, max_size=5), st.lists(rationals, max_size=5), st.lists(rationals, max_size=5))
    @settings(max_examples=50, deadline=None)
    def test_ring_laws(self, x, y, z):
        a, b, c = series_of(x), series_of(y), series_of(z)
        self.assertEqual((a * b) * c, a * (b * c))
        self.assertEqual(a * (b + c), a * b + a * c)
        self.assertEqual(a * b, b * a)


class LaurentTestCase(unittest.TestCase):

    def test_negative_power_expansion(self):
        e = binomial_expand(('x', 'y'), -1, Region('x', ('y',)), {'y': 3})
        for k in range(4):
            self.assertEqual(e.coefficient({'x': -1 - k, 'y': k}), 1)
        self.assertEqual(len(e.terms), 4)

    def test_region_required(self):
        with self.assertRaises(RegionRequiredError):
            binomial_expand(('x', 'y'), -2)

    def test_negative_power_needs_caps(self):
        with self.assertRaises(TruncationError):
            binomial_expand(('x', 'y'), -2, Region('x', ('y',)))

    def test_nonnegative_power(self):
        e = binomial_expand(('x', 'y'), 2)
        self.assertEqual(e, LaurentExpr(('x', 'y'), {(2, 0): 1, (1, 1): -2, (0, 2): 1}))

    def test_extract_beyond_cap(self):
        e = binomial_expand(('x', 'y'), -1, Region('x', ('y',)), {'y': 1})
        with self.assertRaises(TruncationError):
            extract_coefficient(e, {'x': -3, 'y': 2})
        self.assertEqual(extract_coefficient(e, {'x': -3, 'y': 2}, allow_unreliable=True), 0)

    def test_extract_from_series(self):
        s = HSeries([LaurentExpr(('u',), {(-2,): 3}), 0], 1)
        self.assertEqual(extract_coefficient(s, (-2,)), HSeries([3, 0], 1))

    def test_substitute_shift(self):
        e = LaurentExpr(('u',), {(-1,): 1})
        shifted = substitute_shift(e, 'u', ('z', 'u'), 'z', {'u': 2})
        self.assertEqual(shifted.coefficient({'z': -1, 'u': 0}), 1)
        self.assertEqual(shifted.coefficient({'z': -2, 'u': 1}), -1)
        self.assertEqual(shifted.coefficient({'z': -3, 'u': 2}), 1)

    def test_derivative_and_reflection(self):
        e = LaurentExpr(('z',), {(-3,): 2, (2,): 1})
        self.assertEqual(e.derivative('z'), LaurentExpr(('z',), {(-4,): -6, (1,): 2}))
        self.assertEqual(e.negate_variable('z'), LaurentExpr(('z',), {(-3,): -2, (2,): 1}))

    def test_caps_drop_terms(self):
        e = LaurentExpr(('u',), {(0,): 1, (5,): 1}, {'u': 3})
        self.assertEqual(e.exponents('u'), [0])

    @given(st.integers(min_value=-4, max_value=4), st.integers(min_value=-4, max_value=4))
    @settings(max_examples=40, deadline=None)
    def test_powers_multiply(self, a, b):
        caps = {'y': 6}
        region = Region('x', ('y',))
        left = binomial_expand(('x', 'y'), a, region, caps) * binomial_expand(('x', 'y'), b, region, caps)
        self.assertEqual(left, binomial_expand(('x', 'y'), a + b, region, caps))


if __name__ == '__main__':
    unittest.main()

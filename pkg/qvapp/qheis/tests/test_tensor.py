import itertools
import unittest
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from qvapp.qheis.errors import IndexRangeError
from qvapp.qheis.tensor import (TensorOp, compose, diag_part, embed_legs, identity, matrix_unit, partial_trace,
                                permute_legs, perm_P, tensor)


def dense(N, values):
    """
    Arity-1 operator from a row-major list of N*N values.
    """
    entries = {}
    for (i, j), v in zip(itertools.product(range(1, N + 1), repeat=2), values):
        entries[((i,), (j,))] = Fraction(v)
    return TensorOp(N, 1, entries)


class TensorOpTestCase(unittest.TestCase):

    def test_permutation_is_involution(self):
        for N in (2, 3):
            self.assertEqual(compose(perm_P(N), perm_P(N)), identity(N, 2))

    def test_partial_traces(self):
        N = 3
        traced = partial_trace(identity(N, 2), 1)
        self.assertEqual(traced, identity(N, 1) * N)
        self.assertEqual(partial_trace(perm_P(N), 1), identity(N, 1))
        self.assertEqual(partial_trace(perm_P(N), 2), identity(N, 1))

    def test_full_trace(self):
        for N in (2, 3, 4):
            both = tensor(identity(N, 1), identity(N, 1))
            scalar = partial_trace(partial_trace(both, 1), 1)
            self.assertEqual(scalar.arity, 0)
            self.assertEqual(scalar.entry((), ()), N * N)
            self.assertEqual(scalar, TensorOp(N, 0, {((), ()): N * N}))
        self.assertEqual(partial_trace(matrix_unit(3, 1, 2), 1).entry((), ()), 0)

    def test_trace_leg_out_of_range(self):
        with self.assertRaises(IndexRangeError):
            partial_trace(identity(2, 0), 1)
        with self.assertRaises(IndexRangeError):
            partial_trace(identity(2, 2), 3)

    def test_permute_legs(self):
        self.assertEqual(permute_legs(perm_P(3), (2, 1)), perm_P(3))
        a = tensor(matrix_unit(2, 1, 2), identity(2, 1))
        b = tensor(identity(2, 1), matrix_unit(2, 1, 2))
        self.assertEqual(permute_legs(a, (2, 1)), b)
        with self.assertRaises(IndexRangeError):
            permute_legs(a, (1, 1))

    def test_embed_legs(self):
        P13 = embed_legs(perm_P(2), (1, 3), 3)
        self.assertEqual(P13.entry((1, 2, 1), (1, 2, 1)), 1)
        self.assertEqual(P13.entry((1, 1, 2), (2, 1, 1)), 1)
        self.assertEqual(P13.entry((1, 1, 2), (1, 1, 2)), 0)
        P12 = embed_legs(perm_P(2), (1, 2), 3)
        self.assertEqual(P12, tensor(perm_P(2), identity(2, 1)))

    def test_tensor_of_identities(self):
        self.assertEqual(tensor(identity(3, 1), identity(3, 1)), identity(3, 2))

    def test_bad_indices(self):
        with self.assertRaises(IndexRangeError):
            identity(2, 2).entry((1, 3), (1, 1))
        with self.assertRaises(IndexRangeError):
            embed_legs(perm_P(2), (1,), 3)

    def test_zero_entries_dropped(self):
        op = TensorOp(2, 1, {((1,), (1,)): 0, ((1,), (2,)): 2})
        self.assertEqual(len(op.entries), 1)
        self.assertTrue((op - op).is_zero())

    def test_diag_part(self):
        self.assertEqual(diag_part(perm_P(2)), TensorOp(2, 2, {((1, 1), (1, 1)): 1, ((2, 2), (2, 2)): 1}))

    @given(st.lists(st.integers(-3, 3), min_size=4, max_size=4),
           st.lists(st.integers(-3, 3), min_size=4, max_size=4),
           st.lists(st.integers(-3, 3), min_size=4, max_size=4))
    @settings(max_examples=40, deadline=None)
    def test_composition_is_associative(self, x, y, z):
        a, b, c = dense(2, x), dense(2, y), dense(2, z)
        self.assertEqual(compose(compose(a, b), c), compose(a, compose(b, c)))

    @given(st.lists(st.integers(-3, 3), min_size=4, max_size=4),
           st.lists(st.integers(-3, 3), min_size=4, max_size=4))
    @settings(max_examples=40, deadline=None)
    def test_trace_of_tensor_product(self, x, y):
        a, b = dense(2, x), dense(2, y)
        trace_b = sum((b.entry((i,), (i,)) for i in (1, 2)), Fraction(0))
        traced = partial_trace(tensor(a, b), 2)
        self.assertEqual(traced, a * trace_b)


if __name__ == '__main__':
    unittest.main()

"""
Sparse operators on (C^N)^(tensor n) with ring-valued entries.

Entries are keyed by (row, col) pairs of 1-based multi-indices and may hold
Fractions, CPoly values or HSeries of LaurentExpr.
"""
import itertools
import logging
from fractions import Fraction

from .errors import IndexRangeError

log = logging.getLogger(__name__)


class TensorOp:
    """
    Sparse linear operator; no zero entries are stored.
    """
    __slots__ = ('dim', 'arity', 'entries')

    def __init__(self, dim, arity, entries=None):
        if dim < 2:
            raise ValueError('dimension must be at least 2')
        if arity < 0:
            raise ValueError('arity must be non-negative')
        self.dim = dim
        self.arity = arity
        clean = {}
        for (row, col), value in (entries or {}).items():
            row, col = tuple(row), tuple(col)
            self._check_index(row)
            self._check_index(col)
            if value:
                clean[(row, col)] = value
        self.entries = clean

    def _check_index(self, index):
        if len(index) != self.arity or any(not 1 <= i <= self.dim for i in index):
            raise IndexRangeError('multi-index {} invalid for N={}, arity={}'.format(index, self.dim, self.arity))

    def entry(self, row, col):
        row, col = tuple(row), tuple(col)
        self._check_index(row)
        self._check_index(col)
        return self.entries.get((row, col), 0)

    def map_entries(self, fn):
        return TensorOp(self.dim, self.arity, {key: fn(value) for key, value in self.entries.items()})

    def _same_shape(self, other):
        if not isinstance(other, TensorOp) or (self.dim, self.arity) != (other.dim, other.arity):
            raise ValueError('operators act on different spaces')

    def __add__(self, other):
        self._same_shape(other)
        entries = dict(self.entries)
        for key, value in other.entries.items():
            entries[key] = entries[key] + value if key in entries else value
        return TensorOp(self.dim, self.arity, entries)

    def __neg__(self):
        return self.map_entries(lambda v: -v)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        """
        Multiply every entry by a scalar payload (on the left).
        """
        return self.map_entries(lambda v: factor * v)

    def __mul__(self, other):
        if isinstance(other, TensorOp):
            return compose(self, other)
        return self.map_entries(lambda v: v * other)

    def __eq__(self, other):
        if not isinstance(other, TensorOp):
            return NotImplemented
        if (self.dim, self.arity) != (other.dim, other.arity):
            return False
        for key in set(self.entries) | set(other.entries):
            if self.entries.get(key, 0) != other.entries.get(key, 0):
                return False
        return True

    __hash__ = None

    def is_zero(self):
        return not any(bool(v) for v in self.entries.values())

    def __repr__(self):
        return 'TensorOp(N={}, arity={}, {} entries)'.format(self.dim, self.arity, len(self.entries))


def identity(N, n=2):
    entries = {}
    for v in itertools.product(range(1, N + 1), repeat=n):
        entries[(v, v)] = Fraction(1)
    return TensorOp(N, n, entries)


def perm_P(N):
    entries = {}
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            entries[((i, j), (j, i))] = Fraction(1)
    return TensorOp(N, 2, entries)


def matrix_unit(N, i, j):
    return TensorOp(N, 1, {((i,), (j,)): Fraction(1)})


def compose(a, b):
    """
    Operator product a.b (apply b first).
    """
    a._same_shape(b)
    by_row = {}
    for (row, col), value in b.entries.items():
        by_row.setdefault(row, []).append((col, value))
    entries = {}
    for (row, mid), left in a.entries.items():
        for col, right in by_row.get(mid, ()):
            product = left * right
            key = (row, col)
            entries[key] = entries[key] + product if key in entries else product
    return TensorOp(a.dim, a.arity, entries)


def tensor(a, b):
    """
    Kronecker product a (x) b on arity(a) + arity(b) legs.
    """
    if a.dim != b.dim:
        raise ValueError('operators have different dimensions')
    entries = {}
    for (r1, c1), v1 in a.entries.items():
        for (r2, c2), v2 in b.entries.items():
            entries[(r1 + r2, c1 + c2)] = v1 * v2
    return TensorOp(a.dim, a.arity + b.arity, entries)


def embed_legs(op, legs, target_arity):
    """
    Place ``op`` on the given 1-based legs of a ``target_arity``-fold product,
    identity elsewhere.
    """
    legs = list(legs)
    if len(legs) != op.arity:
        raise IndexRangeError('{} legs given for an arity-{} operator'.format(len(legs), op.arity))
    if len(set(legs)) != len(legs) or any(not 1 <= leg <= target_arity for leg in legs):
        raise IndexRangeError('legs {} invalid for arity {}'.format(legs, target_arity))
    others = [leg for leg in range(1, target_arity + 1) if leg not in legs]
    entries = {}
    for (row, col), value in op.entries.items():
        for spectator in itertools.product(range(1, op.dim + 1), repeat=len(others)):
            new_row = [0] * target_arity
            new_col = [0] * target_arity
            for leg, r, c in zip(legs, row, col):
                new_row[leg - 1] = r
                new_col[leg - 1] = c
            for leg, v in zip(others, spectator):
                new_row[leg - 1] = v
                new_col[leg - 1] = v
            entries[(tuple(new_row), tuple(new_col))] = value
    return TensorOp(op.dim, target_arity, entries)


def partial_trace(op, leg):
    """
    Trace over the 1-based ``leg``; the arity drops by one. Tracing the last
    leg leaves the scalar trace under the key ((), ()).
    """
    if not 1 <= leg <= op.arity:
        raise IndexRangeError('leg {} out of range for arity {}'.format(leg, op.arity))
    k = leg - 1
    entries = {}
    for (row, col), value in op.entries.items():
        if row[k] != col[k]:
            continue
        key = (row[:k] + row[k + 1:], col[:k] + col[k + 1:])
        entries[key] = entries[key] + value if key in entries else value
    return TensorOp(op.dim, op.arity - 1, entries)


def diag_part(op):
    return TensorOp(op.dim, op.arity,
                    {(row, col): value for (row, col), value in op.entries.items() if row == col})


def permute_legs(op, order):
    """
    Reorder tensor factors: leg ``order[k]`` of ``op`` becomes leg k+1.
    For arity 2 and order (2, 1) this is P.op.P.
    """
    order = [leg - 1 for leg in order]
    if sorted(order) != list(range(op.arity)):
        raise IndexRangeError('{} is not a permutation of the legs'.format(order))
    entries = {}
    for (row, col), value in op.entries.items():
        entries[(tuple(row[i] for i in order), tuple(col[i] for i in order))] = value
    return TensorOp(op.dim, op.arity, entries)

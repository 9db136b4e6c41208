"""
Restricted H(C)-modules V_H(c, alpha) on diagonal states.

The module is the diagonal part of H+_N at level c, with y_i^(r) acting by
multiplication for r < 0, by the diagonal Wick contraction for r > 0 and by
the scalar <a_i, alpha> for r = 0. Since that only adds a scalar zero mode to
the Fock fields, ``HeisenbergModule`` reuses the ``FockSpace`` machinery. Y_W
is read off the shifted diagonal matching sum y_[n](z + u).
"""
import logging
import random
from collections import defaultdict
from fractions import Fraction

import sympy

from .errors import CharacterError, IndexRangeError, NotDiagonalError
from .fock import (FockSpace, Generator, State, make_monomial, monomial_basis, normalize, require_diagonal,
                   verify_commutation, verify_trace_relation)
from .heisenberg import HeisenbergAlgebra, Mode, specialize_central
from .reports import AxiomReport, merge_reports
from .rmatrix import cartan_form
from .series import CPoly, HSeries, as_rational
from .vertex import shifted_apply, wick_ordered_apply

log = logging.getLogger(__name__)


def scale_by_series(w, series):
    """
    sum_k h^k series_k w.
    """
    total = w._new({})
    for k, value in enumerate(series.coeffs):
        if value:
            total = total + w.scale(value, k)
    return total


def _as_series(value, K):
    if isinstance(value, HSeries):
        return value.truncate(K)
    if isinstance(value, (list, tuple)):
        return HSeries([as_rational(v) for v in value], K)
    return HSeries([as_rational(value)], K)


class ZeroModeCharacter:
    """
    The pairings <a_i, alpha>, i = 1..N, as h-series; they always sum to zero.
    """

    def __init__(self, values):
        self.values = tuple(values)
        total = self.values[0]
        for v in self.values[1:]:
            total = total + v
        if total:
            raise CharacterError('pairings {} do not sum to zero'.format(self.labels()))

    @classmethod
    def from_pairings(cls, values, K):
        """
        Accepts rationals, "p/q" strings or per-h-order coefficient lists.
        """
        return cls([_as_series(v, K) for v in values])

    @classmethod
    def from_alpha(cls, alpha, K):
        """
        <a_i, alpha> = alpha_i - (alpha_1 + ... + alpha_N)/N.
        """
        components = [_as_series(v, K) for v in alpha]
        total = HSeries.zero(K)
        for v in components:
            total = total + v
        mean = total * Fraction(1, len(components))
        return cls([v - mean for v in components])

    @classmethod
    def zero(cls, N, K):
        return cls([HSeries.zero(K)] * N)

    @classmethod
    def sample(cls, N, K, rng, h_degree=2):
        alpha = [[Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(h_degree + 1)] for _ in range(N)]
        return cls.from_alpha(alpha, K)

    @property
    def N(self):
        return len(self.values)

    def value(self, i):
        if not 1 <= i <= self.N:
            raise IndexRangeError('index {} out of range 1..{}'.format(i, self.N))
        return self.values[i - 1]

    def labels(self):
        return [str(v) for v in self.values]


class HeisenbergModule(FockSpace):
    """
    V_H(c, alpha) for a numeric bundle and a zero-mode character.
    """

    def __init__(self, bundle, character):
        super().__init__(bundle)
        if character.N != self.N:
            raise CharacterError('character has {} pairings, expected {}'.format(character.N, self.N))
        self.character = character

    @property
    def parameters(self):
        return dict(self.bundle.parameters, alpha=self.character.labels())

    @property
    def level(self):
        return self.bundle.central

    def diagonal_state(self, coeffs):
        state = self.state(coeffs)
        for mono in state.monomials():
            require_diagonal(mono)
        return state

    def raise_by(self, a, b, depth, fr):
        if a != b:
            raise NotDiagonalError('module modes are diagonal, got x{}{}'.format(a, b))
        return super().raise_by(a, b, depth, fr)

    def lower(self, a, b, fr):
        if a != b:
            raise NotDiagonalError('module modes are diagonal, got x{}{}'.format(a, b))
        parts = super().lower(a, b, fr)
        zero_mode = scale_by_series(fr, self.character.value(a))
        if zero_mode:
            parts[0] = parts[0] + zero_mode if 0 in parts else zero_mode
        return dict(sorted(parts.items()))

    def act_mode(self, i, r, w):
        """
        y_i^(r) w.
        """
        for mono in w.monomials():
            require_diagonal(mono)
        return self.mode_apply(i, i, r, w)

    def act_monomial(self, factors, w):
        """
        A product of modes, rightmost factor first.
        """
        for mode in reversed(tuple(factors)):
            mode = Mode(*mode)
            w = self.act_mode(mode.index, mode.level, w)
        return w

    def act_combination(self, combination, w):
        """
        A reduced combination with its central coefficients evaluated at the level.
        """
        total = w._new({})
        for mono in specialize_central(combination, self.level):
            total = total + scale_by_series(self.act_monomial(mono.factors, w), mono.coefficient)
        return total

    def field(self, i, w, var='u', caps=None):
        """
        y^i(var) w, zero mode included.
        """
        return self.field_apply(i, i, w, var, caps)

    def Y_W_apply(self, v_mono, z, w, caps):
        """
        Module vertex map Y_W(v, z) w for a diagonal monomial v, read off
        y_[n](z + u_1, ..., z + u_n) w built from the diagonal S entries.
        """
        require_diagonal(v_mono)
        zcap = caps[z] if isinstance(caps, dict) else caps
        return shifted_apply(self, tuple(v_mono), z, w, zcap)


def diagonal_states(module, max_degree, max_depth=2, count=None, rng=None):
    """
    Normal-form diagonal monomial states, optionally a seeded subsample.
    """
    monos = monomial_basis(module.N, max_degree, max_depth, diagonal=True)
    if count is not None and rng is not None and count < len(monos):
        monos = rng.sample(monos, count)
    return [normalize(State.from_monomial(module.N, module.K, m)) for m in monos]


###########################################################################
def verify_defining_relations(module, states, caps):
    """
    y^i(u1) y^j(u2) + s_ij(u1 - u2) = y^j(u2) y^i(u1) + s_ij(u2 - u1) and
    y^1(u) + ... + y^N(u) = 0 as operators on the sampled states.
    """
    N = module.N
    entries = [(i, i, j, j) for i in range(1, N + 1) for j in range(1, N + 1)]
    reports = [
        verify_commutation(module, entries, states, caps),
        verify_trace_relation(module, states, caps, var='u1'),
    ]
    return merge_reports('module', module.parameters, reports)


def _classical_lowering(module, i, r, w):
    c = module.level
    N = module.N

    def derivative(mono):
        out = defaultdict(Fraction)
        for t, gen in enumerate(mono):
            if gen.depth == r:
                out[mono[:t] + mono[t + 1:]] += r * c * cartan_form(i, gen.row, N)
        return list(out.items())

    return w.map_monomials(derivative)


def verify_classical_action(module, states, max_level=3):
    """
    At h = 0: creation is multiplication, y_i^(r) for r > 0 is the derivative
    sum_j r c <a_i, a_j> d/dx_jj^(-r), and the zero mode is the character.
    """
    reports = []
    for w in states:
        w0 = w.h_part(0)
        for i in range(1, module.N + 1):
            for r in range(-max_level, max_level + 1):
                actual = module.act_mode(i, r, w).h_part(0)
                if r < 0:
                    expected = normalize(w0.map_monomials(
                        lambda mono: [(tuple(sorted(mono + (Generator(i, i, -r),))), 1)]))
                elif r == 0:
                    expected = w0.scale(module.character.value(i)[0])
                else:
                    expected = _classical_lowering(module, i, r, w0)
                witness = actual.witness(expected, 'y{}({}) at h^0'.format(i, r))
                reports.append(AxiomReport.outcome('module', module.parameters, witness, checked=len(actual)))
    return merge_reports('module', module.parameters, reports)


def roundtrip_check(module, states, zcap=3, max_level=2):
    """
    Y_W built from the diagonal matching sum against the mode action.

    Modes read back from Y_W(x_ii^(-1), z) agree with act_mode, the zero mode
    is the character, Y_W(x_ii^(-1) x_jj^(-1), z) equals the normal-ordered
    product of act_mode fields, and commutators of the modes are the level-c
    brackets.
    """
    algebra = HeisenbergAlgebra(module.N, module.K)
    reports = []
    for i in range(1, module.N):
        vacuum = module.vacuum()
        zero_mode = module.Y_W_apply((Generator(i, i, 1),), 'z', vacuum, zcap).extract('z', -1)
        expected = scale_by_series(vacuum, module.character.value(i))
        reports.append(AxiomReport.outcome('roundtrip', module.parameters,
                                           zero_mode.witness(expected, 'zero mode of y{}'.format(i)), checked=1))
        for w in states:
            field = module.Y_W_apply((Generator(i, i, 1),), 'z', w, zcap)
            for r in range(-zcap - 1, max_level + 1):
                extracted = field.extract('z', -r - 1)
                witness = extracted.witness(module.act_mode(i, r, w), 'y{}({})'.format(i, r))
                reports.append(AxiomReport.outcome('roundtrip', module.parameters, witness, checked=len(extracted)))
            for j in range(i, module.N):
                pair = make_monomial(Generator(i, i, 1), Generator(j, j, 1))
                matched = module.Y_W_apply(pair, 'z', w, zcap)
                box = {'z': zcap}
                ordered = wick_ordered_apply(module, pair, 'z', w, zcap).restrict(box=box)
                witness = matched.restrict(box=box).witness(ordered, 'Y_W(y{} y{})'.format(i, j))
                reports.append(AxiomReport.outcome('roundtrip', module.parameters, witness, checked=len(matched)))
            for j in range(1, module.N):
                for r in range(1, max_level + 1):
                    for s in (-r, -r + 1, r):
                        lhs = (module.act_mode(i, r, module.act_mode(j, s, w))
                               - module.act_mode(j, s, module.act_mode(i, r, w)))
                        bracket = algebra.mode_bracket(i, r, j, s).map(
                            lambda p: p.evaluate(module.level) if isinstance(p, CPoly) else p)
                        rhs = scale_by_series(w, bracket)
                        witness = lhs.witness(rhs, '[y{}({}), y{}({})]'.format(i, r, j, s))
                        reports.append(AxiomReport.outcome('roundtrip', module.parameters, witness, checked=len(lhs)))
    return merge_reports('roundtrip', module.parameters, reports)


def _sympy_rational(value):
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def verify_independence(modules, monomials, states):
    """
    The operators of distinct normal monomials are linearly independent,
    read off the rank of their images on states across several modules.
    """
    modules = list(modules)
    rows = []
    for factors in monomials:
        factors = getattr(factors, 'factors', factors)
        vector = {}
        for mi, module in enumerate(modules):
            for si, w in enumerate(states):
                for (mono, hpow, _), value in module.act_monomial(factors, w).terms.items():
                    vector[(mi, si, mono, hpow)] = value
        rows.append(vector)
    columns = sorted(set().union(*rows)) if rows else []
    matrix = sympy.Matrix(len(rows), len(columns),
                          lambda a, b: _sympy_rational(rows[a].get(columns[b], 0)))
    rank = matrix.rank() if columns else 0
    parameters = dict(modules[0].bundle.parameters, modules=len(modules)) if modules else {}
    witness = None
    if rank < len(rows):
        witness = {'rank': rank, 'monomials': len(rows), 'check': 'independence'}
    return AxiomReport.outcome('independence', parameters, witness, checked=len(rows) * max(len(columns), 1))


def sample_modules(bundle, count, seed=0, h_degree=2):
    rng = random.Random(seed)
    return [HeisenbergModule(bundle, ZeroModeCharacter.sample(bundle.N, bundle.K, rng, h_degree))
            for _ in range(count)]

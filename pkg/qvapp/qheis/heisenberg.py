"""
The deformed Heisenberg algebras H(C) and H(C)*.

Generators y_i^(r) satisfy
    y^i(u) y^j(v) + s_ij(u - v, C) = y^j(v) y^i(u) + s_ij(v - u, C)
    y^1(u) + ... + y^N(u) = 0
with y^i(u) = sum_r y_i^(r) u^(-r-1), so every commutator of two modes is a
central h-series in Q[C]. Words are reduced to ordered monomials (level
ascending, then index ascending) over the indices 1..N-1.
"""
import itertools
import logging
import random
import re
from collections import defaultdict
from dataclasses import dataclass
from typing import NamedTuple

from .errors import IndexRangeError, ParseError, TruncationError
from .reports import AxiomReport, merge_reports
from .rmatrix import build_bundle, cartan_form, closed_form_S
from .series import C, CPoly, HSeries, Region, as_rational, binom, binomial_expand, extract_coefficient

log = logging.getLogger(__name__)

STRATEGIES = ('leftmost', 'rightmost', 'random')


class Mode(NamedTuple):
    """
    y_index^(level).
    """
    index: int
    level: int

    @property
    def sort_key(self):
        return (self.level, self.index)

    def __str__(self):
        return 'y{}({})'.format(self.index, self.level)


@dataclass(frozen=True)
class Word:
    factors: tuple
    coefficient: HSeries

    def __str__(self):
        return ' '.join(str(m) for m in self.factors) or '1'


@dataclass(frozen=True)
class NormalMonomial:
    """
    Ordered product of modes with its central coefficient.
    """
    factors: tuple
    coefficient: HSeries

    @property
    def word(self):
        return ' '.join(str(m) for m in self.factors)

    def __str__(self):
        return format_combination([self])


_TOKEN = re.compile(r'y(\d+|N)\((-?\d+)\)')


def parse_word(text, N):
    """
    Parse "y1(1) y1(-1)" (``yN`` names the last index) into modes; "1" or
    an empty string is the unit.
    """
    text = text.strip()
    if text in ('', '1'):
        return ()
    modes = []
    for token in text.split():
        match = _TOKEN.fullmatch(token)
        if match is None:
            raise ParseError('cannot read mode {!r}; expected e.g. y1(-2)'.format(token))
        index = N if match.group(1) == 'N' else int(match.group(1))
        if not 1 <= index <= N:
            raise ParseError('index {} of {!r} is out of range 1..{}'.format(index, token, N))
        modes.append(Mode(index, int(match.group(2))))
    return tuple(modes)


def _format_coefficient(coefficient):
    if coefficient == HSeries.one(coefficient.cap):
        return '', ''
    if coefficient == -HSeries.one(coefficient.cap):
        return '-', ''
    return '', '[{}]'.format(coefficient)


def format_combination(monomials):
    """
    Text form such as "y1(-1) y1(1) + [C/2 + O(h^5)]".
    """
    pieces = []
    for mono in monomials:
        sign, coefficient = _format_coefficient(mono.coefficient)
        body = ' '.join(p for p in (coefficient, mono.word) if p) or '1'
        pieces.append((sign, body))
    if not pieces:
        return '0'
    text = pieces[0][0] + pieces[0][1]
    for sign, body in pieces[1:]:
        text += ' {} {}'.format('-' if sign else '+', body)
    return text


def specialize_central(combination, c):
    """
    Evaluate every coefficient at C = c, dropping terms that vanish.
    """
    c = as_rational(c)
    out = []
    for mono in combination:
        coefficient = mono.coefficient.map(lambda p: p.evaluate(c) if isinstance(p, CPoly) else p)
        if coefficient:
            out.append(NormalMonomial(mono.factors, coefficient))
    return out


def _display_key(factors):
    return (-len(factors), [m.sort_key for m in factors])


def _combination_key(combination):
    return {mono.factors: mono.coefficient for mono in combination}


def _same_combination(left, right):
    a, b = _combination_key(left), _combination_key(right)
    return a.keys() == b.keys() and all(a[k] == b[k] for k in a)


class HeisenbergAlgebra:
    """
    H(C) (or H(C)* with ``starred``) at h-order cap K.

    Brackets come from the formal-C bundle; with ``strict`` a bracket whose
    h-order lies beyond K raises instead of vanishing.
    """

    def __init__(self, N, K, starred=False, strict=False):
        self.N = N
        self.K = K
        self.starred = starred
        self.strict = strict
        self.bundle = build_bundle(N, K)
        self._brackets = {}
        self._closed_form = None

    @property
    def parameters(self):
        return {'N': self.N, 'K': self.K, 'c': 'formal', 'starred': self.starred}

    def zero(self):
        return HSeries.zero(self.K)

    def one(self):
        return HSeries([CPoly.constant(1)], self.K)

    def check_mode(self, mode):
        if not 1 <= mode.index <= self.N:
            raise IndexRangeError('mode {} has index outside 1..{}'.format(mode, self.N))
        if self.starred and mode.level == 0:
            raise IndexRangeError('H(C)* has no level-0 mode {}'.format(mode))
        return mode

    def word(self, factors, coefficient=None):
        if isinstance(factors, str):
            factors = parse_word(factors, self.N)
        factors = tuple(self.check_mode(Mode(*m)) for m in factors)
        return Word(factors, self.one() if coefficient is None else coefficient)

    def mode_bracket(self, i, r, j, s):
        """
        [y_i^(r), y_j^(s)], a multiple of h^(r+s) in Q[C].
        """
        key = (i, r, j, s)
        found = self._brackets.get(key)
        if found is not None:
            return found
        self.check_mode(Mode(i, r))
        self.check_mode(Mode(j, s))
        k = r + s
        e = -(k + 2)
        if k < 0:
            found = self.zero()
        elif k > self.K:
            if self.strict:
                raise TruncationError('[{}, {}] lives at h^{}, beyond the cap {}'.format(
                    Mode(i, r), Mode(j, s), k, self.K))
            found = self.zero()
        else:
            kappa = CPoly()
            for order, exp, coeff in self.bundle.kernel_terms(i, i, j, j):
                if order == k and exp == e:
                    kappa = kappa + coeff
            value = CPoly()
            if r <= -1:
                value = value + kappa * (binom(e, -r - 1) * (-1) ** (-r - 1))
            if s <= -1:
                value = value - kappa * (binom(e, -s - 1) * (-1) ** (-s - 1))
            found = HSeries.monomial(k, value, self.K)
        self._brackets[key] = found
        return found

    def eliminate_last_index(self, word):
        """
        Rewrite y_N^(r) as -(y_1^(r) + ... + y_{N-1}^(r)); returns {factors: coefficient}.
        """
        options = []
        for mode in word.factors:
            if mode.index == self.N:
                options.append([(Mode(i, mode.level), -1) for i in range(1, self.N)])
            else:
                options.append([(mode, 1)])
        out = defaultdict(self.zero)
        for choice in itertools.product(*options):
            sign = 1
            for _, s in choice:
                sign *= s
            factors = tuple(m for m, _ in choice)
            out[factors] = out[factors] + word.coefficient * sign
        return out

    def pbw_reduce(self, word, strategy='leftmost', seed=None):
        """
        Ordered-monomial expansion of ``word`` (a Word, a string or a sequence of modes).

        Each step swaps one adjacent out-of-order pair, a b -> b a + [a, b];
        ``strategy`` picks the leftmost, the rightmost or a seeded random pair.
        """
        if strategy not in STRATEGIES:
            raise ValueError('unknown reduction strategy {!r}'.format(strategy))
        if not isinstance(word, Word):
            word = self.word(word)
        rng = random.Random(seed)
        pending = self.eliminate_last_index(word)
        done = defaultdict(self.zero)
        while pending:
            factors = min(pending, key=lambda f: (len(f), [m.sort_key for m in f]))
            coefficient = pending.pop(factors)
            if not coefficient:
                continue
            descents = [p for p in range(len(factors) - 1) if factors[p].sort_key > factors[p + 1].sort_key]
            if not descents:
                done[factors] = done[factors] + coefficient
                continue
            if strategy == 'leftmost':
                p = descents[0]
            elif strategy == 'rightmost':
                p = descents[-1]
            else:
                p = rng.choice(descents)
            a, b = factors[p], factors[p + 1]
            swapped = factors[:p] + (b, a) + factors[p + 2:]
            pending[swapped] = pending.get(swapped, self.zero()) + coefficient
            bracket = self.mode_bracket(a.index, a.level, b.index, b.level)
            if bracket:
                shorter = factors[:p] + factors[p + 2:]
                pending[shorter] = pending.get(shorter, self.zero()) + coefficient * bracket
        return [NormalMonomial(f, done[f]) for f in sorted(done, key=_display_key) if done[f]]

    def multiply(self, left, right):
        """
        Product of two reduced combinations, reduced again.
        """
        total = defaultdict(self.zero)
        for a in left:
            for b in right:
                for mono in self.pbw_reduce(Word(a.factors + b.factors, a.coefficient * b.coefficient)):
                    total[mono.factors] = total[mono.factors] + mono.coefficient
        return [NormalMonomial(f, total[f]) for f in sorted(total, key=_display_key)
                if total[f]]

    def random_word(self, rng, length, max_level=2):
        levels = [r for r in range(-max_level, max_level + 1) if r or not self.starred]
        return tuple(Mode(rng.randint(1, self.N), rng.choice(levels)) for _ in range(length))

    def normal_monomials(self, max_length, max_level):
        """
        Every ordered monomial in y_1..y_{N-1} with at most ``max_length`` factors.
        """
        modes = sorted((Mode(i, r) for i in range(1, self.N) for r in range(-max_level, max_level + 1)
                        if r or not self.starred), key=lambda m: m.sort_key)
        out = []
        for length in range(max_length + 1):
            out.extend(itertools.combinations_with_replacement(modes, length))
        return out

    ###########################################################################
    def verify_confluence(self, words, seed=0):
        """
        Reduction is independent of the swap order, idempotent on its output
        and compatible with concatenation.
        """
        reports = []
        rng = random.Random(seed)
        reduced = []
        for word in words:
            word = self.word(word)
            reference = self.pbw_reduce(word, 'leftmost')
            reduced.append((word, reference))
            label = str(word)
            for strategy in ('rightmost', 'random'):
                other = self.pbw_reduce(word, strategy, seed=rng.randrange(2 ** 32))
                witness = None
                if not _same_combination(reference, other):
                    witness = {'word': label, 'strategy': strategy,
                               'lhs': format_combination(reference), 'rhs': format_combination(other)}
                reports.append(AxiomReport.outcome('pbw', self.parameters, witness, checked=len(reference)))
            for mono in reference:
                again = self.pbw_reduce(Word(mono.factors, mono.coefficient))
                witness = None
                if not _same_combination([mono], again):
                    witness = {'word': mono.word, 'check': 'idempotence', 'rhs': format_combination(again)}
                reports.append(AxiomReport.outcome('pbw', self.parameters, witness, checked=1))
        for (w1, r1), (w2, r2) in zip(reduced, reduced[1:]):
            product = self.multiply(r1, r2)
            direct = self.pbw_reduce(Word(w1.factors + w2.factors, self.one()))
            witness = None
            if not _same_combination(product, direct):
                witness = {'word': '{} * {}'.format(w1, w2), 'check': 'multiplication',
                           'lhs': format_combination(product), 'rhs': format_combination(direct)}
            reports.append(AxiomReport.outcome('pbw', self.parameters, witness, checked=len(direct)))
        return merge_reports('pbw', self.parameters, reports)

    def bracket_by_extraction(self, i, r, j, s):
        """
        The same bracket read off the closed-form S by expanding
        s_ij(v - u) - s_ij(u - v) and extracting u^(-r-1) v^(-s-1).
        """
        if self._closed_form is None:
            self._closed_form = closed_form_S(self.N, self.K)
        entry = self._closed_form.entries.get(((i, j), (i, j)))
        out = []
        for order in range(self.K + 1):
            payload = entry.coeffs[order] if entry is not None else 0
            total = CPoly()
            if payload:
                for (e,), kappa in payload.items():
                    monomial = {'u': -r - 1, 'v': -s - 1}
                    first = binomial_expand(('v', 'u'), e, Region('v', ('u',)), {'u': max(-r - 1, 0)})
                    second = binomial_expand(('u', 'v'), e, Region('u', ('v',)), {'v': max(-s - 1, 0)})
                    value = extract_coefficient(first, monomial) - extract_coefficient(second, monomial)
                    total = total + kappa * value
            out.append(total)
        return HSeries(out, self.K)

    def verify_bracket_support(self, max_level=4):
        """
        Antisymmetry, vanishing below r+s = 0, h^(r+s)-divisibility, the
        classical value at s = -r and agreement with direct extraction.
        """
        reports = []
        levels = range(-max_level, max_level + 1)
        for i in range(1, self.N + 1):
            for j in range(1, self.N + 1):
                for r in levels:
                    for s in levels:
                        if self.starred and 0 in (r, s):
                            continue
                        bracket = self.mode_bracket(i, r, j, s)
                        label = '[{}, {}]'.format(Mode(i, r), Mode(j, s))
                        witness = None
                        if bracket != -self.mode_bracket(j, s, i, r):
                            witness = {'bracket': label, 'check': 'antisymmetry'}
                        elif r + s < 0 and bracket:
                            witness = {'bracket': label, 'check': 'support', 'value': str(bracket)}
                        elif bracket and bracket.valuation() < r + s:
                            witness = {'bracket': label, 'check': 'divisibility', 'value': str(bracket)}
                        elif r == s and bracket:
                            witness = {'bracket': label, 'check': 'same level', 'value': str(bracket)}
                        elif s == -r and r > 0 and bracket[0] != C * (cartan_form(i, j, self.N) * r):
                            witness = {'bracket': label, 'check': 'classical value', 'value': str(bracket)}
                        else:
                            extracted = self.bracket_by_extraction(i, r, j, s)
                            if extracted != bracket:
                                witness = {'bracket': label, 'check': 'extraction',
                                           'lhs': str(bracket), 'rhs': str(extracted)}
                        reports.append(AxiomReport.outcome('pbw', self.parameters, witness, checked=1))
        return merge_reports('pbw', self.parameters, reports)

    def verify_trace_relation(self, levels):
        """
        y_1^(r) + ... + y_N^(r) reduces to zero.
        """
        reports = []
        for r in levels:
            if self.starred and r == 0:
                continue
            total = defaultdict(self.zero)
            for i in range(1, self.N + 1):
                for mono in self.pbw_reduce([(i, r)]):
                    total[mono.factors] = total[mono.factors] + mono.coefficient
            left = {f: v for f, v in total.items() if v}
            witness = None
            if left:
                witness = {'level': r, 'check': 'trace', 'lhs': sorted(' '.join(map(str, f)) for f in left)}
            reports.append(AxiomReport.outcome('pbw', self.parameters, witness, checked=self.N))
        return merge_reports('pbw', self.parameters, reports)

    def verify_level_zero(self, max_level=2):
        """
        At C = 0 the h^0 parts of y_i^(r) y_j^(s) and y_j^(s) y_i^(r) agree.
        """
        reports = []
        levels = [r for r in range(-max_level, max_level + 1) if r or not self.starred]
        for i in range(1, self.N):
            for j in range(1, self.N):
                for r in levels:
                    for s in levels:
                        a = specialize_central(self.pbw_reduce([(i, r), (j, s)]), 0)
                        b = specialize_central(self.pbw_reduce([(j, s), (i, r)]), 0)
                        a = [NormalMonomial(m.factors, HSeries([m.coefficient[0]], 0)) for m in a]
                        b = [NormalMonomial(m.factors, HSeries([m.coefficient[0]], 0)) for m in b]
                        a = [m for m in a if m.coefficient]
                        b = [m for m in b if m.coefficient]
                        witness = None
                        if not _same_combination(a, b):
                            witness = {'word': '{} {}'.format(Mode(i, r), Mode(j, s)), 'check': 'C=0',
                                       'lhs': format_combination(a), 'rhs': format_combination(b)}
                        reports.append(AxiomReport.outcome('pbw', self.parameters, witness, checked=1))
        return merge_reports('pbw', self.parameters, reports)

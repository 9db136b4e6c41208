"""
The braiding map S(z) on tensor products of states.

On a pair of monomials, read as coefficients of x+_[n](u) (x) x+_[m](v), the
braiding sums over bipartite matchings between the two factors; each matched
pair (x_ab^(-r), x_cd^(-s)) contributes the coefficient of u^(r-1) v^(s-1) in
the (ab, cd) entry of T(z + u - v), expanded in nonnegative powers of u and v.
"""
import functools
import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from .errors import KernelError
from .fock import State, derive_monomial, format_monomial, make_monomial
from .matchings import enumerate_bipartite
from .reports import AxiomReport, merge_reports
from .series import Region, binomial_expand, extract_coefficient

log = logging.getLogger(__name__)


@functools.lru_cache(maxsize=4096)
def _shifted_power_coefficient(e, rho, sigma):
    """
    Coefficient of u^rho v^sigma in (z + u - v)^e, as (z-exponent, value).
    """
    expansion = binomial_expand(('z', 'u', 'v'), e, Region('z', ('u', 'v')), {'u': rho, 'v': sigma},
                                signs=(1, 1, -1))
    value = extract_coefficient(expansion, {'z': e - rho - sigma, 'u': rho, 'v': sigma})
    return e - rho - sigma, Fraction(value)


class TensorState:
    """
    Element of (H+_N)^(tensor n) with h-graded Laurent coefficients.

    Keys are (monomials, h-order, exponents), ``monomials`` holding one
    normal-form monomial per leg.
    """
    __slots__ = ('N', 'K', 'legs', 'variables', 'terms')

    def __init__(self, N, K, legs, variables=(), terms=None):
        self.N = N
        self.K = K
        self.legs = legs
        self.variables = tuple(variables)
        clean = {}
        for (monos, hpow, exps), value in (terms or {}).items():
            if not value or hpow > K:
                continue
            if len(monos) != legs or len(exps) != len(self.variables):
                raise ValueError('term {} does not fit {} legs over {}'.format((monos, exps), legs, self.variables))
            clean[(tuple(monos), hpow, tuple(exps))] = Fraction(value)
        self.terms = clean

    @classmethod
    def pure(cls, N, K, monomials, coeff=1):
        monomials = tuple(make_monomial(*m) for m in monomials)
        return cls(N, K, len(monomials), (), {(monomials, 0, ()): coeff})

    @classmethod
    def from_states(cls, *states):
        """
        Tensor product of states.
        """
        N, K = states[0].N, states[0].K
        terms = {((), 0, ()): Fraction(1)}
        for s in states:
            nxt = defaultdict(Fraction)
            for (monos, hpow, _), value in terms.items():
                for (mono, k, _), c in s.terms.items():
                    if hpow + k <= K:
                        nxt[(monos + (mono,), hpow + k, ())] += value * c
            terms = nxt
        return cls(N, K, len(states), (), terms)

    def _new(self, terms, variables=None):
        return TensorState(self.N, self.K, self.legs, self.variables if variables is None else variables, terms)

    def extend(self, variables):
        variables = tuple(variables)
        if variables == self.variables:
            return self
        positions = [variables.index(v) for v in self.variables]
        terms = {}
        for (monos, hpow, exps), value in self.terms.items():
            new = [0] * len(variables)
            for pos, e in zip(positions, exps):
                new[pos] = e
            terms[(monos, hpow, tuple(new))] = value
        return self._new(terms, variables)

    def _aligned(self, other):
        if other.variables == self.variables:
            return self, other
        variables = self.variables + tuple(v for v in other.variables if v not in self.variables)
        return self.extend(variables), other.extend(variables)

    def __add__(self, other):
        left, right = self._aligned(other)
        terms = dict(left.terms)
        for key, value in right.terms.items():
            terms[key] = terms.get(key, 0) + value
        return left._new(terms)

    def __neg__(self):
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, TensorState):
            return NotImplemented
        left, right = self._aligned(other)
        return left.terms == right.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def h_part(self, k):
        return self._new({key: v for key, v in self.terms.items() if key[1] == k})

    def derivative(self, var):
        i = self.variables.index(var)
        terms = {}
        for (monos, hpow, exps), value in self.terms.items():
            if exps[i]:
                terms[(monos, hpow, exps[:i] + (exps[i] - 1,) + exps[i + 1:])] = value * exps[i]
        return self._new(terms)

    def strip_variables(self):
        """
        Drop variables that only ever carry exponent zero.
        """
        keep = [i for i, _ in enumerate(self.variables) if any(exps[i] for _, _, exps in self.terms)]
        variables = tuple(self.variables[i] for i in keep)
        return self._new({(m, k, tuple(e[i] for i in keep)): v for (m, k, e), v in self.terms.items()}, variables)

    def map_leg(self, leg, fn):
        """
        Apply a linear map ``fn(mono) -> [(mono, coeff)]`` on one leg (1-based).
        """
        i = leg - 1
        terms = defaultdict(Fraction)
        for (monos, hpow, exps), value in self.terms.items():
            for image, c in fn(monos[i]):
                terms[(monos[:i] + (image,) + monos[i + 1:], hpow, exps)] += value * c
        return self._new(terms)

    def witness(self, other, label=None):
        left, right = self._aligned(other)
        for key in sorted(set(left.terms) | set(right.terms)):
            a = left.terms.get(key, Fraction(0))
            b = right.terms.get(key, Fraction(0))
            if a != b:
                monos, hpow, exps = key
                found = {
                    'monomials': [format_monomial(m) for m in monos],
                    'h': hpow,
                    'exponents': dict(zip(left.variables, exps)),
                    'lhs': a,
                    'rhs': b,
                }
                if label:
                    found['check'] = label
                return found
        return None

    def __repr__(self):
        return 'TensorState(legs={}, variables={}, {} terms)'.format(self.legs, self.variables, len(self.terms))


@dataclass(frozen=True)
class PairState:
    left: State
    right: State

    def tensor(self):
        return TensorState.from_states(self.left, self.right)


class Braiding:
    """
    S(z) for one numeric bundle.
    """

    def __init__(self, bundle):
        if bundle.formal:
            raise KernelError('the braiding needs T at a numeric level')
        self.bundle = bundle
        self.N = bundle.N
        self.K = bundle.K
        self._tau = {}

    @property
    def parameters(self):
        return self.bundle.parameters

    def tau(self, left, right):
        """
        Contraction of a left generator with a right one: ((h-order, z-exponent, value), ...).
        """
        key = (left, right)
        found = self._tau.get(key)
        if found is not None:
            return found
        out = []
        for k, e, kappa in self.bundle.kernel_terms(left.row, left.col, right.row, right.col, which='T'):
            exp, value = _shifted_power_coefficient(e, left.depth - 1, right.depth - 1)
            if value:
                out.append((k, exp, kappa * value))
        found = tuple(out)
        self._tau[key] = found
        return found

    def _pair_image(self, left, right):
        """
        S(z) on one pair of monomials: {(left', right', h-order, z-exponent): value}.
        """
        n, m = len(left), len(right)
        out = defaultdict(Fraction)
        for k in range(min(n, m) + 1):
            for matching in enumerate_bipartite(n, m, k):
                partial = {(0, 0): Fraction(1)}
                for p, q in matching.pairs:
                    nxt = defaultdict(Fraction)
                    for (hpow, exp), value in partial.items():
                        for dk, de, weight in self.tau(left[p - 1], right[q - n - 1]):
                            if hpow + dk <= self.K:
                                nxt[(hpow + dk, exp + de)] += value * weight
                    partial = nxt
                if not partial:
                    continue
                rest_left = tuple(left[t - 1] for t in matching.complement if t <= n)
                rest_right = tuple(right[t - n - 1] for t in matching.complement if t > n)
                for (hpow, exp), value in partial.items():
                    if value:
                        out[(rest_left, rest_right, hpow, exp)] += value
        return out

    def apply(self, state, legs=(1, 2), var='z', negate=False):
        """
        S_{ij}(var) on a TensorState, leg i playing the first tensor factor.
        ``negate`` evaluates at -var.
        """
        i, j = legs
        if i == j or not (1 <= i <= state.legs and 1 <= j <= state.legs):
            raise ValueError('invalid legs {} for {} tensor factors'.format(legs, state.legs))
        base = state.extend(state.variables + (() if var in state.variables else (var,)))
        pos = base.variables.index(var)
        terms = defaultdict(Fraction)
        cache = {}
        for (monos, hpow, exps), value in base.terms.items():
            pair = (monos[i - 1], monos[j - 1])
            image = cache.get(pair)
            if image is None:
                image = cache[pair] = self._pair_image(*pair)
            for (new_left, new_right, dk, de), weight in image.items():
                if hpow + dk > self.K:
                    continue
                new = list(monos)
                new[i - 1], new[j - 1] = new_left, new_right
                sign = -1 if negate and de % 2 else 1
                new_exps = exps[:pos] + (exps[pos] + de,) + exps[pos + 1:]
                terms[(tuple(new), hpow + dk, new_exps)] += value * weight * sign
        return base._new(terms)


def braid_apply(braiding, ps, var='z'):
    """
    S(z)(left (x) right) for a PairState (or an existing TensorState).
    """
    state = ps.tensor() if isinstance(ps, PairState) else ps
    return braiding.apply(state, (1, 2), var)


###########################################################################
def verify_identity_at_h0(braiding, samples):
    """
    S(z) = 1 + O(h).
    """
    reports = []
    for monos in samples:
        x = TensorState.pure(braiding.N, braiding.K, monos)
        image = braiding.apply(x).h_part(0).strip_variables()
        reports.append(AxiomReport.outcome('braid-h0', braiding.parameters, image.witness(x, 'S = 1 + O(h)'),
                                           checked=max(len(image), 1)))
    return merge_reports('braid-h0', braiding.parameters, reports)


def verify_yang_baxter(braiding, samples):
    """
    S12(z1) S13(w) S23(z2) = S23(z2) S13(w) S12(z1) on monomial triples.

    The contractions only ever pair distinct generators, so the identity is
    checked with w independent of z1 and z2.
    """
    reports = []
    for monos in samples:
        x = TensorState.pure(braiding.N, braiding.K, monos)
        lhs = braiding.apply(braiding.apply(braiding.apply(x, (2, 3), 'z2'), (1, 3), 'w'), (1, 2), 'z1')
        rhs = braiding.apply(braiding.apply(braiding.apply(x, (1, 2), 'z1'), (1, 3), 'w'), (2, 3), 'z2')
        witness = lhs.witness(rhs, 'Yang-Baxter')
        reports.append(AxiomReport.outcome('ybe', braiding.parameters, witness, checked=len(lhs)))
    return merge_reports('ybe', braiding.parameters, reports)


def verify_unitarity(braiding, samples):
    """
    S21(-z) S(z) = 1 on monomial pairs.
    """
    reports = []
    for monos in samples:
        x = TensorState.pure(braiding.N, braiding.K, monos)
        image = braiding.apply(braiding.apply(x, (1, 2), 'z'), (2, 1), 'z', negate=True)
        witness = image.strip_variables().witness(x, 'unitarity')
        reports.append(AxiomReport.outcome('unitarity', braiding.parameters, witness, checked=len(image)))
    return merge_reports('unitarity', braiding.parameters, reports)


def verify_shift(braiding, samples):
    """
    (D (x) 1) S(z) - S(z) (D (x) 1) = -d/dz S(z) on monomial pairs.
    """
    N = braiding.N

    def D(mono):
        return derive_monomial(mono, N)

    reports = []
    for monos in samples:
        x = TensorState.pure(braiding.N, braiding.K, monos)
        braided = braiding.apply(x)
        lhs = braided.map_leg(1, D) - braiding.apply(x.map_leg(1, D))
        rhs = -braided.derivative('z')
        witness = lhs.witness(rhs, 'shift')
        reports.append(AxiomReport.outcome('shift', braiding.parameters, witness, checked=len(lhs) + len(rhs)))
    return merge_reports('shift', braiding.parameters, reports)

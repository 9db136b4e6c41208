"""
State algebra H+_N at truncation, its creation/annihilation fields and the
normal-ordered products x_[n].

A state is a polynomial in generators x_ij^(-r) modulo the trace ideal; the
normal form never contains x_NN^(-r). Field applications return a
``FieldResult``: a sparse map (monomial, h-order, exponent vector) -> Fraction
over named formal variables with upper degree caps.
"""
import bisect
import functools
import itertools
import logging
from collections import defaultdict
from fractions import Fraction
from typing import NamedTuple

from .errors import KernelError, NotDiagonalError, TruncationError
from .matchings import enumerate_matchings
from .reports import AxiomReport, merge_reports
from .series import LaurentExpr, Region, binom, binomial_expand, substitute_shift

log = logging.getLogger(__name__)


class Generator(NamedTuple):
    """
    x_{row col}^(-depth).
    """
    row: int
    col: int
    depth: int

    @property
    def diagonal(self):
        return self.row == self.col

    def raised(self):
        return Generator(self.row, self.col, self.depth + 1)

    def __str__(self):
        return 'x{}{}(-{})'.format(self.row, self.col, self.depth)


def make_monomial(*generators):
    """
    Canonical (sorted) tuple for a product of generators.
    """
    gens = []
    for g in generators:
        g = Generator(*g)
        if g.depth < 1:
            raise ValueError('generator depth must be positive, got {}'.format(g.depth))
        gens.append(g)
    return tuple(sorted(gens))


def format_monomial(mono):
    return '*'.join(str(g) for g in mono) if mono else '1'


def _insert(mono, gen):
    gens = list(mono)
    bisect.insort(gens, gen)
    return tuple(gens)


def _remove_one(mono, gen):
    i = mono.index(gen)
    return mono[:i] + mono[i + 1:]


@functools.lru_cache(maxsize=65536)
def _normalize_monomial(mono, N):
    """
    Expand every x_NN^(-r) as -(x_11^(-r) + ... + x_{N-1,N-1}^(-r)).
    """
    fixed = [g for g in mono if not (g.row == N and g.col == N)]
    bad = [g for g in mono if g.row == N and g.col == N]
    if not bad:
        return ((mono, 1),)
    out = defaultdict(int)
    sign = (-1) ** len(bad)
    for choice in itertools.product(range(1, N), repeat=len(bad)):
        gens = fixed + [Generator(i, i, g.depth) for i, g in zip(choice, bad)]
        out[tuple(sorted(gens))] += sign
    return tuple((m, c) for m, c in sorted(out.items()) if c)


###########################################################################
class FieldResult:
    """
    Sparse h-graded Laurent polynomial with state-valued coefficients.

    Keys are (monomial, h-order, exponents); exponents follow ``variables``.
    Terms beyond the h cap K or above a variable's cap are dropped.
    """
    __slots__ = ('N', 'K', 'variables', 'caps', 'terms')

    def __init__(self, N, K, variables=(), terms=None, caps=None):
        self.N = N
        self.K = K
        self.variables = tuple(variables)
        caps = caps or {}
        self.caps = {v: int(caps[v]) for v in self.variables if caps.get(v) is not None}
        bounds = [self.caps.get(v) for v in self.variables]
        clean = {}
        for key, value in (terms or {}).items():
            mono, hpow, exps = key
            if not value or hpow > K:
                continue
            if len(exps) != len(self.variables):
                raise ValueError('exponents {} do not match {}'.format(exps, self.variables))
            if any(b is not None and e > b for e, b in zip(exps, bounds)):
                continue
            clean[key] = Fraction(value)
        self.terms = clean

    def _new(self, terms, variables=None, caps=None):
        return FieldResult(self.N, self.K,
                           self.variables if variables is None else variables,
                           terms,
                           self.caps if caps is None else caps)

    @property
    def is_state(self):
        return not self.variables

    def items(self):
        return sorted(self.terms.items())

    def monomials(self):
        return sorted({mono for mono, _, _ in self.terms})

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def _aligned(self, other):
        if (self.N, self.K) != (other.N, other.K):
            raise ValueError('field results live in different truncations')
        if other.variables == self.variables:
            return self, other
        variables = self.variables + tuple(v for v in other.variables if v not in self.variables)
        caps = dict(self.caps)
        for v, cap in other.caps.items():
            caps[v] = min(caps[v], cap) if v in caps else cap
        return self.extend(variables, caps), other.extend(variables, caps)

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

    def scale(self, factor, hpow=0):
        """
        Multiply by factor * h^hpow.
        """
        factor = Fraction(factor)
        return self._new({(m, k + hpow, e): v * factor for (m, k, e), v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, FieldResult):
            return NotImplemented
        left, right = self._aligned(other)
        return left.terms == right.terms

    __hash__ = None

    def extend(self, variables, caps=None):
        """
        Re-index over ``variables`` (a superset of the current ones).
        """
        variables = tuple(variables)
        missing = [v for v in self.variables if v not in variables]
        if missing:
            raise ValueError('cannot drop variables {}'.format(missing))
        merged = dict(self.caps)
        for v, cap in (caps or {}).items():
            if v in variables and cap is not None:
                merged[v] = min(merged[v], cap) if v in merged else cap
        if variables == self.variables:
            return self._new(self.terms, caps=merged)
        positions = [variables.index(v) for v in self.variables]
        terms = {}
        for (mono, hpow, exps), value in self.terms.items():
            new = [0] * len(variables)
            for pos, e in zip(positions, exps):
                new[pos] = e
            terms[(mono, hpow, tuple(new))] = value
        return self._new(terms, variables, merged)

    def with_caps(self, caps):
        merged = dict(self.caps)
        merged.update({v: cap for v, cap in caps.items() if v in self.variables and cap is not None})
        return self._new(self.terms, caps=merged)

    def restrict(self, h_below=None, box=None):
        """
        Keep terms with h-order < h_below and exponents inside the per-variable
        (low, high) bounds of ``box``; a bare int bound is an upper cap.
        """
        box = box or {}
        limits = []
        for v in self.variables:
            bound = box.get(v)
            if isinstance(bound, int):
                bound = (None, bound)
            limits.append(bound)
        terms = {}
        for (mono, hpow, exps), value in self.terms.items():
            if h_below is not None and hpow >= h_below:
                continue
            inside = True
            for e, bound in zip(exps, limits):
                if bound is None:
                    continue
                low, high = bound
                if (low is not None and e < low) or (high is not None and e > high):
                    inside = False
                    break
            if inside:
                terms[(mono, hpow, exps)] = value
        return self._new(terms)

    def h_part(self, k):
        return self._new({key: v for key, v in self.terms.items() if key[1] == k})

    def min_exponent(self, var):
        i = self.variables.index(var)
        return min((exps[i] for _, _, exps in self.terms), default=0)

    def extract(self, var, exp):
        """
        Coefficient of var^exp, with ``var`` removed from the variables.
        """
        i = self.variables.index(var)
        variables = self.variables[:i] + self.variables[i + 1:]
        terms = {}
        for (mono, hpow, exps), value in self.terms.items():
            if exps[i] == exp:
                terms[(mono, hpow, exps[:i] + exps[i + 1:])] = value
        caps = {v: c for v, c in self.caps.items() if v != var}
        return self._new(terms, variables, caps)

    def derivative(self, var):
        i = self.variables.index(var)
        terms = {}
        for (mono, hpow, exps), value in self.terms.items():
            if exps[i]:
                terms[(mono, hpow, exps[:i] + (exps[i] - 1,) + exps[i + 1:])] = value * exps[i]
        return self._new(terms)

    def coefficient(self, mono, hpow=None):
        """
        LaurentExpr (or Fraction for states) attached to ``mono`` at h^hpow, or
        a {hpow: value} dict when hpow is None.
        """
        mono = tuple(mono)
        grouped = defaultdict(dict)
        for (m, k, exps), value in self.terms.items():
            if m == mono:
                grouped[k][exps] = value

        def build(parts):
            if not self.variables:
                return parts.get((), Fraction(0))
            return LaurentExpr(self.variables, parts, self.caps)

        if hpow is not None:
            return build(grouped.get(hpow, {}))
        return {k: build(parts) for k, parts in sorted(grouped.items())}

    def multiply_laurent(self, factors):
        """
        Multiply by sum_k h^k L_k for (k, L_k) in ``factors``.
        """
        factors = list(factors)
        variables = self.variables
        for _, expr in factors:
            variables = variables + tuple(v for v in expr.variables if v not in variables)
        base = self.extend(variables)
        terms = defaultdict(Fraction)
        for k, expr in factors:
            positions = [variables.index(v) for v in expr.variables]
            for fexps, fcoeff in expr.terms.items():
                for (mono, hpow, exps), value in base.terms.items():
                    if hpow + k > self.K:
                        continue
                    new = list(exps)
                    for pos, e in zip(positions, fexps):
                        new[pos] += e
                    terms[(mono, hpow + k, tuple(new))] += value * fcoeff
        return base._new(terms)

    def map_monomials(self, fn):
        """
        Apply a linear map given on monomials as ``fn(mono) -> [(mono, coeff)]``.
        """
        terms = defaultdict(Fraction)
        for (mono, hpow, exps), value in self.terms.items():
            for image, coeff in fn(mono):
                terms[(image, hpow, exps)] += value * coeff
        return self._new(terms)

    def witness(self, other, label=None):
        """
        First differing coefficient against ``other`` as a report witness.
        """
        left, right = self._aligned(other)
        for key in sorted(set(left.terms) | set(right.terms)):
            a = left.terms.get(key, Fraction(0))
            b = right.terms.get(key, Fraction(0))
            if a != b:
                mono, hpow, exps = key
                found = {
                    'monomial': format_monomial(mono),
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
        return 'FieldResult(N={}, K={}, variables={}, {} terms)'.format(
            self.N, self.K, self.variables, len(self.terms))

    def __str__(self):
        if not self.terms:
            return '0'
        parts = []
        for (mono, hpow, exps), value in self.items():
            factors = ['h^{}'.format(hpow)] if hpow else []
            factors += ['{}^{}'.format(v, e) for v, e in zip(self.variables, exps) if e]
            parts.append('({})*{}'.format(value, '*'.join(factors + [format_monomial(mono)])))
        return ' + '.join(parts)


class State(FieldResult):
    """
    Element of H+_N: a FieldResult without formal variables.
    """
    __slots__ = ()

    def __init__(self, N, K, variables=(), terms=None, caps=None):
        if variables:
            raise ValueError('states carry no formal variables')
        super().__init__(N, K, (), terms)

    def _new(self, terms, variables=None, caps=None):
        if variables:
            return FieldResult(self.N, self.K, variables, terms, caps)
        return State(self.N, self.K, (), terms)

    @classmethod
    def vacuum(cls, N, K):
        return cls(N, K, (), {((), 0, ()): 1})

    @classmethod
    def from_monomial(cls, N, K, mono, coeff=1, hpow=0):
        return cls(N, K, (), {(tuple(mono), hpow, ()): coeff})

    @classmethod
    def from_dict(cls, N, K, coeffs):
        """
        Build from {monomial: Fraction} or {monomial: {hpow: Fraction}}.
        """
        terms = {}
        for mono, value in coeffs.items():
            mono = make_monomial(*mono)
            if isinstance(value, dict):
                for hpow, v in value.items():
                    terms[(mono, hpow, ())] = v
            else:
                terms[(mono, 0, ())] = value
        return cls(N, K, (), terms)

    def extend(self, variables, caps=None):
        if not variables:
            return self
        return FieldResult(self.N, self.K, (), self.terms).extend(variables, caps)


def as_field_result(fr):
    if isinstance(fr, State):
        return FieldResult(fr.N, fr.K, (), fr.terms)
    return fr


###########################################################################
def normalize(s):
    """
    Canonical representative modulo the trace ideal.
    """
    return s.map_monomials(lambda mono: _normalize_monomial(mono, s.N))


@functools.lru_cache(maxsize=16384)
def derive_monomial(mono, N):
    """
    D on one monomial, as ((monomial, coefficient), ...) in normal form.
    """
    out = defaultdict(int)
    for gen in sorted(set(mono)):
        multiplicity = mono.count(gen)
        image = _insert(_remove_one(mono, gen), gen.raised())
        for normal, c in _normalize_monomial(image, N):
            out[normal] += multiplicity * gen.depth * c
    return tuple((m, c) for m, c in sorted(out.items()) if c)


def D_apply(s):
    """
    Translation operator: the derivation with x_ij^(-r) -> r x_ij^(-r-1).
    """
    return s.map_monomials(lambda mono: derive_monomial(mono, s.N))


def require_diagonal(mono):
    off = [g for g in mono if not g.diagonal]
    if off:
        raise NotDiagonalError('{} is not diagonal'.format(format_monomial(mono)))
    return mono


def monomial_basis(N, max_degree, max_depth=1, diagonal=False, min_degree=0):
    """
    Normal-form monomials with min_degree..max_degree generators of depth
    at most ``max_depth``.
    """
    if diagonal:
        pairs = [(i, i) for i in range(1, N)]
    else:
        pairs = [(i, j) for i in range(1, N + 1) for j in range(1, N + 1) if (i, j) != (N, N)]
    gens = [Generator(i, j, r) for (i, j) in pairs for r in range(1, max_depth + 1)]
    out = []
    for degree in range(min_degree, max_degree + 1):
        out.extend(tuple(c) for c in itertools.combinations_with_replacement(gens, degree))
    return out


###########################################################################
class ContractionKernel:
    """
    Wick contraction data read off the entries of S at a numeric level.

    The annihilation mode x_ab^(m) sends x_cd^(-r) to sum_k h^k w_k, where
    w_k comes from the h^k term kappa*u^e of s_abcd through
    -kappa * C(e, r-1) * (-1)^(r-1), landing in mode m = r - e - 2.
    """

    def __init__(self, bundle):
        if bundle.formal:
            raise KernelError('Wick contractions need S at a numeric level')
        self.bundle = bundle
        self._cache = {}

    def contractions(self, a, b, gen):
        key = (a, b, gen)
        found = self._cache.get(key)
        if found is not None:
            return found
        r = gen.depth
        out = []
        for k, e, kappa in self.bundle.kernel_terms(a, b, gen.row, gen.col):
            m = r - e - 2
            if m < 0:
                raise KernelError('s_{}{}{}{} term u^{} contracts into mode {}'.format(a, b, gen.row, gen.col, e, m))
            value = -kappa * binom(e, r - 1) * (-1) ** (r - 1)
            if value:
                out.append((m, k, Fraction(value)))
        found = tuple(out)
        self._cache[key] = found
        return found

    def laurent(self, a, b, c, d, first, second, dominant, caps):
        """
        s_abcd(first - second) as (h-order, LaurentExpr) pairs, expanded with
        ``dominant`` keeping the negative powers.
        """
        subordinate = second if dominant == first else first
        region = Region(dominant, (subordinate,))
        out = []
        for k, e, kappa in self.bundle.kernel_terms(a, b, c, d):
            expr = binomial_expand((first, second), e, region, caps)
            out.append((k, expr * kappa))
        return out


class FockSpace:
    """
    H+_N together with the fields x_ab(u) for one numeric bundle.
    """

    def __init__(self, bundle):
        self.bundle = bundle
        self.N = bundle.N
        self.K = bundle.K
        self.kernel = ContractionKernel(bundle)

    @property
    def parameters(self):
        return self.bundle.parameters

    def vacuum(self):
        return State.vacuum(self.N, self.K)

    def state(self, coeffs):
        return normalize(State.from_dict(self.N, self.K, coeffs))

    def monomial_state(self, mono, coeff=1):
        return normalize(State.from_monomial(self.N, self.K, make_monomial(*mono), coeff))

    def lower(self, a, b, fr):
        """
        All annihilation modes at once: {m: x_ab^(m) fr} for the m >= 0 that
        act nontrivially.
        """
        parts = defaultdict(lambda: defaultdict(Fraction))
        for (mono, hpow, exps), value in fr.terms.items():
            for gen in set(mono):
                multiplicity = mono.count(gen)
                rest = None
                for m, k, weight in self.kernel.contractions(a, b, gen):
                    if hpow + k > self.K:
                        continue
                    if rest is None:
                        rest = _remove_one(mono, gen)
                    parts[m][(rest, hpow + k, exps)] += value * multiplicity * weight
        return {m: normalize(fr._new(terms)) for m, terms in sorted(parts.items())}

    def raise_by(self, a, b, depth, fr):
        """
        Multiplication by x_ab^(-depth), normalized.
        """
        gen = Generator(a, b, depth)
        return fr.map_monomials(lambda mono: _normalize_monomial(_insert(mono, gen), self.N))

    def mode_apply(self, a, b, m, fr):
        """
        Mode x_ab^(m): creation for m < 0, Wick contraction for m >= 0.
        """
        if m < 0:
            return self.raise_by(a, b, -m, fr)
        return self.lower(a, b, fr).get(m, fr._new({}))

    def annihilate(self, a, b, s, var='u', caps=None):
        """
        x-_ab(var) s = sum_m x_ab^(m) s var^(-m-1).
        """
        base = _with_variable(s, var, caps)
        i = base.variables.index(var)
        terms = defaultdict(Fraction)
        for m, part in self.lower(a, b, base).items():
            for (mono, hpow, exps), value in part.terms.items():
                new = exps[:i] + (exps[i] - m - 1,) + exps[i + 1:]
                terms[(mono, hpow, new)] += value
        return base._new(terms)

    def create(self, a, b, s, var='u', caps=None):
        """
        x+_ab(var) s = sum_{r>=1} x_ab^(-r) var^(r-1) s, up to the cap on var.
        """
        base = _with_variable(s, var, caps)
        cap = base.caps.get(var)
        if cap is None:
            raise TruncationError('creation field in {} needs a degree cap'.format(var))
        i = base.variables.index(var)
        low = base.min_exponent(var)
        terms = defaultdict(Fraction)
        for r in range(1, cap - low + 2):
            for (mono, hpow, exps), value in self.raise_by(a, b, r, base).terms.items():
                new = exps[:i] + (exps[i] + r - 1,) + exps[i + 1:]
                terms[(mono, hpow, new)] += value
        return base._new(terms)

    def field_apply(self, a, b, s, var='u', caps=None):
        """
        x_ab(var) = x+_ab(var) + x-_ab(var).
        """
        return self.create(a, b, s, var, caps) + self.annihilate(a, b, s, var, caps)

    def normal_ordered_apply(self, entries, u_vars, s, caps):
        """
        Entry (a_1 b_1, ..., a_n b_n) of x_[n](u_1, ..., u_n) applied to s, as the
        sum over partial matchings of S-entry products times ordered fields.
        """
        entries = [tuple(e) for e in entries]
        u_vars = tuple(u_vars)
        n = len(entries)
        if n < 1 or len(u_vars) != n:
            raise ValueError('need one variable per entry')
        base = as_field_result(s).extend(s.variables + tuple(v for v in u_vars if v not in s.variables), caps)
        total = base._new({})
        for k in range(n // 2 + 1):
            for matching in enumerate_matchings(n, k):
                current = base
                for t in reversed(matching.complement):
                    a, b = entries[t - 1]
                    current = self.field_apply(a, b, current, u_vars[t - 1])
                for p, q in matching.pairs:
                    (a, b), (c, d) = entries[p - 1], entries[q - 1]
                    first, second = u_vars[p - 1], u_vars[q - 1]
                    factors = self.kernel.laurent(a, b, c, d, first, second, first, current.caps)
                    current = current.multiply_laurent(factors)
                total = total + current
        return total


def _with_variable(fr, var, caps):
    fr = as_field_result(fr)
    if var in fr.variables:
        return fr.with_caps(caps or {}) if caps else fr
    return fr.extend(fr.variables + (var,), caps)


###########################################################################
def shift_substitute(fr, z_dominant=True, z='z', caps=None):
    """
    Substitute u_i -> z + u_i for every variable of ``fr``.

    With ``z_dominant`` the result is expanded in nonnegative powers of the
    u_i (which need output caps); otherwise in nonnegative powers of z (which
    needs a cap). The z cap (resp. u caps) of the result is lowered so that
    every retained coefficient is complete.
    """
    caps = dict(caps or {})
    u_vars = tuple(v for v in fr.variables if v != z)
    if z in fr.variables:
        raise ValueError('{} is already a variable of the input'.format(z))
    grouped = defaultdict(dict)
    for (mono, hpow, exps), value in fr.terms.items():
        grouped[(mono, hpow)][exps] = value
    out_caps = {}
    if z_dominant:
        for v in u_vars:
            cap = caps.get(v, fr.caps.get(v))
            if cap is None:
                raise TruncationError('z-dominant substitution needs a cap on {}'.format(v))
            out_caps[v] = cap
        if all(v in fr.caps for v in u_vars):
            lows = {v: min(fr.min_exponent(v), 0) for v in u_vars}
            z_cap = min(fr.caps[v] + sum(lows[w] for w in u_vars if w != v) for v in u_vars)
            out_caps[z] = z_cap - sum(out_caps[v] for v in u_vars)
    else:
        if caps.get(z) is None:
            raise TruncationError('u-dominant substitution needs a cap on {}'.format(z))
        out_caps[z] = caps[z]
        for v in u_vars:
            if v in fr.caps:
                out_caps[v] = fr.caps[v] - caps[z]
    expand_caps = {v: cap for v, cap in out_caps.items() if v != z} if z_dominant else {z: out_caps[z]}

    variables = u_vars + (z,)
    terms = {}
    for (mono, hpow), parts in grouped.items():
        expr = LaurentExpr(fr.variables, parts)
        for v in u_vars:
            expr = substitute_shift(expr, v, (z, v), z if z_dominant else v, expand_caps)
        for exps, value in expr.terms.items():
            mapped = dict(zip(expr.variables, exps))
            terms[(mono, hpow, tuple(mapped.get(v, 0) for v in variables))] = value
    return FieldResult(fr.N, fr.K, variables, terms, out_caps)


###########################################################################
def _box(caps, names):
    return {v: caps[v] for v in names if caps.get(v) is not None}


def verify_commutation(space, entries, states, caps):
    """
    x_ab(u1) x_cd(u2) + s_abcd(u1 - u2) = x_cd(u2) x_ab(u1) + s_abcd(u2 - u1),
    each side in its own region, compared inside the caps.
    """
    reports = []
    box = _box(caps, ('u1', 'u2'))
    for (a, b, c, d) in entries:
        for w in states:
            lhs = space.field_apply(a, b, space.field_apply(c, d, w, 'u2', caps), 'u1', caps)
            lhs = lhs + as_field_result(w).extend(('u2', 'u1'), caps).multiply_laurent(
                space.kernel.laurent(a, b, c, d, 'u1', 'u2', 'u1', caps))
            rhs = space.field_apply(c, d, space.field_apply(a, b, w, 'u1', caps), 'u2', caps)
            rhs = rhs + as_field_result(w).extend(('u1', 'u2'), caps).multiply_laurent(
                space.kernel.laurent(a, b, c, d, 'u2', 'u1', 'u2', caps))
            lhs, rhs = lhs.restrict(box=box), rhs.restrict(box=box)
            witness = lhs.witness(rhs, 'x{}{}(u1) x{}{}(u2)'.format(a, b, c, d))
            reports.append(AxiomReport.outcome('commutation', space.parameters, witness, checked=len(lhs)))
    return merge_reports('commutation', space.parameters, reports)


def verify_trace_relation(space, states, caps, var='u'):
    """
    x_11(u) + ... + x_NN(u) acts as zero.
    """
    reports = []
    for w in states:
        total = as_field_result(w).extend((var,), caps)._new({})
        for i in range(1, space.N + 1):
            total = total + space.field_apply(i, i, w, var, caps)
        witness = total.witness(total._new({}), 'trace')
        reports.append(AxiomReport.outcome('trace', space.parameters, witness, checked=space.N))
    return merge_reports('trace', space.parameters, reports)


def verify_annihilators_commute(space, entries, states):
    reports = []
    for (a, b, c, d) in entries:
        for w in states:
            lhs = space.annihilate(a, b, space.annihilate(c, d, w, 'u2'), 'u1')
            rhs = space.annihilate(c, d, space.annihilate(a, b, w, 'u1'), 'u2')
            witness = lhs.witness(rhs, 'x-{}{}(u1) x-{}{}(u2)'.format(a, b, c, d))
            reports.append(AxiomReport.outcome('annihilators', space.parameters, witness, checked=len(lhs)))
    return merge_reports('annihilators', space.parameters, reports)


def verify_quotient(space, states):
    """
    Annihilation is well defined on the quotient: annihilating before or after
    normalization agrees.
    """
    reports = []
    for w in states:
        for a in range(1, space.N + 1):
            for b in range(1, space.N + 1):
                lhs = space.annihilate(a, b, normalize(w))
                rhs = space.annihilate(a, b, w)
                reports.append(AxiomReport.outcome('quotient', space.parameters,
                                                   lhs.witness(rhs, 'x-{}{}'.format(a, b)), checked=len(lhs)))
    return merge_reports('quotient', space.parameters, reports)


def verify_normal_order_symmetry(space, entries, states, caps):
    """
    x_[n] is unchanged by swapping neighbouring legs together with their
    variables.
    """
    entries = [tuple(e) for e in entries]
    n = len(entries)
    u_vars = tuple('u{}'.format(t) for t in range(1, n + 1))
    box = _box(caps, u_vars)
    reports = []
    for w in states:
        reference = space.normal_ordered_apply(entries, u_vars, w, caps).restrict(box=box)
        for j in range(n - 1):
            swapped_entries = entries[:j] + [entries[j + 1], entries[j]] + entries[j + 2:]
            swapped_vars = u_vars[:j] + (u_vars[j + 1], u_vars[j]) + u_vars[j + 2:]
            other = space.normal_ordered_apply(swapped_entries, swapped_vars, w, caps).restrict(box=box)
            witness = reference.witness(other, 'swap legs {} and {}'.format(j + 1, j + 2))
            reports.append(AxiomReport.outcome('normal-order', space.parameters, witness, checked=len(reference)))
    return merge_reports('normal-order', space.parameters, reports)

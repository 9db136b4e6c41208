"""
Exact scalar tower for the qheis engine.

Rationals are ``fractions.Fraction``. On top of them sit polynomials in the
central parameter C (``CPoly``), truncated power series in the deformation
parameter h (``HSeries``) and multivariate Laurent expressions whose negative
powers are always expanded in an explicit ``Region``.
"""
import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NonUnitError, ParseError, PayloadError, RegionRequiredError, TruncationError

log = logging.getLogger(__name__)

Rational = Fraction


def as_rational(value):
    """
    Coerce ints, Fractions and "p/q" strings to a Fraction.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError('not a rational number: {!r}'.format(value)) from e
    raise TypeError('cannot interpret {!r} as a rational'.format(value))


def format_rational(value):
    """
    Lossless "p/q" form used in reports and cache records.
    """
    value = Fraction(value)
    return '{}/{}'.format(value.numerator, value.denominator)


def binom(r, k):
    """
    Generalized binomial coefficient C(r, k) for any integer r and k >= 0.
    """
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= r - i
    return num // math.factorial(k)


def _is_scalar(value):
    return isinstance(value, (int, Fraction))


def _unit_inverse(value):
    if _is_scalar(value):
        if value == 0:
            raise NonUnitError('constant term is zero')
        return Fraction(1) / value
    try:
        inverse = value.unit_inverse
    except AttributeError:
        raise PayloadError('payload {!r} has no unit inverse'.format(type(value).__name__))
    return inverse()


###########################################################################
class CPoly:
    """
    Polynomial in the central parameter C with rational coefficients.
    """
    __slots__ = ('_terms',)

    def __init__(self, terms=None):
        clean = {}
        for exp, coeff in (terms or {}).items():
            if exp < 0:
                raise ValueError('negative power of C')
            coeff = Fraction(coeff)
            if coeff:
                clean[int(exp)] = coeff
        self._terms = clean

    @classmethod
    def constant(cls, value):
        return cls({0: value})

    @classmethod
    def gen(cls):
        return cls({1: 1})

    @staticmethod
    def _coerce(other):
        if isinstance(other, CPoly):
            return other
        if _is_scalar(other):
            return CPoly.constant(other)
        return NotImplemented

    def items(self):
        return sorted(self._terms.items())

    @property
    def degree(self):
        return max(self._terms) if self._terms else -1

    @property
    def constant_term(self):
        return self._terms.get(0, Fraction(0))

    def coefficient(self, exp):
        return self._terms.get(exp, Fraction(0))

    def is_constant(self):
        return all(exp == 0 for exp in self._terms)

    def evaluate(self, c):
        c = as_rational(c)
        total = Fraction(0)
        for exp, coeff in self._terms.items():
            total += coeff * c ** exp
        return total

    def unit_inverse(self):
        if not self.is_constant() or not self.constant_term:
            raise NonUnitError('{} is not a unit in Q[C]'.format(self))
        return CPoly.constant(1 / self.constant_term)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for exp, coeff in other._terms.items():
            terms[exp] = terms.get(exp, 0) + coeff
        return CPoly(terms)

    __radd__ = __add__

    def __neg__(self):
        return CPoly({exp: -coeff for exp, coeff in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if _is_scalar(other):
            return CPoly({exp: coeff * other for exp, coeff in self._terms.items()})
        if not isinstance(other, CPoly):
            return NotImplemented
        terms = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                terms[e1 + e2] = terms.get(e1 + e2, 0) + c1 * c2
        return CPoly(terms)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_term)
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        return 'CPoly({})'.format(self)

    def __str__(self):
        if not self._terms:
            return '0'
        parts = []
        for exp, coeff in sorted(self._terms.items(), reverse=True):
            magnitude = abs(coeff)
            if exp == 0:
                body = str(magnitude)
            else:
                power = 'C' if exp == 1 else 'C^{}'.format(exp)
                numerator = '' if magnitude.numerator == 1 else '{}*'.format(magnitude.numerator)
                body = numerator + power
                if magnitude.denominator != 1:
                    body += '/{}'.format(magnitude.denominator)
            sign = '-' if coeff < 0 else '+'
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ('-' if first_sign == '-' else '') + first_body
        for sign, body in parts[1:]:
            text += ' {} {}'.format(sign, body)
        return text

    def to_json(self):
        return {str(exp): format_rational(coeff) for exp, coeff in self.items()}

    @classmethod
    def from_json(cls, data):
        return cls({int(exp): as_rational(coeff) for exp, coeff in data.items()})


C = CPoly.gen()


###########################################################################
class HSeries:
    """
    Power series in h truncated modulo h^(cap+1).

    Coefficients may be any ring payload supporting +, - and * (Fraction,
    CPoly, LaurentExpr, ...). Padding uses the integer 0.
    """
    __slots__ = ('cap', 'coeffs')

    def __init__(self, coeffs, cap=None):
        coeffs = list(coeffs)
        if cap is None:
            cap = max(len(coeffs) - 1, 0)
        if cap < 0:
            raise ValueError('order cap must be nonnegative')
        coeffs = coeffs[:cap + 1]
        coeffs.extend([0] * (cap + 1 - len(coeffs)))
        self.cap = cap
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, cap):
        return cls([], cap)

    @classmethod
    def one(cls, cap):
        return cls([Fraction(1)], cap)

    @classmethod
    def monomial(cls, k, value, cap):
        if k > cap:
            return cls.zero(cap)
        return cls([0] * k + [value], cap)

    def __getitem__(self, k):
        if k < 0:
            raise IndexError('negative h-order')
        if k > self.cap:
            raise TruncationError('h^{} is beyond the cap {}'.format(k, self.cap))
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, HSeries):
            return other
        return HSeries([other], self.cap)

    def __add__(self, other):
        other = self._coerce(other)
        cap = min(self.cap, other.cap)
        try:
            return HSeries([self.coeffs[k] + other.coeffs[k] for k in range(cap + 1)], cap)
        except TypeError as e:
            raise PayloadError(str(e)) from e

    __radd__ = __add__

    def __neg__(self):
        return HSeries([-c for c in self.coeffs], self.cap)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, HSeries):
            return series_mul(self, other)
        return HSeries([c * other for c in self.coeffs], self.cap)

    def __rmul__(self, other):
        if isinstance(other, HSeries):
            return series_mul(other, self)
        return HSeries([other * c for c in self.coeffs], self.cap)

    def shift(self, k):
        """
        Multiply by h^k. For k < 0 the lowest -k coefficients must vanish and
        the cap drops by -k.
        """
        if k >= 0:
            return HSeries([0] * k + list(self.coeffs), self.cap)
        if any(self.coeffs[:-k]):
            raise ValueError('series is not divisible by h^{}'.format(-k))
        return HSeries(self.coeffs[-k:], self.cap + k)

    def truncate(self, cap):
        return HSeries(self.coeffs, min(cap, self.cap))

    def map(self, fn):
        return HSeries([fn(c) for c in self.coeffs], self.cap)

    def valuation(self):
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def __bool__(self):
        return any(bool(c) for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, HSeries):
            try:
                other = self._coerce(other)
            except TypeError:
                return NotImplemented
        cap = min(self.cap, other.cap)
        return all(self.coeffs[k] == other.coeffs[k] for k in range(cap + 1))

    __hash__ = None

    def __repr__(self):
        return 'HSeries({!r}, cap={})'.format(list(self.coeffs), self.cap)

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            power = '' if k == 0 else ('h' if k == 1 else 'h^{}'.format(k))
            if k == 0:
                parts.append(str(c))
            else:
                parts.append('({})*{}'.format(c, power))
        parts.append('O(h^{})'.format(self.cap + 1))
        return ' + '.join(parts)


def series_mul(a, b):
    """
    Product of two h-series truncated at the smaller cap.
    """
    cap = min(a.cap, b.cap)
    out = [0] * (cap + 1)
    try:
        for i in range(cap + 1):
            ai = a.coeffs[i]
            if not ai:
                continue
            for j in range(cap + 1 - i):
                bj = b.coeffs[j]
                if bj:
                    out[i + j] = out[i + j] + ai * bj
    except TypeError as e:
        raise PayloadError('incompatible series payloads: {}'.format(e)) from e
    return HSeries(out, cap)


def series_invert(a):
    """
    Two-sided inverse modulo h^(cap+1); the h^0 coefficient must be a unit.
    """
    inv0 = _unit_inverse(a.coeffs[0])
    out = [inv0]
    for k in range(1, a.cap + 1):
        acc = 0
        for j in range(1, k + 1):
            if a.coeffs[j]:
                acc = acc + a.coeffs[j] * out[k - j]
        out.append(-(inv0 * acc))
    return HSeries(out, a.cap)


###########################################################################
@dataclass(frozen=True)
class Region:
    """
    Expansion region: negative powers of a sum are expanded in nonnegative
    powers of the subordinate variables.
    """
    dominant: str
    subordinate: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'subordinate', tuple(self.subordinate))
        if self.dominant in self.subordinate:
            raise ValueError('dominant variable {!r} listed as subordinate'.format(self.dominant))


class LaurentExpr:
    """
    Sparse Laurent polynomial in named variables with per-variable upper caps.

    Terms map exponent tuples (ordered like ``variables``) to Fraction or CPoly
    coefficients. Terms with an exponent above its variable's cap are dropped.
    """
    __slots__ = ('variables', 'terms', 'caps')

    def __init__(self, variables, terms=None, caps=None):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError('repeated variable names in {}'.format(self.variables))
        caps = caps or {}
        self.caps = {v: int(caps[v]) for v in self.variables if caps.get(v) is not None}
        bounds = [self.caps.get(v) for v in self.variables]
        clean = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(self.variables):
                raise ValueError('exponent vector {} does not match {}'.format(exps, self.variables))
            if not coeff:
                continue
            if any(b is not None and e > b for e, b in zip(exps, bounds)):
                continue
            clean[exps] = Fraction(coeff) if isinstance(coeff, int) else coeff
        self.terms = clean

    @classmethod
    def constant(cls, variables, value, caps=None):
        return cls(variables, {(0,) * len(tuple(variables)): value}, caps)

    @classmethod
    def monomial(cls, variables, exps, coeff=1, caps=None):
        variables = tuple(variables)
        if isinstance(exps, dict):
            exps = _exps_from_mapping(variables, exps)
        return cls(variables, {tuple(exps): coeff}, caps)

    def _index(self, var):
        try:
            return self.variables.index(var)
        except ValueError:
            raise KeyError('unknown variable {!r}'.format(var))

    def _align(self, other):
        if isinstance(other, LaurentExpr):
            if other.variables == self.variables:
                caps = _merge_caps(self.caps, other.caps)
                return self.variables, caps, self.terms, other.terms
            variables = self.variables + tuple(v for v in other.variables if v not in self.variables)
            caps = _merge_caps(self.caps, other.caps)
            return variables, caps, _reindex(self, variables), _reindex(other, variables)
        if _is_scalar(other) or isinstance(other, CPoly):
            return self.variables, self.caps, self.terms, {(0,) * len(self.variables): other}
        return None

    def __add__(self, other):
        aligned = self._align(other)
        if aligned is None:
            return NotImplemented
        variables, caps, left, right = aligned
        terms = dict(left)
        for exps, coeff in right.items():
            terms[exps] = terms[exps] + coeff if exps in terms else coeff
        return LaurentExpr(variables, terms, caps)

    __radd__ = __add__

    def __neg__(self):
        return LaurentExpr(self.variables, {e: -c for e, c in self.terms.items()}, self.caps)

    def __sub__(self, other):
        if not (isinstance(other, LaurentExpr) or _is_scalar(other) or isinstance(other, CPoly)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other) or isinstance(other, CPoly):
            return LaurentExpr(self.variables, {e: c * other for e, c in self.terms.items()}, self.caps)
        aligned = self._align(other)
        if aligned is None:
            return NotImplemented
        variables, caps, left, right = aligned
        bounds = [caps.get(v) for v in variables]
        terms = {}
        for e1, c1 in left.items():
            for e2, c2 in right.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                if any(b is not None and e > b for e, b in zip(exps, bounds)):
                    continue
                product = c1 * c2
                terms[exps] = terms[exps] + product if exps in terms else product
        return LaurentExpr(variables, terms, caps)

    def __rmul__(self, other):
        if _is_scalar(other) or isinstance(other, CPoly):
            return LaurentExpr(self.variables, {e: other * c for e, c in self.terms.items()}, self.caps)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        aligned = self._align(other)
        if aligned is None:
            return NotImplemented
        _, _, left, right = aligned
        return left == {e: c for e, c in right.items() if c}

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def coefficient(self, exps):
        if isinstance(exps, dict):
            exps = _exps_from_mapping(self.variables, exps)
        return self.terms.get(tuple(exps), Fraction(0))

    def items(self):
        return sorted(self.terms.items())

    def exponents(self, var):
        i = self._index(var)
        return sorted({exps[i] for exps in self.terms})

    def unit_inverse(self):
        if len(self.terms) != 1:
            raise NonUnitError('only single-term Laurent expressions are invertible')
        (exps, coeff), = self.terms.items()
        return LaurentExpr(self.variables, {tuple(-e for e in exps): _unit_inverse(coeff)}, self.caps)

    def map_coefficients(self, fn):
        return LaurentExpr(self.variables, {e: fn(c) for e, c in self.terms.items()}, self.caps)

    def derivative(self, var):
        i = self._index(var)
        terms = {}
        for exps, coeff in self.terms.items():
            if exps[i]:
                new = exps[:i] + (exps[i] - 1,) + exps[i + 1:]
                terms[new] = coeff * exps[i]
        return LaurentExpr(self.variables, terms, self.caps)

    def negate_variable(self, var):
        """
        Substitute var -> -var.
        """
        i = self._index(var)
        return LaurentExpr(self.variables,
                           {e: (-c if e[i] % 2 else c) for e, c in self.terms.items()},
                           self.caps)

    def rename(self, mapping):
        variables = tuple(mapping.get(v, v) for v in self.variables)
        caps = {mapping.get(v, v): cap for v, cap in self.caps.items()}
        return LaurentExpr(variables, self.terms, caps)

    def with_caps(self, caps):
        merged = dict(self.caps)
        merged.update({v: cap for v, cap in caps.items() if v in self.variables})
        return LaurentExpr(self.variables, self.terms, merged)

    def __repr__(self):
        return 'LaurentExpr({}, {})'.format(self.variables, self)

    def __str__(self):
        if not self.terms:
            return '0'
        parts = []
        for exps, coeff in self.items():
            factors = []
            for var, e in zip(self.variables, exps):
                if e == 1:
                    factors.append(var)
                elif e:
                    factors.append('{}^{}'.format(var, e))
            monomial = '*'.join(factors)
            if not monomial:
                parts.append('({})'.format(coeff))
            else:
                parts.append('({})*{}'.format(coeff, monomial))
        return ' + '.join(parts)


def _exps_from_mapping(variables, mapping):
    unknown = set(mapping) - set(variables)
    if any(mapping[v] for v in unknown):
        raise KeyError('unknown variables {}'.format(sorted(unknown)))
    return tuple(int(mapping.get(v, 0)) for v in variables)


def _merge_caps(a, b):
    caps = dict(a)
    for v, cap in b.items():
        caps[v] = min(caps[v], cap) if v in caps else cap
    return caps


def _reindex(expr, variables):
    positions = [variables.index(v) for v in expr.variables]
    terms = {}
    for exps, coeff in expr.terms.items():
        new = [0] * len(variables)
        for pos, e in zip(positions, exps):
            new[pos] = e
        terms[tuple(new)] = coeff
    return terms


###########################################################################
def binomial_expand(variables, exponent, region=None, caps=None, signs=None):
    """
    Expand (s_1 x_1 + ... + s_n x_n)^exponent.

    ``signs`` defaults to (1, -1, ..., -1), i.e. (x_1 - x_2 - ...). Negative
    exponents are expanded in nonnegative powers of the region's subordinate
    variables, each of which then needs a cap.
    """
    variables = tuple(variables)
    n = len(variables)
    if signs is None:
        signs = (1,) + (-1,) * (n - 1)
    if region is None:
        if exponent < 0:
            raise RegionRequiredError('(x1 - x2)^{} needs an expansion region'.format(exponent))
        region = Region(variables[0], variables[1:])
    if region.dominant not in variables:
        raise ValueError('dominant variable {!r} not among {}'.format(region.dominant, variables))
    caps = {v: cap for v, cap in (caps or {}).items() if v in variables and cap is not None}
    d = variables.index(region.dominant)
    subordinate = [i for i in range(n) if i != d]

    if exponent >= 0:
        max_k = exponent
    else:
        missing = [variables[i] for i in subordinate if variables[i] not in caps]
        if missing:
            raise TruncationError('negative power needs caps on {}'.format(missing))
        max_k = sum(max(caps[variables[i]], 0) for i in subordinate)

    rest_terms = {}
    for i in subordinate:
        exps = [0] * n
        exps[i] = 1
        rest_terms[tuple(exps)] = Fraction(signs[i])
    rest = LaurentExpr(variables, rest_terms, caps)
    power = LaurentExpr.constant(variables, 1, caps)
    result = LaurentExpr(variables, {}, caps)
    dominant_sign = Fraction(signs[d])
    for k in range(max_k + 1):
        coeff = binom(exponent, k) * dominant_sign ** (exponent - k)
        if coeff:
            exps = [0] * n
            exps[d] = exponent - k
            result = result + power * LaurentExpr(variables, {tuple(exps): coeff}, caps)
        power = power * rest
        if not power:
            break
    return result


def extract_coefficient(e, monomial, allow_unreliable=False):
    """
    Coefficient of a monomial in a LaurentExpr, or the h-series of such
    coefficients for an HSeries of LaurentExpr.
    """
    if isinstance(e, HSeries):
        return HSeries([_extract_payload(c, monomial, allow_unreliable) for c in e.coeffs], e.cap)
    return _extract_payload(e, monomial, allow_unreliable)


def _extract_payload(e, monomial, allow_unreliable):
    if not isinstance(e, LaurentExpr):
        if not e:
            return Fraction(0)
        values = monomial.values() if isinstance(monomial, dict) else monomial
        return e if not any(values) else Fraction(0)
    exps = _exps_from_mapping(e.variables, monomial) if isinstance(monomial, dict) else tuple(monomial)
    over = [v for v, x in zip(e.variables, exps) if v in e.caps and x > e.caps[v]]
    if over:
        if not allow_unreliable:
            raise TruncationError('monomial {} lies beyond the caps on {}'.format(exps, over))
        log.warning('unreliable coefficient read at %s (caps %s)', exps, e.caps)
    return e.coefficient(exps)


@functools.lru_cache(maxsize=4096)
def _shift_expansion(z, u, power, dominant, cap_items):
    other = u if dominant == z else z
    return binomial_expand((z, u), power, Region(dominant, (other,)), dict(cap_items), signs=(1, 1))


def substitute_shift(e, var, replacement, dominant, caps=None):
    """
    Replace ``var`` by the sum replacement[0] + replacement[1].

    ``dominant`` names which summand keeps negative powers. Variables already
    present in ``e`` (e.g. u -> z + u) absorb the new exponents.
    """
    if isinstance(e, HSeries):
        return e.map(lambda c: substitute_shift(c, var, replacement, dominant, caps)
                     if isinstance(c, LaurentExpr) else c)
    z, u = replacement
    if dominant not in (z, u):
        raise ValueError('dominant variable must be one of {}'.format(replacement))
    base = tuple(v for v in e.variables if v != var)
    variables = base + tuple(v for v in (z, u) if v not in base)
    out_caps = {v: cap for v, cap in e.caps.items() if v != var}
    out_caps.update(caps or {})
    i = e.variables.index(var)
    cap_items = tuple(sorted((v, out_caps[v]) for v in (z, u) if v in out_caps))
    result = LaurentExpr(variables, {}, out_caps)
    for exps, coeff in e.terms.items():
        rest = {v: x for v, x in zip(e.variables, exps) if v != var}
        expansion = _shift_expansion(z, u, exps[i], dominant, cap_items)
        rest_monomial = LaurentExpr.monomial(variables, rest, coeff, out_caps)
        result = result + rest_monomial * expansion
    return result

"""
Yang R-matrix R(u) = I - (h/u)P and the kernels derived from it.

G(u,C) is solved order by order from the trace normalization
tr_1(G R(u) R(-u-hC) - I) = 0, then S(u) = h^-2 (G R(u) R(-u-hC) - I) and
T(z) = S(z) - S(-z). Everything is built with generic series arithmetic; the
closed forms at the bottom of the module are independent oracles.
"""
import functools
import logging
from dataclasses import dataclass
from fractions import Fraction

from .errors import InconsistentSystemError, IndexRangeError
from .reports import AxiomReport, to_jsonable
from .series import CPoly, HSeries, LaurentExpr, as_rational, extract_coefficient, series_invert
from .tensor import TensorOp, compose, identity, partial_trace, permute_legs, perm_P

log = logging.getLogger(__name__)

U = 'u'


def _laurent(exp, coeff, var=U):
    if not isinstance(coeff, CPoly):
        coeff = CPoly.constant(coeff)
    return LaurentExpr((var,), {(exp,): coeff})


def _series_op(op, coefficient):
    """
    Lift a rational operator to one whose entries are coefficient * op-entry,
    as h-series of Laurent expressions.
    """
    return op.map_entries(lambda v: coefficient.map(lambda c: c * v))


def _constant_series(value, K):
    return HSeries([_laurent(0, value)], K)


def build_R(N, K):
    """
    R(u) = I - (h/u) P with h-series entries.
    """
    one = _constant_series(1, K)
    p_coeff = HSeries([0, _laurent(-1, -1)], K)
    return _series_op(identity(N, 2), one) + _series_op(perm_P(N), p_coeff)


def build_R_shifted(N, K, u_caps=None):
    """
    R(-u-hC) = I - h (-u-hC)^-1 P, inverting -u-hC as an h-series.
    """
    argument = HSeries([_laurent(1, -1), _laurent(0, CPoly({1: -1}))], K)
    inverse = series_invert(argument)
    p_coeff = -inverse.shift(1)
    if u_caps:
        p_coeff = p_coeff.map(lambda c: c.with_caps(u_caps) if isinstance(c, LaurentExpr) else c)
    return _series_op(identity(N, 2), _constant_series(1, K)) + _series_op(perm_P(N), p_coeff)


def _double_product(N, K):
    return compose(build_R(N, K), build_R_shifted(N, K))


def solve_G(N, K):
    """
    Unique series G = sum_k g_k(C) (h/u)^k with tr_1(G R(u) R(-u-hC)) = N.
    """
    traced = partial_trace(_double_product(N, K), 1)
    diagonal = [((i,), (i,)) for i in range(1, N + 1)]
    keys = sorted(set(traced.entries) | set(diagonal))

    def order(key, k):
        series = traced.entries.get(key)
        return series.coeffs[k] if series is not None else 0

    for key in keys:
        expected = N if key[0] == key[1] else 0
        if order(key, 0) != _laurent(0, expected):
            raise InconsistentSystemError('h^0 trace entry {} is {}, expected {}'.format(key, order(key, 0), expected))

    g = [_laurent(0, 1)]
    for k in range(1, K + 1):
        rhs = {}
        for key in keys:
            acc = LaurentExpr((U,))
            for j in range(k):
                m = order(key, k - j)
                if m:
                    acc = acc + g[j] * m
            rhs[key] = -acc
        value = rhs[diagonal[0]]
        for key in keys:
            target = value if key[0] == key[1] else 0
            if rhs[key] != target:
                raise InconsistentSystemError('order {}: entry {} is {}, expected {}'.format(k, key, rhs[key], target))
        if value and set(value.terms) != {(-k,)}:
            raise InconsistentSystemError('order {}: G coefficient {} is not a multiple of u^-{}'.format(k, value, k))
        g.append(value * Fraction(1, N))
        log.debug('solve_G N=%d order %d: %s', N, k, g[-1])
    return HSeries(g, K)


def g_coefficients(G):
    """
    The CPoly coefficients g_k of (h/u)^k in G.
    """
    out = []
    for k in range(G.cap + 1):
        value = extract_coefficient(G.coeffs[k], (-k,)) if G.coeffs[k] else Fraction(0)
        out.append(value if isinstance(value, CPoly) else CPoly.constant(value))
    return out


def specialize(op, c):
    """
    Evaluate every CPoly coefficient of a series-valued operator at C = c.
    """
    c = as_rational(c)

    def evaluate(payload):
        if isinstance(payload, LaurentExpr):
            return payload.map_coefficients(lambda p: p.evaluate(c) if isinstance(p, CPoly) else p)
        if isinstance(payload, CPoly):
            return payload.evaluate(c)
        return payload

    return op.map_entries(lambda series: series.map(evaluate))


def build_S(N, K, central=None, G=None):
    """
    S(u) = h^-2 (G R(u) R(-u-hC) - I), formal in C unless ``central`` is given.
    """
    if G is None:
        G = solve_G(N, K + 2)
    product = _double_product(N, K + 2).map_entries(lambda s: G * s)
    shifted = product - _series_op(identity(N, 2), _constant_series(1, K + 2))
    entries = {}
    for key, series in shifted.entries.items():
        if series.coeffs[0] or series.coeffs[1]:
            raise InconsistentSystemError('G R R - I has a nonzero h^0 or h^1 part at {}'.format(key))
        entries[key] = series.shift(-2)
    S = TensorOp(N, 2, entries)
    if central is not None:
        S = specialize(S, central)
    return S


def build_T(S, var='z'):
    """
    T(z) = S(z) - S(-z).
    """
    def odd_part(series):
        renamed = series.map(lambda c: c.rename({U: var}) if isinstance(c, LaurentExpr) else c)
        reflected = renamed.map(lambda c: c.negate_variable(var) if isinstance(c, LaurentExpr) else c)
        return renamed - reflected

    return S.map_entries(odd_part)


@dataclass(frozen=True, eq=False)
class RMatrixBundle:
    """
    R, R(-u-hC), G, S and T for one (N, K, central) choice. ``central`` is None
    for formal C.
    """
    N: int
    K: int
    central: Fraction
    R_u: TensorOp
    R_shifted: TensorOp
    G: HSeries
    S: TensorOp
    T: TensorOp

    @property
    def formal(self):
        return self.central is None

    @property
    def level_label(self):
        return 'formal' if self.central is None else to_jsonable(self.central)

    @property
    def parameters(self):
        return {'N': self.N, 'K': self.K, 'c': self.level_label}

    def _check_indices(self, *indices):
        if any(not 1 <= i <= self.N for i in indices):
            raise IndexRangeError('indices {} out of range 1..{}'.format(indices, self.N))

    def entry_s(self, i, j, k, l):
        """
        s_ijkl with S = sum e_ij (x) e_kl s_ijkl.
        """
        self._check_indices(i, j, k, l)
        value = self.S.entries.get(((i, k), (j, l)))
        return value if value is not None else HSeries.zero(self.K)

    def entry_s_diag(self, i, j):
        return self.entry_s(i, i, j, j)

    def entry_t(self, i, j, k, l):
        self._check_indices(i, j, k, l)
        value = self.T.entries.get(((i, k), (j, l)))
        return value if value is not None else HSeries.zero(self.K)

    def residue_S(self):
        """
        Res_u of every entry of S; the empty operator when S has no u^-1 terms.
        """
        return self.S.map_entries(lambda s: s.map(lambda c: extract_coefficient(c, (-1,))
                                                  if isinstance(c, LaurentExpr) else Fraction(0)))

    def kernel_terms(self, i, j, k, l, which='S'):
        """
        (h-order, exponent, coefficient) triples of the entry s_ijkl (or t_ijkl).
        """
        series = self.entry_s(i, j, k, l) if which == 'S' else self.entry_t(i, j, k, l)
        out = []
        for order, payload in enumerate(series.coeffs):
            if isinstance(payload, LaurentExpr):
                for (exp,), coeff in payload.items():
                    out.append((order, exp, coeff))
        return tuple(out)


@functools.lru_cache(maxsize=32)
def build_bundle(N, K, central=None):
    """
    Build (and memoize) the full bundle. ``central`` is a rational level or
    None for formal C.
    """
    if central is not None:
        central = as_rational(central)
    log.info('building R-matrix bundle N=%d K=%d c=%s', N, K, 'formal' if central is None else central)
    G = solve_G(N, K + 2)
    S = build_S(N, K, central, G=G)
    R_u = build_R(N, K)
    R_shifted = build_R_shifted(N, K)
    if central is not None:
        R_shifted = specialize(R_shifted, central)
        G = G.map(lambda c: c.map_coefficients(lambda p: p.evaluate(central) if isinstance(p, CPoly) else p)
                  if isinstance(c, LaurentExpr) else c)
    return RMatrixBundle(N, K, central, R_u, R_shifted, G, S, build_T(S))


###########################################################################
# Closed-form oracles.
#
# R(u)R(-u-hC) = (1 - x^2/(1+Cx)) I - (C x^2/(1+Cx)) P with x = h/u gives
# G = (1 + Cx)/(1 + Cx - b x^2) and S = (C/(N u^2)) (I - NP)/(1 + Cx - b x^2),
# b = (N+C)/N.

def _denominator_series(N, K):
    b = CPoly({0: 1, 1: Fraction(1, N)})
    C = CPoly.gen()
    f = [CPoly.constant(1)]
    if K >= 1:
        f.append(-C)
    for k in range(2, K + 1):
        f.append(-C * f[k - 1] + b * f[k - 2])
    return f


def closed_form_g(N, K):
    """
    Coefficients g_k of (h/u)^k in G from the closed form.
    """
    f = _denominator_series(N, K)
    C = CPoly.gen()
    return [f[k] + (C * f[k - 1] if k else 0) for k in range(K + 1)]


def closed_form_G(N, K):
    return HSeries([_laurent(-k, g) for k, g in enumerate(closed_form_g(N, K))], K)


def closed_form_S(N, K, central=None):
    f = _denominator_series(N, K)
    C = CPoly.gen()
    sigma = HSeries([_laurent(-k - 2, C * f[k] * Fraction(1, N)) for k in range(K + 1)], K)
    I_part = _series_op(identity(N, 2), sigma)
    P_part = _series_op(perm_P(N), sigma.map(lambda c: c * (-N)))
    S = I_part + P_part
    if central is not None:
        S = specialize(S, central)
    return S


def cartan_form(i, j, N):
    """
    <a_i, a_j> = delta_ij - 1/N, the form carried by S at h^0.
    """
    return Fraction(int(i == j)) - Fraction(1, N)


###########################################################################
def _first_nonzero(op, label):
    for key in sorted(op.entries):
        series = op.entries[key]
        for order, payload in enumerate(series.coeffs):
            if payload:
                return {'check': label, 'entry': to_jsonable(key), 'h': order, 'value': str(payload)}
    return None


def verify_trace_normalization(N, K):
    """
    Both partial traces of G R(u) R(-u-hC) - I vanish through h^K.
    """
    G = solve_G(N, K)
    product = _double_product(N, K).map_entries(lambda s: G * s)
    shifted = product - _series_op(identity(N, 2), _constant_series(1, K))
    witness = None
    for leg in (1, 2):
        witness = witness or _first_nonzero(partial_trace(shifted, leg), 'tr{}'.format(leg))
    return AxiomReport.outcome('tr34', {'N': N, 'K': K, 'c': 'formal'}, witness, checked=2 * N * N * (K + 1))


def verify_kernel_shape(bundle):
    """
    Leading term, vanishing residue, parity of T, symmetries and traces of S.
    """
    N, K = bundle.N, bundle.K
    params = bundle.parameters
    reports = []

    leading = closed_form_S(N, 0, bundle.central)
    actual = bundle.S.map_entries(lambda s: s.truncate(0))
    reports.append(AxiomReport.outcome('esform', params, _first_nonzero(actual - leading, 'esform'),
                                       checked=N ** 4))
    reports.append(AxiomReport.outcome('residue', params, _first_nonzero(bundle.residue_S(), 'residue'),
                                       checked=len(bundle.S.entries) * (K + 1)))

    T = bundle.T
    reflected = T.map_entries(lambda s: s.map(lambda c: c.negate_variable('z') if isinstance(c, LaurentExpr) else c))
    witness = _first_nonzero(T + reflected, 'T odd')
    witness = witness or _first_nonzero(T.map_entries(lambda s: s.truncate(0)), 'T = O(h)')
    witness = witness or _first_nonzero(T - permute_legs(T, (2, 1)), 'T12 = T21')
    reports.append(AxiomReport.outcome('T-parity', params, witness, checked=3 * len(T.entries)))

    witness = None
    checked = 0
    for i in range(1, N + 1):
        trace = HSeries.zero(K)
        for j in range(1, N + 1):
            checked += 1
            if witness is None and bundle.entry_s_diag(i, j) != bundle.entry_s_diag(j, i):
                witness = {'check': 's_ij = s_ji', 'i': i, 'j': j}
            trace = trace + bundle.entry_s(i, i, j, j)
        if witness is None and trace:
            witness = {'check': 'sum_k s_iikk = 0', 'i': i, 'value': str(trace)}
    for leg in (1, 2):
        witness = witness or _first_nonzero(partial_trace(bundle.S, leg), 'tr{} S'.format(leg))
    reports.append(AxiomReport.outcome('symmetry', params, witness, checked=checked))
    return reports


def verify_oracle(bundle):
    """
    Generic S and G against the closed-form oracle, coefficient for coefficient.
    """
    N, K = bundle.N, bundle.K
    witness = _first_nonzero(bundle.S - closed_form_S(N, K, bundle.central), 'S oracle')
    if witness is None:
        generic = solve_G(N, K + 2)
        for k, (got, want) in enumerate(zip(g_coefficients(generic), closed_form_g(N, K + 2))):
            if got != want:
                witness = {'check': 'G oracle', 'h': k, 'lhs': str(got), 'rhs': str(want)}
                break
    return AxiomReport.outcome('oracle', bundle.parameters, witness, checked=len(bundle.S.entries) * (K + 1))

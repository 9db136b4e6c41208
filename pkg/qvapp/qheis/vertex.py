"""
Vertex operators and the quantum vertex algebra axioms.

Y(v, z) for a monomial v = x_{a1 b1}^(-r1) ... x_{an bn}^(-rn) is the
coefficient of u_1^(r1-1) ... u_n^(rn-1) in x_[n](z + u_1, ..., z + u_n).
Because x_[n] equals the normal-ordered product (creators to the left,
annihilators to the right), Y is computed as

    Y(v, z) w = sum over A of  prod_{t in A} X+_t  prod_{t not in A} X-_t  w

with X+_t = sum_{r > rho} C(r-1, rho) z^(r-1-rho) x^(-r) and
X-_t = sum_{m >= 0} C(-m-1, rho) z^(-m-1-rho) x^(m), rho = r_t - 1.

Any object with ``raise_by(a, b, depth, fr)`` and ``lower(a, b, fr)`` (a
``FockSpace`` or a module) can drive the computation.
"""
import itertools
import logging
from collections import defaultdict
from fractions import Fraction

from .braiding import TensorState
from .fock import (D_apply, FieldResult, Generator, State, as_field_result, format_monomial, make_monomial,
                   normalize, require_diagonal, shift_substitute)
from .reports import AxiomReport, merge_reports
from .rmatrix import cartan_form
from .series import LaurentExpr, Region, binom, binomial_expand, substitute_shift

log = logging.getLogger(__name__)


def _lower_into(action, gen, z, fr):
    rho = gen.depth - 1
    i = fr.variables.index(z)
    terms = defaultdict(Fraction)
    for m, part in action.lower(gen.row, gen.col, fr).items():
        weight = binom(-m - 1, rho)
        if not weight:
            continue
        shift = -m - 1 - rho
        for (mono, hpow, exps), value in part.terms.items():
            terms[(mono, hpow, exps[:i] + (exps[i] + shift,) + exps[i + 1:])] += value * weight
    return fr._new(terms)


def _raise_into(action, gen, z, fr, zcap):
    rho = gen.depth - 1
    i = fr.variables.index(z)
    low = fr.min_exponent(z)
    terms = defaultdict(Fraction)
    for r in range(rho + 1, rho + 2 + zcap - low):
        weight = binom(r - 1, rho)
        shift = r - 1 - rho
        for (mono, hpow, exps), value in action.raise_by(gen.row, gen.col, r, fr).terms.items():
            terms[(mono, hpow, exps[:i] + (exps[i] + shift,) + exps[i + 1:])] += value * weight
    return fr._new(terms)


def wick_ordered_apply(action, v_mono, z, target, zcap):
    """
    Y(v, z) target for a monomial v, exact for z-exponents up to ``zcap``.
    """
    target = as_field_result(target)
    if z in target.variables:
        raise ValueError('{} is already a variable of the target'.format(z))
    base = target.extend(target.variables + (z,), {z: zcap})
    gens = tuple(v_mono)
    total = base._new({})
    for pattern in itertools.product((False, True), repeat=len(gens)):
        current = base
        for gen, creator in zip(gens, pattern):
            if not creator:
                current = _lower_into(action, gen, z, current)
                if not current:
                    break
        if not current:
            continue
        for gen, creator in zip(gens, pattern):
            if creator:
                current = _raise_into(action, gen, z, current, zcap)
        total = total + current
    return total


def shifted_apply(space, v_mono, z, target, zcap):
    """
    Y(v, z) target read off x_[n](z + u_1, ..., z + u_n) target.

    The matching sum x_[n](u) target is shifted with z dominant and the
    coefficient of u_1^(r1-1) ... u_n^(rn-1) extracted. The u caps are
    raised until the shifted coefficients are complete up to ``zcap``.
    """
    target = as_field_result(target)
    if not target.is_state:
        raise ValueError('the shifted vertex map acts on states only')
    gens = tuple(v_mono)
    if not gens:
        return target.extend((z,), {z: zcap})
    u_vars = tuple('u{}'.format(t) for t in range(1, len(gens) + 1))
    if z in u_vars:
        raise ValueError('{} clashes with the matching variables'.format(z))
    entries = [(gen.row, gen.col) for gen in gens]
    out = {v: gen.depth - 1 for v, gen in zip(u_vars, gens)}
    lows = dict.fromkeys(u_vars, 0)
    for _ in range(2):
        caps = {v: zcap + sum(out.values()) - sum(lows[w] for w in u_vars if w != v) for v in u_vars}
        matched = space.normal_ordered_apply(entries, u_vars, target, caps)
        found = {v: min(matched.min_exponent(v), 0) for v in u_vars}
        if len(u_vars) == 1 or all(found[v] >= lows[v] for v in u_vars):
            break
        lows = found
    shifted = shift_substitute(matched, z_dominant=True, z=z, caps=out)
    for v in u_vars:
        shifted = shifted.extract(v, out[v])
    if shifted.caps.get(z, zcap) < zcap:
        log.debug('shifted vertex map for %s complete only up to %s^%d',
                  format_monomial(gens), z, shifted.caps[z])
    return shifted.with_caps({z: min(zcap, shifted.caps.get(z, zcap))})


def Y_apply(action, v_mono, z, target, caps):
    """
    Y(v, z) target with the z cap taken from ``caps`` (a dict or an int).
    """
    zcap = caps[z] if isinstance(caps, dict) else caps
    return wick_ordered_apply(action, make_monomial(*v_mono), z, target, zcap)


def Y_apply_state(action, v, z, target, zcap):
    """
    Y extended linearly to a state v, or to a FieldResult whose own formal
    variables ride along.
    """
    v = as_field_result(v)
    target = as_field_result(target)
    total = target.extend(target.variables + (z,) + tuple(x for x in v.variables if x not in target.variables),
                          {z: zcap})._new({})
    images = {}
    for (mono, hpow, exps), coeff in v.terms.items():
        image = images.get(mono)
        if image is None:
            image = images[mono] = wick_ordered_apply(action, mono, z, target, zcap)
        piece = image.scale(coeff, hpow)
        if v.variables:
            piece = piece.multiply_laurent([(0, LaurentExpr.monomial(v.variables, exps))])
        total = total + piece
    return total


def wick_fields(space, entries, u_vars, target, caps):
    """
    Normal-ordered product :x_{a1 b1}(u_1) ... x_{an bn}(u_n): applied to target,
    each field in its own variable.
    """
    target = as_field_result(target)
    base = target.extend(target.variables + tuple(u_vars), caps)
    total = base._new({})
    for pattern in itertools.product((False, True), repeat=len(entries)):
        current = base
        for (a, b), var, creator in zip(entries, u_vars, pattern):
            if not creator:
                current = space.annihilate(a, b, current, var)
        for (a, b), var, creator in zip(entries, u_vars, pattern):
            if creator:
                current = space.create(a, b, current, var)
        total = total + current
    return total


###########################################################################
def verify_normal_ordering(space, entries, states, caps):
    """
    The matching-sum x_[n](u) agrees with the normal-ordered product.
    """
    entries = [tuple(e) for e in entries]
    u_vars = tuple('u{}'.format(t) for t in range(1, len(entries) + 1))
    box = {v: caps[v] for v in u_vars}
    reports = []
    for w in states:
        matched = space.normal_ordered_apply(entries, u_vars, w, caps).restrict(box=box)
        ordered = wick_fields(space, entries, u_vars, w, caps).restrict(box=box)
        reports.append(AxiomReport.outcome('wick', space.parameters, matched.witness(ordered, 'x_[n] = :x...x:'),
                                           checked=len(matched)))
    return merge_reports('wick', space.parameters, reports)


def verify_ymap(space, monos, states, zcap, z='z'):
    """
    Y(v, z) w from the shifted matching sum agrees with the Wick-ordered
    mode expansion.
    """
    reports = []
    for mono in monos:
        for w in states:
            shifted = shifted_apply(space, mono, z, w, zcap)
            box = {z: zcap}
            ordered = wick_ordered_apply(space, mono, z, w, zcap).restrict(box=box)
            witness = shifted.restrict(box=box).witness(ordered, 'Y(v,z) for v = {}'.format(format_monomial(mono)))
            reports.append(AxiomReport.outcome('ymap', space.parameters, witness, checked=len(shifted)))
    return merge_reports('ymap', space.parameters, reports)


def verify_vacuum(space, monos, states, zcap, z='z'):
    """
    Y(1, z) w = w and Y(v, z) 1 = sum_k z^k D^k v / k!.
    """
    reports = []
    for w in states:
        image = wick_ordered_apply(space, (), z, w, zcap)
        reports.append(AxiomReport.outcome('vacuum', space.parameters,
                                           image.witness(as_field_result(w).extend((z,)), 'Y(1,z)w = w'),
                                           checked=len(image)))
    vacuum = space.vacuum()
    for mono in monos:
        image = wick_ordered_apply(space, mono, z, vacuum, zcap)
        expected = {}
        power = normalize(State.from_monomial(space.N, space.K, mono))
        factorial = 1
        for k in range(zcap + 1):
            if k:
                factorial *= k
                power = D_apply(power)
            for (m, hpow, _), value in power.terms.items():
                expected[(m, hpow, (k,))] = value / factorial
        expected = FieldResult(space.N, space.K, (z,), expected, {z: zcap})
        reports.append(AxiomReport.outcome('vacuum', space.parameters,
                                           image.witness(expected, 'Y(v,z)1 for v = {}'.format(format_monomial(mono))),
                                           checked=len(image)))
    return merge_reports('vacuum', space.parameters, reports)


def verify_translation(space, monos, states, zcap, z='z'):
    """
    Y(Dv, z) w = d/dz Y(v, z) w.
    """
    reports = []
    for mono in monos:
        Dv = D_apply(normalize(State.from_monomial(space.N, space.K, mono)))
        for w in states:
            lhs = Y_apply_state(space, Dv, z, w, zcap)
            rhs = wick_ordered_apply(space, mono, z, w, zcap + 1).derivative(z).restrict(box={z: zcap})
            rhs = rhs.with_caps({z: zcap})
            reports.append(AxiomReport.outcome('translation', space.parameters,
                                               lhs.witness(rhs, 'Y(Dv,z) = d/dz Y(v,z)'), checked=len(lhs)))
    return merge_reports('translation', space.parameters, reports)


def _substitute_sum(fr, var, replacement, dominant, expand_caps, variables, caps):
    """
    var -> replacement[0] + replacement[1] on every coefficient of ``fr``.
    """
    grouped = defaultdict(dict)
    for (mono, hpow, exps), value in fr.terms.items():
        grouped[(mono, hpow)][exps] = value
    terms = {}
    for (mono, hpow), parts in grouped.items():
        expr = substitute_shift(LaurentExpr(fr.variables, parts), var, replacement, dominant, expand_caps)
        for exps, value in expr.terms.items():
            mapped = dict(zip(expr.variables, exps))
            terms[(mono, hpow, tuple(mapped.get(v, 0) for v in variables))] = value
    return FieldResult(fr.N, fr.K, variables, terms, caps)


def verify_weak_assoc(space, u_mono, v_mono, w, n_target, s_max, caps, module=None):
    """
    Least s <= s_max with
    (z0+z2)^s Y(u, z0+z2) Y(v, z2) w = (z0+z2)^s Y(Y(u, z0) v, z2) w  mod h^n_target,
    the left side expanded in nonnegative powers of z2.

    ``module`` replaces the action on w (Y_W); Y(u, z0) v stays in the algebra.
    """
    outer = module or space
    A, B = caps['z0'], caps['z2']
    box = {'z0': A, 'z2': B}
    parameters = dict(space.parameters, u=format_monomial(u_mono), v=format_monomial(v_mono), n=n_target)

    inner = wick_ordered_apply(outer, v_mono, 'z2', w, B)
    b_min = min(inner.min_exponent('z2'), 0)
    lhs = wick_ordered_apply(outer, u_mono, 'z1', inner, A + B - b_min)
    lhs = _substitute_sum(lhs, 'z1', ('z0', 'z2'), 'z0', {'z2': B - b_min}, ('z0', 'z2'), box)
    lhs = lhs.restrict(h_below=n_target, box=box)

    iterate = wick_ordered_apply(space, u_mono, 'z0', normalize(State.from_monomial(space.N, space.K, v_mono)), A)
    rhs = Y_apply_state(outer, iterate, 'z2', w, B).restrict(h_below=n_target, box=box)

    witness = None
    checked = 0
    for s in range(s_max + 1):
        factor = [(0, binomial_expand(('z0', 'z2'), s, signs=(1, 1)))]
        left = lhs.multiply_laurent(factor).restrict(box=box)
        right = rhs.multiply_laurent(factor).restrict(box=box)
        checked += len(left) + len(right)
        witness = left.witness(right, 's={}'.format(s))
        if witness is None:
            log.debug('weak associativity for %s, %s holds with s=%d', parameters['u'], parameters['v'], s)
            return AxiomReport.outcome('assoc', parameters, None, checked=checked, exponent=s)
    witness['s_max'] = s_max
    return AxiomReport.outcome('assoc', parameters, witness, checked=checked)


def verify_s_locality(space, braiding, u_mono, v_mono, w, n_target, r_max, caps):
    """
    Least r <= r_max with
    (z1-z2)^r Y(z1)(1 (x) Y(z2))(S(z1-z2)(u (x) v) (x) w) = (z1-z2)^r Y(v, z2) Y(u, z1) w
    mod h^n_target, the braided side expanded in nonnegative powers of z2.
    """
    A, B = caps['z1'], caps['z2']
    box = {'z1': A, 'z2': B}
    parameters = dict(space.parameters, u=format_monomial(u_mono), v=format_monomial(v_mono), n=n_target)

    braided = braiding.apply(TensorState.pure(space.N, space.K, (u_mono, v_mono)))
    braided = [(monos, hpow, exps[0], value) for (monos, hpow, exps), value in braided.terms.items()
               if hpow < n_target]
    e_min = min([0] + [e for _, _, e, _ in braided])

    inner = {}
    for (_, v_prime), _, _, _ in braided:
        if v_prime not in inner:
            inner[v_prime] = wick_ordered_apply(space, v_prime, 'z2', w, B)
    b_min = min([0] + [f.min_exponent('z2') for f in inner.values()])
    z1_cap = A - e_min + B - b_min
    fields = {}
    for (u_prime, v_prime), _, _, _ in braided:
        if (u_prime, v_prime) not in fields:
            fields[(u_prime, v_prime)] = wick_ordered_apply(space, u_prime, 'z1', inner[v_prime], z1_cap)
    swapped = wick_ordered_apply(space, v_mono, 'z2', wick_ordered_apply(space, u_mono, 'z1', w, A), B)

    witness = None
    checked = 0
    for r in range(r_max + 1):
        lhs = None
        for monos, hpow, e, value in braided:
            expansion = binomial_expand(('z1', 'z2'), r + e, Region('z1', ('z2',)), {'z2': B - b_min})
            piece = fields[monos].multiply_laurent([(hpow, expansion * value)])
            lhs = piece if lhs is None else lhs + piece
        lhs = lhs.restrict(h_below=n_target, box=box)
        rhs = swapped.multiply_laurent([(0, binomial_expand(('z1', 'z2'), r))]).restrict(h_below=n_target, box=box)
        checked += len(lhs) + len(rhs)
        witness = lhs.witness(rhs, 'r={}'.format(r))
        if witness is None:
            log.debug('S-locality for %s, %s holds with r=%d', parameters['u'], parameters['v'], r)
            return AxiomReport.outcome('locality', parameters, None, checked=checked, exponent=r)
    witness['r_max'] = r_max
    return AxiomReport.outcome('locality', parameters, witness, checked=checked)


###########################################################################
def classical_prediction(space, i, mono, zcap, z='z'):
    """
    Heisenberg vertex algebra action of a_i(z) on a diagonal monomial at h = 0:
    multiplication by sum_r x_ii^(-r) z^(r-1) plus, for each factor x_jj^(-r),
    c <a_i, a_j> r z^(-r-1) times the monomial without that factor.
    """
    c = space.bundle.central
    terms = defaultdict(Fraction)
    for r in range(1, zcap + 2):
        terms[(make_monomial(*(mono + (Generator(i, i, r),))), 0, (r - 1,))] += 1
    for t, gen in enumerate(mono):
        rest = mono[:t] + mono[t + 1:]
        terms[(rest, 0, (-gen.depth - 1,))] += c * cartan_form(i, gen.row, space.N) * gen.depth
    return normalize(FieldResult(space.N, space.K, (z,), terms, {z: zcap}))


def classical_limit_check(space, i, j_list, r_list, zcap=3):
    """
    h^0 part of Y(x_ii^(-1), z) on x_{j1 j1}^(-r1) ... against the Heisenberg
    formula with <a_i, a_j> = delta_ij - 1/N.
    """
    if len(j_list) != len(r_list):
        raise ValueError('j_list and r_list differ in length')
    mono = make_monomial(*[(j, j, r) for j, r in zip(j_list, r_list)])
    return classical_limit_report(space, i, [mono], zcap)


def classical_limit_report(space, i, monos, zcap=3):
    reports = []
    for mono in monos:
        require_diagonal(mono)
        w = normalize(State.from_monomial(space.N, space.K, mono))
        actual = wick_ordered_apply(space, (Generator(i, i, 1),), 'z', w, zcap).restrict(h_below=1)
        expected = classical_prediction(space, i, tuple(mono), zcap)
        reports.append(AxiomReport.outcome('classical', dict(space.parameters, i=i),
                                           actual.witness(expected, format_monomial(mono)), checked=len(actual)))
    return merge_reports('classical', dict(space.parameters, i=i), reports)

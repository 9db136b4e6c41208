"""
Controllers behind the qheis commands. Each takes a validated RunConfig and
returns a Report; verification suites are split into picklable tasks so a
--jobs pool can run them.
"""
import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, NamedTuple

from .app import QHeis, TOOL_VERSION
from .braiding import Braiding, verify_identity_at_h0, verify_shift, verify_unitarity, verify_yang_baxter
from .errors import ConfigError
from .fock import (FockSpace, State, make_monomial, monomial_basis, normalize, verify_annihilators_commute,
                   verify_commutation, verify_normal_order_symmetry, verify_quotient, verify_trace_relation)
from .heisenberg import HeisenbergAlgebra, format_combination, parse_word
from .model import get_bundle
from .modules import (HeisenbergModule, ZeroModeCharacter, diagonal_states, roundtrip_check, sample_modules,
                      verify_classical_action, verify_defining_relations, verify_independence)
from .reports import AxiomReport, Report
from .rmatrix import closed_form_g, g_coefficients, verify_kernel_shape, verify_oracle, verify_trace_normalization
from .series import C, CPoly
from .vertex import (classical_limit_report, verify_normal_ordering, verify_s_locality, verify_translation,
                     verify_vacuum, verify_weak_assoc, verify_ymap)

log = logging.getLogger(__name__)

_CACHE_STATS = {}


def _bundle(config, formal=False):
    level = None if formal else config.level
    return get_bundle(config.N, config.K, level, QHeis.get_cache_dir(config), _CACHE_STATS)


def _numeric_bundle(config):
    """
    Suites that act on states need a numeric level; formal C falls back to c = 1.
    """
    if config.formal_C:
        log.warning('formal C requested for a state-level suite; using c = 1')
        return get_bundle(config.N, config.K, Fraction(1), QHeis.get_cache_dir(config), _CACHE_STATS)
    return _bundle(config)


def _rng(config, salt):
    return random.Random('{}:{}'.format(config.seed, salt))


def _sample(rng, items, count):
    items = list(items)
    if count >= len(items):
        return items
    return rng.sample(items, count)


def _state(config, mono):
    return normalize(State.from_monomial(config.N, config.K, mono))


def _scan_bound(config, degree):
    return config.bound if config.bound is not None else 2 * degree + config.K


###########################################################################
# G-series

def _expected_g(N):
    """
    Leading coefficients 1, 0, (C+N)/N, -C(C+N)/N.
    """
    beta = (C + N) * Fraction(1, N)
    return [CPoly.constant(1), CPoly(), beta, -C * beta]


def cmd_gseries(config):
    """
    Controller for the gseries command.
    """
    bundle = _bundle(config, formal=True)
    coefficients = g_coefficients(bundle.G)[:config.K + 1]
    expected = _expected_g(config.N)
    params = {'N': config.N, 'K': config.K}

    witness = None
    for k, (got, want) in enumerate(zip(coefficients, expected)):
        if got != want:
            witness = {'k': k, 'lhs': str(got), 'rhs': str(want)}
            break
    checks = [AxiomReport.outcome('gseries', params, witness, checked=min(len(coefficients), 4))]

    oracle = closed_form_g(config.N, config.K)
    witness = None
    for k, (got, want) in enumerate(zip(coefficients, oracle)):
        if got != want:
            witness = {'k': k, 'lhs': str(got), 'rhs': str(want)}
            break
    checks.append(AxiomReport.outcome('oracle', params, witness, checked=len(coefficients)))

    results = {'coefficients': [str(g) for g in coefficients]}
    return Report('gseries', config.echo(), checks, TOOL_VERSION, results=results)


###########################################################################
# Verification suites

class Suite(NamedTuple):
    tasks: Callable
    run: Callable


def _single(config):
    return [None]


def _run_tr34(config, task):
    return [verify_trace_normalization(config.N, config.K)]


def _kernel_reports(config, axioms):
    bundle = _bundle(config, formal=config.formal_C)
    return [r for r in verify_kernel_shape(bundle) if r.axiom in axioms]


def _run_esform(config, task):
    return _kernel_reports(config, ('esform',))


def _run_residue(config, task):
    return _kernel_reports(config, ('residue',))


def _run_symmetry(config, task):
    return _kernel_reports(config, ('symmetry', 'T-parity'))


def _run_kernel(config, task):
    return _kernel_reports(config, ('esform', 'residue', 'symmetry', 'T-parity'))


def _run_oracle(config, task):
    return [verify_oracle(_bundle(config, formal=config.formal_C))]


def _state_tasks(config):
    rng = _rng(config, 'states')
    N = config.N
    entries = [(a, b, c, d) for a in range(1, N + 1) for b in range(1, N + 1)
               for c in range(1, N + 1) for d in range(1, N + 1)]
    monos = monomial_basis(N, 3, max_depth=2)
    return [(rng.choice(entries), mono) for mono in _sample(rng, monos, config.samples)]


def _run_commutation(config, task):
    entry, mono = task
    space = FockSpace(_numeric_bundle(config))
    cap = config.cap('u')
    caps = {'u1': cap, 'u2': cap}
    w = _state(config, mono)
    raw = State.from_monomial(config.N, config.K, make_monomial(*mono, (config.N, config.N, 1)))
    a, b, c, d = entry
    return [
        verify_commutation(space, [entry], [w], caps),
        verify_trace_relation(space, [w], caps, var='u1'),
        verify_annihilators_commute(space, [entry], [w]),
        verify_quotient(space, [raw]),
        verify_normal_order_symmetry(space, [(a, b), (c, d)], [w], caps),
        verify_normal_ordering(space, [(a, b), (c, d)], [w], caps),
    ]


def _pair_tasks(config, arity):
    rng = _rng(config, 'braid{}'.format(arity))
    monos = monomial_basis(config.N, 2, max_depth=2, min_degree=1)
    samples = []
    for _ in range(config.samples):
        picked = tuple(rng.choice(monos) for _ in range(arity))
        while sum(len(m) for m in picked) > 3:
            picked = tuple(rng.choice(monos) for _ in range(arity))
        samples.append(picked)
    return samples


def _run_ybe(config, task):
    return [verify_yang_baxter(Braiding(_numeric_bundle(config)), [task])]


def _run_unitarity(config, task):
    braiding = Braiding(_numeric_bundle(config))
    return [verify_unitarity(braiding, [task]), verify_identity_at_h0(braiding, [task])]


def _run_shift(config, task):
    return [verify_shift(Braiding(_numeric_bundle(config)), [task])]


def _vertex_tasks(config):
    rng = _rng(config, 'vertex')
    degree_one = monomial_basis(config.N, 1, max_depth=1, min_degree=1)
    targets = monomial_basis(config.N, 1, max_depth=2)
    return [(rng.choice(degree_one), rng.choice(degree_one), rng.choice(targets)) for _ in range(config.samples)]


def _run_assoc(config, task):
    u, v, w = task
    space = FockSpace(_numeric_bundle(config))
    zcap = config.cap('z')
    caps = {'z0': zcap, 'z2': zcap}
    degree = len(u) + len(v) + len(w)
    return [verify_weak_assoc(space, u, v, _state(config, w), config.n_target, _scan_bound(config, degree), caps)]


def _run_locality(config, task):
    u, v, w = task
    bundle = _numeric_bundle(config)
    zcap = config.cap('z')
    caps = {'z1': zcap, 'z2': zcap}
    degree = len(u) + len(v) + len(w)
    return [verify_s_locality(FockSpace(bundle), Braiding(bundle), u, v, _state(config, w), config.n_target,
                              _scan_bound(config, degree), caps)]


def _run_vacuum(config, task):
    u, _, w = task
    space = FockSpace(_numeric_bundle(config))
    return [verify_vacuum(space, [u, w], [_state(config, w)], config.cap('z'))]


def _run_translation(config, task):
    u, _, w = task
    space = FockSpace(_numeric_bundle(config))
    return [verify_translation(space, [u], [_state(config, w)], config.cap('z'))]


def _ymap_tasks(config):
    rng = _rng(config, 'ymap')
    fields = monomial_basis(config.N, 2, max_depth=2, min_degree=1)
    targets = monomial_basis(config.N, 1, max_depth=2)
    return [(rng.choice(fields), rng.choice(targets)) for _ in range(config.samples)]


def _run_ymap(config, task):
    v, w = task
    space = FockSpace(_numeric_bundle(config))
    return [verify_ymap(space, [v], [_state(config, w)], config.cap('z'))]


def _classical_tasks(config):
    return [i for i in range(1, config.N)]


def _run_classical(config, task):
    space = FockSpace(_numeric_bundle(config))
    monos = monomial_basis(config.N, 3, max_depth=2, diagonal=True)
    return [classical_limit_report(space, task, monos, config.cap('z'))]


def _run_pbw(config, task):
    algebra = HeisenbergAlgebra(config.N, config.K)
    rng = _rng(config, 'pbw')
    words = [algebra.random_word(rng, rng.randint(1, 5)) for _ in range(config.samples)]
    reports = [
        algebra.verify_confluence(words, seed=config.seed),
        algebra.verify_bracket_support(4),
        algebra.verify_trace_relation(range(-3, 4)),
        algebra.verify_level_zero(2),
    ]
    bundle = _numeric_bundle(config)
    modules = sample_modules(bundle, 3, seed=config.seed, h_degree=2)
    ordered = algebra.normal_monomials(2, 2)
    states = diagonal_states(modules[0], 2, max_depth=2)
    reports.append(verify_independence(modules, ordered, states))
    return reports


def _module(config, salt):
    rng = _rng(config, salt)
    return HeisenbergModule(_numeric_bundle(config), ZeroModeCharacter.sample(config.N, config.K, rng))


def _run_module(config, task):
    module = _module(config, 'module')
    rng = _rng(config, 'module-states')
    states = diagonal_states(module, 2, max_depth=2, count=config.samples, rng=rng)
    cap = config.cap('u')
    reports = [
        verify_defining_relations(module, states, {'u1': cap, 'u2': cap}),
        verify_classical_action(module, states, max_level=3),
    ]
    space = FockSpace(module.bundle)
    diag = monomial_basis(config.N, 1, max_depth=1, diagonal=True, min_degree=1)
    zcap = config.cap('z')
    for w in states[:2]:
        u, v = rng.choice(diag), rng.choice(diag)
        degree = 2 + max((len(m) for m in w.monomials()), default=0)
        reports.append(verify_weak_assoc(space, u, v, w, config.n_target, _scan_bound(config, degree),
                                         {'z0': zcap, 'z2': zcap}, module=module))
    return reports


def _run_roundtrip(config, task):
    module = _module(config, 'roundtrip')
    rng = _rng(config, 'roundtrip-states')
    states = diagonal_states(module, 2, max_depth=2, count=config.samples, rng=rng)
    return [roundtrip_check(module, states, zcap=config.cap('z'), max_level=2)]


SUITES = {
    'tr34': Suite(_single, _run_tr34),
    'esform': Suite(_single, _run_esform),
    'residue': Suite(_single, _run_residue),
    'symmetry': Suite(_single, _run_symmetry),
    'kernel': Suite(_single, _run_kernel),
    'oracle': Suite(_single, _run_oracle),
    'commutation': Suite(_state_tasks, _run_commutation),
    'ybe': Suite(lambda config: _pair_tasks(config, 3), _run_ybe),
    'unitarity': Suite(lambda config: _pair_tasks(config, 2), _run_unitarity),
    'shift': Suite(lambda config: _pair_tasks(config, 2), _run_shift),
    'assoc': Suite(_vertex_tasks, _run_assoc),
    'locality': Suite(_vertex_tasks, _run_locality),
    'vacuum': Suite(_vertex_tasks, _run_vacuum),
    'translation': Suite(_vertex_tasks, _run_translation),
    'ymap': Suite(_ymap_tasks, _run_ymap),
    'classical': Suite(_classical_tasks, _run_classical),
    'pbw': Suite(_single, _run_pbw),
    'module': Suite(_single, _run_module),
    'roundtrip': Suite(_single, _run_roundtrip),
}


def _run_task(item):
    suite, config, task = item
    return SUITES[suite].run(config, task)


def cmd_verify(config):
    """
    Controller for the verify command.
    """
    suite = config.suite
    if suite not in SUITES:
        raise ConfigError('unknown suite {!r}; choose one of {}'.format(suite, ', '.join(sorted(SUITES))))
    _CACHE_STATS.clear()
    log.info('running suite %s', suite)
    started = time.perf_counter()
    tasks = [(suite, config, task) for task in SUITES[suite].tasks(config)]
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            batches = list(pool.map(_run_task, tasks))
    else:
        batches = [_run_task(task) for task in tasks]
    checks = [report for batch in batches for report in batch]
    elapsed = time.perf_counter() - started
    log.info('suite %s finished: %d checks in %.2fs', suite, len(checks), elapsed)

    report = Report('verify', config.echo(), checks, TOOL_VERSION)
    if config.timing:
        report.timing = {'seconds': elapsed}
        report.cache = {'hits': _CACHE_STATS.get('hits', 0), 'misses': _CACHE_STATS.get('misses', 0)}
    return report


###########################################################################
def cmd_pbw_reduce(config):
    """
    Controller for the pbw-reduce command.
    """
    algebra = HeisenbergAlgebra(config.N, config.K)
    modes = parse_word(config.word or '', config.N)
    reduced = algebra.pbw_reduce(modes, config.strategy, seed=config.seed)
    results = {
        'word': config.word,
        'normal_form': format_combination(reduced),
        'terms': [{'monomial': m.word, 'coefficient': [str(c) for c in m.coefficient.coeffs]} for m in reduced],
    }
    check = AxiomReport.outcome('pbw-reduce', algebra.parameters, None, checked=len(reduced))
    return Report('pbw-reduce', config.echo(), [check], TOOL_VERSION, results=results)

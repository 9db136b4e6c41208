import hashlib
import json
import logging
import os
import tempfile
from fractions import Fraction

from jsonschema import Draft202012Validator, ValidationError

from .app import TOOL_VERSION
from .errors import CacheError
from .rmatrix import RMatrixBundle, build_bundle
from .series import CPoly, HSeries, LaurentExpr, as_rational, format_rational
from .tensor import TensorOp

log = logging.getLogger(__name__)

CACHE_SCHEMA_VERSION = 1

_SERIES_SCHEMA = {
    'type': 'object',
    'required': ['cap', 'coefficients'],
    'properties': {
        'cap': {'type': 'integer', 'minimum': 0},
        'coefficients': {
            'type': 'array',
            'items': {'type': 'object', 'required': ['h', 'value']},
        },
    },
}

_OPERATOR_SCHEMA = {
    'type': 'object',
    'required': ['dim', 'arity', 'entries'],
    'properties': {
        'dim': {'type': 'integer', 'minimum': 2},
        'arity': {'type': 'integer', 'minimum': 0},
        'entries': {
            'type': 'array',
            'items': {
                'type': 'object',
                'required': ['row', 'col', 'series'],
                'properties': {'series': _SERIES_SCHEMA},
            },
        },
    },
}

CACHE_SCHEMA = {
    '$schema': 'https://json-schema.org/draft/2020-12/schema',
    'title': 'qheis bundle cache entry',
    'type': 'object',
    'required': ['schema_version', 'key', 'payload'],
    'properties': {
        'schema_version': {'const': CACHE_SCHEMA_VERSION},
        'key': {
            'type': 'object',
            'required': ['N', 'K', 'c', 'tool_version'],
            'properties': {
                'N': {'type': 'integer', 'minimum': 2},
                'K': {'type': 'integer', 'minimum': 0},
                'c': {'type': 'string'},
                'caps': {'type': ['object', 'null']},
                'tool_version': {'type': 'string'},
            },
        },
        'payload': {
            'type': 'object',
            'required': ['N', 'K', 'central', 'G', 'R_u', 'R_shifted', 'S', 'T'],
            'properties': {
                'G': _SERIES_SCHEMA,
                'R_u': _OPERATOR_SCHEMA,
                'R_shifted': _OPERATOR_SCHEMA,
                'S': _OPERATOR_SCHEMA,
                'T': _OPERATOR_SCHEMA,
            },
        },
    },
}


def bundle_key(N, K, central=None, caps=None, tool_version=TOOL_VERSION):
    """
    Canonical cache key; ``central`` None means formal C.
    """
    return {
        'N': N,
        'K': K,
        'c': 'formal' if central is None else format_rational(central),
        'caps': caps,
        'tool_version': tool_version,
    }


def record_id(key):
    return hashlib.sha256(json.dumps(key, sort_keys=True).encode('utf-8')).hexdigest()


def _bundles_dir(cache_dir):
    bundles_dir = os.path.join(cache_dir, 'bundles')
    try:
        os.makedirs(bundles_dir, exist_ok=True)
    except OSError as e:
        raise CacheError('cannot use cache directory {}: {}'.format(cache_dir, e)) from e
    return bundles_dir


###########################################################################
def payload_to_json(value):
    if isinstance(value, LaurentExpr):
        return {
            'variables': list(value.variables),
            'caps': dict(sorted(value.caps.items())),
            'terms': [{'exponents': list(exps), 'coefficient': payload_to_json(coeff)}
                      for exps, coeff in sorted(value.terms.items())],
        }
    if isinstance(value, CPoly):
        return {'C': value.to_json()}
    return format_rational(value)


def payload_from_json(data):
    if isinstance(data, str):
        return as_rational(data)
    if 'C' in data:
        return CPoly.from_json(data['C'])
    terms = {tuple(t['exponents']): payload_from_json(t['coefficient']) for t in data['terms']}
    return LaurentExpr(data['variables'], terms, data['caps'])


def series_to_json(series):
    return {
        'cap': series.cap,
        'coefficients': [{'h': k, 'value': payload_to_json(c)} for k, c in enumerate(series.coeffs)],
    }


def series_from_json(data):
    coeffs = [0] * (data['cap'] + 1)
    for item in data['coefficients']:
        value = payload_from_json(item['value'])
        coeffs[item['h']] = value if value else 0
    return HSeries(coeffs, data['cap'])


def operator_to_json(op):
    return {
        'dim': op.dim,
        'arity': op.arity,
        'entries': [{'row': list(row), 'col': list(col), 'series': series_to_json(value)}
                    for (row, col), value in sorted(op.entries.items())],
    }


def operator_from_json(data):
    entries = {(tuple(e['row']), tuple(e['col'])): series_from_json(e['series']) for e in data['entries']}
    return TensorOp(data['dim'], data['arity'], entries)


def bundle_to_payload(bundle):
    return {
        'N': bundle.N,
        'K': bundle.K,
        'central': None if bundle.central is None else format_rational(bundle.central),
        'G': series_to_json(bundle.G),
        'R_u': operator_to_json(bundle.R_u),
        'R_shifted': operator_to_json(bundle.R_shifted),
        'S': operator_to_json(bundle.S),
        'T': operator_to_json(bundle.T),
    }


def bundle_from_payload(payload):
    central = payload['central']
    return RMatrixBundle(
        N=payload['N'],
        K=payload['K'],
        central=None if central is None else as_rational(central),
        R_u=operator_from_json(payload['R_u']),
        R_shifted=operator_from_json(payload['R_shifted']),
        G=series_from_json(payload['G']),
        S=operator_from_json(payload['S']),
        T=operator_from_json(payload['T']),
    )


###########################################################################
def cache_store(cache_dir, bundle, caps=None, tool_version=TOOL_VERSION):
    """
    Persist a bundle as bundles/<sha256 of key>.json, written to a temp file
    and renamed into place.
    """
    key = bundle_key(bundle.N, bundle.K, bundle.central, caps, tool_version)
    record = {
        'schema_version': CACHE_SCHEMA_VERSION,
        'key': key,
        'payload': bundle_to_payload(bundle),
    }
    Draft202012Validator(CACHE_SCHEMA).validate(record)

    bundles_dir = _bundles_dir(cache_dir)
    file_path = os.path.join(bundles_dir, record_id(key) + '.json')
    fd, tmp_path = tempfile.mkstemp(dir=bundles_dir, suffix='.tmp')
    try:
        with os.fdopen(fd, 'w') as f:
            json.dump(record, f, sort_keys=True)
        os.replace(tmp_path, file_path)
    except OSError as e:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise CacheError('cannot write cache entry {}: {}'.format(file_path, e)) from e
    log.info('cached bundle %s', file_path)
    return file_path


def cache_load(cache_dir, N, K, central=None, caps=None, tool_version=TOOL_VERSION):
    """
    Load a cached bundle, or None on a miss. Corrupt entries are reported and
    treated as misses.
    """
    key = bundle_key(N, K, central, caps, tool_version)
    file_path = os.path.join(_bundles_dir(cache_dir), record_id(key) + '.json')
    if not os.path.exists(file_path):
        return None
    try:
        with open(file_path, 'r') as f:
            record = json.load(f)
        Draft202012Validator(CACHE_SCHEMA).validate(record)
        if record['key'] != key:
            return None
        return bundle_from_payload(record['payload'])
    except (ValueError, KeyError, TypeError, IndexError, ValidationError) as e:
        log.warning('corrupt cache entry %s (%s); recomputing', file_path, e)
        return None


def get_bundle(N, K, central=None, cache_dir=None, stats=None):
    """
    Bundle from the cache when configured, built (and stored) otherwise.
    """
    if central is not None:
        central = Fraction(central)
    if not cache_dir:
        return build_bundle(N, K, central)
    bundle = cache_load(cache_dir, N, K, central)
    if bundle is not None:
        log.info('cache hit for N=%d K=%d c=%s', N, K, 'formal' if central is None else central)
        if stats is not None:
            stats['hits'] = stats.get('hits', 0) + 1
        return bundle
    if stats is not None:
        stats['misses'] = stats.get('misses', 0) + 1
    bundle = build_bundle(N, K, central)
    cache_store(cache_dir, bundle)
    return bundle


def get_all_cached_keys(cache_dir):
    """
    Keys of every readable entry in the cache.
    """
    bundles_dir = _bundles_dir(cache_dir)
    keys = []

    for file_name in sorted(os.listdir(bundles_dir)):
        # Make sure we are only looking at json files
        if not file_name.endswith('.json'):
            continue

        file_path = os.path.join(bundles_dir, file_name)
        try:
            with open(file_path, 'r') as f:
                keys.append(json.load(f)['key'])
        except (ValueError, KeyError, TypeError) as e:
            log.warning('skipping unreadable cache entry %s (%s)', file_path, e)

    return keys

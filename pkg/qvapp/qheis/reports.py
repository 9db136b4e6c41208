"""
Verification reports and their JSON schema.
"""
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from jsonschema import Draft202012Validator

log = logging.getLogger(__name__)

REPORT_SCHEMA_VERSION = 1

REPORT_SCHEMA = {
    '$schema': 'https://json-schema.org/draft/2020-12/schema',
    'title': 'qheis report',
    'type': 'object',
    'required': ['schema_version', 'tool_version', 'command', 'config', 'checks', 'status'],
    'properties': {
        'schema_version': {'const': REPORT_SCHEMA_VERSION},
        'tool_version': {'type': 'string'},
        'command': {'type': 'string'},
        'status': {'enum': ['pass', 'fail']},
        'config': {'type': 'object'},
        'results': {'type': 'object'},
        'checks': {
            'type': 'array',
            'items': {
                'type': 'object',
                'required': ['axiom', 'parameters', 'status', 'checked'],
                'properties': {
                    'axiom': {'type': 'string'},
                    'parameters': {'type': 'object'},
                    'status': {'enum': ['pass', 'fail']},
                    'checked': {'type': 'integer', 'minimum': 0},
                    'exponent': {'type': ['integer', 'null']},
                    'witness': {'type': ['object', 'null']},
                },
                'if': {'properties': {'status': {'const': 'fail'}}},
                'then': {'required': ['witness'], 'properties': {'witness': {'type': 'object'}}},
            },
        },
        'timing': {'type': 'object', 'additionalProperties': {'type': 'number'}},
        'cache': {
            'type': 'object',
            'properties': {
                'hits': {'type': 'integer'},
                'misses': {'type': 'integer'},
            },
        },
    },
}


def to_jsonable(value):
    """
    Convert engine values into JSON-ready data. Rationals become "p/q".
    """
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return '{}/{}'.format(value.numerator, value.denominator)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    coeffs = getattr(value, 'coeffs', None)
    if coeffs is not None and hasattr(value, 'cap'):
        return [to_jsonable(c) if isinstance(c, (int, Fraction)) else str(c) for c in coeffs]
    return str(value)


def first_difference(lhs, rhs):
    """
    First key (in a deterministic order) at which two coefficient maps differ,
    as a witness dict, or None when they agree.
    """
    for key in sorted(set(lhs) | set(rhs), key=repr):
        a = lhs.get(key, 0)
        b = rhs.get(key, 0)
        if a != b:
            return {'key': to_jsonable(key), 'lhs': to_jsonable(a), 'rhs': to_jsonable(b)}
    return None


@dataclass
class AxiomReport:
    """
    Outcome of one verification; failing reports always carry a witness.
    """
    axiom: str
    parameters: dict
    status: str
    witness: dict = None
    exponent: int = None
    checked: int = 0

    def __post_init__(self):
        if self.status not in ('pass', 'fail'):
            raise ValueError('status must be pass or fail, got {!r}'.format(self.status))
        if self.status == 'fail' and self.witness is None:
            raise ValueError('failing report for {} has no witness'.format(self.axiom))

    @classmethod
    def outcome(cls, axiom, parameters, witness=None, checked=0, exponent=None):
        status = 'pass' if witness is None else 'fail'
        return cls(axiom, dict(parameters), status, witness, exponent, checked)

    @property
    def passed(self):
        return self.status == 'pass'

    def to_dict(self):
        return {
            'axiom': self.axiom,
            'parameters': to_jsonable(self.parameters),
            'status': self.status,
            'witness': to_jsonable(self.witness),
            'exponent': self.exponent,
            'checked': self.checked,
        }


def merge_reports(axiom, parameters, reports):
    """
    Fold per-sample reports into one: fails with the first witness, sums counts.
    """
    reports = list(reports)
    checked = sum(r.checked for r in reports)
    exponents = [r.exponent for r in reports if r.exponent is not None]
    for r in reports:
        if not r.passed:
            witness = dict(r.witness)
            witness.setdefault('sample', to_jsonable(r.parameters))
            return AxiomReport.outcome(axiom, parameters, witness, checked)
    exponent = max(exponents) if exponents else None
    return AxiomReport.outcome(axiom, parameters, None, checked, exponent)


@dataclass
class Report:
    command: str
    config: dict
    checks: list
    tool_version: str
    results: dict = None
    timing: dict = None
    cache: dict = field(default=None)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def to_dict(self):
        data = {
            'schema_version': REPORT_SCHEMA_VERSION,
            'tool_version': self.tool_version,
            'command': self.command,
            'status': 'pass' if self.passed else 'fail',
            'config': to_jsonable(self.config),
            'checks': [check.to_dict() for check in self.checks],
        }
        if self.results is not None:
            data['results'] = to_jsonable(self.results)
        if self.timing is not None:
            data['timing'] = dict(self.timing)
        if self.cache is not None:
            data['cache'] = dict(self.cache)
        return data

    def to_json(self):
        data = self.to_dict()
        validate_report(data)
        return json.dumps(data, sort_keys=True, indent=2) + '\n'


def validate_report(data):
    Draft202012Validator(REPORT_SCHEMA).validate(data)

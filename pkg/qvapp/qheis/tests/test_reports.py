import json
import unittest
from fractions import Fraction

from jsonschema import ValidationError

from qvapp.qheis.reports import AxiomReport, Report, first_difference, merge_reports, to_jsonable, validate_report
from qvapp.qheis.series import HSeries


class JsonableTestCase(unittest.TestCase):

    def test_values(self):
        self.assertEqual(to_jsonable(Fraction(-1, 2)), '-1/2')
        self.assertEqual(to_jsonable({'b': 1, 'a': (Fraction(1), None)}), {'a': ['1/1', None], 'b': 1})
        self.assertEqual(to_jsonable(HSeries([Fraction(1, 2)], 0)), ['1/2'])

    def test_first_difference(self):
        self.assertIsNone(first_difference({'x': 1}, {'x': 1, 'y': 0}))
        self.assertEqual(first_difference({'x': Fraction(1, 2)}, {}), {'key': 'x', 'lhs': '1/2', 'rhs': 0})


class AxiomReportTestCase(unittest.TestCase):

    def test_failure_needs_witness(self):
        with self.assertRaises(ValueError):
            AxiomReport('ybe', {}, 'fail')
        with self.assertRaises(ValueError):
            AxiomReport('ybe', {}, 'unknown')

    def test_merge(self):
        params = {'N': 2}
        passing = [AxiomReport.outcome('assoc', params, checked=3, exponent=e) for e in (0, 2, 1)]
        merged = merge_reports('assoc', params, passing)
        self.assertTrue(merged.passed)
        self.assertEqual((merged.exponent, merged.checked), (2, 9))

        failing = AxiomReport.outcome('assoc', {'u': 'x11(-1)'}, {'s': 3}, checked=1)
        merged = merge_reports('assoc', params, passing + [failing])
        self.assertFalse(merged.passed)
        self.assertEqual(merged.witness, {'s': 3, 'sample': {'u': 'x11(-1)'}})


class ReportTestCase(unittest.TestCase):

    def test_json_document(self):
        checks = [AxiomReport.outcome('ybe', {'N': 2, 'c': Fraction(1)}, checked=4),
                  AxiomReport.outcome('unitarity', {'N': 2}, {'h': 1, 'lhs': Fraction(1, 3)})]
        report = Report('verify', {'N': 2, 'suite': 'ybe'}, checks, '0.1.0')
        data = json.loads(report.to_json())
        self.assertEqual(data['status'], 'fail')
        self.assertEqual(data['checks'][0]['parameters']['c'], '1/1')
        self.assertEqual(data['checks'][1]['witness']['lhs'], '1/3')
        self.assertNotIn('timing', data)

    def test_optional_blocks(self):
        report = Report('verify', {}, [], '0.1.0', timing={'seconds': 0.5}, cache={'hits': 1, 'misses': 0})
        data = report.to_dict()
        self.assertEqual(data['status'], 'pass')
        self.assertEqual(data['cache'], {'hits': 1, 'misses': 0})
        validate_report(data)

    def test_schema_rejects(self):
        data = Report('verify', {}, [], '0.1.0').to_dict()
        data['status'] = 'maybe'
        with self.assertRaises(ValidationError):
            validate_report(data)
        data = Report('verify', {}, [], '0.1.0').to_dict()
        data['checks'] = [{'axiom': 'ybe', 'parameters': {}, 'status': 'fail', 'checked': 0, 'witness': None}]
        with self.assertRaises(ValidationError):
            validate_report(data)


if __name__ == '__main__':
    unittest.main()

import io
import json
import logging
import os
import tempfile
from contextlib import redirect_stdout, redirect_stderr
from unittest import TestCase, mock

import pandas as pd

from eichler.infras import load_config
from eichler.service.cli import COMMANDS, run, build_parser, resolve_options, EXIT_OK, EXIT_FAILED, EXIT_VALIDATION, \
    EXIT_TOLERANCE

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(message)s",
    handlers=[logging.StreamHandler()]
)


class TestCli(TestCase):
    config = load_config()

    def _run(self, *argv):
        out = io.StringIO()
        err = io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = run(list(argv), self.config)
        text = out.getvalue().strip()
        return code, json.loads(text) if text else None, err.getvalue()

    def _write_json(self, data) -> str:
        path = os.path.join(tempfile.mkdtemp(), 'options.json')
        with open(path, 'w') as f:
            json.dump(data, f)
        return path

    def test_decompose(self):
        code, payload, _ = self._run('decompose', '--gamma', '2,1,1,1')
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(payload['reconstructed'])
        self.assertEqual(payload['gamma'], [[2, 1], [1, 1]])
        code, payload, _ = self._run('decompose')
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(payload['word'], ['S'])

    def test_validation_errors(self):
        code, payload, err = self._run('decompose', '--gamma', '1,2,3,4')
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIsNone(payload)
        self.assertIn('NotSL2Z', err)
        self.assertEqual(self._run('decompose', '--gamma', 'a,b')[0], EXIT_VALIDATION)
        self.assertEqual(self._run('aux', '--z', '0,-1')[0], EXIT_VALIDATION)
        self.assertEqual(self._run('eisenstein', '--r', '1')[0], EXIT_VALIDATION)
        self.assertEqual(self._run('check', '--suite', 'geometry')[0], EXIT_VALIDATION)
        self.assertEqual(self._run('coefficients', '--f', 'theta')[0], EXIT_VALIDATION)
        self.assertEqual(self._run('frobnicate')[0], EXIT_VALIDATION)

    def test_config_file(self):
        path = self._write_json({"gamma": [[1, 1], [0, 1]]})
        code, payload, _ = self._run('decompose', '--config', path)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(payload['word'], ['T'])
        bad = self._write_json({"gamma": "1,1,0,1", "colour": "red"})
        self.assertEqual(self._run('decompose', '--config', bad)[0], EXIT_VALIDATION)
        self.assertEqual(self._run('decompose', '--config', '/nonexistent/options.json')[0], EXIT_VALIDATION)

    def test_option_precedence(self):
        path = self._write_json({"cutoff": 16, "r": 2})
        args = build_parser().parse_args(['eisenstein', '--config', path, '--cutoff', '8'])
        options = resolve_options(args)
        self.assertEqual(options['cutoff'], 8)
        self.assertEqual(options['r'], 2)
        self.assertEqual(options['s'], 2.0)

    def test_coefficients(self):
        out = os.path.join(tempfile.mkdtemp(), 'delta.csv')
        code, payload, _ = self._run('coefficients', '--f', 'delta', '--truncation', '8', '--out', out)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(payload['coefficients']), 9)
        self.assertEqual(payload['coefficients'][2], [-24.0, 0.0])
        self.assertEqual(len(pd.read_csv(out)), 9)

    def test_cocycle(self):
        code, payload, _ = self._run('cocycle', '--gamma', '1,1,0,1', '--z', '0.2,1.1')
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(payload['weight'], -10.0)
        self.assertLess(abs(complex(*payload['value'])), 1e-8)
        self.assertIn('quadrature', payload['metadata'])

    def test_tolerance_not_met(self):
        code, payload, _ = self._run('aux', '--z', '0,1', '--abs-tol', '1e-300', '--rel-tol', '1e-300',
                                     '--max-subdivisions', '1', '--initial-panels', '1')
        self.assertEqual(code, EXIT_TOLERANCE)
        self.assertEqual(payload['error'], 'ToleranceNotMet')

    def test_laplacian_check(self):
        code, payload, _ = self._run('laplacian-check')
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(payload['passed'])
        self.assertAlmostEqual(payload['expected'], -30.0)
        code, payload, _ = self._run('laplacian-check', '--which', 'identity', '--z', '0.3,1.2')
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(payload['passed'])
        self.assertEqual(self._run('laplacian-check', '--r', '2')[0], EXIT_VALIDATION)

    def test_eisenstein(self):
        code, payload, _ = self._run('eisenstein', '--z', '0,1', '--cutoff', '64')
        self.assertEqual(code, EXIT_OK)
        self.assertAlmostEqual(payload['value'][0], 2.7842, delta=1e-3)
        self.assertIn('invariance_T', payload['residuals'])

    def test_check_suite(self):
        report = os.path.join(tempfile.mkdtemp(), 'report.csv')
        code, payload, _ = self._run('check', '--suite', 'automorphy', '--workers', '2', '--report', report)
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(payload['passed'])
        names = [c['name'] for c in payload['checks']]
        self.assertEqual(names, ['omega_range', 'multiplier_consistency', 'sigma_cocycle', 'slash_composition',
                                 'roelcke_bridge', 'word_roundtrip'])
        frame = pd.read_csv(report)
        self.assertEqual(list(frame.columns), ['suite', 'name', 'passed', 'detail'])

    def test_numeric_error(self):
        def overflow(options, config):
            raise OverflowError("math range error")

        def bad_value(options, config):
            raise ValueError("array must not contain infs or NaNs")

        for command in (overflow, bad_value):
            with mock.patch.dict(COMMANDS, {'decompose': command}):
                code, payload, _ = self._run('decompose')
            self.assertEqual(code, EXIT_TOLERANCE)
            self.assertIn(payload['error'], ('OverflowError', 'ValueError'))
            self.assertIn('message', payload)

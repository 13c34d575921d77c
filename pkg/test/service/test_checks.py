import logging
from unittest import TestCase, mock

from eichler.domain.common import ValidationError
from eichler.service.checks import SUITES, run_suites

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(message)s",
    handlers=[logging.StreamHandler()]
)


class TestSuites(TestCase):

    def test_fast_suites_pass(self):
        for suite in ('automorphy', 'forms', 'domain'):
            results = run_suites(suite, workers=2)
            self.assertEqual([r.name for r in results], [name for name, _ in SUITES[suite]])
            for r in results:
                self.assertTrue(r.passed, "{}.{}: {}".format(r.suite, r.name, r.detail))

    def test_cocycle_condition_suite_entries(self):
        checks = dict(SUITES['eichler'])
        for name in ('cocycle_condition_delta', 'cocycle_condition_eta', 'holomorphy_delta', 'holomorphy_eta'):
            passed, detail = checks[name]()
            self.assertTrue(passed, "{}: {}".format(name, detail))

    def test_numeric_error_marks_failure(self):
        def overflow():
            raise OverflowError("math range error")

        with mock.patch.dict(SUITES, {'automorphy': [('overflow', overflow)]}):
            results = run_suites('automorphy', workers=1)
        self.assertEqual(len(results), 1)
        self.assertFalse(results[0].passed)
        self.assertIn('OverflowError', results[0].detail)

    def test_unknown_suite(self):
        with self.assertRaises(ValidationError):
            run_suites('geometry')

import logging
from fractions import Fraction
from unittest import TestCase

import numpy as np

from eichler.domain.common import ValidationError, SeriesOverflow
from eichler.domain.forms import build_eta_power
from eichler.domain.series import PowerSeries

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(message)s",
    handlers=[logging.StreamHandler()]
)


class TestPowerSeries(TestCase):

    def test_euler_product_pentagonal(self):
        p = PowerSeries.euler_product(27)
        expected = {0: 1, 1: -1, 2: -1, 5: 1, 7: 1, 12: -1, 15: -1, 22: 1, 26: 1}
        for n in range(27):
            self.assertEqual(p[n], expected.get(n, 0), "n={}".format(n))

    def test_ramanujan_tau(self):
        p24 = PowerSeries.euler_product(8).power(24)
        self.assertEqual([p24[n] for n in range(6)], [1, -24, 252, -1472, 4830, -6048])

    def test_exact_fractional_power(self):
        p = PowerSeries.euler_product(12)
        root = p.power(Fraction(1, 2))
        self.assertTrue(all(isinstance(c, (int, Fraction)) for c in root.coefficients))
        self.assertEqual((root * root).coefficients, p.coefficients)

    def test_log_exp(self):
        f = PowerSeries([1, Fraction(2), 3, -1], 10)
        self.assertEqual(f.log().exp().coefficients, f.coefficients)
        with self.assertRaises(ValidationError):
            PowerSeries([2, 1], 4).log()
        with self.assertRaises(ValidationError):
            PowerSeries([1, 1], 4).exp()

    def test_calculus(self):
        f = PowerSeries([1, 2, 3], 4)
        self.assertEqual(f.derivative().coefficients, [2, 6, 0, 0])
        self.assertEqual(f.derivative().integral().coefficients, [0, 2, 3, 0])
        self.assertEqual((f - f).coefficients, [0, 0, 0, 0])
        self.assertEqual((2 * f + 1).coefficients, [3, 4, 6, 0])

    def test_overflow(self):
        with self.assertRaises(SeriesOverflow):
            PowerSeries([1e300, 1.0], 2) * PowerSeries([1e300, 1.0], 2)
        with self.assertRaises(ValidationError):
            PowerSeries([1], 2) + PowerSeries([1], 3)

    def test_float_path_uses_arrays(self):
        p = PowerSeries.euler_product(8).power(3)
        values = p.to_numpy()
        self.assertIsInstance(values, np.ndarray)
        self.assertEqual(values.dtype, complex)
        self.assertEqual(list(values.real), [float(c) for c in p.coefficients])
        self.assertTrue(all(isinstance(c, int) for c in p.coefficients))
        eta3 = build_eta_power(3, 7)
        self.assertIsInstance(eta3.coefficients, np.ndarray)
        self.assertTrue(np.array_equal(eta3.coefficients, values))

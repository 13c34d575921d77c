import logging
import math
from configparser import ConfigParser
from unittest import TestCase

import numpy as np
from scipy import special

from eichler.domain.common import ToleranceNotMet, ValidationError
from eichler.domain.fundamental_domain import Geodesic, RHO
from eichler.domain.quadrature import QuadratureSpec, integrate, integrate_semi_infinite, integrate_path, \
    upper_gamma_scaled, log_upper_gamma

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(message)s",
    handlers=[logging.StreamHandler()]
)


class TestIntegrate(TestCase):

    def test_polynomial(self):
        estimate = integrate(lambda t: t ** 5 - 2 * t + 1j * t ** 2, 0.0, 2.0)
        self.assertLess(abs(estimate.value - (64 / 6 - 4 + 8j / 3)), 1e-12)
        self.assertLessEqual(estimate.error, 1e-10)

    def test_oscillatory(self):
        spec = QuadratureSpec(1e-12, 1e-12)
        estimate = integrate(lambda t: np.exp(1j * 40 * t), 0.0, 3.0, spec)
        exact = (np.exp(120j) - 1) / 40j
        self.assertLess(abs(estimate.value - exact), 1e-11)
        self.assertGreater(estimate.panels, spec.initial_panels)

    def test_semi_infinite(self):
        estimate = integrate_semi_infinite(lambda t: np.exp(-t), 0.0, 1.0)
        self.assertLess(abs(estimate.value - 1), 1e-10)
        estimate = integrate_semi_infinite(lambda t: t ** 3 * np.exp(-2 * t), 1.0, 1.0)
        exact = special.gammaincc(4, 2) * special.gamma(4) / 16
        self.assertLess(abs(estimate.value - exact), 1e-10)
        with self.assertRaises(ValidationError):
            integrate_semi_infinite(lambda t: np.exp(-t), 0.0, 0.0)

    def test_path(self):
        estimate = integrate_path(lambda z: z ** 2, Geodesic(RHO, 1j))
        self.assertLess(abs(estimate.value - (-1 - 1j) / 3), 1e-12)
        vertical = integrate_path(lambda z: np.ones_like(z), Geodesic(0.5 + 1j, 0.5 + 3j))
        self.assertLess(abs(vertical.value - 2j), 1e-14)

    def test_failures(self):
        spec = QuadratureSpec(1e-14, 1e-14, max_subdivisions=4, initial_panels=1)
        with self.assertRaises(ToleranceNotMet) as ctx:
            integrate(lambda t: np.cos(1000 * t), 0.0, 10.0, spec)
        self.assertIsNotNone(ctx.exception.error)
        with self.assertRaises(ToleranceNotMet):
            integrate(lambda t: np.full(t.shape, np.inf), 0.0, 1.0)


class TestIncompleteGamma(TestCase):

    def test_positive_order(self):
        for a, x in ((0.5, 1.0), (3.0, 2.5), (7.5, 10.0)):
            exact = special.gammaincc(a, x) * special.gamma(a)
            self.assertLess(abs(upper_gamma_scaled(a, x) - exact), 1e-13 * exact)

    def test_negative_order(self):
        x = 1.3
        # Γ(a+1, x) = aΓ(a, x) + x^a e^{−x}
        exact = (special.gammaincc(0.5, x) * special.gamma(0.5) - x ** -0.5 * math.exp(-x)) / -0.5
        self.assertLess(abs(upper_gamma_scaled(-0.5, x) - exact), 1e-12 * abs(exact))

    def test_scaled(self):
        value = upper_gamma_scaled(2.0, 800.0, 790.0)
        self.assertAlmostEqual(value, 801 * math.exp(-10), delta=1e-12)
        self.assertAlmostEqual(log_upper_gamma(2.0, 800.0), math.log(801) - 800, delta=1e-10)


class TestSpec(TestCase):

    def test_validation(self):
        with self.assertRaises(ValidationError):
            QuadratureSpec(abs_tol=0)
        with self.assertRaises(ValidationError):
            QuadratureSpec(height=1.5)
        with self.assertRaises(ValidationError):
            QuadratureSpec(tail_mode='none')
        with self.assertRaises(ValidationError):
            QuadratureSpec(min_height=1.5)

    def test_from_config(self):
        config = ConfigParser()
        config.read_string("[quadrature]\nabs_tol = 1e-12\nheight = 20\ntail_mode = doubling\n")
        spec = QuadratureSpec.from_config(config)
        self.assertEqual(spec.abs_tol, 1e-12)
        self.assertEqual(spec.height, 20.0)
        self.assertEqual(spec.tail_mode.value, 'doubling')
        self.assertEqual(spec.tightened().abs_tol, 5e-13)
        self.assertEqual(QuadratureSpec.from_config(ConfigParser()).height, 12.0)

import cmath
import logging
import math
from fractions import Fraction
from unittest import TestCase

import numpy as np

from eichler.domain.automorphy import Mat2, S, T, I, MINUS_I, INFINITY, mobius, j_factor, omega, sigma_r, \
    j_pow, principal_pow, roelcke_factor, slash, decompose_ST, word_product, make_multiplier, random_sl2z, \
    sl2z_context
from eichler.domain.common import NotSL2Z, ValidationError

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(message)s",
    handlers=[logging.StreamHandler()]
)


class TestMatrices(TestCase):

    def test_determinant_checked(self):
        with self.assertRaises(NotSL2Z):
            Mat2(1, 1, 1, 1)
        m = Mat2(Fraction(1, 2), 0, 0, 2)
        self.assertFalse(m.is_integral)
        self.assertEqual(m * m.inverse(), I)

    def test_generators(self):
        self.assertEqual(S * S, MINUS_I)
        self.assertEqual((S * T).power(3), I)
        self.assertEqual(T.power(-2), Mat2(1, -2, 0, 1))

    def test_word_decomposition(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            gamma = random_sl2z(rng)
            self.assertEqual(word_product(decompose_ST(gamma)), gamma)
        self.assertEqual(decompose_ST(I), [])
        self.assertEqual(word_product(decompose_ST(MINUS_I)), MINUS_I)

    def test_mobius(self):
        self.assertAlmostEqual(abs(mobius(S, 1j) - 1j), 0, delta=1e-15)
        self.assertIs(mobius(T, INFINITY), INFINITY)
        self.assertEqual(mobius(S, INFINITY), 0)
        self.assertIs(mobius(S, 0), INFINITY)
        self.assertEqual(mobius(Mat2(2, 1, 1, 1), INFINITY), 2)
        z = np.array([0.3 + 1j, -0.2 + 0.5j])
        values = mobius(T, z)
        self.assertTrue(np.allclose(values, z + 1))


class TestAutomorphyFactors(TestCase):

    def test_omega(self):
        self.assertEqual(omega(S, S), -1)
        self.assertEqual(omega(T, S), 0)
        rng = np.random.default_rng(11)
        for _ in range(300):
            self.assertIn(omega(random_sl2z(rng), random_sl2z(rng)), (-1, 0, 1))
        self.assertEqual(sigma_r(T, S, Fraction(1, 2)), 1)

    def test_principal_branch(self):
        self.assertAlmostEqual(abs(principal_pow(-1, 0.5) - 1j), 0, delta=1e-15)
        self.assertAlmostEqual(abs(principal_pow(-2j, 0.5) - (1 - 1j)), 0, delta=1e-15)
        self.assertAlmostEqual(abs(principal_pow(-1 - 0j, 1.5) - cmath.exp(1.5j * math.pi)), 0, delta=1e-15)

    def test_j_cocycle(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            gamma, delta = random_sl2z(rng), random_sl2z(rng)
            z = complex(rng.uniform(-1, 1), rng.uniform(0.5, 3))
            lhs = j_factor(gamma * delta, z)
            rhs = j_factor(gamma, mobius(delta, z)) * j_factor(delta, z)
            self.assertLess(abs(lhs - rhs), 1e-9 * max(1.0, abs(lhs)))

    def test_sigma_real_weight(self):
        # σ_r(γ,δ)·j(γδ,z)^r = j(γ,δz)^r·j(δ,z)^r
        rng = np.random.default_rng(19)
        for _ in range(1000):
            gamma, delta = random_sl2z(rng), random_sl2z(rng)
            z = complex(rng.uniform(-3, 3), rng.uniform(0.5, 5))
            r = rng.uniform(-12, 12)
            lhs = sigma_r(gamma, delta, r) * j_pow(gamma * delta, z, r)
            rhs = j_pow(gamma, mobius(delta, z), r) * j_pow(delta, z, r)
            self.assertLess(abs(lhs - rhs), 1e-10 * max(abs(lhs), abs(rhs)), "{} {} {} {}".format(gamma, delta, z, r))

    def test_omega_independent_of_z(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            gamma, delta = random_sl2z(rng), random_sl2z(rng)
            expected = omega(gamma, delta)
            for _ in range(10):
                z = complex(rng.uniform(-3, 3), rng.uniform(0.05, 5))
                self.assertEqual(omega(gamma, delta, z), expected)

    def test_multiplier_consistency(self):
        v = make_multiplier('eta_power', Fraction(1, 2), sl2z_context(), t=1)
        self.assertAlmostEqual(abs(v.value(T) - cmath.exp(1j * math.pi / 12)), 0, delta=1e-12)
        rng = np.random.default_rng(5)
        for _ in range(200):
            gamma, delta = random_sl2z(rng), random_sl2z(rng)
            lhs = v.value(gamma * delta)
            rhs = sigma_r(gamma, delta, v.weight) * v.value(gamma) * v.value(delta)
            self.assertLess(abs(lhs - rhs), 1e-10)

    def test_incompatible_eta_weight(self):
        with self.assertRaises(ValidationError):
            make_multiplier('eta_power', 1, t=1)
        with self.assertRaises(ValidationError):
            make_multiplier('generator_table', 0, values={'S': 1})


class TestSlash(TestCase):

    def test_slash_composition(self):
        r = 1.5
        v = make_multiplier('eta_power', r, t=3)

        def h(z):
            return np.exp(1j * np.asarray(z)) * (np.asarray(z) + 3j)

        rng = np.random.default_rng(13)
        for _ in range(50):
            gamma, delta = random_sl2z(rng, 8), random_sl2z(rng, 8)
            z = complex(rng.uniform(-1, 1), rng.uniform(0.5, 2))
            once = slash(h, gamma * delta, r, v)(z)
            twice = slash(slash(h, gamma, r, v), delta, r, v)(z)
            self.assertLess(abs(once - twice), 1e-10 * max(1.0, abs(once)))

    def test_roelcke_bridge(self):
        """
        (y^{r/2}h)|^R γ = y^{r/2}·(h|γ)
        """
        r = 1.5
        v = make_multiplier('eta_power', r, t=3)

        def h(z):
            return np.exp(1j * np.asarray(z)) * (np.asarray(z) + 3j)

        def lifted(z):
            return np.asarray(z).imag ** (r / 2) * h(z)

        rng = np.random.default_rng(17)
        for _ in range(50):
            gamma = random_sl2z(rng)
            z = complex(rng.uniform(-1, 1), rng.uniform(0.5, 2))
            roelcke = slash(lifted, gamma, r, v, 'roelcke')(z)
            classic = z.imag ** (r / 2) * slash(h, gamma, r, v)(z)
            self.assertLess(abs(roelcke - classic), 1e-10 * max(1.0, abs(classic)))
        self.assertAlmostEqual(abs(roelcke_factor(T, 0.3 + 1j, r)), 1.0, delta=1e-15)

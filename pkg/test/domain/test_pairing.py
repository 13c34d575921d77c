import logging
from unittest import TestCase

import numpy as np

from eichler.domain.automorphy import make_multiplier
from eichler.domain.common import IncompatibleWeights, DimensionMismatch
from eichler.domain.eichler import CocycleHandle, VectorCocycle, Coboundary, AuxIntegralSampler
from eichler.domain.forms import FourierForm, VectorForm, build_delta, build_eta_power
from eichler.domain.pairing import c_constant, pair_cocycle, pair_vector, petersson_direct, petersson_estimate, \
    inner_product_R
from eichler.domain.quadrature import QuadratureSpec
from eichler.domain.spectral import holomorphic_lift, weight_shift_sampler

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(message)s",
    handlers=[logging.StreamHandler()]
)

DELTA_NORM = 1.03536205680e-6
PRECISE = QuadratureSpec(1e-14, 1e-10)


def _one(z):
    return np.ones(np.shape(z), dtype=complex) if np.ndim(z) else 1 + 0j


def _identity(z):
    return np.asarray(z, dtype=complex) if np.ndim(z) else complex(z)


def _square(z):
    return np.asarray(z, dtype=complex) ** 2


def _pole(z):
    return 1 / (np.asarray(z, dtype=complex) + 2j)


class TestConstants(TestCase):

    def test_c_constant(self):
        self.assertAlmostEqual(abs(c_constant(0) + 0.5j), 0, delta=1e-15)
        self.assertAlmostEqual(abs(c_constant(2) - 2j), 0, delta=1e-14)
        self.assertAlmostEqual(abs(c_constant(0.5) - (-0.5 - 0.5j)), 0, delta=1e-15)
        # C_12 = −(i/2)(−2i)^{−10}
        self.assertAlmostEqual(abs(c_constant(-10) - 0.5j / 1024), 0, delta=1e-17)


class TestPetersson(TestCase):

    def test_delta_norm(self):
        delta = build_delta()
        estimate = petersson_estimate(delta, delta)
        self.assertLess(abs(estimate.value - DELTA_NORM), 1e-8 * DELTA_NORM)
        self.assertLess(abs(estimate.value.imag), 1e-12 * DELTA_NORM)

    def test_incompatible(self):
        with self.assertRaises(IncompatibleWeights):
            petersson_direct(build_delta(), build_eta_power(1))
        eta = build_eta_power(1)
        with self.assertRaises(IncompatibleWeights):
            pair_cocycle(eta, CocycleHandle(build_eta_power(3)))

    def test_roelcke_matches_petersson(self):
        lifted = holomorphic_lift(build_delta(), 12)
        value = inner_product_R(lifted, lifted)
        self.assertLess(abs(value - DELTA_NORM), 1e-6 * DELTA_NORM)


class TestPairing(TestCase):

    def test_duality(self):
        delta = build_delta()
        pairing = pair_cocycle(delta, CocycleHandle(delta, PRECISE), q=PRECISE)
        self.assertLess(abs(pairing.value - DELTA_NORM), 1e-6 * DELTA_NORM)
        self.assertEqual([i for i, _ in pairing.per_edge], [0, 1])
        self.assertEqual(pairing.flags, [])
        self.assertGreater(pairing.truncation_height, 6.0)
        # (i/(2C))·(f, φ) = −(y^{k/2}f, 𝒢)^R
        G = AuxIntegralSampler(CocycleHandle(delta, PRECISE))
        bridge = -inner_product_R(holomorphic_lift(delta, 12), weight_shift_sampler(G, -10))
        lhs = 1j / (2 * c_constant(-10)) * pairing.value
        self.assertLess(abs(lhs - bridge), 1e-6 * abs(bridge))

    def test_duality_eta_powers(self):
        for t in (1, 3, 26):
            eta = build_eta_power(t)
            pairing = pair_cocycle(eta, CocycleHandle(eta))
            direct = petersson_direct(eta, eta)
            self.assertLess(abs(pairing.value - direct), 1e-6 * abs(direct), "η^{}".format(t))
            self.assertLess(abs(direct.imag), 1e-9 * abs(direct))
            self.assertGreater(direct.real, 0)
        eta = build_eta_power(1)
        self.assertGreater(pair_cocycle(eta, CocycleHandle(eta)).truncation_height, 150.0)

    def test_coboundary_invariance(self):
        v = make_multiplier('trivial', -10)
        for h in (_one, _identity):
            result = pair_cocycle(build_delta(), Coboundary(h, -10, v), q=PRECISE)
            self.assertLess(abs(result.value), 1e-12)
        eta = build_eta_power(1)
        cases = [(build_delta(), h, -10, v) for h in (_square, _pole)]
        cases += [(eta, h, 1.5, eta.multiplier.conjugate(weight=1.5)) for h in (_one, _square, _pole)]
        for f, h, r, multiplier in cases:
            result = pair_cocycle(f, Coboundary(h, r, multiplier), q=PRECISE)
            scale = abs(c_constant(r)) * sum(abs(value) for _, value in result.per_edge)
            self.assertLess(abs(result.value), 1e-8 * scale + 10 * result.error_estimate,
                            "{} {}".format(f.label, h.__name__))

    def test_vector_pairing(self):
        delta = build_delta()
        v = make_multiplier('trivial', 12, rho={'S': np.eye(2), 'T': np.eye(2)})
        vector = VectorForm([delta, delta], v)
        result = pair_vector(vector, VectorCocycle(vector))
        scalar = pair_cocycle(delta, CocycleHandle(delta))
        self.assertLess(abs(result.value - 2 * scalar.value), 1e-6 * abs(scalar.value))
        with self.assertRaises(DimensionMismatch):
            pair_cocycle(vector, VectorCocycle(vector))
        with self.assertRaises(DimensionMismatch):
            pair_vector(vector, CocycleHandle(delta))

    def test_vector_orthogonal_components(self):
        delta = build_delta()
        v = make_multiplier('trivial', 12, rho={'S': np.eye(2), 'T': np.eye(2)})
        zero = FourierForm.zero(12, make_multiplier('trivial', 12), delta.truncation)
        result = pair_vector(VectorForm([delta, zero], v), VectorCocycle(VectorForm([zero, delta], v)))
        self.assertLess(abs(result.value), 1e-6 * DELTA_NORM)
        scalar = pair_vector(delta, CocycleHandle(delta))
        self.assertEqual(scalar.value, pair_cocycle(delta, CocycleHandle(delta)).value)

    def test_weight_shift_bridge(self):
        # y^{(r+2)/2}·conj(∂G/∂z̄) = (2i)^{−r}·y^{k/2}·g
        delta = build_delta()
        sampler = AuxIntegralSampler(CocycleHandle(delta))
        for z in (0.1 + 1.1j, -0.4 + 0.95j, 0.2 + 2.5j):
            shifted = z.imag ** -4 * np.conj(sampler.d_zbar(z))
            expected = (2j) ** 10 * z.imag ** 6 * delta(z)
            self.assertLess(abs(shifted - expected), 1e-12 * abs(expected))
        self.assertAlmostEqual(abs(1j / (2 * c_constant(-10)) - 1024), 0, delta=1e-9)

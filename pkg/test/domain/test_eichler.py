import logging
from unittest import TestCase

import mpmath
import numpy as np

from eichler.domain.automorphy import Mat2, S, T, slash, make_multiplier, random_sl2z
from eichler.domain.common import ValidationError, IncompatibleWeights, ResonantFrequency, NonUnitary, Divergent, \
    UnsupportedGroup
from eichler.domain.eichler import CocycleHandle, VectorCocycle, Coboundary, AuxIntegralSampler, FrequencySeries, \
    aux_integral, cocycle_eval_direct, polynomial_extract, polynomial_cocycle, polynomial_slash, \
    one_sided_average_solve, fit_growth_bound, parabolic_witness, cocycle_condition_residual
from eichler.domain.forms import FourierForm, VectorForm, build_delta, build_eta_power
from eichler.domain.quadrature import QuadratureSpec
from eichler.domain.spectral import FDStencil

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(message)s",
    handlers=[logging.StreamHandler()]
)

TIGHT = QuadratureSpec(1e-16, 1e-12)


def aux_oracle(g: FourierForm, r: float, z: complex) -> complex:
    """
    逐项的闭式：−∫_z^{i∞} e^{iβτ}(τ − z̄)^{−r}dτ = −i·e^{−iπr/2}·β^{r−1}·Γ(1−r, 2βy)·e^{iβz̄}
    """
    with mpmath.workdps(30):
        total = mpmath.mpc(0)
        for n, a, beta in g.nonzero_terms():
            total += a * 1j * mpmath.exp(-1j * mpmath.pi * r / 2) * mpmath.mpf(beta) ** (r - 1) \
                     * mpmath.gammainc(1 - r, 2 * beta * z.imag) * mpmath.exp(1j * beta * z.conjugate())
        return complex(-total).conjugate()


def _one(z):
    return np.ones(np.shape(z), dtype=complex) if np.ndim(z) else 1 + 0j


class TestAuxIntegral(TestCase):

    def test_delta_closed_form(self):
        delta = build_delta()
        for z in (0.3 + 1.2j, -0.2 + 0.7j):
            value = aux_integral(delta, -10, z, TIGHT).value
            exact = aux_oracle(delta, -10.0, z)
            self.assertLess(abs(value - exact), 1e-9 * abs(exact))

    def test_eta_closed_form(self):
        eta = build_eta_power(1)
        z = 0.15 + 1.1j
        value = aux_integral(eta, 1.5, z, TIGHT).value
        exact = aux_oracle(eta, 1.5, z)
        self.assertLess(abs(value - exact), 1e-9 * abs(exact))

    def test_eta_high_in_cusp(self):
        eta = build_eta_power(1)
        for z in (0.1 + 130j, -0.3 + 152.8j):
            estimate = aux_integral(eta, 1.5, z, TIGHT)
            exact = aux_oracle(eta, 1.5, z)
            self.assertLess(abs(estimate.value - exact), 1e-9 * abs(exact))
            self.assertLess(estimate.error, 1e-6 * abs(exact))

    def test_kinked_path(self):
        delta = build_delta()
        z = 0.35 + 0.9j
        vertical = aux_integral(delta, -10, z, TIGHT).value
        kinked = aux_integral(delta, -10, z, TIGHT, path='kinked').value
        self.assertLess(abs(vertical - kinked), 1e-8 * abs(vertical))

    def test_low_point(self):
        delta = build_delta()
        z = 0.2 + 0.15j
        c = CocycleHandle(delta, TIGHT)
        value = c.aux(z).value
        exact = aux_oracle(build_delta(128), -10.0, z)
        self.assertLess(abs(value - exact), 1e-6 * abs(exact))

    def test_errors(self):
        with self.assertRaises(IncompatibleWeights):
            aux_integral(build_delta(), 0, 1j)
        with self.assertRaises(ValidationError):
            aux_integral(build_delta(), -10, 1j, path='spiral')
        with self.assertRaises(ValidationError):
            aux_integral(build_delta(), -10, -1j)
        eisenstein = FourierForm(4, make_multiplier('trivial', 4), [1, 240, 2160], label="e4")
        with self.assertRaises(ValidationError):
            CocycleHandle(eisenstein)

    def test_d_zbar(self):
        c = CocycleHandle(build_delta(), TIGHT)
        sampler = AuxIntegralSampler(c)
        z = 0.1 + 1.1j
        closed = sampler.d_zbar(z)
        numeric = FDStencil().d_zbar(sampler, z)
        self.assertLess(abs(closed - numeric), 1e-5 * abs(closed))


class TestCocycle(TestCase):

    def _cocycle_condition(self, form):
        c = CocycleHandle(form)
        rng = np.random.default_rng(29)
        for _ in range(50):
            gamma, delta = random_sl2z(rng, 20), random_sl2z(rng, 20)
            z = complex(rng.uniform(-1, 1), rng.uniform(0.5, 5))
            residual, scale = cocycle_condition_residual(c, gamma, delta, z)
            self.assertLessEqual(residual, 1e-7 * scale + 1e-14, "{} {} {}".format(gamma, delta, z))

    def test_cocycle_condition_delta(self):
        self._cocycle_condition(build_delta())

    def test_cocycle_condition_eta(self):
        self._cocycle_condition(build_eta_power(1))

    def test_translation_period_vanishes(self):
        c = CocycleHandle(build_delta())
        z = 0.2 + 1.1j
        self.assertLess(abs(c(T, z)), 1e-7 * abs(c(S, z)))

    def test_direct_matches_reduction(self):
        for form in (build_delta(), build_eta_power(1)):
            c = CocycleHandle(form, TIGHT)
            for gamma in (S, Mat2(2, 1, 1, 1)):
                z = -0.1 + 1.4j
                reduced = c(gamma, z)
                direct = cocycle_eval_direct(c, gamma, z)
                self.assertLess(abs(reduced - direct), 1e-7 * abs(reduced))

    def test_vector_cocycle(self):
        delta = build_delta()
        v = make_multiplier('trivial', 12, rho={'S': np.eye(2), 'T': np.eye(2)})
        c = VectorCocycle(VectorForm([delta, delta.scaled(2)], v))
        value = c(S, 0.1 + 1.2j)
        scalar = CocycleHandle(delta)(S, 0.1 + 1.2j)
        self.assertEqual(value.shape, (2,))
        self.assertLess(abs(value[1] - 2 * scalar), 1e-8 * abs(scalar))
        swap = np.array([[0, 1], [1, 0]])
        w = make_multiplier('trivial', 12, rho={'S': swap, 'T': swap})
        with self.assertRaises(UnsupportedGroup):
            VectorCocycle(VectorForm([delta, delta], w))

    def test_coboundary(self):
        d1 = Coboundary(_one, -10, make_multiplier('trivial', -10))
        z = 0.3 + 0.8j
        self.assertAlmostEqual(abs(d1(S, z) - (z ** 10 - 1)), 0, delta=1e-12)
        self.assertAlmostEqual(abs(d1(T, z)), 0, delta=1e-15)
        witness, residual = parabolic_witness(d1)
        self.assertIs(witness, _one)
        self.assertEqual(residual, 0.0)
        bound = fit_growth_bound(d1, S)
        for w in (0.5 + 3j, -1.5 + 0.1j, 2.0 + 1.0j):
            self.assertGreaterEqual(bound.bound(w), abs(d1(S, w)))

    def test_parabolic_witness(self):
        _, residual = parabolic_witness(CocycleHandle(build_delta()))
        self.assertLess(residual, 1e-8)


class TestPeriodPolynomial(TestCase):

    def test_delta_period_polynomial(self):
        c = CocycleHandle(build_delta(), TIGHT)
        coef, residual = polynomial_extract(c, S)
        self.assertEqual(coef.shape, (11,))
        scale = float(np.max(np.abs(coef)))
        self.assertLess(residual, 1e-6 * max(1.0, scale))
        # φ(S)|S + φ(S) = φ(−I) = 0
        relation = polynomial_slash(coef, S, -10, c.multiplier) + coef
        self.assertLess(float(np.max(np.abs(relation))), 1e-6 * scale)

    def test_polynomial_cocycle(self):
        c = CocycleHandle(build_delta(), TIGHT)
        p = polynomial_cocycle(c)
        gamma = Mat2(2, 1, 1, 1)
        z = 0.3 + 1.5j
        self.assertLess(abs(p(gamma, z) - c(gamma, z)), 1e-6 * abs(c(gamma, z)))
        self.assertLess(float(np.max(np.abs(p.coefficients(T)))), 1e-6 * float(np.max(np.abs(p.entries['S']))))

    def test_non_integer_weight(self):
        with self.assertRaises(ValidationError):
            polynomial_extract(CocycleHandle(build_eta_power(1)), S)


class TestOneSidedAverage(TestCase):
    grid = [complex(x, 1.0) for x in np.linspace(-1, 1, 11)]

    def test_scalar_fourier(self):
        eps = np.exp(0.7j)
        g = FrequencySeries({0.5: 1.0, 1.25: 0.3 - 0.2j})
        f = one_sided_average_solve(g, eps, 1.0, 'fourier')
        for z in self.grid:
            self.assertLess(abs(np.conj(eps) * f(z + 1) - f(z) - g(z)), 1e-12)

    def test_scalar_geometric(self):
        eps = np.exp(-1.1j)
        g = lambda z: np.exp(-np.asarray(z))
        f = one_sided_average_solve(g, eps, 1.0, 'geometric')
        for z in self.grid:
            self.assertLess(abs(np.conj(eps) * f(z + 1) - f(z) - g(z)), 1e-12)

    def test_unitary_matrix(self):
        theta = 0.4
        u = np.exp(0.3j) * np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
        g = FrequencySeries({0.5: [1.0, 0.5j], 1.25: [0.2, -1.0]})
        f = one_sided_average_solve(g, u, 1.0, 'fourier')
        for z in self.grid:
            residual = u.conj().T @ f(z + 1) - f(z) - g(z)
            self.assertLess(float(np.max(np.abs(residual))), 1e-12)

    def test_closed_forms(self):
        g = FrequencySeries({1.0: 1.0})
        f = one_sided_average_solve(g, -1.0, 1.0, 'fourier')
        rho = np.exp(2j * np.pi / 3)
        h = one_sided_average_solve(g, rho, 1.0, 'fourier')
        for z in self.grid:
            self.assertLess(abs(f(z) + np.exp(2j * np.pi * z) / 2), 1e-12)
            self.assertLess(abs(h(z) + np.exp(2j * np.pi * z) / (1 - np.conj(rho))), 1e-12)
        u = np.diag([-1.0, rho])
        vector = FrequencySeries({1.0: [1.0, 1.0]})
        solved = one_sided_average_solve(vector, u, 1.0, 'fourier')
        for z in self.grid:
            residual = u.conj().T @ solved(z + 1) - solved(z) - vector(z)
            self.assertLess(float(np.max(np.abs(residual))), 1e-10)

    def test_failures(self):
        with self.assertRaises(ResonantFrequency):
            one_sided_average_solve(FrequencySeries({1.0: 1.0}), 1.0, 1.0, 'fourier')
        with self.assertRaises(NonUnitary):
            one_sided_average_solve(FrequencySeries({0.5: 1.0}), 1.5, 1.0, 'fourier')
        with self.assertRaises(NonUnitary):
            one_sided_average_solve(FrequencySeries({0.5: [1.0, 0.0]}), np.array([[1, 1], [0, 1]]), 1.0, 'fourier')
        with self.assertRaises(Divergent):
            one_sided_average_solve(_one, 0.5 + 0.5j * np.sqrt(3), 1.0, 'geometric')
        with self.assertRaises(ValidationError):
            one_sided_average_solve(_one, 1.0, 0.0)

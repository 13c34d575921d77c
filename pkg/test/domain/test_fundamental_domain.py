import logging
from unittest import TestCase

import numpy as np

from eichler.domain.automorphy import INFINITY, mobius, S
from eichler.domain.common import DomainValidationError, ValidationError
from eichler.domain.fundamental_domain import sl2z_domain, validate_side_pairing, boundary_decomposition, \
    domain_from_dict, edge_path, membership, reduce_to_domain, RHO

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(message)s",
    handlers=[logging.StreamHandler()]
)


class TestSidePairing(TestCase):

    def test_sl2z_domain(self):
        domain = sl2z_domain()
        self.assertTrue(validate_side_pairing(domain))
        self.assertEqual(boundary_decomposition(domain), [(0, 3), (1, 2)])
        self.assertEqual(domain.edges[1].pairing, S)

    def test_round_trip(self):
        domain = domain_from_dict(sl2z_domain().to_dict())
        self.assertEqual(len(domain.edges), 4)
        self.assertIs(domain.vertices[0].location, INFINITY)
        self.assertAlmostEqual(abs(domain.vertices[1].location - RHO), 0, delta=1e-15)

    def test_broken_pairing(self):
        data = sl2z_domain().to_dict()
        data["edges"][0]["pairing"] = [1, 2, 0, 1]
        with self.assertRaises(DomainValidationError) as ctx:
            domain_from_dict(data)
        self.assertTrue(len(ctx.exception.violations) > 0)

    def test_fixed_point_partner(self):
        data = sl2z_domain().to_dict()
        data["edges"][1]["partner"] = 1
        with self.assertRaises(DomainValidationError):
            domain_from_dict(data)

    def test_representatives(self):
        data = sl2z_domain().to_dict()
        data["representatives"] = [0, 3]
        with self.assertRaises(DomainValidationError):
            domain_from_dict(data)


class TestEdges(TestCase):

    def test_edge_path(self):
        edges = sl2z_domain().edges
        self.assertIs(edge_path(edges[0], 0), INFINITY)
        self.assertAlmostEqual(abs(edge_path(edges[0], 1) - RHO), 0, delta=1e-15)
        self.assertGreater(edge_path(edges[0], 0.2).imag, edge_path(edges[0], 0.8).imag)
        self.assertIs(edge_path(edges[3], 1), INFINITY)
        self.assertAlmostEqual(abs(edge_path(edges[1], 0) - RHO), 0, delta=1e-14)
        self.assertAlmostEqual(abs(edge_path(edges[1], 1) - 1j), 0, delta=1e-14)
        self.assertAlmostEqual(abs(edge_path(edges[1], 0.5)), 1.0, delta=1e-14)
        with self.assertRaises(ValidationError):
            edge_path(edges[1], 1.5)


class TestReduction(TestCase):

    def test_membership(self):
        self.assertTrue(membership(2j))
        self.assertTrue(membership(RHO))
        self.assertTrue(membership(0.5 + 1j))
        self.assertFalse(membership(0.6 + 1j))
        self.assertFalse(membership(0.1 + 0.5j))
        with self.assertRaises(ValidationError):
            membership(0.3 - 1j)

    def test_reduce(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            z = complex(rng.uniform(-3, 3), 10 ** rng.uniform(-4, 1))
            gamma, w = reduce_to_domain(z)
            self.assertTrue(membership(w, eps=1e-9))
            self.assertLess(abs(mobius(gamma, z) - w), 1e-8 * max(1.0, abs(w)))
            self.assertTrue(gamma.is_integral)

    def test_reduce_inside(self):
        gamma, w = reduce_to_domain(0.1 + 2j)
        self.assertEqual(w, 0.1 + 2j)
        with self.assertRaises(ValidationError):
            reduce_to_domain(1.0)

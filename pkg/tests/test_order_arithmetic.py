import os
import random
import unittest
from dataclasses import replace
from fractions import Fraction

from src.errors import FactorizationError, NoXiError
from src.norm_enumeration import represent_prime
from src.order_arithmetic import (
    choose_xi,
    is_irreducible,
    is_primary,
    localized_unit_factor,
    make_primary,
    residue_units_r,
    right_ideal_generator,
    right_ideal_lattice,
    right_unit_property,
    sphere_count,
    two_in_ideal,
    unit_group,
    xi_candidates,
    zerlegungssatz_factor,
)
from src.quaternion_core import (
    FAMILIES,
    ONE,
    Quaternion,
    canonical_sign,
    conjugate,
    is_primitive,
    multiply,
    norm,
    order_lookup,
    product,
)

SLOW = os.getenv('SHIMURA_SLOW_TESTS') == '1'

G1 = Quaternion.of(1, -3, -1, 0)
G5 = Quaternion.of(3, -1, 1, 0)


class TestUnits(unittest.TestCase):
    def test_unit_group_orders(self):
        for D, N in FAMILIES:
            O = order_lookup(D, N)
            self.assertEqual(unit_group(O).order, O.unit_group_order)

    def test_hurwitz_units(self):
        units = set(unit_group(order_lookup(2, 1)).elements)
        for u in [ONE, Quaternion.of(0, 1), Quaternion.of(0, 0, 1), Quaternion.of(0, 0, 0, 1),
                  Quaternion.of('1/2', '1/2', '1/2', '1/2'), Quaternion.of('1/2', '-1/2', '1/2', '-1/2')]:
            self.assertIn(u, units)

    def test_level_two_units(self):
        U = unit_group(order_lookup(3, 2))
        self.assertEqual(U.elements, (Quaternion.of(0, '1/2', '-1/2', 0), ONE))
        self.assertEqual(len(U.with_signs()), 4)

    def test_sphere_count(self):
        # Hurwitz: 24 * sigma(p) elements of odd prime norm p
        self.assertEqual(sphere_count(order_lookup(2, 1), 5), 144)
        self.assertEqual(sphere_count(order_lookup(3, 2), 13), 4 * 14)


class TestRightUnitProperty(unittest.TestCase):
    def test_residue_units(self):
        self.assertEqual(len(residue_units_r(order_lookup(2, 1), ONE)), 1)
        self.assertEqual(len(residue_units_r(order_lookup(2, 1), Quaternion.of(2))), 12)
        O = order_lookup(3, 2)
        self.assertEqual(len(residue_units_r(O, O.xi)), 2)

    def test_table_rows(self):
        for D, N in FAMILIES:
            O = order_lookup(D, N)
            self.assertTrue(right_unit_property(O, O.xi), f"(D,N)=({D},{N})")

    def test_failures(self):
        self.assertFalse(right_unit_property(order_lookup(2, 1), ONE))
        self.assertFalse(right_unit_property(order_lookup(3, 2), Quaternion.of(2)))

    def test_choose_xi(self):
        O = order_lookup(3, 2)
        self.assertEqual(choose_xi(O), Quaternion.of('-1/2', '-1/2', '-1/2', '1/2'))
        self.assertEqual(choose_xi(order_lookup(2, 1)), Quaternion.of(2))
        self.assertEqual(choose_xi(order_lookup(2, 9)), ONE)
        self.assertEqual(choose_xi(order_lookup(2, 3)), Quaternion.of(0, -1, -1))

    def test_search_without_table_xi(self):
        expected = {
            (2, 1): Quaternion.of(-2),
            (2, 3): Quaternion.of(0, -1, -1),
            (3, 2): Quaternion.of('-1/2', -1, 0, '-1/2'),
        }
        for (D, N), xi in expected.items():
            O = order_lookup(D, N)
            self.assertEqual(choose_xi(O, prefer_table=False), xi, f"(D,N)=({D},{N})")

        for D, N in FAMILIES:
            O = order_lookup(D, N)
            n, passing = xi_candidates(O)
            self.assertEqual(n, O.xi_norm, f"(D,N)=({D},{N})")
            self.assertIn(O.xi, passing)
            self.assertEqual(passing, sorted(passing))
            for xi in passing:
                self.assertEqual(norm(xi, O.algebra), n)
                self.assertTrue(two_in_ideal(O, xi))
                self.assertTrue(right_unit_property(O, xi))
            # a table row whose xi does not qualify falls back to the search
            untabulated = replace(O, xi=Quaternion.of(0, 0, 0, 0))
            self.assertEqual(choose_xi(untabulated), passing[0])

    def test_search_without_xi(self):
        with self.assertRaises(NoXiError):
            xi_candidates(replace(order_lookup(2, 1), level=5))


class TestIdeals(unittest.TestCase):
    def test_hurwitz_ideal(self):
        O = order_lookup(2, 1)
        pi = right_ideal_generator(O, [Quaternion.of(2), Quaternion.of(1, 1)])
        self.assertEqual(norm(pi, O.algebra), 2)
        self.assertEqual(right_ideal_lattice(O, [pi]), right_ideal_lattice(O, [Quaternion.of(2), Quaternion.of(1, 1)]))

    def test_principal_input(self):
        O = order_lookup(3, 2)
        alpha = multiply(G1, G5, O.algebra)
        pi = right_ideal_generator(O, [alpha])
        self.assertEqual(norm(pi, O.algebra), 169)
        self.assertEqual(right_ideal_lattice(O, [pi]), right_ideal_lattice(O, [alpha]))

    def test_prime_plus_element(self):
        O = order_lookup(3, 1)
        alpha = represent_prime(O, O.xi, 13).all_elements[0]
        beta = multiply(alpha, Quaternion.of(1, 1), O.algebra)
        pi = right_ideal_generator(O, [Quaternion.of(13), beta])
        self.assertEqual(norm(pi, O.algebra), 13)

    def test_irreducible(self):
        O = order_lookup(3, 2)
        self.assertTrue(is_irreducible(G1, O))
        self.assertFalse(is_irreducible(Quaternion.of(13), O))
        hurwitz = order_lookup(2, 1)
        self.assertFalse(is_irreducible(multiply(Quaternion.of(1, 1), Quaternion.of(1, 0, 1), hurwitz.algebra), hurwitz))

    def test_prime_norm_elements_are_irreducible(self):
        O = order_lookup(3, 2)
        for alpha in represent_prime(O, O.xi, 13).all_elements:
            self.assertTrue(is_primitive(alpha, O))
            self.assertTrue(is_irreducible(alpha, O))


class TestFactorisation(unittest.TestCase):
    def setUp(self):
        self.O = order_lookup(3, 2)
        self.alg = self.O.algebra
        self.xi = self.O.xi

    def assertSameUpToSign(self, x, y):
        self.assertEqual(canonical_sign(x), canonical_sign(y))

    def test_make_primary(self):
        u = Quaternion.of(0, '1/2', '-1/2', 0)
        pi, v = make_primary(multiply(G1, u, self.alg), self.O, self.xi)
        self.assertTrue(is_primary(pi, self.O, self.xi))
        self.assertSameUpToSign(pi, G1)
        self.assertEqual(norm(v, self.alg), 1)

    def test_prime_norm(self):
        self.assertEqual(zerlegungssatz_factor(G1, self.O, self.xi), [G1])

    def test_two_factors(self):
        alpha = multiply(G1, G5, self.alg)
        factors = zerlegungssatz_factor(alpha, self.O, self.xi)
        self.assertEqual(len(factors), 2)
        self.assertSameUpToSign(factors[0], G1)
        self.assertSameUpToSign(factors[1], G5)
        self.assertSameUpToSign(product(factors, self.alg), alpha)

    def test_rejects_non_primitive(self):
        with self.assertRaises(FactorizationError):
            zerlegungssatz_factor(Quaternion.of(13), self.O, self.xi)

    def test_rejects_non_primary(self):
        u = Quaternion.of(0, '1/2', '-1/2', 0)
        with self.assertRaises(FactorizationError):
            zerlegungssatz_factor(multiply(G1, u, self.alg), self.O, self.xi)

    def _round_trip(self, trials, seed):
        rng = random.Random(seed)
        pool = list(represent_prime(self.O, self.xi, 5).all_elements) + list(represent_prime(self.O, self.xi, 13).all_elements)
        checked = 0
        for _ in range(trials):
            factors = [rng.choice(pool) for _ in range(rng.randint(2, 4))]
            alpha = product(factors, self.alg)
            if not is_primitive(alpha, self.O):
                continue
            primes = [int(norm(f, self.alg)) for f in factors]
            result = zerlegungssatz_factor(alpha, self.O, self.xi, primes)
            self.assertEqual(len(result), len(factors))
            for got, expected in zip(result, factors):
                self.assertSameUpToSign(got, expected)
            self.assertSameUpToSign(product(result, self.alg), alpha)
            checked += 1
        self.assertGreater(checked, 0)

    def test_round_trip(self):
        self._round_trip(40, seed=3)

    @unittest.skipUnless(SLOW, "set SHIMURA_SLOW_TESTS=1")
    def test_round_trip_exhaustive(self):
        self._round_trip(1000, seed=11)


class TestLocalizedUnits(unittest.TestCase):
    def setUp(self):
        self.O = order_lookup(3, 2)
        self.alg = self.O.algebra

    def test_power_of_p(self):
        self.assertEqual(localized_unit_factor(Quaternion.of(13), 13, self.O, self.O.xi), (1, [], ONE))

    def test_unit(self):
        u = Quaternion.of(0, '1/2', '-1/2', 0)
        self.assertEqual(localized_unit_factor(u, 13, self.O, self.O.xi), (0, [], u))

    def test_quotient_by_p(self):
        alpha = multiply(G1, G5, self.alg).scale(Fraction(1, 13))
        n, betas, epsilon = localized_unit_factor(alpha, 13, self.O, self.O.xi)
        self.assertEqual(n, -1)
        self.assertEqual(len(betas), 2)
        for beta in betas:
            self.assertEqual(norm(beta, self.alg), 13)
        rebuilt = product(betas + [epsilon], self.alg).scale(Fraction(13) ** n)
        self.assertEqual(canonical_sign(rebuilt), canonical_sign(alpha))
        # no adjacent pair collapses to p
        self.assertNotEqual(canonical_sign(betas[1]), canonical_sign(conjugate(betas[0])))

    def test_not_a_p_unit(self):
        with self.assertRaises(FactorizationError):
            localized_unit_factor(Quaternion.of(2), 13, self.O, self.O.xi)


if __name__ == '__main__':
    unittest.main()

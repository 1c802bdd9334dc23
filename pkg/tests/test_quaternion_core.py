import random
import unittest
from dataclasses import replace
from fractions import Fraction

from src.errors import DefinitenessError, NoXiError, UnsupportedFamilyError
from src.quaternion_core import (
    FAMILIES,
    ONE,
    Quaternion,
    conjugate,
    coords_in_order,
    format_quaternion,
    hilbert_symbol,
    invariants_of,
    is_member,
    is_positive_definite,
    is_primitive,
    make_algebra,
    multiply,
    norm,
    normic_form,
    normic_value,
    order_lookup,
    parse_quaternion,
    reduced_discriminant,
    trace,
)


def random_quaternion(rng):
    return Quaternion.of(*(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(4)))


class TestAlgebra(unittest.TestCase):
    def test_discriminants(self):
        self.assertEqual(make_algebra(-1, -1).discriminant, 2)
        self.assertEqual(make_algebra(-1, -3).discriminant, 3)
        self.assertEqual(make_algebra(-2, -5).discriminant, 5)
        self.assertEqual(make_algebra(-2, -13).discriminant, 13)

    def test_indefinite_rejected(self):
        with self.assertRaises(DefinitenessError):
            make_algebra(1, -1)
        with self.assertRaises(DefinitenessError):
            make_algebra(-1, 0)

    def test_hilbert_symbol(self):
        self.assertEqual(hilbert_symbol(-1, -1, 2), -1)
        self.assertEqual(hilbert_symbol(-1, -1, 3), 1)
        self.assertEqual(hilbert_symbol(-1, -3, 3), -1)

    def test_relations(self):
        alg = make_algebra(-1, -3)
        i, j, k = Quaternion.of(0, 1), Quaternion.of(0, 0, 1), Quaternion.of(0, 0, 0, 1)
        self.assertEqual(multiply(i, j, alg), k)
        self.assertEqual(multiply(j, i, alg), -k)
        self.assertEqual(multiply(k, k, alg), Quaternion.of(-3))
        self.assertEqual(multiply(i, i, alg), Quaternion.of(-1))
        self.assertEqual(multiply(j, j, alg), Quaternion.of(-3))

    def test_invariants(self):
        alg = make_algebra(-1, -3)
        q = Quaternion.of(-1, 0, 0, 2)
        self.assertEqual(invariants_of(q, alg), (Quaternion.of(-1, 0, 0, -2), 13, -2))
        self.assertEqual(invariants_of(ONE, alg), (ONE, 1, 2))

        hurwitz = make_algebra(-1, -1)
        u = Quaternion.of('1/2', '1/2', '1/2', '1/2')
        self.assertEqual(invariants_of(u, hurwitz), (Quaternion.of('1/2', '-1/2', '-1/2', '-1/2'), 1, 1))

    def test_norm_is_multiplicative(self):
        rng = random.Random(7)
        for a, b in [(-1, -1), (-1, -3), (-2, -5), (-2, -13)]:
            alg = make_algebra(a, b)
            for _ in range(50):
                q1, q2 = random_quaternion(rng), random_quaternion(rng)
                self.assertEqual(norm(multiply(q1, q2, alg), alg), norm(q1, alg) * norm(q2, alg))
                self.assertEqual(conjugate(multiply(q1, q2, alg)), multiply(conjugate(q2), conjugate(q1), alg))
                self.assertEqual(conjugate(conjugate(q1)), q1)
                self.assertEqual(q1 + conjugate(q1), Quaternion.of(trace(q1)))
                self.assertEqual(multiply(q1, conjugate(q1), alg), Quaternion.of(norm(q1, alg)))


class TestOrderTable(unittest.TestCase):
    def test_lookup_3_2(self):
        O = order_lookup(3, 2)
        self.assertEqual(O.D, 3)
        self.assertEqual(O.N, 2)
        self.assertEqual(O.basis, (
            Quaternion.of(1), Quaternion.of(0, 2), Quaternion.of(0, '-1/2', '1/2'), Quaternion.of('1/2', -1, 0, '1/2')))
        self.assertEqual(O.xi, Quaternion.of('-1/2', '-1/2', '-1/2', '1/2'))
        self.assertEqual(O.xi_norm, 2)
        self.assertEqual(O.unit_group_order, 2)

    def test_lookup_other_rows(self):
        self.assertEqual(order_lookup(2, 1).xi, Quaternion.of(2))
        self.assertEqual(order_lookup(2, 1).xi_norm, 4)
        self.assertEqual(order_lookup(2, 1).unit_group_order, 12)
        self.assertEqual(order_lookup(13, 1).xi, ONE)
        self.assertEqual(order_lookup(13, 1).unit_group_order, 1)

    def test_level_three_row(self):
        O = order_lookup(2, 3)
        self.assertEqual(O.xi, Quaternion.of(0, -1, -1))
        self.assertEqual(coords_in_order(O.xi, O), (0, -1, -1, 0))
        self.assertEqual(O.xi_norm, 2)
        # -i + k is not in the order
        self.assertFalse(is_member(Quaternion.of(0, -1, 0, 1), O))

    def test_level_eleven_row(self):
        O = order_lookup(2, 11)
        self.assertEqual(O.basis[3], Quaternion.of('1/2', '-7/2', '1/2', '1/2'))
        self.assertEqual(reduced_discriminant(O), 22)
        for e1 in O.basis:
            for e2 in O.basis:
                self.assertTrue(is_member(multiply(e1, e2, O.algebra), O))
        # with e3 = (1 - 3i + j + k)/2 the basis is not closed
        e2, e3 = Quaternion.of(0, -10, 1), Quaternion.of('1/2', '-3/2', '1/2', '1/2')
        misprinted = (O.basis[0], O.basis[1], e2, e3)
        self.assertFalse(is_member(multiply(e2, e3, O.algebra), replace(O, basis=misprinted)))

    def test_lookup_errors(self):
        with self.assertRaises(NoXiError):
            order_lookup(7, 1)
        with self.assertRaises(NoXiError):
            order_lookup(2, 5)
        with self.assertRaises(UnsupportedFamilyError):
            order_lookup(11, 1)
        self.assertTrue(issubclass(NoXiError, UnsupportedFamilyError))

    def test_every_order_is_consistent(self):
        self.assertEqual(len(FAMILIES), 10)
        for D, N in FAMILIES:
            O = order_lookup(D, N)
            self.assertEqual(reduced_discriminant(O), D * N)
            self.assertTrue(is_positive_definite(normic_form(O)))
            self.assertTrue(is_member(O.xi, O))
            for e1 in O.basis:
                for e2 in O.basis:
                    self.assertTrue(is_member(multiply(e1, e2, O.algebra), O))

    def test_coordinates(self):
        O = order_lookup(3, 1)
        self.assertEqual(coords_in_order(ONE, O), (1, 0, 0, 0))
        self.assertEqual(coords_in_order(Quaternion.of(0, 0, 1), O), (0, -1, 2, 0))
        self.assertEqual(coords_in_order(Quaternion.of(0, '1/2'), O), (0, Fraction(1, 2), 0, 0))
        self.assertFalse(is_member(Quaternion.of(0, '1/2'), O))
        self.assertTrue(is_primitive(Quaternion.of(0, 0, 1), O))
        self.assertFalse(is_primitive(Quaternion.of(2), O))

    def test_normic_form(self):
        for D, N in FAMILIES:
            O = order_lookup(D, N)
            self.assertEqual(normic_value((1, 0, 0, 0), O), 1)
            gram = normic_form(O)
            for r in range(4):
                for c in range(4):
                    self.assertEqual(gram[r][c], gram[c][r])

    def test_format_and_parse(self):
        xi = order_lookup(3, 2).xi
        self.assertEqual(format_quaternion(xi), '-1/2 - 1/2*i - 1/2*j + 1/2*k')
        self.assertEqual(format_quaternion(Quaternion.of(-1, 0, 0, 2)), '-1 + 2*k')
        self.assertEqual(format_quaternion(Quaternion.of(0)), '0')
        self.assertEqual(parse_quaternion('-1/2, -1/2, -1/2, 1/2'), xi)
        with self.assertRaises(ValueError):
            parse_quaternion('1,2,3')


if __name__ == '__main__':
    unittest.main()

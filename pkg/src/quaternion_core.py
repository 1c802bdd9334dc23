"""
Quaternion Core Module

Exact arithmetic in definite rational quaternion algebras H = (a,b / Q)
and the fixed Eichler orders with one-sided class number one:
1. Algebra presentations (i^2 = a, j^2 = b, k = ij) and their discriminant
2. Products, conjugate, reduced norm and trace
3. The built-in table of orders, with load-time consistency gates
4. Coordinates in an order basis, membership, primitivity, normic form
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

from sympy import factorint, legendre_symbol

from src.errors import DefinitenessError, InvariantError, NoXiError, OrderDataError, UnsupportedFamilyError
from src.lattice import (
    leading_minors,
    rational_det,
    rational_inverse,
    vector_times_matrix,
)


@dataclass(frozen=True)
class AlgebraData:
    """Presentation (a,b / Q) with i^2=a, j^2=b, k=ij=-ji, k^2=-ab"""
    a: int
    b: int
    discriminant: int


@dataclass(frozen=True, order=True)
class Quaternion:
    """x0 + x1*i + x2*j + x3*k with exact rational coordinates"""
    x0: Fraction
    x1: Fraction
    x2: Fraction
    x3: Fraction

    @classmethod
    def of(cls, *values) -> 'Quaternion':
        coords = [Fraction(v) for v in values] + [Fraction(0)] * (4 - len(values))
        return cls(*coords)

    @classmethod
    def scalar(cls, value) -> 'Quaternion':
        return cls.of(value)

    @property
    def coords(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.x0, self.x1, self.x2, self.x3)

    def __add__(self, other: 'Quaternion') -> 'Quaternion':
        return Quaternion(*(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: 'Quaternion') -> 'Quaternion':
        return Quaternion(*(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> 'Quaternion':
        return Quaternion(*(-a for a in self.coords))

    def scale(self, factor) -> 'Quaternion':
        factor = Fraction(factor)
        return Quaternion(*(a * factor for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)


ONE = Quaternion.of(1)


@dataclass(frozen=True)
class EichlerOrderData:
    algebra: AlgebraData
    level: int
    basis: Tuple[Quaternion, Quaternion, Quaternion, Quaternion]
    xi: Quaternion
    unit_group_order: int
    class_number: int = 1

    @property
    def D(self) -> int:
        return self.algebra.discriminant

    @property
    def N(self) -> int:
        return self.level

    @property
    def xi_norm(self) -> Fraction:
        return norm(self.xi, self.algebra)


# --- algebra ------------------------------------------------------------------

def hilbert_symbol(a: int, b: int, p: int) -> int:
    """(a,b)_p for a prime p and nonzero integers a, b"""
    alpha, u = _split_power(a, p)
    beta, v = _split_power(b, p)
    if p == 2:
        def eps(z):
            return ((z - 1) // 2) % 2

        def omega(z):
            return ((z * z - 1) // 8) % 2

        exponent = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if exponent % 2 else 1

    sign = (-1) ** (alpha * beta * ((p - 1) // 2))
    return sign * legendre_symbol(u % p, p) ** beta * legendre_symbol(v % p, p) ** alpha


def _split_power(n: int, p: int) -> Tuple[int, int]:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e, n


def make_algebra(a: int, b: int) -> AlgebraData:
    if a >= 0 or b >= 0:
        raise DefinitenessError(f"Presentation ({a},{b}) is not definite: need a<0 and b<0")

    primes = {2} | set(factorint(abs(a))) | set(factorint(abs(b)))
    discriminant = 1
    for p in sorted(primes):
        if hilbert_symbol(a, b, p) == -1:
            discriminant *= p
    return AlgebraData(a=a, b=b, discriminant=discriminant)


def multiply(q1: Quaternion, q2: Quaternion, alg: AlgebraData) -> Quaternion:
    a, b = alg.a, alg.b
    x0, x1, x2, x3 = q1.coords
    y0, y1, y2, y3 = q2.coords
    return Quaternion(
        x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
        x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
        x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
        x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
    )


def product(factors: Sequence[Quaternion], alg: AlgebraData) -> Quaternion:
    result = ONE
    for f in factors:
        result = multiply(result, f, alg)
    return result


def conjugate(q: Quaternion) -> Quaternion:
    return Quaternion(q.x0, -q.x1, -q.x2, -q.x3)


def norm(q: Quaternion, alg: AlgebraData) -> Fraction:
    a, b = alg.a, alg.b
    return q.x0 ** 2 - a * q.x1 ** 2 - b * q.x2 ** 2 + a * b * q.x3 ** 2


def trace(q: Quaternion) -> Fraction:
    return 2 * q.x0


def invariants_of(q: Quaternion, alg: AlgebraData) -> Tuple[Quaternion, Fraction, Fraction]:
    return conjugate(q), norm(q, alg), trace(q)


def canonical_sign(q: Quaternion) -> Quaternion:
    """The one of {q, -q} whose first nonzero coordinate is positive"""
    for c in q.coords:
        if c != 0:
            return q if c > 0 else -q
    return q


def format_quaternion(q: Quaternion) -> str:
    """Human-readable form with lowercase i, j, k, e.g. '-1/2 - 1/2*i - 1/2*j + 1/2*k'"""
    terms = []
    for coeff, unit in zip(q.coords, ('', 'i', 'j', 'k')):
        if coeff == 0:
            continue
        magnitude = abs(coeff)
        if unit and magnitude == 1:
            body = unit
        elif unit:
            body = f"{magnitude}*{unit}"
        else:
            body = f"{magnitude}"
        if not terms:
            terms.append(body if coeff > 0 else f"-{body}")
        else:
            terms.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return ' '.join(terms) if terms else '0'


def parse_quaternion(text: str) -> Quaternion:
    """'c0,c1,c2,c3' in {1,i,j,k} coordinates, each a rational like -1/2"""
    parts = [part.strip() for part in text.split(',')]
    if len(parts) != 4:
        raise ValueError(f"Expected four comma-separated coordinates, got '{text}'")
    return Quaternion.of(*parts)


# --- the table of orders ---------------------------------------------------------

PRESENTATIONS = {2: (-1, -1), 3: (-1, -3), 5: (-2, -5), 13: (-2, -13)}

# (D, N) -> (basis in {1,i,j,k} coordinates, xi, #O^x/Z^x)
ORDER_TABLE = {
    (2, 1): ([('1', '0', '0', '0'), ('0', '1', '0', '0'), ('0', '0', '1', '0'), ('1/2', '1/2', '1/2', '1/2')],
             ('2', '0', '0', '0'), 12),
    (2, 3): ([('1', '0', '0', '0'), ('0', '3', '0', '0'), ('0', '-2', '1', '0'), ('1/2', '-1/2', '1/2', '1/2')],
             ('0', '-1', '-1', '0'), 3),
    (2, 9): ([('1', '0', '0', '0'), ('0', '9', '0', '0'), ('0', '-4', '1', '0'), ('1/2', '-3/2', '1/2', '1/2')],
             ('1', '0', '0', '0'), 1),
    (2, 11): ([('1', '0', '0', '0'), ('0', '11', '0', '0'), ('0', '-10', '1', '0'), ('1/2', '-7/2', '1/2', '1/2')],
              ('1', '0', '0', '0'), 1),
    (3, 1): ([('1', '0', '0', '0'), ('0', '1', '0', '0'), ('0', '1/2', '1/2', '0'), ('1/2', '0', '0', '1/2')],
             ('2', '0', '0', '0'), 6),
    (3, 2): ([('1', '0', '0', '0'), ('0', '2', '0', '0'), ('0', '-1/2', '1/2', '0'), ('1/2', '-1', '0', '1/2')],
             ('-1/2', '-1/2', '-1/2', '1/2'), 2),
    (3, 4): ([('1', '0', '0', '0'), ('0', '4', '0', '0'), ('0', '-5/2', '1/2', '0'), ('1/2', '-3', '0', '1/2')],
             ('1', '0', '0', '0'), 1),
    (5, 1): ([('1', '0', '0', '0'), ('1/2', '1/2', '1/2', '0'), ('0', '0', '1', '0'), ('1/2', '1/4', '0', '1/4')],
             ('-1/2', '1/2', '-1/2', '0'), 3),
    (5, 2): ([('1', '0', '0', '0'), ('1', '1', '1', '0'), ('-1/2', '-1/2', '1/2', '0'), ('0', '-1/4', '-1/2', '1/4')],
             ('1', '0', '0', '0'), 1),
    (13, 1): ([('1', '0', '0', '0'), ('1/2', '1/2', '1/2', '0'), ('0', '0', '1', '0'), ('1/2', '1/4', '0', '1/4')],
              ('1', '0', '0', '0'), 1),
}

NO_XI_FAMILIES = {(2, 5), (7, 1)}

FAMILIES = sorted(ORDER_TABLE)


@lru_cache(maxsize=None)
def order_lookup(D: int, N: int) -> EichlerOrderData:
    if (D, N) in NO_XI_FAMILIES:
        raise NoXiError(f"(D,N)=({D},{N}) has h(D,N)=1 but no xi exists")
    if (D, N) not in ORDER_TABLE:
        raise UnsupportedFamilyError(f"(D,N)=({D},{N}) is not an h=1 family")

    basis_rows, xi_coords, unit_order = ORDER_TABLE[(D, N)]
    algebra = make_algebra(*PRESENTATIONS[D])
    order = EichlerOrderData(
        algebra=algebra,
        level=N,
        basis=tuple(Quaternion.of(*row) for row in basis_rows),
        xi=Quaternion.of(*xi_coords),
        unit_group_order=unit_order,
    )
    _check_order(order, D)
    logging.info(f"Loaded Eichler order (D,N)=({D},{N}), xi={format_quaternion(order.xi)}")
    return order


def _check_order(O: EichlerOrderData, D: int) -> None:
    if O.algebra.discriminant != D:
        raise OrderDataError(f"Presentation {PRESENTATIONS[D]} has discriminant {O.algebra.discriminant}, expected {D}")
    if not is_member(ONE, O):
        raise OrderDataError("1 is not in the order")
    for e1 in O.basis:
        for e2 in O.basis:
            if not is_member(multiply(e1, e2, O.algebra), O):
                raise OrderDataError(f"Order (D,N)=({D},{O.level}) is not closed under multiplication")
    disc = reduced_discriminant(O)
    if disc != D * O.level:
        raise OrderDataError(f"Reduced discriminant {disc} != D*N = {D * O.level}")
    if not is_member(O.xi, O):
        raise OrderDataError("xi is not in the order")


# --- coordinates ------------------------------------------------------------------------

def basis_matrix(O: EichlerOrderData) -> List[List[Fraction]]:
    return [list(e.coords) for e in O.basis]


@lru_cache(maxsize=None)
def _basis_inverse(O: EichlerOrderData) -> Tuple[Tuple[Fraction, ...], ...]:
    return tuple(tuple(row) for row in rational_inverse(basis_matrix(O)))


def coords_in_order(q: Quaternion, O: EichlerOrderData) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    """Coordinates c with q = sum c_i e_i; q lies in O iff all c_i are integers"""
    return vector_times_matrix(q.coords, _basis_inverse(O))


def from_order_coords(c: Sequence, O: EichlerOrderData) -> Quaternion:
    return Quaternion(*vector_times_matrix([Fraction(x) for x in c], basis_matrix(O)))


def is_member(q: Quaternion, O: EichlerOrderData) -> bool:
    return all(c.denominator == 1 for c in coords_in_order(q, O))


def integral_coords(q: Quaternion, O: EichlerOrderData) -> Tuple[int, int, int, int]:
    c = coords_in_order(q, O)
    if any(x.denominator != 1 for x in c):
        raise InvariantError(f"{format_quaternion(q)} is not in the order")
    return tuple(int(x) for x in c)


def content(q: Quaternion, O: EichlerOrderData) -> int:
    """gcd of the integral coordinates of q in O"""
    return math.gcd(*integral_coords(q, O))


def is_primitive(q: Quaternion, O: EichlerOrderData) -> bool:
    return is_member(q, O) and content(q, O) == 1


# --- forms -----------------------------------------------------------------------------

def trace_pairing(x: Quaternion, y: Quaternion, alg: AlgebraData) -> Fraction:
    return trace(multiply(x, conjugate(y), alg))


@lru_cache(maxsize=None)
def normic_form(O: EichlerOrderData) -> Tuple[Tuple[Fraction, ...], ...]:
    """Gram matrix G with Nm(sum x_i e_i) = x^T G x"""
    alg = O.algebra
    return tuple(tuple(trace_pairing(ei, ej, alg) / 2 for ej in O.basis) for ei in O.basis)


def reduced_discriminant(O: EichlerOrderData) -> int:
    alg = O.algebra
    pairing = [[trace_pairing(ei, ej, alg) for ej in O.basis] for ei in O.basis]
    det = abs(rational_det(pairing))
    if det.denominator != 1:
        raise OrderDataError(f"Trace form determinant {det} is not an integer")
    root = math.isqrt(int(det))
    if root * root != det:
        raise OrderDataError(f"Trace form determinant {det} is not a square")
    return root


def is_positive_definite(gram) -> bool:
    return all(m > 0 for m in leading_minors(gram))


def normic_value(c: Sequence, O: EichlerOrderData) -> Fraction:
    return norm(from_order_coords(c, O), O.algebra)

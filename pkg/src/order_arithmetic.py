"""
Order Arithmetic Module

Units, residue rings O/gO, the right-unit property and xi-primary
quaternions, principal generators of right ideals (class number one),
and the two factorisation results:
1. Zerlegungssatz: primitive xi-primary quaternions factor uniquely (up to
   sign) into xi-primary quaternions of prime norm
2. Units of O[1/p]: alpha = p^n * beta_1 ... beta_r * epsilon
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import FrozenSet, List, Optional, Sequence, Tuple

from sympy import divisors, factorint

from src.errors import FactorizationError, IdealError, InvariantError, NoXiError, OrderDataError
from src.lattice import (
    coset_reduce,
    enumerate_vectors,
    hermite_normal_form,
    lattice_contains,
    lattice_index,
    sublattice_gram,
)
from src.quaternion_core import (
    NO_XI_FAMILIES,
    ONE,
    EichlerOrderData,
    Quaternion,
    canonical_sign,
    conjugate,
    content,
    coords_in_order,
    format_quaternion,
    from_order_coords,
    integral_coords,
    is_member,
    is_primitive,
    multiply,
    norm,
    normic_form,
)


@dataclass(frozen=True)
class ResidueElement:
    """Class of an element of O modulo the right ideal gO, stored as its HNF coset representative"""
    order: EichlerOrderData
    modulus: Quaternion
    coords: Tuple[int, int, int, int]


@dataclass(frozen=True)
class UnitGroup:
    """One representative per class of O^x / Z^x"""
    elements: Tuple[Quaternion, ...]
    order: int

    def with_signs(self) -> Tuple[Quaternion, ...]:
        return self.elements + tuple(-u for u in self.elements)


# --- lattices attached to the order ---------------------------------------------

def elements_of_norm(O: EichlerOrderData, n) -> List[Quaternion]:
    """Every alpha in O with Nm(alpha) = n, sorted"""
    vectors = enumerate_vectors(normic_form(O), n)
    return sorted(from_order_coords(v, O) for v in vectors)


def sphere_count(O: EichlerOrderData, n: int) -> int:
    return len(enumerate_vectors(normic_form(O), n))


def right_ideal_lattice(O: EichlerOrderData, gens: Sequence[Quaternion]):
    """HNF (in O-coordinates) of the right ideal sum g*O"""
    rows = []
    for g in gens:
        for e in O.basis:
            rows.append(integral_coords(multiply(g, e, O.algebra), O))
    return hermite_normal_form(rows)


@lru_cache(maxsize=None)
def principal_lattice(O: EichlerOrderData, gamma: Quaternion):
    return right_ideal_lattice(O, [gamma])


def congruent(x: Quaternion, y: Quaternion, O: EichlerOrderData, gamma: Quaternion) -> bool:
    """x == y mod gamma*O"""
    return lattice_contains(principal_lattice(O, gamma), coords_in_order(x - y, O))


def residue(x: Quaternion, O: EichlerOrderData, gamma: Quaternion) -> ResidueElement:
    reduced = coset_reduce(integral_coords(x, O), principal_lattice(O, gamma))
    return ResidueElement(order=O, modulus=gamma, coords=reduced)


def two_in_ideal(O: EichlerOrderData, xi: Quaternion) -> bool:
    return congruent(Quaternion.of(2), Quaternion.of(0), O, xi)


def is_primary(alpha: Quaternion, O: EichlerOrderData, xi: Quaternion) -> bool:
    """alpha == 1 mod xi*O (the class set is {[1]})"""
    return is_member(alpha, O) and congruent(alpha, ONE, O, xi)


# --- units -------------------------------------------------------------------------

@lru_cache(maxsize=None)
def unit_group(O: EichlerOrderData) -> UnitGroup:
    alg = O.algebra
    reps = sorted({canonical_sign(u) for u in elements_of_norm(O, 1)})
    rep_set = set(reps)
    for u in reps:
        for v in reps:
            if canonical_sign(multiply(u, v, alg)) not in rep_set:
                raise InvariantError("Unit representatives are not closed under multiplication")
    if len(reps) != O.unit_group_order:
        raise OrderDataError(f"Found {len(reps)} unit classes, table says {O.unit_group_order}")
    logging.info(f"Unit group of (D,N)=({O.D},{O.N}): {len(reps)} classes")
    return UnitGroup(elements=tuple(reps), order=len(reps))


def residue_units_r(O: EichlerOrderData, xi: Quaternion) -> FrozenSet[ResidueElement]:
    """
    (O/xiO)_r^x: classes of O/Nm(xi)O with norm prime to Nm(xi), projected
    to O/xiO.
    """
    m = norm(xi, O.algebra)
    if m.denominator != 1:
        raise InvariantError(f"{format_quaternion(xi)} is not integral")
    m = int(m)
    hnf = principal_lattice(O, xi)
    if m == 1:
        return frozenset({ResidueElement(order=O, modulus=xi, coords=(0, 0, 0, 0))})

    classes = set()
    for c in itertools.product(range(m), repeat=4):
        value = norm(from_order_coords(c, O), O.algebra)
        if math.gcd(int(value), m) == 1:
            classes.add(ResidueElement(order=O, modulus=xi, coords=coset_reduce(c, hnf)))
    return frozenset(classes)


def right_unit_property(O: EichlerOrderData, xi: Quaternion) -> bool:
    """
    True iff u -> u mod xiO is a bijection from O^x/Z^x (when 2 is in xiO)
    or from O^x (otherwise) onto (O/xiO)_r^x.
    """
    if xi.is_zero() or not is_member(xi, O):
        return False
    target = residue_units_r(O, xi)
    units = unit_group(O)
    sources = units.elements if two_in_ideal(O, xi) else units.with_signs()
    images = [residue(u, O, xi) for u in sources]
    injective = len(set(images)) == len(images)
    surjective = set(images) == set(target)
    return injective and surjective


def xi_candidates(O: EichlerOrderData) -> Tuple[int, List[Quaternion]]:
    """
    The lowest norm n in (1, 2, 4) with an element xi such that 2 is in xiO
    and the right-unit property holds, and all such xi of norm n in the
    order of elements_of_norm.
    """
    if (O.D, O.N) in NO_XI_FAMILIES:
        raise NoXiError(f"No xi exists for (D,N)=({O.D},{O.N})")

    for n in (1, 2, 4):
        candidates = [c for c in elements_of_norm(O, n) if two_in_ideal(O, c)]
        passing = [c for c in candidates if right_unit_property(O, c)]
        if passing:
            logging.info(f"xi_candidates: {len(passing)} of {len(candidates)} candidates of norm {n} pass")
            return n, passing
    raise NoXiError(f"No xi with the right-unit property found for (D,N)=({O.D},{O.N})")


def choose_xi(O: EichlerOrderData, prefer_table: bool = True) -> Quaternion:
    """
    Table first: the tabulated xi when it is among the lowest-norm passing
    candidates. Otherwise, or with prefer_table=False, the first passing
    candidate.
    """
    _, passing = xi_candidates(O)
    chosen = O.xi if prefer_table and O.xi in passing else passing[0]
    logging.info(f"choose_xi: chose {format_quaternion(chosen)}")
    return chosen


def make_primary(pi: Quaternion, O: EichlerOrderData, xi: Quaternion) -> Tuple[Quaternion, Quaternion]:
    """
    Returns (pi*u, u) for the unit u with pi*u == 1 mod xiO. The unit is
    unique up to sign; anything else is an error.
    """
    alg = O.algebra
    matches = [u for u in unit_group(O).with_signs() if congruent(multiply(pi, u, alg), ONE, O, xi)]
    if not matches:
        raise FactorizationError(f"{format_quaternion(pi)} has no primary associate modulo {format_quaternion(xi)}")
    if len({canonical_sign(u) for u in matches}) != 1:
        raise FactorizationError(f"Primary associate of {format_quaternion(pi)} is not unique up to sign")
    positive = sorted(u for u in matches if u == canonical_sign(u))
    u = positive[0] if positive else min(matches)
    return multiply(pi, u, alg), u


# --- right ideals ------------------------------------------------------------------

def right_ideal_generator(O: EichlerOrderData, gens: Sequence[Quaternion]) -> Quaternion:
    """
    pi with pi*O = sum g*O. Under h(D,N)=1 such pi exists, has
    Nm(pi)^2 = [O:I], and is unique up to right multiplication by a unit.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise IdealError("The zero ideal has no generator")
    hnf = right_ideal_lattice(O, gens)
    index = lattice_index(hnf)
    n = math.isqrt(index)
    if n * n != index:
        raise IdealError(f"index not a perfect square: [O:I] = {index}")

    gram = sublattice_gram(normic_form(O), hnf)
    candidates = []
    for y in enumerate_vectors(gram, n):
        c = [sum(y[i] * hnf[i][j] for i in range(4)) for j in range(4)]
        candidates.append(canonical_sign(from_order_coords(c, O)))
    if not candidates:
        raise IdealError(f"no generator found for an ideal of norm {n}")

    pi = min(candidates)
    if right_ideal_lattice(O, [pi]) != hnf:
        raise IdealError(f"{format_quaternion(pi)} does not generate the ideal")
    return pi


# --- factorisation -----------------------------------------------------------------

def integral_norm(alpha: Quaternion, O: EichlerOrderData) -> int:
    n = norm(alpha, O.algebra)
    if n.denominator != 1:
        raise FactorizationError(f"Norm {n} is not an integer")
    return int(n)


def zerlegungssatz_factor(alpha: Quaternion, O: EichlerOrderData, xi: Quaternion,
                          primes: Optional[Sequence[int]] = None) -> List[Quaternion]:
    """
    Factor a primitive xi-primary alpha as pi_1 * ... * pi_s with each pi_i
    primitive, xi-primary and of norm p_i. Primes are taken in ascending
    order unless given.
    """
    alg = O.algebra
    if not is_member(alpha, O):
        raise FactorizationError(f"{format_quaternion(alpha)} is not in the order")
    if not is_primitive(alpha, O):
        raise FactorizationError(f"{format_quaternion(alpha)} is not primitive")
    if not is_primary(alpha, O, xi):
        raise FactorizationError(f"{format_quaternion(alpha)} is not xi-primary")

    n = integral_norm(alpha, O)
    if primes is None:
        primes = [p for p, e in sorted(factorint(n).items()) for _ in range(e)]
    primes = list(primes)
    if math.prod(primes) != n:
        raise FactorizationError(f"Primes {primes} do not multiply to Nm = {n}")
    dn = O.D * O.N
    for p in primes:
        if math.gcd(p, dn) != 1:
            raise FactorizationError(f"Norm {n} shares the factor {p} with DN = {dn}")
    if not primes:
        return []

    factors = []
    current = alpha
    for p in primes[:-1]:
        pi = right_ideal_generator(O, [Quaternion.of(p), current])
        if norm(pi, alg) != p:
            raise IdealError(f"Generator of pO + alpha O has norm {norm(pi, alg)}, expected {p}")
        pi, _ = make_primary(pi, O, xi)
        factors.append(pi)
        current = multiply(conjugate(pi), current, alg).scale(Fraction(1, p))
        if not is_member(current, O):
            raise FactorizationError("Cofactor left the order")

    if not is_primary(current, O, xi):
        raise FactorizationError(f"Last factor {format_quaternion(current)} is not xi-primary")
    factors.append(current)
    return factors


def is_irreducible(pi: Quaternion, O: EichlerOrderData) -> bool:
    """
    No factorisation pi = beta*gamma in O with neither factor a unit:
    every candidate left divisor beta with a proper divisor norm is tried.
    """
    alg = O.algebra
    n = integral_norm(pi, O)
    if n <= 1:
        return False
    for d in divisors(n)[1:-1]:
        for beta in elements_of_norm(O, d):
            gamma = multiply(conjugate(beta), pi, alg).scale(Fraction(1, d))
            if is_member(gamma, O):
                return False
    return True


def p_power_exponent(value: Fraction, p: int) -> Optional[int]:
    """s with value == p^s, or None"""
    if value <= 0:
        return None
    num, den = value.numerator, value.denominator
    if num != 1 and den != 1:
        return None
    base = num if den == 1 else den
    e = 0
    while base % p == 0:
        base //= p
        e += 1
    if base != 1:
        return None
    return e if den == 1 else -e


def localized_unit_factor(alpha: Quaternion, p: int, O: EichlerOrderData, xi: Quaternion):
    """
    Write alpha in O[1/p]^x as p^n * beta_1 ... beta_r * epsilon with each
    beta_i xi-primary of norm p and epsilon a unit. Returns (n, betas, epsilon).
    """
    alg = O.algebra
    s = p_power_exponent(norm(alpha, alg), p)
    if s is None:
        raise FactorizationError(f"Nm({format_quaternion(alpha)}) = {norm(alpha, alg)} is not a power of {p}")

    # minimal l with p^l * alpha in O
    coords = coords_in_order(alpha, O)
    l = 0
    for c in coords:
        e = p_power_exponent(Fraction(c.denominator), p)
        if e is None:
            raise FactorizationError(f"{format_quaternion(alpha)} is not in O[1/{p}]")
        l = max(l, e)
    beta = alpha.scale(p ** l)

    m = content(beta, O)
    t = p_power_exponent(Fraction(m), p)
    if t is None:
        raise FactorizationError(f"Content {m} is not a power of {p}")
    beta = beta.scale(Fraction(1, m))
    n = t - l

    r = p_power_exponent(norm(beta, alg), p)
    if r == 0:
        return n, [], beta

    primary, u = make_primary(beta, O, xi)
    epsilon = conjugate(u)
    betas = zerlegungssatz_factor(primary, O, xi, [p] * r)
    return n, betas, epsilon

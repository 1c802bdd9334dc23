"""
Norm Enumeration Module

Enumerates S~ = {alpha in O : Nm(alpha) = p, alpha == 1 mod xiO}, checks
the representation count, splits it into impure (Tr != 0) and pure
(Tr = 0) quaternions and picks canonical Schottky generator
representatives.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Sequence, Tuple

from sympy import isprime

from src.errors import InadmissiblePrimeError, InvariantError, NotSchottkyError, UnsupportedFamilyError
from src.lattice import enumerate_vectors
from src.order_arithmetic import is_primary, two_in_ideal
from src.quaternion_core import (
    ONE,
    EichlerOrderData,
    Quaternion,
    canonical_sign,
    conjugate,
    coords_in_order,
    format_quaternion,
    from_order_coords,
    is_member,
    multiply,
    norm,
    normic_form,
    trace,
)


@dataclass(frozen=True)
class GeneratorSet:
    p: int
    xi: Quaternion
    all_elements: Tuple[Quaternion, ...]
    impure_reps: Tuple[Quaternion, ...]
    pure_reps: Tuple[Quaternion, ...]
    s: int
    t: int


def validate_prime(O: EichlerOrderData, p: int) -> None:
    if p == 2 or not isprime(p):
        raise InadmissiblePrimeError(f"p={p} is not an odd prime")
    if (2 * O.D * O.N) % p == 0:
        raise InadmissiblePrimeError(f"p={p} divides 2DN = {2 * O.D * O.N}")


def primary_count_expected(O: EichlerOrderData, xi: Quaternion, p: int) -> int:
    return 2 * (p + 1) if two_in_ideal(O, xi) else p + 1


def canonical_impure(alpha: Quaternion) -> Quaternion:
    """Representative of {+-alpha, +-conj(alpha)}: positive trace, then smallest coordinates"""
    variants = [alpha, -alpha, conjugate(alpha), -conjugate(alpha)]
    return min(v for v in variants if trace(v) > 0)


def primary_elements(O: EichlerOrderData, xi: Quaternion, p: int) -> List[Quaternion]:
    """
    Solve Nm(1 + xi*w) = p over w in O. Since Nm(1 + xi*w) = Nm(xi) * Nm(xi^-1 + w),
    this is a shifted enumeration of the normic form at p / Nm(xi).
    """
    alg = O.algebra
    m = norm(xi, alg)
    shift = coords_in_order(conjugate(xi).scale(1 / m), O)
    vectors = enumerate_vectors(normic_form(O), Fraction(p) / m, shift=shift)
    return sorted(ONE + multiply(xi, from_order_coords(w, O), alg) for w in vectors)


def represent_prime(O: EichlerOrderData, xi: Quaternion, p: int) -> GeneratorSet:
    validate_prime(O, p)
    if xi.is_zero() or not is_member(xi, O):
        raise InvariantError(f"xi = {format_quaternion(xi)} is not a nonzero element of the order")

    elements = primary_elements(O, xi, p)
    for alpha in elements:
        if norm(alpha, O.algebra) != p or not is_primary(alpha, O, xi):
            raise InvariantError(f"Enumerated {format_quaternion(alpha)} is not a primary element of norm {p}")

    expected = primary_count_expected(O, xi, p)
    if len(elements) != expected:
        logging.error(f"#S~ = {len(elements)} for (D,N,p)=({O.D},{O.N},{p}); expected {expected}")
        raise InvariantError(f"#S~ = {len(elements)}, expected {expected} (violated hypothesis)")

    impure = sorted({canonical_impure(a) for a in elements if trace(a) != 0})
    pure = sorted({canonical_sign(a) for a in elements if trace(a) == 0})
    s, t = len(impure), len(pure)
    # -alpha is primary only when 2 lies in xiO
    if two_in_ideal(O, xi) and 4 * s + 2 * t != len(elements):
        raise InvariantError(f"4s+2t = {4 * s + 2 * t} != #S~ = {len(elements)}: S~ is not closed under sign and conjugation")

    logging.info(f"(D,N,p)=({O.D},{O.N},{p}): #S~={len(elements)}, s={s}, t={t}")
    return GeneratorSet(p=p, xi=xi, all_elements=tuple(elements), impure_reps=tuple(impure),
                        pure_reps=tuple(pure), s=s, t=t)


def null_trace(O: EichlerOrderData, xi: Quaternion, p: int) -> int:
    """t_xi(p): number of trace-zero elements of S~ (= 2t)"""
    gs = represent_prime(O, xi, p)
    return sum(1 for a in gs.all_elements if trace(a) == 0)


def schottky_rank(gs: GeneratorSet) -> int:
    if gs.t != 0:
        raise NotSchottkyError(f"not Schottky: pure generators present (t={gs.t})")
    if 2 * gs.s != gs.p + 1:
        raise InvariantError(f"rank {gs.s} != (p+1)/2 for p={gs.p}")
    return gs.s


# --- arithmetic descriptions of S~ for the maximal orders with xi = 2 ---------------

def diagonal_solutions(weights: Sequence[int], n: int) -> Iterator[Tuple[int, ...]]:
    """Integer vectors with sum w_i a_i^2 = n, where weights[0] == 1"""
    def rec(i, remaining, tail):
        if i == 0:
            root = math.isqrt(remaining)
            if root * root == remaining:
                for a0 in sorted({root, -root}):
                    yield (a0,) + tail
            return
        bound = math.isqrt(remaining // weights[i])
        for a in range(-bound, bound + 1):
            rest = remaining - weights[i] * a * a
            if rest >= 0:
                yield from rec(i - 1, rest, (a,) + tail)

    yield from rec(len(weights) - 1, n, ())


def arithmetic_primary_elements(D: int, N: int, p: int) -> List[Tuple[int, int, int, int]]:
    """
    S~ in {1,i,j,k} coordinates, described by congruences:
    (2,1): a0^2+a1^2+a2^2+a3^2 = p with a0 odd and a1,a2,a3 even, or a0 even and a1,a2,a3 odd;
    (3,1): a0^2+a1^2+3a2^2+3a3^2 = p with a0+a3 odd and a1+a2 even.
    """
    if (D, N) == (2, 1):
        return sorted(a for a in diagonal_solutions((1, 1, 1, 1), p)
                      if (a[0] % 2 == 1 and all(x % 2 == 0 for x in a[1:]))
                      or (a[0] % 2 == 0 and all(x % 2 == 1 for x in a[1:])))
    if (D, N) == (3, 1):
        return sorted(a for a in diagonal_solutions((1, 1, 3, 3), p)
                      if (a[0] + a[3]) % 2 == 1 and (a[1] + a[2]) % 2 == 0)
    raise UnsupportedFamilyError(f"No arithmetic description for (D,N)=({D},{N})")


def arithmetic_null_trace(D: int, N: int, p: int) -> int:
    return sum(1 for a in arithmetic_primary_elements(D, N, p) if a[0] == 0)

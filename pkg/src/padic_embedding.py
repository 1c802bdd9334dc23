"""
p-adic Embedding Module

The matrix embedding
    x0 + x1 i + x2 j + x3 k  ->  [[x0 + x1 r, x2 + x3 r], [b (x2 - x3 r), x0 - x1 r]]
with r a square root of a in Z_p, kept at finite precision mod p^k,
together with reductions of fixed points to P^1(F_p) and the Moebius
action of units on P^1(F_p).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from sympy import isprime, legendre_symbol, sqrt_mod

from src.errors import DegenerateReductionError, InadmissiblePrimeError, NotSplitError, PrecisionError
from src.quaternion_core import AlgebraData, Quaternion, format_quaternion, norm, trace


@dataclass(frozen=True)
class ProjPoint:
    """(x:1) with 0 <= x < p, or infinity = (1:0)"""
    x: int
    z: int = 1

    @property
    def is_infinity(self) -> bool:
        return self.z == 0

    def sort_key(self) -> Tuple[int, int]:
        return (1, 0) if self.is_infinity else (0, self.x)

    def __str__(self) -> str:
        return f"{self.x}:{self.z}"

    def __lt__(self, other: 'ProjPoint') -> bool:
        return self.sort_key() < other.sort_key()


INFINITY = ProjPoint(1, 0)


def normalize_point(u: int, v: int, p: int) -> ProjPoint:
    u, v = u % p, v % p
    if v == 0:
        if u == 0:
            raise DegenerateReductionError("(0:0) is not a point of P^1")
        return INFINITY
    return ProjPoint(u * pow(v, -1, p) % p, 1)


def projective_line(p: int) -> List[ProjPoint]:
    return [ProjPoint(x, 1) for x in range(p)] + [INFINITY]


@dataclass(frozen=True)
class PadicMatrix:
    """2x2 matrix with entries mod p^k"""
    entries: Tuple[Tuple[int, int], Tuple[int, int]]
    p: int
    k: int

    @property
    def modulus(self) -> int:
        return self.p ** self.k

    def det(self) -> int:
        (a, b), (c, d) = self.entries
        return (a * d - b * c) % self.modulus

    def trace(self) -> int:
        (a, _), (_, d) = self.entries
        return (a + d) % self.modulus

    def __matmul__(self, other: 'PadicMatrix') -> 'PadicMatrix':
        (a, b), (c, d) = self.entries
        (e, f), (g, h) = other.entries
        m = self.modulus
        return PadicMatrix(
            entries=(((a * e + b * g) % m, (a * f + b * h) % m), ((c * e + d * g) % m, (c * f + d * h) % m)),
            p=self.p, k=self.k)

    def reduce(self) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        return tuple(tuple(x % self.p for x in row) for row in self.entries)

    def congruent(self, other: 'PadicMatrix', projective: bool = False) -> bool:
        if not projective:
            return self.entries == other.entries
        flat_a = [x for row in self.entries for x in row]
        flat_b = [x for row in other.entries for x in row]
        m = self.modulus
        # a unit scalar lambda with A == lambda*B
        for x, y in zip(flat_a, flat_b):
            if y % self.p:
                lam = x * pow(y, -1, m) % m
                return all((u - lam * v) % m == 0 for u, v in zip(flat_a, flat_b))
        return all(u % m == 0 for u in flat_a)


def sqrt_hensel(a: int, p: int, k: int = 1) -> int:
    """
    r with r^2 == a mod p^k. The root mod p is taken in [1, (p-1)/2] and
    lifted one power of p at a time.
    """
    if p == 2 or not isprime(p):
        raise InadmissiblePrimeError(f"p={p} is not an odd prime")
    if a % p == 0:
        raise InadmissiblePrimeError(f"p={p} divides a={a}")
    if legendre_symbol(a % p, p) != 1:
        raise NotSplitError(f"presentation not split at p={p}: ({a}/{p}) = -1")

    r = int(sqrt_mod(a % p, p))
    r = min(r, p - r)
    modulus = p
    for _ in range(1, k):
        modulus *= p
        r = (r - (r * r - a) * pow(2 * r, -1, modulus)) % modulus
    return r


def to_residue(x: Fraction, modulus: int, p: int) -> int:
    x = Fraction(x)
    if x.denominator % p == 0:
        raise PrecisionError(f"denominator of {x} is divisible by p={p}")
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


def phi_p(q: Quaternion, alg: AlgebraData, p: int, k: int = 1) -> PadicMatrix:
    r = sqrt_hensel(alg.a, p, k)
    m = p ** k
    x0, x1, x2, x3 = (to_residue(x, m, p) for x in q.coords)
    entries = (
        ((x0 + x1 * r) % m, (x2 + x3 * r) % m),
        ((alg.b * (x2 - x3 * r)) % m, (x0 - x1 * r) % m),
    )
    return PadicMatrix(entries=entries, p=p, k=k)


def act(matrix: Tuple[Tuple[int, int], Tuple[int, int]], point: ProjPoint, p: int) -> ProjPoint:
    """Moebius action (x:1) -> (ax+b : cx+d), (1:0) -> (a : c)"""
    (a, b), (c, d) = matrix
    if point.is_infinity:
        return normalize_point(a, c, p)
    return normalize_point(a * point.x + b, c * point.x + d, p)


def fixed_point_reductions(q: Quaternion, alg: AlgebraData, p: int) -> Tuple[ProjPoint, ProjPoint]:
    """
    (attracting, repelling) reductions of the fixed points of q, Nm(q) = p.
    M = phi_p(q) mod p has rank one and M^2 = Tr(M) M, so its image is the
    eigenline of the unit eigenvalue and its kernel the other one.
    """
    if norm(q, alg) != p:
        raise DegenerateReductionError(f"Nm({format_quaternion(q)}) = {norm(q, alg)} != {p}")
    (a, b), (c, d) = phi_p(q, alg, p, 1).reduce()
    if (a + d) % p == 0:
        raise DegenerateReductionError(f"degenerate reduction: Tr({format_quaternion(q)}) == 0 mod {p}")
    if (a * d - b * c) % p != 0:
        raise DegenerateReductionError(f"det of reduction of {format_quaternion(q)} is a unit")

    if a or c:
        attracting = normalize_point(a, c, p)
    else:
        attracting = normalize_point(b, d, p)
    if a or b:
        repelling = normalize_point(-b, a, p)
    else:
        repelling = normalize_point(-d, c, p)
    return attracting, repelling


def unit_permutation(u: Quaternion, alg: AlgebraData, p: int) -> Dict[ProjPoint, ProjPoint]:
    if norm(u, alg) != 1:
        raise DegenerateReductionError(f"{format_quaternion(u)} is not a unit")
    matrix = phi_p(u, alg, p, 1).reduce()
    perm = {x: act(matrix, x, p) for x in projective_line(p)}
    if len(set(perm.values())) != p + 1:
        raise DegenerateReductionError(f"action of {format_quaternion(u)} is not a bijection")
    return perm


def symbolic_matrix(q: Quaternion, alg: AlgebraData) -> List[List[str]]:
    """Entries written in terms of r = sqrt(a), for display"""
    x0, x1, x2, x3 = q.coords

    def linear(c0, c1):
        if c1 == 0:
            return f"{c0}"
        tail = "r" if abs(c1) == 1 else f"{abs(c1)}*r"
        if c0 == 0:
            return tail if c1 > 0 else f"-{tail}"
        return f"{c0} + {tail}" if c1 > 0 else f"{c0} - {tail}"

    return [[linear(x0, x1), linear(x2, x3)], [linear(alg.b * x2, -alg.b * x3), linear(x0, -x1)]]

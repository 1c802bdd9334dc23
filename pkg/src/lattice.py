"""
Exact lattice kernel

Integer-lattice helpers shared by the order arithmetic and the norm
enumeration:
1. Row-style Hermite normal form of a full-rank sublattice of Z^n
2. Canonical coset representatives modulo such a sublattice
3. Exact rational Cholesky-type decomposition of a positive definite form
4. Fincke-Pohst enumeration of the vectors of a fixed (shifted) value

All arithmetic is exact: integers and fractions.Fraction only.
"""

import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import Matrix, Rational

from src.errors import DefinitenessError, InvariantError

IntVector = Tuple[int, ...]
HNFBasis = Tuple[IntVector, ...]


def hermite_normal_form(rows: Sequence[Sequence[int]], dim: int = 4) -> HNFBasis:
    """
    Upper triangular basis with positive pivots of the lattice spanned by
    `rows`; entries above each pivot are reduced into [0, pivot).
    The lattice must have full rank `dim`.
    """
    work = [[int(x) for x in row] for row in rows]
    work = [row for row in work if any(row)]
    basis = []

    for col in range(dim):
        while True:
            nonzero = [row for row in work if row[col] != 0]
            if len(nonzero) <= 1:
                break
            nonzero.sort(key=lambda row: abs(row[col]))
            pivot = nonzero[0]
            for row in nonzero[1:]:
                q = row[col] // pivot[col]
                for t in range(dim):
                    row[t] -= q * pivot[t]

        if not nonzero:
            raise InvariantError(f"Lattice is not of full rank (no pivot in column {col})")

        pivot = nonzero[0]
        work = [row for row in work if row is not pivot and any(row)]
        if pivot[col] < 0:
            pivot = [-x for x in pivot]
        basis.append(pivot)

    for i in range(dim):
        for j in range(i):
            q = basis[j][i] // basis[i][i]
            if q:
                basis[j] = [a - q * b for a, b in zip(basis[j], basis[i])]

    return tuple(tuple(row) for row in basis)


def coset_reduce(vector: Sequence[int], hnf: HNFBasis) -> IntVector:
    """Canonical representative of vector + L, with L given in Hermite normal form."""
    v = [int(x) for x in vector]
    for i, row in enumerate(hnf):
        q = v[i] // row[i]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return tuple(v)


def lattice_contains(hnf: HNFBasis, vector: Sequence[Fraction]) -> bool:
    if any(Fraction(x).denominator != 1 for x in vector):
        return False
    return not any(coset_reduce([int(x) for x in vector], hnf))


def lattice_index(hnf: HNFBasis) -> int:
    """Index of the lattice in Z^n: product of the pivots."""
    index = 1
    for i, row in enumerate(hnf):
        index *= row[i]
    return index


def to_sympy(matrix: Sequence[Sequence[Fraction]]) -> Matrix:
    return Matrix([[Rational(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in matrix])


def from_sympy(matrix: Matrix) -> List[List[Fraction]]:
    return [[Fraction(int(matrix[i, j].p), int(matrix[i, j].q)) for j in range(matrix.cols)]
            for i in range(matrix.rows)]


def rational_inverse(matrix: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    m = to_sympy(matrix)
    if m.det() == 0:
        raise InvariantError("Basis matrix is singular")
    return from_sympy(m.inv())


def rational_det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    d = to_sympy(matrix).det()
    return Fraction(int(d.p), int(d.q))


def vector_times_matrix(v: Sequence[Fraction], m: Sequence[Sequence[Fraction]]) -> Tuple[Fraction, ...]:
    cols = len(m[0])
    return tuple(sum((Fraction(v[i]) * m[i][j] for i in range(len(v))), Fraction(0)) for j in range(cols))


def sublattice_gram(gram: Sequence[Sequence[Fraction]], rows: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    """Gram matrix B G B^T of the sublattice with basis rows B."""
    n = len(rows)
    bg = [vector_times_matrix(rows[i], gram) for i in range(n)]
    return [[sum((bg[i][k] * rows[j][k] for k in range(len(gram))), Fraction(0)) for j in range(n)]
            for i in range(n)]


def quadratic_decomposition(gram: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """
    Exact decomposition Q(x) = sum_i q[i][i] * (x_i + sum_{j>i} q[i][j] x_j)^2
    of the form x^T G x. Raises DefinitenessError when G is not positive definite.
    """
    n = len(gram)
    q = [[Fraction(gram[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        if q[i][i] <= 0:
            raise DefinitenessError(f"Form is not positive definite (pivot {i} = {q[i][i]})")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def leading_minors(gram: Sequence[Sequence[Fraction]]) -> List[Fraction]:
    m = to_sympy(gram)
    minors = []
    for size in range(1, m.rows + 1):
        d = m[:size, :size].det()
        minors.append(Fraction(int(d.p), int(d.q)))
    return minors


def exact_sqrt(value: Fraction) -> Optional[Fraction]:
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    a, b = math.isqrt(num), math.isqrt(den)
    if a * a == num and b * b == den:
        return Fraction(a, b)
    return None


def enumerate_vectors(gram: Sequence[Sequence[Fraction]], target, shift: Optional[Sequence[Fraction]] = None) -> List[IntVector]:
    """
    All integer vectors x with Q(x + shift) == target, where Q(y) = y^T G y.

    Bounds at each level are rounded outward (integer square root plus one)
    and every candidate is checked exactly, so nothing is lost to rounding.
    The last coordinate is solved for directly.
    """
    n = len(gram)
    q = quadratic_decomposition(gram)
    target = Fraction(target)
    shift = [Fraction(s) for s in shift] if shift is not None else [Fraction(0)] * n
    x = [0] * n
    y = [Fraction(0)] * n
    found = []

    def descend(i, remaining):
        center = -sum((q[i][j] * y[j] for j in range(i + 1, n)), Fraction(0))
        ratio = remaining / q[i][i]

        if i == 0:
            root = exact_sqrt(ratio)
            if root is None:
                return
            for candidate in sorted({center + root, center - root}):
                xi = candidate - shift[0]
                if xi.denominator == 1:
                    x[0] = int(xi)
                    found.append(tuple(x))
            return

        bound = math.isqrt(math.floor(ratio)) + 1
        mid = center - shift[i]
        for xi in range(math.floor(mid) - bound, math.ceil(mid) + bound + 1):
            yi = xi + shift[i]
            term = q[i][i] * (yi - center) ** 2
            if term <= remaining:
                x[i] = xi
                y[i] = yi
                descend(i - 1, remaining - term)

    if target >= 0:
        descend(n - 1, target)
    return sorted(found)

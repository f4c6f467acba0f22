"""Exact arithmetic on rational upper-triangular matrices.

Matrices are tuples of tuples of Fraction.  Everything here terminates
exactly: exp and log of strictly upper-triangular matrices are finite
series because the matrices are nilpotent.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = tuple[tuple[Fraction, ...], ...]


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def mat(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(frac(x) for x in row) for row in rows)


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def mat_zero(n: int) -> Matrix:
    return tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c, a: Matrix) -> Matrix:
    c = frac(c) if not isinstance(c, Fraction) else c
    return tuple(tuple(c * x for x in row) for row in a)


def mat_commutator(a: Matrix, b: Matrix) -> Matrix:
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def is_strictly_upper(a: Matrix) -> bool:
    n = len(a)
    return all(a[i][j] == 0 for i in range(n) for j in range(i + 1))


def is_unitriangular(a: Matrix) -> bool:
    n = len(a)
    for i in range(n):
        for j in range(i + 1):
            want = Fraction(int(i == j))
            if a[i][j] != want:
                return False
    return True


def unitriangular_inverse(a: Matrix) -> Matrix:
    """Inverse via the terminating Neumann series (I + X)^-1 = sum (-X)^k."""
    n = len(a)
    x = mat_sub(a, mat_identity(n))
    out = mat_identity(n)
    term = mat_identity(n)
    sign = 1
    for _ in range(n - 1):
        term = mat_mul(term, x)
        sign = -sign
        out = mat_add(out, mat_scale(sign, term))
    return out


def nilpotent_exp(x: Matrix) -> Matrix:
    """exp of a strictly upper-triangular matrix; the series terminates."""
    n = len(x)
    out = mat_identity(n)
    term = mat_identity(n)
    for k in range(1, n):
        term = mat_scale(Fraction(1, k), mat_mul(term, x))
        out = mat_add(out, term)
    return out


def nilpotent_log(a: Matrix) -> Matrix:
    """log of a unitriangular matrix; exact, inverse of nilpotent_exp."""
    n = len(a)
    x = mat_sub(a, mat_identity(n))
    out = mat_zero(n)
    term = mat_identity(n)
    for k in range(1, n):
        term = mat_mul(term, x)
        out = mat_add(out, mat_scale(Fraction((-1) ** (k + 1), k), term))
    return out


def upper_entries(a: Matrix) -> tuple[Fraction, ...]:
    """The strictly-upper entries read row by row; a coordinate vector."""
    n = len(a)
    return tuple(a[i][j] for i in range(n) for j in range(i + 1, n))


class RationalSpan:
    """Exact span membership / coordinate solving for a fixed vector list.

    Row-reduces the generating vectors once; ``coordinates`` then answers
    whether a target is in the span and, when the generators are
    independent, with which coefficients.
    """

    def __init__(self, vectors: Sequence[Sequence[Fraction]]):
        self.vectors = [list(v) for v in vectors]
        self.width = len(self.vectors[0]) if self.vectors else 0
        # reduced rows carry their expression in terms of the generators
        self._rows: list[tuple[list[Fraction], list[Fraction]]] = []
        self._pivots: list[int] = []
        for gen_index, v in enumerate(self.vectors):
            coeffs = [Fraction(int(i == gen_index)) for i in range(len(self.vectors))]
            self._insert(list(v), coeffs)
        self.rank = len(self._rows)

    def _reduce(self, vec: list[Fraction], coeffs: list[Fraction]):
        for (row, rc), p in zip(self._rows, self._pivots):
            if vec[p] != 0:
                f = vec[p] / row[p]
                vec = [x - f * y for x, y in zip(vec, row)]
                coeffs = [x - f * y for x, y in zip(coeffs, rc)]
        return vec, coeffs

    def _insert(self, vec: list[Fraction], coeffs: list[Fraction]) -> None:
        vec, coeffs = self._reduce(vec, coeffs)
        pivot = next((i for i, x in enumerate(vec) if x != 0), None)
        if pivot is None:
            return
        self._rows.append((vec, coeffs))
        self._pivots.append(pivot)

    def contains(self, target: Sequence[Fraction]) -> bool:
        vec, _ = self._reduce(list(target), [Fraction(0)] * len(self.vectors))
        return all(x == 0 for x in vec)

    def coordinates(self, target: Sequence[Fraction]):
        """Coefficients expressing target over the generators, or None.

        Requires independent generators for the coefficients to be unique;
        membership testing works regardless.
        """
        vec, coeffs = self._reduce(list(target), [Fraction(0)] * len(self.vectors))
        if any(x != 0 for x in vec):
            return None
        return [-c for c in coeffs]

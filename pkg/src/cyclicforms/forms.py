"""Systems of integer linear forms and their kernel presentations.

A system is a tuple of t integer linear forms Z^D -> Z, stored as the rows
of its t x D coefficient matrix.  The classification predicates here are
all exact: rank and solvability questions are settled with rational
Gaussian elimination, and the kernel presentation comes from an integer
Smith normal form, never from floating point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class LinearFormSystem:
    """t integer linear forms in D variables, as rows of a coefficient matrix."""

    forms: tuple[tuple[int, ...], ...]
    name: str | None = None

    def __post_init__(self) -> None:
        if not self.forms:
            raise ValueError("a system needs at least one form")
        rows = tuple(tuple(int(c) for c in row) for row in self.forms)
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise ValueError("ragged coefficient rows")
        if 0 in widths:
            raise ValueError("forms need at least one variable")
        for r in rows:
            if all(c == 0 for c in r):
                raise ValueError("every form must have a nonzero coefficient")
        object.__setattr__(self, "forms", rows)

    @property
    def t(self) -> int:
        return len(self.forms)

    @property
    def num_variables(self) -> int:
        return len(self.forms[0])

    @property
    def size(self) -> int:
        """max(D, t, largest |coefficient|)."""
        return size(self)

    def evaluate(self, point: Sequence[int], modulus: int | None = None) -> tuple[int, ...]:
        vals = tuple(sum(c * x for c, x in zip(row, point)) for row in self.forms)
        if modulus is None:
            return vals
        return tuple(v % modulus for v in vals)

    def to_json(self) -> str:
        obj = {"forms": [list(r) for r in self.forms]}
        if self.name is not None:
            obj = {"name": self.name, **obj}
        return json.dumps(obj)

    @classmethod
    def from_json(cls, text: str) -> "LinearFormSystem":
        obj = json.loads(text)
        if not isinstance(obj, dict) or "forms" not in obj:
            raise ValueError('expected an object with a "forms" key')
        forms = obj["forms"]
        if not isinstance(forms, list) or not forms:
            raise ValueError('"forms" must be a non-empty list of rows')
        for row in forms:
            if not isinstance(row, list) or not row:
                raise ValueError("each form must be a non-empty list")
            for c in row:
                if not isinstance(c, int) or isinstance(c, bool):
                    raise ValueError(f"non-integer coefficient {c!r}")
        name = obj.get("name")
        if name is not None and not isinstance(name, str):
            raise ValueError('"name" must be a string')
        return cls(forms=tuple(tuple(r) for r in forms), name=name)

    @classmethod
    def load(cls, path) -> "LinearFormSystem":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())


@dataclass(frozen=True)
class KernelPresentation:
    """Integer matrix whose mod-N kernel equals the image of the system.

    ``matrix`` is k x t with rows forming a saturated basis of the
    homomorphisms Z^t -> Z vanishing on the image of the system, and
    ``bad_modulus`` is the product of the nontrivial invariant factors:
    for every N coprime to it, {y : matrix . y = 0 mod N} equals the
    image of the system in (Z/N)^t.
    """

    matrix: tuple[tuple[int, ...], ...]
    bad_modulus: int
    invariant_factors: tuple[int, ...] = field(default=())

    @property
    def k(self) -> int:
        return len(self.matrix)

    def kernel_mod_n(self, n: int) -> set[tuple[int, ...]]:
        """Enumerate {y in (Z/n)^t : matrix . y = 0 mod n}.  Test-scale only."""
        if not self.matrix:
            raise ValueError("k = 0 presentation: the kernel is all of (Z/n)^t")
        t = len(self.matrix[0])
        rows = np.array(self.matrix, dtype=np.int64)
        grid = np.indices((n,) * t).reshape(t, -1)
        ok = np.all(rows @ grid % n == 0, axis=0)
        pts = grid[:, ok].T
        return {tuple(int(v) for v in p) for p in pts}


# ---------------------------------------------------------------------------
# classification


def size(system: LinearFormSystem) -> int:
    """Size of the system: max(D, t, max |coefficient|)."""
    coeff = max(abs(c) for row in system.forms for c in row)
    return max(system.num_variables, system.t, coeff)


def pairwise_independent(system: LinearFormSystem) -> bool:
    """True iff every pair of forms is linearly independent over Q."""
    rows = system.forms
    d = system.num_variables
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            u, v = rows[i], rows[j]
            if all(u[a] * v[b] == u[b] * v[a] for a in range(d) for b in range(a + 1, d)):
                # all 2x2 minors vanish: proportional
                return False
    return True


def _solve_rational(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Solve matrix . x = rhs over Q; returns a solution or None."""
    rows = [list(r) + [b] for r, b in zip(matrix, rhs)]
    n_rows = len(rows)
    n_cols = len(matrix[0]) if n_rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    for i in range(r, n_rows):
        if rows[i][-1] != 0:
            return None
    x = [Fraction(0)] * n_cols
    for row_idx, c in enumerate(pivots):
        x[c] = rows[row_idx][-1]
    return x


def is_invariant(system: LinearFormSystem) -> bool:
    """True iff the rational image is closed under adding the all-ones vector."""
    mat = [[Fraction(c) for c in row] for row in system.forms]
    ones = [Fraction(1)] * system.t
    return _solve_rational(mat, ones) is not None


def default_degree(system: LinearFormSystem) -> int:
    """Degree for which U^{degree+1} control suffices; t - 2 clamped at 1.

    The singleton-class Cauchy-Schwarz partition makes U^{t-1} enough for
    any pairwise-independent system, so degree t - 2 is always safe.  The
    true complexity can be lower; callers may override.
    """
    if not pairwise_independent(system):
        raise ValueError("default degree is defined for pairwise-independent systems only")
    return max(1, system.t - 2)


# ---------------------------------------------------------------------------
# Smith normal form and kernelization


def smith_normal_form(matrix: Sequence[Sequence[int]]):
    """Return (S, U, V) with S = U @ matrix @ V, U,V unimodular, S diagonal.

    The diagonal satisfies the divisibility chain d_1 | d_2 | ... and all
    d_i >= 0.  Plain integer arithmetic throughout.
    """
    a = [[int(x) for x in row] for row in matrix]
    n_rows = len(a)
    n_cols = len(a[0])
    u = [[int(i == j) for j in range(n_rows)] for i in range(n_rows)]
    v = [[int(i == j) for j in range(n_cols)] for i in range(n_cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    p = 0
    while p < min(n_rows, n_cols):
        # locate a nonzero entry of minimal magnitude in the trailing block
        best = None
        for i in range(p, n_rows):
            for j in range(p, n_cols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(p, best[0])
        swap_cols(p, best[1])
        while True:
            # clear column p
            dirty = False
            for i in range(p + 1, n_rows):
                if a[i][p] != 0:
                    q = a[i][p] // a[p][p]
                    add_row(p, i, -q)
                    if a[i][p] != 0:  # remainder became the new, smaller pivot
                        swap_rows(p, i)
                        dirty = True
            for j in range(p + 1, n_cols):
                if a[p][j] != 0:
                    q = a[p][j] // a[p][p]
                    add_col(p, j, -q)
                    if a[p][j] != 0:
                        swap_cols(p, j)
                        dirty = True
            if dirty:
                continue
            # pivot must divide the whole trailing block
            culprit = None
            for i in range(p + 1, n_rows):
                for j in range(p + 1, n_cols):
                    if a[i][j] % a[p][p] != 0:
                        culprit = i
                        break
                if culprit is not None:
                    break
            if culprit is None:
                break
            add_row(culprit, p, 1)
        if a[p][p] < 0:
            negate_row(p)
        p += 1

    s = [[a[i][j] if i == j else 0 for j in range(n_cols)] for i in range(n_rows)]
    # a is diagonal now; keep S from it directly
    for i in range(min(n_rows, n_cols)):
        s[i][i] = a[i][i]
    return s, u, v


def kernelize(system: LinearFormSystem) -> KernelPresentation:
    """Kernel presentation of the image of the system, via Smith normal form.

    Writes the t x D coefficient matrix M as U^-1 S V^-1; the rows of U
    beyond the rank annihilate the image and form a saturated basis of the
    cokernel's free part, so for any N coprime to the product K of the
    nontrivial invariant factors, {y : rows . y = 0 mod N} is exactly the
    image of (Z/N)^D.
    """
    m = [list(row) for row in system.forms]
    s, u, _v = smith_normal_form(m)
    diag = [s[i][i] for i in range(min(len(s), len(s[0])))]
    rank = sum(1 for d in diag if d != 0)
    nontrivial = tuple(d for d in diag if d > 1)
    bad = 1
    for d in nontrivial:
        bad *= d
    rows = tuple(tuple(u[i]) for i in range(rank, system.t))
    return KernelPresentation(matrix=rows, bad_modulus=bad, invariant_factors=nontrivial)


def image_mod_n(system: LinearFormSystem, n: int, cap: int = 10**6) -> set[tuple[int, ...]]:
    """Exact enumeration of the image of (Z/n)^D in (Z/n)^t."""
    d = system.num_variables
    if n <= 0:
        raise ValueError("modulus must be positive")
    if n**d > cap:
        raise ValueError(f"enumeration of {n}^{d} points exceeds cap {cap}")
    grid = np.indices((n,) * d).reshape(d, -1)
    mat = np.array(system.forms, dtype=np.int64)
    vals = mat @ grid % n
    return {tuple(int(v) for v in col) for col in vals.T}


# ---------------------------------------------------------------------------
# stock systems


def progression_system(k: int, name: str | None = None) -> LinearFormSystem:
    """The k-term progression system (n1, n1+n2, ..., n1+(k-1) n2)."""
    if k < 1:
        raise ValueError("k must be positive")
    return LinearFormSystem(
        forms=tuple((1, j) for j in range(k)),
        name=name or f"{k}AP",
    )


def three_ap() -> LinearFormSystem:
    return progression_system(3)


def four_ap() -> LinearFormSystem:
    return progression_system(4)


def dilate_pair(k: int) -> LinearFormSystem:
    """The dependent pair (n1, k n1)."""
    return LinearFormSystem(forms=((1,), (k,)), name=f"pair-x-{k}x")


def kernel_system(coefficients: Iterable[int], name: str | None = None) -> LinearFormSystem:
    """Forms whose image is exactly the integer kernel of sum c_i y_i = 0.

    Requires some coefficient of magnitude 1 so the solution set has an
    integral parametrization: solve for that slot in terms of the others.
    """
    c = [int(x) for x in coefficients]
    t = len(c)
    if t < 2:
        raise ValueError("need at least two coefficients")
    pivot = next((i for i, x in enumerate(c) if abs(x) == 1), None)
    if pivot is None:
        raise ValueError("need a coefficient of magnitude 1 for an exact parametrization")
    rows = []
    free = [i for i in range(t) if i != pivot]
    for i in range(t):
        if i == pivot:
            # y_pivot = -(sum over free slots) / c_pivot
            rows.append(tuple(-c[j] * c[pivot] for j in free))
        else:
            rows.append(tuple(int(i == j) for j in free))
    if name is None:
        name = "kernel-" + "_".join(str(x) for x in c)
    return LinearFormSystem(forms=tuple(rows), name=name)


STOCK_SYSTEMS = {
    "3ap": three_ap,
    "4ap": four_ap,
}


def as_dependent_pair(system: LinearFormSystem) -> int | None:
    """If the system is two proportional forms (f, k f), return k; else None."""
    if system.t != 2:
        return None
    u, v = system.forms
    d = len(u)
    for a in range(d):
        for b in range(a + 1, d):
            if u[a] * v[b] != u[b] * v[a]:
                return None
    # v = k u with rational k; integral only if u divides v componentwise
    for ua, va in zip(u, v):
        if ua != 0:
            if va % ua != 0:
                return None
            k = va // ua
            if all(x * k == y for x, y in zip(u, v)):
                return k
            return None
    return None

"""Solution measures of linear-form systems over Z/N.

The brute-force path iterates the full variable grid (Z/N)^D in chunks,
so multiplicity is handled trivially and indicator inputs get an exact
integer count.  The fast path evaluates the dual sum over the kernel
presentation with one DFT per slot; it is floating point with a
documented 1e-9 tolerance and is never used inside exact solvers.

DFT convention, used everywhere in this package:
    fhat(r) = E_x f(x) e(-r x / N)
which is ``numpy.fft.fft(values) / N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .forms import KernelPresentation, LinearFormSystem

MAGNITUDE_SLACK = 1e-12


def as_fraction(x) -> Fraction:
    """Coerce to an exact Fraction; floats go through their decimal literal.

    ``as_fraction(0.4) == Fraction(2, 5)``: densities written as short
    decimals mean the decimal, not the nearest binary double.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(str(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


@dataclass(frozen=True)
class CyclicFunction:
    """A function Z/N -> complex unit disc."""

    modulus: int
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != (self.modulus,):
            raise ValueError(f"need exactly {self.modulus} values")
        if np.max(np.abs(vals)) > 1 + MAGNITUDE_SLACK:
            raise ValueError("values must lie in the unit disc")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, c, modulus: int) -> "CyclicFunction":
        return cls(modulus, np.full(modulus, c, dtype=np.complex128))

    @classmethod
    def from_real(cls, values) -> "CyclicFunction":
        arr = np.asarray(values, dtype=np.float64)
        return cls(len(arr), arr.astype(np.complex128))

    @property
    def mean(self) -> complex:
        return complex(np.mean(self.values))

    def is_indicator(self) -> bool:
        v = self.values
        return bool(np.all((v == 0) | (v == 1)))

    def is_real_unit_interval(self) -> bool:
        v = self.values
        return bool(np.all(v.imag == 0) and np.all(v.real >= 0) and np.all(v.real <= 1))

    def real_values(self) -> np.ndarray:
        if not np.all(self.values.imag == 0):
            raise ValueError("function is not real-valued")
        return self.values.real

    def translate(self, c: int) -> "CyclicFunction":
        """x -> f(x + c)."""
        return CyclicFunction(self.modulus, np.roll(self.values, -c))

    def modulate(self, r: int) -> "CyclicFunction":
        """x -> f(x) e(r x / N)."""
        n = self.modulus
        phase = np.exp(2j * np.pi * r * np.arange(n) / n)
        return CyclicFunction(n, self.values * phase)

    def dft(self) -> np.ndarray:
        """fhat(r) = E_x f(x) e(-rx/N)."""
        return np.fft.fft(self.values) / self.modulus


@dataclass(frozen=True)
class CyclicSubset:
    """A subset of Z/N as a strictly increasing member list."""

    modulus: int
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        mem = tuple(int(x) for x in self.members)
        if any(x < 0 or x >= self.modulus for x in mem):
            raise ValueError("members must lie in [0, N)")
        if any(a >= b for a, b in zip(mem, mem[1:])):
            raise ValueError("members must be strictly increasing")
        object.__setattr__(self, "members", mem)

    @classmethod
    def from_iterable(cls, modulus: int, items) -> "CyclicSubset":
        return cls(modulus, tuple(sorted({int(x) % modulus for x in items})))

    @classmethod
    def full(cls, modulus: int) -> "CyclicSubset":
        return cls(modulus, tuple(range(modulus)))

    @classmethod
    def empty(cls, modulus: int) -> "CyclicSubset":
        return cls(modulus, ())

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x % self.modulus in set(self.members)

    @property
    def density(self) -> Fraction:
        return Fraction(len(self.members), self.modulus)

    def indicator_array(self) -> np.ndarray:
        arr = np.zeros(self.modulus, dtype=np.uint8)
        if self.members:
            arr[list(self.members)] = 1
        return arr

    def indicator(self) -> CyclicFunction:
        return CyclicFunction(self.modulus, self.indicator_array().astype(np.complex128))

    def complement(self) -> "CyclicSubset":
        inside = set(self.members)
        return CyclicSubset(self.modulus, tuple(x for x in range(self.modulus) if x not in inside))

    def dilate(self, k: int) -> "CyclicSubset":
        return CyclicSubset.from_iterable(self.modulus, (k * x for x in self.members))

    def to_text(self) -> str:
        lines = [f"N {self.modulus}"]
        lines.extend(str(x) for x in self.members)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CyclicSubset":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("N "):
            raise ValueError('set files start with a line "N <modulus>"')
        modulus = int(lines[0][2:])
        members = tuple(int(ln) for ln in lines[1:])
        return cls(modulus, tuple(sorted(members)))

    @classmethod
    def load(cls, path) -> "CyclicSubset":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_text())


@dataclass(frozen=True)
class SolutionMeasure:
    """Value of Sol across a system; exact count attached for indicators."""

    value: complex
    points: int
    count: int | None = None

    def __complex__(self) -> complex:
        return complex(self.value)

    @property
    def fraction(self) -> Fraction:
        if self.count is None:
            raise ValueError("no exact count: inputs were not indicators")
        return Fraction(self.count, self.points)


DEFAULT_BRUTE_CAP = 10**9
_CHUNK = 1 << 18


def _check_slots(fs: Sequence[CyclicFunction], system: LinearFormSystem) -> int:
    if len(fs) != system.t:
        raise ValueError(f"system has {system.t} forms but got {len(fs)} functions")
    moduli = {f.modulus for f in fs}
    if len(moduli) != 1:
        raise ValueError("all functions must share one modulus")
    return moduli.pop()


def _grid_chunks(n: int, d: int, cap: int):
    total = n**d
    if total > cap:
        raise ValueError(f"brute force over {n}^{d} points exceeds cap {cap}")
    powers = [n**j for j in range(d)]
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = [(idx // p) % n for p in powers]
        yield digits


def _phi_indices(system: LinearFormSystem, digits, n: int):
    for row in system.forms:
        acc = None
        for c, dig in zip(row, digits):
            if c == 0:
                continue
            term = (c % n) * dig
            acc = term if acc is None else acc + term
        yield acc % n if acc is not None else np.zeros_like(digits[0])


def sol_brute(
    fs: Sequence[CyclicFunction],
    system: LinearFormSystem,
    cap: int = DEFAULT_BRUTE_CAP,
) -> SolutionMeasure:
    """Sol(f_1, ..., f_t) = E_{n in (Z/N)^D} prod_i f_i(psi_i(n)), exactly as stated.

    Indicator inputs take an integer accumulation path and carry the exact
    configuration count in the result.
    """
    n = _check_slots(fs, system)
    d = system.num_variables
    total = n**d
    if all(f.is_indicator() for f in fs):
        inds = [f.values.real.astype(np.uint8) for f in fs]
        count = 0
        for digits in _grid_chunks(n, d, cap):
            prod = None
            for ind, phi in zip(inds, _phi_indices(system, digits, n)):
                vals = ind[phi]
                prod = vals.copy() if prod is None else prod * vals
            count += int(prod.sum())
        return SolutionMeasure(value=complex(Fraction(count, total)), points=total, count=count)
    acc = 0.0 + 0.0j
    for digits in _grid_chunks(n, d, cap):
        prod = None
        for f, phi in zip(fs, _phi_indices(system, digits, n)):
            vals = f.values[phi]
            prod = vals.copy() if prod is None else prod * vals
        acc += complex(prod.sum())
    return SolutionMeasure(value=acc / total, points=total, count=None)


def sol_count(
    sets: Sequence[CyclicSubset] | CyclicSubset,
    system: LinearFormSystem,
    cap: int = DEFAULT_BRUTE_CAP,
) -> SolutionMeasure:
    """Exact configuration count for indicator sets (one set, or one per slot)."""
    if isinstance(sets, CyclicSubset):
        sets = [sets] * system.t
    fs = [s.indicator() for s in sets]
    return sol_brute(fs, system, cap=cap)


def has_configuration(
    sets: Sequence[CyclicSubset] | CyclicSubset,
    system: LinearFormSystem,
    cap: int = DEFAULT_BRUTE_CAP,
) -> bool:
    """True iff some configuration of the system lands in the given sets.

    Early-exits on the first hit, chunk by chunk.
    """
    if isinstance(sets, CyclicSubset):
        sets = [sets] * system.t
    if len(sets) != system.t:
        raise ValueError("one set per form required")
    n = sets[0].modulus
    if any(s.modulus != n for s in sets):
        raise ValueError("all sets must share one modulus")
    inds = [s.indicator_array() for s in sets]
    d = system.num_variables
    for digits in _grid_chunks(n, d, cap):
        prod = None
        for ind, phi in zip(inds, _phi_indices(system, digits, n)):
            vals = ind[phi]
            prod = vals.copy() if prod is None else prod * vals
        if prod.any():
            return True
    return False


def sol_fast(
    fs: Sequence[CyclicFunction],
    system: LinearFormSystem,
    kp: KernelPresentation,
    dual_budget: int = 10**8,
) -> complex:
    """Sol via the dual sum  sum_{u in (Z/N)^k}  prod_i  fhat_i((B^T u)_i).

    Requires gcd(N, bad modulus) = 1 so the kernel presentation matches the
    image.  Matches ``sol_brute`` to 1e-9; cost O(t N log N + N^k t).
    """
    n = _check_slots(fs, system)
    if math.gcd(n, kp.bad_modulus) != 1:
        raise ValueError(f"modulus {n} shares a factor with bad modulus {kp.bad_modulus}")
    k = kp.k
    if k == 0:
        out = 1.0 + 0.0j
        for f in fs:
            out *= f.mean
        return out
    if n**k * system.t > dual_budget:
        raise ValueError(f"dual sum over {n}^{k} points exceeds budget")
    hats = [f.dft() for f in fs]
    rows = np.array(kp.matrix, dtype=np.int64)  # k x t
    grid = np.indices((n,) * k).reshape(k, -1)  # k x n^k
    prod = np.ones(grid.shape[1], dtype=np.complex128)
    for i in range(system.t):
        freq = (rows[:, i] @ grid) % n
        prod *= hats[i][freq]
    return complex(prod.sum())


def complement_sol(a: CyclicSubset) -> tuple[Fraction, Fraction]:
    """(Sol_3AP(A), Sol_3AP(A^c)) as exact rationals; N must be odd.

    Their sum is exactly 1 - 3 alpha + 3 alpha^2 with alpha = |A|/N; this
    is asserted before returning.
    """
    from .forms import three_ap

    if a.modulus % 2 == 0:
        raise ValueError("complement identity needs odd N")
    system = three_ap()
    sol_a = sol_count(a, system).fraction
    sol_c = sol_count(a.complement(), system).fraction
    alpha = a.density
    expected = 1 - 3 * alpha + 3 * alpha**2
    if sol_a + sol_c != expected:
        raise AssertionError(
            f"complement identity violated: {sol_a} + {sol_c} != {expected}"
        )
    return sol_a, sol_c


def l1_deviation(f: CyclicFunction, g: CyclicFunction) -> float:
    """E_x |f(x) - g(x)|."""
    if f.modulus != g.modulus:
        raise ValueError("moduli differ")
    return float(np.mean(np.abs(f.values - g.values)))

"""Gowers uniformity norms on Z/N, the von Neumann test harness, rounding.

U^d is computed by exact recursion over difference tuples down to the U^2
base case, where ||f||_{U^2}^4 = sum_r |fhat(r)|^4 under the package DFT
convention.  The definitional evaluator sums the full (d+1)-dimensional
grid and exists only as a test oracle; it shares no code with the fast
path beyond the input type.

Randomness contract: every seeded operation uses numpy's PCG64 generator
(``numpy.random.default_rng(seed)``), so results replay across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .counting import CyclicFunction, CyclicSubset, sol_brute
from .forms import LinearFormSystem, pairwise_independent, size
from .primes import is_prime, smallest_prime_factor

DEFAULT_BUDGET = 5 * 10**8


def _u2_fourth(values: np.ndarray) -> float:
    """||f||_{U^2}^4 = sum_r |fhat(r)|^4 for one vector."""
    n = len(values)
    if np.all(values.imag == 0):
        spec = np.fft.rfft(values.real)
        mags = np.abs(spec) ** 4
        total = mags[0]
        if n % 2 == 0:
            total += mags[-1]
            total += 2 * mags[1:-1].sum()
        else:
            total += 2 * mags[1:].sum()
    else:
        spec = np.fft.fft(values)
        total = (np.abs(spec) ** 4).sum()
    return float(total) / n**4


def _u2_fourth_rows(rows: np.ndarray) -> np.ndarray:
    """Row-wise ||.||_{U^2}^4 for a matrix of functions."""
    n = rows.shape[1]
    if np.isrealobj(rows):
        spec = np.fft.rfft(rows, axis=1)
        mags = np.abs(spec)
        mags **= 2
        mags **= 2
        totals = mags[:, 0].copy()
        if n % 2 == 0:
            totals += mags[:, -1]
            totals += 2 * mags[:, 1:-1].sum(axis=1)
        else:
            totals += 2 * mags[:, 1:].sum(axis=1)
    else:
        spec = np.fft.fft(rows, axis=1)
        mags = np.abs(spec)
        mags **= 2
        mags **= 2
        totals = mags.sum(axis=1)
    return totals / n**4


def _all_shifts(values: np.ndarray) -> np.ndarray:
    """Matrix with row h equal to x -> f(x + h), as a cheap strided product."""
    n = len(values)
    doubled = np.concatenate([values, values])
    view = np.lib.stride_tricks.sliding_window_view(doubled, n)[:n]
    return view


def _power_mean(values: np.ndarray, d: int, budget: int) -> float:
    """E_{h tuples} ||Delta_{h_1..h_{d-2}} f||_{U^2}^4  =  ||f||_{U^d}^{2^d}."""
    n = len(values)
    if d == 2:
        return _u2_fourth(values)
    if n ** (d - 2) * n > budget:
        raise ValueError(f"U^{d} at N={n} exceeds the computation budget")
    if d == 3:
        shifts = _all_shifts(values)
        rows = shifts * np.conj(values)[None, :]
        if np.all(values.imag == 0):
            rows = rows.real
        return float(np.mean(_u2_fourth_rows(rows)))
    total = 0.0
    conj = np.conj(values)
    for h in range(n):
        total += _power_mean(np.roll(values, -h) * conj, d - 1, budget)
    return total / n


def gowers_norm(f: CyclicFunction, d: int, budget: int = DEFAULT_BUDGET) -> float:
    """||f||_{U^d}; nonnegative, nested in d."""
    if d < 1:
        raise ValueError("d must be at least 1")
    if d == 1:
        return abs(f.mean)
    power = _power_mean(np.asarray(f.values), d, budget)
    return max(power, 0.0) ** (1.0 / (1 << d))


def gowers_norm_definitional(f: CyclicFunction, d: int, cap: int = 10**8) -> float:
    """Direct evaluation of the defining (d+1)-fold average.  Test oracle only."""
    if d < 1:
        raise ValueError("d must be at least 1")
    n = f.modulus
    if n ** (d + 1) > cap:
        raise ValueError(f"definitional U^{d} needs {n}^{d+1} > {cap} grid points")
    values = np.asarray(f.values)
    real = bool(np.all(values.imag == 0))
    if real:
        values = values.real
    # axes: x, h_1, ..., h_d; chunk over h_d to bound memory
    axes = [np.arange(n, dtype=np.int64).reshape([-1] + [1] * d)]
    for j in range(1, d):
        shape = [1] * (d + 1)
        shape[j] = -1
        axes.append(np.arange(n, dtype=np.int64).reshape(shape))
    total = 0.0 if real else 0.0 + 0.0j
    for hd in range(n):
        prod = None
        for eps in range(1 << d):
            idx = axes[0]
            for j in range(d - 1):
                if (eps >> j) & 1:
                    idx = idx + axes[j + 1]
            if (eps >> (d - 1)) & 1:
                idx = idx + hd
            gathered = values[np.mod(idx, n)]
            if not real and bin(eps).count("1") % 2 == 1:
                gathered = np.conj(gathered)
            prod = gathered if prod is None else prod * gathered
        total += prod.sum()
    power = total / n ** (d + 1)
    if not real:
        if abs(power.imag) > 1e-9:
            raise AssertionError("definitional average should be real")
        power = power.real
    return max(float(power), 0.0) ** (1.0 / (1 << d))


@dataclass(frozen=True)
class GvnReport:
    """Both sides of |Sol(f) - Sol(g)| <= L ||f-g||_{U^{s+1}}, with verdict."""

    sol_f: float
    sol_g: float
    lhs: float
    norm: float
    size: int
    rhs: float
    passed: bool
    degree: int


def gvn_check(
    f: CyclicFunction,
    g: CyclicFunction,
    system: LinearFormSystem,
    s: int,
    min_prime_factor: int | None = None,
) -> GvnReport:
    """Check the generalized von Neumann inequality on one (f, g) pair.

    Preconditions: [0,1]-valued inputs, pairwise-independent system, and a
    prime modulus (or, with ``min_prime_factor``, a modulus whose smallest
    prime factor clears a caller-chosen floor standing in for the paper's
    uncomputed constant).  A failed inequality is reported, not raised.
    """
    if not (f.is_real_unit_interval() and g.is_real_unit_interval()):
        raise ValueError("f and g must take values in [0, 1]")
    if f.modulus != g.modulus:
        raise ValueError("moduli differ")
    if not pairwise_independent(system):
        raise ValueError("system must be pairwise independent")
    n = f.modulus
    if min_prime_factor is None:
        if not is_prime(n):
            raise ValueError("modulus must be prime (or pass min_prime_factor)")
    elif smallest_prime_factor(n) < min_prime_factor:
        raise ValueError(f"smallest prime factor of {n} is below {min_prime_factor}")
    if s < 1:
        raise ValueError("s must be positive")
    sol_f = complex(sol_brute([f] * system.t, system)).real
    sol_g = complex(sol_brute([g] * system.t, system)).real
    delta = np.asarray(f.values) - np.asarray(g.values)
    norm = gowers_norm(CyclicFunction(n, delta), s + 1)
    lhs = abs(sol_f - sol_g)
    l = size(system)
    rhs = l * norm
    return GvnReport(
        sol_f=sol_f,
        sol_g=sol_g,
        lhs=lhs,
        norm=norm,
        size=l,
        rhs=rhs,
        passed=lhs <= rhs + 1e-12,
        degree=s,
    )


def random_round(f: CyclicFunction, seed: int) -> CyclicSubset:
    """Round a [0,1]-valued f to a set: x kept with probability f(x).

    Seeded PCG64; f = 1 gives the full set and f = 0 the empty one exactly,
    because uniforms live in [0, 1).
    """
    if not f.is_real_unit_interval():
        raise ValueError("random rounding needs real values in [0, 1]")
    rng = np.random.default_rng(seed)
    u = rng.random(f.modulus)
    members = np.nonzero(u < f.values.real)[0]
    return CyclicSubset(f.modulus, tuple(int(x) for x in members))

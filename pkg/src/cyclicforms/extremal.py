"""Extremal solution counts, free densities, and explicit free sets.

Exact solvers enumerate subsets (or run branch and bound on the
forbidden-configuration hypergraph) and always re-verify the certificate
through the brute-force counter before returning; heuristic solvers are
seeded annealing searches whose results are certificate-backed bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .counting import (
    CyclicSubset,
    as_fraction,
    has_configuration,
    sol_count,
)
from .forms import LinearFormSystem, image_mod_n, is_invariant
from .primes import is_prime, multiplicative_order


@dataclass(frozen=True)
class ExtremalResult:
    value: Fraction | float
    certificate: CyclicSubset | None
    method: str  # "exact" | "heuristic" | "construction"
    bound_kind: str  # "equals" | "upperBound" | "lowerBound"
    detail: dict = field(default_factory=dict)

    def as_json_dict(self) -> dict:
        cert = None
        if self.certificate is not None:
            cert = {"modulus": self.certificate.modulus, "members": list(self.certificate.members)}
        value = self.value
        return {
            "value": str(value) if isinstance(value, Fraction) else value,
            "valueFloat": float(value),
            "certificate": cert,
            "method": self.method,
            "boundKind": self.bound_kind,
            "verification": {k: str(v) for k, v in self.detail.items()},
        }


DEFAULT_SUBSET_BUDGET = 1 << 22


# ---------------------------------------------------------------------------
# configuration tables


def _config_table(system: LinearFormSystem, n: int, cap: int = 10**7):
    """Distinct configurations as needed-bitmasks with multiplicities.

    A subset given as bitmask B contains a configuration y iff
    needed(y) & ~B == 0 where needed(y) = OR of 1 << y_i.
    """
    d = system.num_variables
    if n**d > cap:
        raise ValueError(f"configuration table for {n}^{d} points exceeds cap")
    if n > 62:
        raise ValueError("bitmask path supports N <= 62")
    grid = np.indices((n,) * d).reshape(d, -1)
    mat = np.array(system.forms, dtype=np.int64)
    vals = mat @ grid % n  # t x n^d
    needed = np.zeros(vals.shape[1], dtype=np.int64)
    for row in vals:
        needed |= np.int64(1) << row
    masks, mult = np.unique(needed, return_counts=True)
    return masks, mult.astype(np.int64)


def _count_for_mask(masks: np.ndarray, mult: np.ndarray, subset_mask: int) -> int:
    ok = (masks & ~np.int64(subset_mask)) == 0
    return int(mult[ok].sum())


def _verify_exact(system: LinearFormSystem, subset: CyclicSubset, value: Fraction) -> None:
    check = sol_count(subset, system).fraction
    if check != value:
        raise AssertionError(f"certificate re-verification failed: {check} != {value}")


def _mask_to_subset(n: int, mask: int) -> CyclicSubset:
    return CyclicSubset(n, tuple(x for x in range(n) if (mask >> x) & 1))


def min_sol_exact(
    system: LinearFormSystem,
    alpha,
    n: int,
    budget: int = DEFAULT_SUBSET_BUDGET,
) -> ExtremalResult:
    """Exact m(alpha, N): minimum Sol over subsets of size >= ceil(alpha N).

    Scans every size >= the floor rather than assuming the minimum sits at
    the smallest size.
    """
    alpha = as_fraction(alpha)
    size_min = max(0, math.ceil(alpha * n))
    if size_min > n:
        raise ValueError("alpha N exceeds N")
    if 1 << n > budget:
        raise ValueError(f"2^{n} subsets exceed the exact budget")
    masks, mult = _config_table(system, n)
    total = n**system.num_variables
    best_count = None
    best_mask = None
    for mask in range(1 << n):
        if bin(mask).count("1") < size_min:
            continue
        c = _count_for_mask(masks, mult, mask)
        if best_count is None or c < best_count:
            best_count, best_mask = c, mask
    value = Fraction(best_count, total)
    cert = _mask_to_subset(n, best_mask)
    _verify_exact(system, cert, value)
    return ExtremalResult(value, cert, "exact", "equals", {"count": best_count})


def max_sol_exact(
    system: LinearFormSystem,
    alpha,
    n: int,
    budget: int = DEFAULT_SUBSET_BUDGET,
) -> ExtremalResult:
    """Exact M(alpha, N): maximum Sol over subsets of size <= floor(alpha N)."""
    alpha = as_fraction(alpha)
    size_max = min(n, math.floor(alpha * n))
    if 1 << n > budget:
        raise ValueError(f"2^{n} subsets exceed the exact budget")
    masks, mult = _config_table(system, n)
    total = n**system.num_variables
    best_count = None
    best_mask = None
    for mask in range(1 << n):
        if bin(mask).count("1") > size_max:
            continue
        c = _count_for_mask(masks, mult, mask)
        if best_count is None or c > best_count:
            best_count, best_mask = c, mask
    value = Fraction(best_count, total)
    cert = _mask_to_subset(n, best_mask)
    _verify_exact(system, cert, value)
    return ExtremalResult(value, cert, "exact", "equals", {"count": best_count})


# ---------------------------------------------------------------------------
# annealing


def _anneal(
    system: LinearFormSystem,
    n: int,
    size: int,
    seed: int,
    moves: int,
    minimize: bool,
):
    """Swap-neighborhood annealing at fixed subset size.

    The cooling schedule depends only on the move index, so doubling the
    budget extends the same trajectory: best-so-far is monotone in the
    budget at fixed seed.
    """
    rng = np.random.default_rng(seed)
    masks, mult = _config_table(system, n)
    total = n**system.num_variables
    sign = 1 if minimize else -1

    members = list(rng.permutation(n)[:size])
    outside = [x for x in range(n) if x not in set(members)]
    mask = 0
    for x in members:
        mask |= 1 << int(x)
    energy = sign * _count_for_mask(masks, mult, mask)
    best_energy, best_mask = energy, mask

    t0, cooling, t_floor = 0.08, 0.999, 1e-6
    for step in range(moves):
        if not members or not outside:
            break
        temp = max(t0 * cooling**step, t_floor)
        i = int(rng.integers(len(members)))
        j = int(rng.integers(len(outside)))
        x_out, x_in = members[i], outside[j]
        new_mask = (mask & ~(1 << int(x_out))) | (1 << int(x_in))
        new_energy = sign * _count_for_mask(masks, mult, new_mask)
        delta = (new_energy - energy) / total
        if delta <= 0 or rng.random() < math.exp(-delta / temp):
            members[i], outside[j] = x_in, x_out
            mask, energy = new_mask, new_energy
            if energy < best_energy:
                best_energy, best_mask = energy, mask
    return best_mask


def min_sol_heuristic(
    system: LinearFormSystem,
    alpha,
    n: int,
    seed: int = 0,
    budget: int = 4000,
) -> ExtremalResult:
    """Certificate-backed upper bound on m(alpha, N) by seeded annealing."""
    alpha = as_fraction(alpha)
    size = max(0, math.ceil(alpha * n))
    if size > n:
        raise ValueError("alpha N exceeds N")
    mask = _anneal(system, n, size, seed, budget, minimize=True)
    cert = _mask_to_subset(n, mask)
    value = sol_count(cert, system).fraction
    return ExtremalResult(value, cert, "heuristic", "upperBound", {"seed": seed, "moves": budget})


def max_sol_heuristic(
    system: LinearFormSystem,
    alpha,
    n: int,
    seed: int = 0,
    budget: int = 4000,
) -> ExtremalResult:
    """Certificate-backed lower bound on M(alpha, N) by seeded annealing."""
    alpha = as_fraction(alpha)
    size = min(n, math.floor(alpha * n))
    mask = _anneal(system, n, size, seed, budget, minimize=False)
    cert = _mask_to_subset(n, mask)
    value = sol_count(cert, system).fraction
    return ExtremalResult(value, cert, "heuristic", "lowerBound", {"seed": seed, "moves": budget})


def max_sol(system: LinearFormSystem, alpha, n: int, mode: str = "exact", **kw) -> ExtremalResult:
    if mode == "exact":
        return max_sol_exact(system, alpha, n, **kw)
    if mode == "heuristic":
        return max_sol_heuristic(system, alpha, n, **kw)
    raise ValueError(f"unknown mode {mode!r}")


def min_sol(system: LinearFormSystem, alpha, n: int, mode: str = "exact", **kw) -> ExtremalResult:
    if mode == "exact":
        return min_sol_exact(system, alpha, n, **kw)
    if mode == "heuristic":
        return min_sol_heuristic(system, alpha, n, **kw)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# maximum free density


def _forbidden_edges(
    family: Sequence[LinearFormSystem],
    n: int,
    ignore_constant_configs: bool,
) -> list[frozenset[int]]:
    edges: set[frozenset[int]] = set()
    for system in family:
        for config in image_mod_n(system, n):
            if ignore_constant_configs and len(set(config)) == 1:
                continue
            edges.add(frozenset(config))
    # drop supersets: avoiding the smaller edge already avoids the bigger
    minimal: list[frozenset[int]] = []
    for e in sorted(edges, key=len):
        if not any(f <= e for f in minimal):
            minimal.append(e)
    return minimal


def _max_independent_bb(n: int, edges: list[frozenset[int]], node_budget: int = 2_000_000):
    """Exact maximum subset of [0, n) containing no edge entirely.

    Branch on a fully-available edge by excluding one of its vertices;
    bound by the size of the remaining candidate set.
    """
    edge_masks = [0 for _ in edges]
    for idx, e in enumerate(edges):
        m = 0
        for v in e:
            m |= 1 << v
        edge_masks[idx] = m
    full = (1 << n) - 1
    best = {"mask": 0, "size": -1, "nodes": 0}

    def popcount(x: int) -> int:
        return bin(x).count("1")

    def recurse(avail: int) -> None:
        best["nodes"] += 1
        if best["nodes"] > node_budget:
            raise ValueError("branch-and-bound node budget exceeded")
        if popcount(avail) <= best["size"]:
            return
        live = next((m for m in edge_masks if m & avail == m), None)
        if live is None:
            size = popcount(avail)
            if size > best["size"]:
                best["size"], best["mask"] = size, avail
            return
        v = live & avail
        while v:
            bit = v & -v
            recurse(avail & ~bit)
            v &= v - 1

    recurse(full)
    return best["mask"], best["size"]


def max_free_density_exact(
    family: Sequence[LinearFormSystem],
    n: int,
    ignore_constant_configs: bool = False,
    node_budget: int = 2_000_000,
) -> ExtremalResult:
    """Exact d_F(Z/N) with a verified-free certificate.

    Free means no configuration of any system of the family lands in the
    set, including diagonal ones; ``ignore_constant_configs`` weakens
    this to permit configurations whose coordinates all coincide.
    """
    family = list(family)
    if n > 62:
        raise ValueError("exact free-density search supports N <= 62")
    if not family:
        cert = CyclicSubset.full(n)
        return ExtremalResult(Fraction(1), cert, "exact", "equals", {})
    edges = _forbidden_edges(family, n, ignore_constant_configs)
    mask, size = _max_independent_bb(n, edges, node_budget)
    cert = _mask_to_subset(n, mask)
    for system in family:
        if not ignore_constant_configs:
            measured = sol_count(cert, system)
            if measured.count != 0:
                raise AssertionError("certificate contains a configuration")
        else:
            for config in image_mod_n(system, n):
                if len(set(config)) > 1 and all(x in cert for x in config):
                    raise AssertionError("certificate contains a non-constant configuration")
    return ExtremalResult(
        Fraction(size, n), cert, "exact", "equals", {"edges": len(edges)}
    )


def max_free_density_heuristic(
    family: Sequence[LinearFormSystem],
    n: int,
    seed: int = 0,
    restarts: int = 8,
    ignore_constant_configs: bool = False,
) -> ExtremalResult:
    """Greedy randomized lower bound for d_F with a verified-free certificate."""
    family = list(family)
    if not family:
        return ExtremalResult(Fraction(1), CyclicSubset.full(n), "heuristic", "lowerBound", {})
    rng = np.random.default_rng(seed)
    edges = _forbidden_edges(family, n, ignore_constant_configs)
    best: set[int] = set()
    for _ in range(max(1, restarts)):
        chosen: set[int] = set()
        for v in rng.permutation(n):
            v = int(v)
            trial = chosen | {v}
            if any(e <= trial for e in edges):
                continue
            chosen = trial
        if len(chosen) > len(best):
            best = chosen
    cert = CyclicSubset.from_iterable(n, best)
    for system in family:
        if not ignore_constant_configs and sol_count(cert, system).count != 0:
            raise AssertionError("certificate contains a configuration")
    return ExtremalResult(
        Fraction(len(best), n), cert, "heuristic", "lowerBound", {"seed": seed}
    )


# ---------------------------------------------------------------------------
# the dependent pair (x, kx)


def _dilation_cycles(k: int, p: int) -> tuple[int, list[list[int]]]:
    """Orbits of x -> kx on (Z/p)^x; all share length ord_p(k)."""
    order = multiplicative_order(k, p)
    seen = [False] * p
    cycles = []
    for x in range(1, p):
        if seen[x]:
            continue
        cyc = []
        y = x
        while not seen[y]:
            seen[y] = True
            cyc.append(y)
            y = y * k % p
        cycles.append(cyc)
    assert all(len(c) == order for c in cycles)
    return order, cycles


def _cycle_members(cycle: list[int], count: int, order: int) -> list[int]:
    """Pick ``count`` members of a dilation cycle with minimal solution cost.

    Cost max(0, 2j - n): alternate while possible, then pack the excess
    into one run.
    """
    n = order
    j = count
    if j == 0:
        return []
    if j <= n // 2:
        return [cycle[2 * u] for u in range(j)]
    if j == n:
        return list(cycle)
    runs = n - j  # number of gaps, each of length 1
    first_run = j - (runs - 1)
    picked = []
    pos = 0
    picked.extend(cycle[pos : pos + first_run])
    pos += first_run + 1
    for _ in range(runs - 1):
        picked.append(cycle[pos])
        pos += 2
    return picked


def dependent_pair_exact(k: int, p: int, alpha=None):
    """Exact free density, and minimum solution measure, for (x, kx) mod p.

    The units decompose into cycles of length ord_p(k) under dilation by
    k; the free density is floor(n/2) per cycle (0 itself is never free:
    it forms the configuration (0, 0)).  The minimum at density alpha
    distributes the required size across cycles by the convex per-cycle
    cost max(0, 2j - n), plus cost 1 if 0 is used.

    Returns (density_result, min_result_or_None).
    """
    if abs(k) < 2:
        raise ValueError("need |k| >= 2")
    if not is_prime(p):
        raise ValueError("p must be prime")
    if k % p == 0:
        raise ValueError("k must be a unit mod p")
    from .forms import dilate_pair

    system = dilate_pair(k)
    order, cycles = _dilation_cycles(k, p)
    per_cycle = order // 2
    members: list[int] = []
    for cyc in cycles:
        members.extend(_cycle_members(cyc, per_cycle, order))
    cert = CyclicSubset.from_iterable(p, members)
    measured = sol_count(cert, system)
    if measured.count != 0:
        raise AssertionError("free certificate contains a configuration")
    density = ExtremalResult(
        Fraction(len(cert), p),
        cert,
        "exact",
        "equals",
        {"order": order, "cycles": len(cycles)},
    )
    if alpha is None:
        return density, None

    alpha = as_fraction(alpha)
    size_min = max(0, math.ceil(alpha * p))
    num_cycles = len(cycles)
    free_capacity = num_cycles * per_cycle
    if size_min <= free_capacity:
        # spread across cycles without ever exceeding floor(n/2)
        base, extra = divmod(size_min, num_cycles)
        counts = [min(per_cycle, base + (1 if c < extra else 0)) for c in range(num_cycles)]
        short = size_min - sum(counts)
        c = 0
        while short > 0:
            if counts[c] < per_cycle:
                counts[c] += 1
                short -= 1
            c = (c + 1) % num_cycles
        use_zero = False
    else:
        counts = [per_cycle] * num_cycles
        remaining = size_min - free_capacity
        # marginal costs: 1 for the first extra in an odd cycle, 1 for the
        # zero element, 2 for everything after; spend the cheap ones first
        cheap: list[tuple[int, str]] = []
        if order % 2 == 1:
            cheap.extend([(1, "cycle-first-extra")] * num_cycles)
        cheap.append((1, "zero"))
        cheap.sort()
        use_zero = False
        for cost, kind in cheap:
            if remaining == 0:
                break
            if kind == "zero":
                use_zero = True
                remaining -= 1
            else:
                idx = next(
                    (c for c in range(num_cycles) if counts[c] == per_cycle), None
                )
                if idx is None:
                    continue
                counts[idx] += 1
                remaining -= 1
        # the rest costs 2 per element wherever capacity is left
        c = 0
        while remaining > 0:
            if counts[c] < order:
                counts[c] += 1
                remaining -= 1
            else:
                c += 1
                if c == num_cycles:
                    if not use_zero:
                        use_zero = True
                        remaining -= 1
                        continue
                    raise ValueError("alpha N exceeds N")

    chosen: list[int] = []
    for cyc, j in zip(cycles, counts):
        chosen.extend(_cycle_members(cyc, j, order))
    if size_min > free_capacity and use_zero:
        chosen.append(0)
    min_cert = CyclicSubset.from_iterable(p, chosen)
    assert len(min_cert) == size_min
    measured = sol_count(min_cert, system)
    expected = sum(max(0, 2 * j - order) if j < order else order for j in counts)
    if size_min > free_capacity and use_zero:
        expected += 1
    if measured.count != expected:
        raise AssertionError(
            f"cycle placement cost {measured.count} != convex optimum {expected}"
        )
    min_result = ExtremalResult(
        Fraction(measured.count, p),
        min_cert,
        "exact",
        "equals",
        {"order": order, "size": size_min},
    )
    return density, min_result


# ---------------------------------------------------------------------------
# explicit constructions


def weyl_set(p: int, k: int, d: int) -> CyclicSubset:
    """The power-residue interval set {x : x^d mod p in I}.

    I is the interval of half-width delta p around floor(p / k^d) with
    delta = 1 / (4 k^{2d}); k-dilates of the set have d-th powers in the
    disjoint dilated interval, so the set is verified free of (x, kx)
    configurations before it is returned.  Its density approaches
    2 delta = 1 / (2 k^{2d}).
    """
    if not is_prime(p):
        raise ValueError("p must be prime")
    if k < 2 or d < 2:
        raise ValueError("need k >= 2 and d > 1")
    delta = Fraction(1, 4 * k ** (2 * d))
    center = p // k**d
    lo = center - delta * p
    hi = center + delta * p
    if lo <= 0 or hi >= p:
        raise ValueError("interval is degenerate at these parameters")
    members = [x for x in range(p) if lo <= pow(x, d, p) <= hi]
    subset = CyclicSubset(p, tuple(members))
    from .forms import dilate_pair

    if sol_count(subset, dilate_pair(k)).count != 0:
        raise AssertionError("power-residue interval set is not dilation-free")
    return subset


def weyl_target_density(k: int, d: int) -> Fraction:
    return Fraction(1, 2 * k ** (2 * d))


def multiplicative_free_set(k: int, p: int) -> CyclicSubset:
    """A dilation-free set of density about 1/2 from multiplicative cosets.

    For k = -1 the first half interval works; otherwise take the even
    powers E = {k^2, k^4, ...} inside the subgroup generated by k and
    spread E across all cosets.  A cap kA = empty is verified exactly.
    """
    if not is_prime(p):
        raise ValueError("p must be prime")
    k_mod = k % p
    if k_mod in (0, 1):
        raise ValueError("k must not be 0 or 1 mod p")
    from .forms import dilate_pair

    if k_mod == p - 1:
        members = tuple(range(1, (p - 1) // 2 + 1))
        subset = CyclicSubset(p, members)
    else:
        order, cycles = _dilation_cycles(k_mod, p)
        exponents = [2 * j % order for j in range(1, order // 2 + 1)]
        chosen: list[int] = []
        for cyc in cycles:
            # cyc[j] = x k^j; even powers of k inside the coset
            chosen.extend(cyc[e] for e in set(exponents))
        subset = CyclicSubset.from_iterable(p, chosen)
    if sol_count(subset, dilate_pair(k)).count != 0:
        raise AssertionError("multiplicative construction is not dilation-free")
    return subset


def interval_free_set(
    system: LinearFormSystem,
    n: int,
    max_denominator: int = 64,
) -> ExtremalResult | None:
    """Densest rational-endpoint interval that is verified free for the system.

    Candidate intervals [a N / D0, b N / D0) run over denominators
    D0 <= max_denominator; every returned set is re-verified free by an
    exact configuration scan.  Returns None when nothing free turns up
    within the denominator budget; invariant systems are rejected
    outright since only non-invariant systems admit free intervals.
    """
    if is_invariant(system):
        raise ValueError("invariant systems admit no free sets; need a non-invariant system")
    seen: set[tuple[int, int]] = set()
    candidates: list[tuple[int, int]] = []
    for d0 in range(1, max_denominator + 1):
        for a in range(d0):
            for b in range(a + 1, d0 + 1):
                lo = -((-a * n) // d0)  # ceil(aN/D0)
                hi = -((-b * n) // d0)
                if hi - lo <= 0 or hi - lo >= n:
                    continue
                if (lo, hi) in seen:
                    continue
                seen.add((lo, hi))
                candidates.append((lo, hi))
    candidates.sort(key=lambda c: (-(c[1] - c[0]), c[0]))
    for lo, hi in candidates:
        subset = CyclicSubset(n, tuple(range(lo, hi)))
        if not has_configuration(subset, system):
            if sol_count(subset, system).count != 0:
                raise AssertionError("freeness scan and recount disagree")
            return ExtremalResult(
                subset.density,
                subset,
                "construction",
                "lowerBound",
                {"interval": f"[{lo}, {hi})"},
            )
    return None

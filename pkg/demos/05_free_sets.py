"""Sets free of dilation configurations (x, kx), three ways.

The multiplicative-coset construction reaches density about 1/2, the
best possible; rational-endpoint intervals are simpler but weaker; and
the power-residue interval set is nearly invisible to the U^2 norm while
still being completely free.  Every set is verified free exactly.
"""

import numpy as np

from cyclicforms import (
    CyclicFunction,
    dependent_pair_exact,
    dilate_pair,
    gowers_norm,
    interval_free_set,
    kernel_system,
    max_free_density_exact,
    multiplicative_free_set,
    sol_count,
    weyl_set,
    weyl_target_density,
)

pair = dilate_pair(2)

print("exact free density for (x, 2x) via dilation cycles:")
for p in (5, 7, 101, 1009):
    density, _ = dependent_pair_exact(2, p)
    print(f"  p = {p:5d}: d = {density.value} = {float(density.value):.5f}")

print("\nbranch-and-bound agrees at accessible sizes:")
for p in (5, 7, 11, 13):
    assert max_free_density_exact([pair], p).value == dependent_pair_exact(2, p)[0].value
    print(f"  p = {p}: confirmed")

p = 101
mult = multiplicative_free_set(2, p)
interval = interval_free_set(pair, p)
print(f"\nat p = {p}:")
print(f"  multiplicative construction: density {float(mult.density):.4f}")
print(f"  best free interval:          density {float(interval.value):.4f}")

print("\npseudorandom free sets from power residues (k=2, d=2):")
for p in (1009, 10007):
    a = weyl_set(p, 2, 2)
    assert sol_count(a, pair).count == 0
    dev = CyclicFunction(p, a.indicator_array().astype(np.complex128) - float(a.density))
    print(
        f"  p = {p:5d}: density {float(a.density):.5f} (target {float(weyl_target_density(2, 2)):.5f}), "
        f"||1_A - a||_U2 = {gowers_norm(dev, 2):.4f}, Sol exactly 0"
    )

non_invariant = kernel_system((1, 1, -3))
r = interval_free_set(non_invariant, 101)
print(f"\nnon-invariant system x+y=3z: free interval {r.detail['interval']}, density {float(r.value):.4f}")

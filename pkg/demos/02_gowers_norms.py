"""Gowers uniformity norms and the generalized von Neumann inequality.

Shows the nesting of the norms, invariance properties, the agreement of
the fast recursion with the definitional average, and how the U^{s+1}
norm controls differences of solution measures.
"""

import numpy as np

from cyclicforms import (
    CyclicFunction,
    four_ap,
    gowers_norm,
    gowers_norm_definitional,
    gvn_check,
    three_ap,
)

rng = np.random.default_rng(7)
n = 16
f = CyclicFunction(n, rng.random(n) * np.exp(2j * np.pi * rng.random(n)))

print(f"random unit-disc function on Z/{n}:")
for d in (1, 2, 3, 4):
    fast = gowers_norm(f, d)
    slow = gowers_norm_definitional(f, d)
    print(f"  U^{d}: recursion {fast:.12f}   definitional {slow:.12f}")

print("\nnorms are nested, and invariant under translation and modulation:")
print(f"  U^2 of f            {gowers_norm(f, 2):.10f}")
print(f"  U^2 of f(x+5)       {gowers_norm(f.translate(5), 2):.10f}")
print(f"  U^2 of f(x) e(3x/N) {gowers_norm(f.modulate(3), 2):.10f}")

print("\nvon Neumann control of solution measures, |dSol| <= L ||f-g||_{U^{s+1}}:")
for system, s, modulus in ((three_ap(), 1, 53), (four_ap(), 2, 31)):
    g = CyclicFunction(modulus, rng.random(modulus))
    h = CyclicFunction(modulus, rng.random(modulus))
    report = gvn_check(g, h, system, s)
    print(
        f"  {system.name} on Z/{modulus} with U^{s + 1}: "
        f"|dSol| = {report.lhs:.5f} <= {report.rhs:.5f} -> {report.passed}"
    )

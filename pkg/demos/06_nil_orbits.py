"""Exact Taylor calculus on the Heisenberg nilmanifold.

Polynomial sequences are stored by Taylor coefficients with binomial
exponents; everything below is Fractions, so expand-then-evaluate
identities hold on the nose, irrationality is decidable, and failed
irrationality factors through the level lattice exactly.
"""

from fractions import Fraction

from cyclicforms.nil import (
    PolynomialSequence,
    element_irrational,
    enumerate_characters,
    factor_coefficient,
    heisenberg_lcs,
    is_irrational,
    taylor_eval,
    taylor_expand,
)

m = heisenberg_lcs()
print(f"model {m.name}: dim {m.dim}, degree {m.degree}, level dims {m.level_dims}")

g1 = m.from_coords([Fraction(1, 3), Fraction(1, 5), 0])
g2 = m.from_coords([0, 0, Fraction(2, 7)])
p = PolynomialSequence(m, (m.identity(), g1, g2))
print("\na degree-2 orbit with g_1 horizontal and g_2 central:")
for n in (0, 1, 2, 3, -2):
    print(f"  psi(g({n})) = {m.malcev_coords(taylor_eval(p, n))}")

values = [taylor_eval(p, n) for n in range(3)]
back = taylor_expand(m, values)
print(
    "\nexpansion of the evaluated points returns the same coefficients:",
    all(a.entries == b.entries for a, b in zip(back.coefficients, p.coefficients)),
)

print("\nlevel-1 characters of complexity <= 2:", [c.frequency for c in enumerate_characters(m, 1, 2)])
flag, witness = is_irrational(p, 2)
print(f"is the orbit 2-irrational? {flag}")

bad = m.from_coords([2, Fraction(1, 997), 0])
ok, witness = element_irrational(m, 1, bad, 2)
print(f"\nplanted coefficient psi_1 = (2, 1/997) irrational? {ok}; witness {witness[1].frequency}")
g_prime, gamma, xi = factor_coefficient(m, 1, bad, 2, q=997)
print(f"factored g_1 = g_1' gamma with psi(gamma) = {m.malcev_coords(gamma)}")
print(f"xi(g_1') = {xi.value(m, g_prime)} exactly, product restores g_1:",
      (g_prime * gamma).entries == bad.entries)

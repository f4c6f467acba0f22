"""Extremal solution counts: exact minima, maxima, and annealing bounds.

m(alpha, N) is the fewest configurations a set of density >= alpha can
have; M(alpha, N) the most a set of density <= alpha can have.  Exact
solvers enumerate subsets and re-verify their certificates; the
annealing search gives certificate-backed bounds at the same points.
"""

from fractions import Fraction

from cyclicforms import (
    max_sol_exact,
    min_sol_exact,
    min_sol_heuristic,
    sol_count,
    three_ap,
)

system = three_ap()

print("m_3AP(2/5, N) for small N (exact):")
for n in (5, 7, 9, 11, 13):
    result = min_sol_exact(system, Fraction(2, 5), n)
    check = sol_count(result.certificate, system).fraction
    print(
        f"  N = {n:2d}: {result.value}  certificate {result.certificate.members}"
        f"  (re-verified: {check == result.value})"
    )

print("\nannealing upper bounds agree here:")
for n in (11, 13):
    heur = min_sol_heuristic(system, Fraction(2, 5), n, seed=0, budget=4000)
    exact = min_sol_exact(system, Fraction(2, 5), n)
    print(f"  N = {n}: heuristic {heur.value} vs exact {exact.value}")

print("\nminimizers and maximizers swap under complementation (odd N):")
n = 9
alpha = Fraction(4, 9)
min_result = min_sol_exact(system, alpha, n)
comp = min_result.certificate.complement()
print(f"  minimizer at density {alpha}: {min_result.certificate.members}")
print(f"  its complement has Sol = {sol_count(comp, system).fraction}")
print(f"  max at density {1 - alpha}: {max_sol_exact(system, 1 - alpha, n).value}")

import math
from fractions import Fraction

import pytest

from cyclicforms.counting import sol_count
from cyclicforms.extremal import (
    dependent_pair_exact,
    interval_free_set,
    max_free_density_exact,
    max_free_density_heuristic,
    max_sol_exact,
    max_sol_heuristic,
    min_sol_exact,
    min_sol_heuristic,
    multiplicative_free_set,
    weyl_set,
    weyl_target_density,
)
from cyclicforms.forms import dilate_pair, kernel_system, three_ap
from cyclicforms.primes import multiplicative_order


def test_min_sol_edges():
    system = three_ap()
    r0 = min_sol_exact(system, 0, 6)
    assert r0.value == 0 and len(r0.certificate) == 0
    r1 = min_sol_exact(system, 1, 6)
    assert r1.value == 1 and len(r1.certificate) == 6


def test_min_sol_pinned_value():
    r = min_sol_exact(three_ap(), Fraction(2, 5), 5)
    assert r.value == Fraction(2, 25)
    assert r.bound_kind == "equals"
    assert sol_count(r.certificate, three_ap()).fraction == r.value


def test_max_sol_edges():
    system = three_ap()
    assert max_sol_exact(system, 1, 6).value == 1
    assert max_sol_exact(system, 0, 6).value == 0


def test_complement_duality_bridge():
    # the complement of a minimizer at density a is a feasible maximizer
    # candidate at density 1 - a
    system = three_ap()
    n = 9
    alpha = Fraction(4, 9)
    min_result = min_sol_exact(system, alpha, n)
    comp = min_result.certificate.complement()
    comp_value = sol_count(comp, system).fraction
    max_result = max_sol_exact(system, 1 - alpha, n)
    assert max_result.value >= comp_value


def test_heuristics_bound_exact():
    system = three_ap()
    for n in (7, 9, 11):
        for alpha in (Fraction(1, 3), Fraction(1, 2)):
            exact = min_sol_exact(system, alpha, n)
            heur = min_sol_heuristic(system, alpha, n, seed=2, budget=3000)
            assert heur.value >= exact.value
            assert heur.bound_kind == "upperBound"
            exact_max = max_sol_exact(system, alpha, n)
            heur_max = max_sol_heuristic(system, alpha, n, seed=2, budget=3000)
            assert heur_max.value <= exact_max.value


def test_heuristic_finds_exact_minimum_at_desk_scale():
    system = three_ap()
    for n in range(3, 14):
        for alpha in (Fraction(1, 5), Fraction(2, 5), Fraction(3, 5)):
            exact = min_sol_exact(system, alpha, n).value
            heur = min_sol_heuristic(system, alpha, n, seed=0, budget=4000).value
            assert heur == exact, (n, alpha)


def test_heuristic_budget_monotone_same_seed():
    system = three_ap()
    v1 = min_sol_heuristic(system, Fraction(1, 2), 11, seed=4, budget=500).value
    v2 = min_sol_heuristic(system, Fraction(1, 2), 11, seed=4, budget=1000).value
    v3 = min_sol_heuristic(system, Fraction(1, 2), 11, seed=4, budget=2000).value
    assert v2 <= v1
    assert v3 <= v2


def test_heuristic_alpha_one():
    assert min_sol_heuristic(three_ap(), 1, 9, seed=0).value == 1
    assert max_sol_heuristic(three_ap(), 1, 9, seed=0).value == 1


def test_max_free_density_examples():
    pair = dilate_pair(2)
    assert max_free_density_exact([pair], 5).value == Fraction(2, 5)
    assert max_free_density_exact([pair], 7).value == Fraction(2, 7)
    empty = max_free_density_exact([], 9)
    assert empty.value == 1 and len(empty.certificate) == 9


def test_max_free_density_matches_dependent_pair():
    for k in (2, 3):
        for p in (5, 7, 11, 13, 17, 19, 23, 29, 31):
            if p == k:
                continue
            bb = max_free_density_exact([dilate_pair(k)], p)
            cycles = dependent_pair_exact(k, p)[0]
            assert bb.value == cycles.value, (k, p)


def test_max_free_density_strict_vs_weakened():
    system = three_ap()
    strict = max_free_density_exact([system], 7)
    assert strict.value == 0
    weak = max_free_density_exact([system], 7, ignore_constant_configs=True)
    assert weak.value > 0
    # the weakened certificate holds no nontrivial progression
    for a in weak.certificate.members:
        for d in range(1, 7):
            trip = {a, (a + d) % 7, (a + 2 * d) % 7}
            assert not trip <= set(weak.certificate.members) or len(trip) == 1


def test_max_free_density_heuristic_is_lower_bound():
    pair = dilate_pair(2)
    for n in (11, 17, 23):
        exact = max_free_density_exact([pair], n)
        heur = max_free_density_heuristic([pair], n, seed=1)
        assert heur.value <= exact.value
        assert sol_count(heur.certificate, pair).count == 0


def test_dependent_pair_exact_values():
    d5, _ = dependent_pair_exact(2, 5)
    assert d5.value == Fraction(2, 5)
    d7, _ = dependent_pair_exact(2, 7)
    assert d7.value == Fraction(2, 7)
    d101, _ = dependent_pair_exact(2, 101)
    assert d101.value == Fraction(50, 101)


def test_dependent_pair_pigeonhole_floor():
    for p in (13, 29, 101):
        _, m = dependent_pair_exact(2, p, Fraction(3, 4))
        size = math.ceil(Fraction(3, 4) * p)
        assert m.value >= Fraction(2 * size - p, p)
        assert m.value >= Fraction(1, 2)


def test_dependent_pair_min_zero_below_half():
    _, m = dependent_pair_exact(2, 29, Fraction(1, 3))
    assert m.value == 0
    assert len(m.certificate) == math.ceil(Fraction(1, 3) * 29)


def test_dependent_pair_rejects_bad_input():
    with pytest.raises(ValueError):
        dependent_pair_exact(1, 7)
    with pytest.raises(ValueError):
        dependent_pair_exact(2, 9)


def test_weyl_set_contract():
    a = weyl_set(1009, 2, 2)
    assert sol_count(a, dilate_pair(2)).count == 0
    assert weyl_target_density(2, 2) == Fraction(1, 32)
    assert abs(float(a.density) - 1 / 32) < 0.02
    with pytest.raises(ValueError):
        weyl_set(1009, 2, 1)
    with pytest.raises(ValueError):
        weyl_set(13, 2, 4)  # interval degenerates


def test_multiplicative_free_set_examples():
    a7 = multiplicative_free_set(2, 7)
    assert a7.density == Fraction(2, 7)
    a5 = multiplicative_free_set(2, 5)
    assert a5.density == Fraction(2, 5)
    neg = multiplicative_free_set(-1, 11)
    assert neg.members == tuple(range(1, 6))
    order = multiplicative_order(2, 101)
    a101 = multiplicative_free_set(2, 101)
    assert a101.density == Fraction((order // 2) * (100 // order), 101)
    with pytest.raises(ValueError):
        multiplicative_free_set(1, 7)


def test_interval_free_set():
    system = kernel_system((1, 1, -3))
    result = interval_free_set(system, 101)
    assert result is not None
    assert sol_count(result.certificate, system).count == 0
    pair_result = interval_free_set(dilate_pair(2), 101)
    assert pair_result is not None
    assert pair_result.value >= Fraction(1, 4)
    mult = multiplicative_free_set(2, 101)
    assert mult.density > pair_result.value
    with pytest.raises(ValueError):
        interval_free_set(three_ap(), 11)

from fractions import Fraction

import pytest

from cyclicforms.nil import (
    LevelCharacter,
    PolynomialSequence,
    enumerate_characters,
    heisenberg_lcs,
    is_irrational,
    torus,
)
from cyclicforms.periodic import (
    ConstructionError,
    build_periodic_irrational,
    character_sum,
    irrational_qth_root,
    verify_periodicity,
    vertical_sum,
)


def test_qth_root_abelian_example():
    t = torus(1, 1)
    w = irrational_qth_root(t, 1, t.identity(), 37, 2, rng=0)
    coords = t.malcev_coords(w)
    assert coords[0].denominator == 37 or coords[0].denominator == 1
    assert t.in_lattice(w**37)
    num = coords[0] * 37
    assert num.denominator == 1
    for k in (1, 2, -1, -2):
        assert (k * int(num)) % 37 != 0


def test_qth_root_precondition_bound():
    # r = 2, A = 3 requires q >= 36
    m = heisenberg_lcs()
    with pytest.raises(ConstructionError):
        irrational_qth_root(m, 1, m.identity(), 35, 3, rng=0)
    w = irrational_qth_root(m, 1, m.identity(), 37, 3, rng=0)
    assert m.in_lattice(w**37)


def test_qth_root_heisenberg_with_offset():
    m = heisenberg_lcs()
    h = m.from_coords([Fraction(1, 2), 0, 0])
    w = irrational_qth_root(m, 1, h, 41, 2, rng=5)
    from cyclicforms.nil import element_irrational

    ok, _ = element_irrational(m, 1, h * w, 2)
    assert ok
    assert m.in_lattice((w**41))


def test_qth_root_trivial_block():
    m = heisenberg_lcs()
    # level 2 of the lower central series has rank r_2 = 1; level with rank 0
    # only exists on the degree-3 variant
    from cyclicforms.nil import heisenberg_deg3

    d3 = heisenberg_deg3()
    w = irrational_qth_root(d3, 2, d3.identity(), 1000003, 3, rng=0)
    assert w.is_identity()


def test_build_abelian_degree_one():
    t = torus(1, 1)
    g = build_periodic_irrational(t, 37, 2, seed=1)
    assert verify_periodicity(g, 37, 40)
    coeff = t.malcev_coords(g.coefficients[1])[0]
    assert coeff.denominator == 37
    flag, _ = is_irrational(g, 2)
    assert flag


def test_build_preconditions():
    m = heisenberg_lcs()
    with pytest.raises(ConstructionError):
        build_periodic_irrational(m, 199, 3)  # 199 < (2*3)^3 = 216
    t = torus(2, 2)
    with pytest.raises(ConstructionError):
        build_periodic_irrational(t, 15, 2)  # 15 < 16 and p_1 = 3 > A fails too


def test_build_heisenberg_small():
    m = heisenberg_lcs()
    g = build_periodic_irrational(m, 223, 3, seed=2)
    assert verify_periodicity(g, 223, 30)
    flag, _ = is_irrational(g, 3)
    assert flag


def test_build_is_seed_deterministic():
    t = torus(2, 2)
    a = build_periodic_irrational(t, 37, 2, seed=5)
    b = build_periodic_irrational(t, 37, 2, seed=5)
    assert [c.entries for c in a.coefficients] == [c.entries for c in b.coefficients]


def test_verify_periodicity_examples():
    t = torus(1, 1)
    constant = PolynomialSequence(
        t, (t.from_coords([Fraction(2, 3)]), t.identity())
    )
    assert verify_periodicity(constant, 5, 10)
    linear = PolynomialSequence(
        t, (t.identity(), t.from_coords([Fraction(1, 7)]))
    )
    assert verify_periodicity(linear, 7, 15)
    assert not verify_periodicity(linear, 5, 15)


def test_character_sum_trivial_and_geometric():
    t = torus(1, 1)
    linear = PolynomialSequence(
        t, (t.from_coords([Fraction(1, 3)]), t.from_coords([Fraction(2, 7)]))
    )
    trivial = LevelCharacter(level=1, frequency=(0,))
    assert character_sum(linear, trivial, 7) == 1
    xi = LevelCharacter(level=1, frequency=(1,))
    assert character_sum(linear, xi, 7) == 0
    assert character_sum(linear, LevelCharacter(level=1, frequency=(7,)), 7) != 0
    with pytest.raises(ConstructionError):
        character_sum(linear, xi, 5)


def test_vertical_sum_constant_orbit():
    m = heisenberg_lcs()
    constant = PolynomialSequence(m, (m.identity(), m.identity(), m.identity()))
    assert vertical_sum(constant, 7) == 1.0


def test_vertical_sum_abelianized_motion():
    m = heisenberg_lcs()
    # x-coordinate moves, center coordinate of the fractional part stays 0
    p = PolynomialSequence(
        m, (m.identity(), m.from_coords([Fraction(1, 5), 0, 0]), m.identity())
    )
    assert abs(vertical_sum(p, 5) - 1.0) < 1e-12


def test_full_period_cancellation_on_construction():
    t = torus(2, 2)
    g = build_periodic_irrational(t, 37, 2, seed=3)
    for xi in enumerate_characters(t, 1, 2):
        assert character_sum(g, xi, 37) == 0


def test_stage_invariant_monotone_irrationality():
    # coefficients below the active stage stay put mod the deeper level
    m = heisenberg_lcs()
    g = build_periodic_irrational(m, 227, 3, seed=11)
    head = m.head_coords(g.coefficients[1], 2)
    assert all((c * 227).denominator == 1 for c in head)
    for k1 in range(-3, 4):
        for k2 in range(-3, 4):
            if (k1, k2) == (0, 0) or abs(k1) + abs(k2) > 3:
                continue
            val = k1 * head[0] + k2 * head[1]
            assert val.denominator != 1

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclicforms.nil import (
    FilteredNilmanifoldModel,
    LevelCharacter,
    OutsideGroupError,
    PolynomialSequence,
    TaylorLevelError,
    UnitriangularElement,
    annihilator_lattice,
    binomial,
    element_irrational,
    enumerate_characters,
    factor_coefficient,
    heisenberg_deg3,
    heisenberg_lcs,
    in_vanishing_subgroup,
    is_irrational,
    mat,
    model_by_name,
    taylor_eval,
    taylor_expand,
    torus,
)
from cyclicforms.nil.matrices import nilpotent_exp, nilpotent_log

rationals = st.fractions(
    max_denominator=6, min_value=Fraction(-5), max_value=Fraction(5)
)


def _random_element(model, rng):
    coords = [
        Fraction(int(rng.integers(-8, 9)), int(rng.integers(1, 6)))
        for _ in range(model.dim)
    ]
    return model.from_coords(coords), tuple(coords)


# ---------------------------------------------------------------------------
# exp/log and coordinates


def test_log_exp_identity_and_heisenberg_generator():
    ident = UnitriangularElement.identity(3)
    assert all(x == 0 for row in ident.log() for x in row)
    e12 = UnitriangularElement(mat([[1, Fraction(7, 2), 0], [0, 1, 0], [0, 0, 1]]))
    lg = e12.log()
    assert lg[0][1] == Fraction(7, 2) and lg[0][2] == 0


@given(st.lists(rationals, min_size=6, max_size=6))
@settings(max_examples=100, deadline=None)
def test_log_exp_round_trip_4x4(vals):
    x = [
        [0, vals[0], vals[1], vals[2]],
        [0, 0, vals[3], vals[4]],
        [0, 0, 0, vals[5]],
        [0, 0, 0, 0],
    ]
    x = mat(x)
    g = nilpotent_exp(x)
    assert nilpotent_log(g) == x
    back = nilpotent_exp(nilpotent_log(g))
    assert back == g


def test_malcev_coords_examples():
    m = heisenberg_lcs()
    assert m.malcev_coords(m.identity()) == (0, 0, 0)
    gamma = m.from_coords([2, -3, 5])
    assert m.malcev_coords(gamma) == (2, -3, 5)
    assert m.in_lattice(gamma)
    g = m.from_coords([Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)])
    assert m.malcev_coords(g) == (Fraction(1, 2), Fraction(1, 3), Fraction(1, 5))


def test_malcev_round_trip_random():
    rng = np.random.default_rng(0)
    for model in (heisenberg_lcs(), torus(2, 2), heisenberg_deg3()):
        for _ in range(100):
            g, coords = _random_element(model, rng)
            assert model.malcev_coords(g) == coords
            assert model.from_coords(model.malcev_coords(g)).entries == g.entries


def test_outside_group_detection():
    m = torus(2, 1)  # 3x3 matrices with zero (1,2) slot unreachable
    bad = UnitriangularElement(mat([[1, 0, 0], [0, 1, 1], [0, 0, 1]]))
    with pytest.raises(OutsideGroupError):
        m.malcev_coords(bad)
    assert not m.in_group(bad)


def test_frac_int_parts_contract():
    rng = np.random.default_rng(4)
    for model in (heisenberg_lcs(), heisenberg_deg3(), torus(3, 2)):
        for _ in range(60):
            g, _ = _random_element(model, rng)
            frac_part, int_part = model.frac_int_parts(g)
            coords = model.malcev_coords(frac_part)
            assert all(0 <= c < 1 for c in coords)
            assert model.in_lattice(int_part)
            assert (frac_part * int_part).entries == g.entries


def test_frac_int_parts_fixed_points():
    m = heisenberg_lcs()
    gamma = m.from_coords([3, -2, 7])
    frac_part, int_part = m.frac_int_parts(gamma)
    assert frac_part.is_identity()
    assert int_part.entries == gamma.entries
    inside = m.from_coords([Fraction(1, 2), Fraction(3, 4), Fraction(1, 7)])
    frac_part, int_part = m.frac_int_parts(inside)
    assert int_part.is_identity()
    spec_case = m.from_coords([Fraction(3, 2), Fraction(-1, 4), Fraction(7, 3)])
    frac_part, int_part = m.frac_int_parts(spec_case)
    assert all(0 <= c < 1 for c in m.malcev_coords(frac_part))
    assert (frac_part * int_part).entries == spec_case.entries


# ---------------------------------------------------------------------------
# model validation


def test_model_validation_rejects_bad_filtration():
    x = [[0, 1, 0], [0, 0, 0], [0, 0, 0]]
    y = [[0, 0, 0], [0, 0, 1], [0, 0, 0]]
    z = [[0, 0, 1], [0, 0, 0], [0, 0, 0]]
    # ordering y before z would place the commutator at the wrong level
    with pytest.raises(ValueError):
        FilteredNilmanifoldModel(kappa=3, basis=(z, x, y), level_dims=(3, 3, 1))
    # degree 1 cannot hold the Heisenberg bracket
    with pytest.raises(ValueError):
        FilteredNilmanifoldModel(kappa=3, basis=(x, y, z), level_dims=(3, 3))


def test_model_json_round_trip():
    m = heisenberg_deg3()
    again = FilteredNilmanifoldModel.from_json(m.to_json())
    assert again.level_dims == m.level_dims
    assert again.basis == m.basis


def test_model_by_name():
    assert model_by_name("heisenberg-lcs").degree == 2
    assert model_by_name("heisenberg-deg3").degree == 3
    assert model_by_name("torus:m=2,s=2").level_dims == (2, 2, 1)
    with pytest.raises(ValueError):
        model_by_name("nonsense")


# ---------------------------------------------------------------------------
# Taylor calculus


def test_binomial_negative_arguments():
    assert binomial(-1, 2) == 1
    assert binomial(-2, 3) == -4
    assert binomial(5, 2) == 10
    assert binomial(0, 0) == 1


def test_taylor_eval_examples():
    m = heisenberg_lcs()
    e12 = m.from_coords([1, 0, 0])
    e13 = m.from_coords([0, 0, 1])
    p = PolynomialSequence(m, (m.identity(), e12, e13))
    g2 = taylor_eval(p, 2)
    expected = (e12**2) * e13
    assert g2.entries == expected.entries
    assert taylor_eval(p, 0).entries == m.identity().entries


def test_taylor_expand_abelian_example():
    m = torus(1, 2)
    a, b = Fraction(2, 7), Fraction(3, 5)
    values = [
        m.from_coords([0]),
        m.from_coords([a]),
        m.from_coords([2 * a + b]),
    ]
    p = taylor_expand(m, values)
    coeffs = [m.malcev_coords(c)[0] for c in p.coefficients]
    assert coeffs == [0, a, b]


def test_taylor_round_trip_random():
    rng = np.random.default_rng(99)
    for model in (heisenberg_lcs(), heisenberg_deg3(), torus(2, 2)):
        for _ in range(100):
            coeffs = []
            for i in range(model.degree + 1):
                cutoff = model.dim - model.level_dim(i)
                coords = [
                    Fraction(0)
                    if a < cutoff
                    else Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 5)))
                    for a in range(model.dim)
                ]
                coeffs.append(model.from_coords(coords))
            p = PolynomialSequence(model, tuple(coeffs))
            values = [taylor_eval(p, n) for n in range(model.degree + 1)]
            back = taylor_expand(model, values)
            assert all(
                x.entries == y.entries
                for x, y in zip(back.coefficients, p.coefficients)
            )


def test_taylor_expand_rejects_non_polynomial_values():
    m = heisenberg_lcs()
    center_escape = m.from_coords([0, Fraction(1, 2), 0])
    values = [m.identity(), m.identity(), center_escape]
    # g(0)=g(1)=id forces g_2 = g(2) which must land in G_2 = center
    with pytest.raises(TaylorLevelError):
        taylor_expand(m, values)


def test_constant_sequence_expansion():
    m = heisenberg_lcs()
    h = m.from_coords([Fraction(1, 3), Fraction(2, 5), Fraction(1, 2)])
    p = taylor_expand(m, [h, h, h])
    assert p.coefficients[0].entries == h.entries
    assert p.coefficients[1].is_identity()
    assert p.coefficients[2].is_identity()


def test_negative_argument_evaluation():
    m = torus(1, 2)
    p = PolynomialSequence(
        m, (m.from_coords([Fraction(1, 3)]), m.from_coords([Fraction(1, 2)]), m.from_coords([Fraction(1, 7)]))
    )
    val = m.malcev_coords(taylor_eval(p, -3))[0]
    assert val == Fraction(1, 3) + (-3) * Fraction(1, 2) + binomial(-3, 2) * Fraction(1, 7)


def test_pointwise_product_stays_polynomial():
    rng = np.random.default_rng(123)
    model = heisenberg_lcs()
    for _ in range(100):
        def random_poly():
            coeffs = []
            for i in range(model.degree + 1):
                cutoff = model.dim - model.level_dim(i)
                coords = [
                    Fraction(0)
                    if a < cutoff
                    else Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
                    for a in range(model.dim)
                ]
                coeffs.append(model.from_coords(coords))
            return PolynomialSequence(model, tuple(coeffs))

        p, q = random_poly(), random_poly()
        product = p.pointwise_product(q)  # expansion validates level membership
        for n in (-2, 3, 5):
            lhs = taylor_eval(product, n)
            rhs = taylor_eval(p, n) * taylor_eval(q, n)
            assert lhs.entries == rhs.entries


def test_prefiltration_taylor_expansion():
    # G_0 = R^2 but G_1 = G_2 = the last coordinate line
    t = torus(2, 2, level_dims=(2, 1, 1), prefiltration=True)
    g0 = t.from_coords([Fraction(1, 3), Fraction(1, 5)])
    g1 = t.from_coords([0, Fraction(1, 2)])
    g2 = t.from_coords([0, Fraction(2, 7)])
    p = PolynomialSequence(t, (g0, g1, g2))
    values = [taylor_eval(p, n) for n in range(3)]
    back = taylor_expand(t, values)
    assert all(
        a.entries == b.entries for a, b in zip(back.coefficients, p.coefficients)
    )


def test_prefiltration_rejects_level_escape():
    t = torus(2, 2, level_dims=(2, 1, 1), prefiltration=True)
    # a linear part moving the first coordinate is not G_1-valued
    values = [
        t.identity(),
        t.from_coords([Fraction(1, 2), 0]),
        t.from_coords([1, 0]),
    ]
    with pytest.raises(TaylorLevelError):
        taylor_expand(t, values)


def test_prefiltration_flag_is_required():
    with pytest.raises(ValueError):
        torus(2, 2, level_dims=(2, 1, 1))


# ---------------------------------------------------------------------------
# characters


def test_character_enumeration_examples():
    m = heisenberg_lcs()
    assert enumerate_characters(m, 2, 10) == []
    level1 = enumerate_characters(m, 1, 1)
    assert {c.frequency for c in level1} == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    t = torus(1, 1)
    assert {c.frequency for c in enumerate_characters(t, 1, 2)} == {
        (-2,),
        (-1,),
        (1,),
        (2,),
    }
    d3 = heisenberg_deg3()
    assert {c.frequency for c in enumerate_characters(d3, 3, 2)} == {
        (-2,),
        (-1,),
        (1,),
        (2,),
    }


def test_character_complexity_and_value():
    m = heisenberg_lcs()
    xi = LevelCharacter(level=1, frequency=(2, -1))
    assert xi.complexity == 3
    g = m.from_coords([Fraction(1, 3), Fraction(1, 6), 0])
    assert xi.value(m, g) == Fraction(2, 3) - Fraction(1, 6)


def test_annihilator_lattice():
    m = heisenberg_lcs()
    assert annihilator_lattice(m, 2) == []  # G_2^v is everything at level 2
    basis = annihilator_lattice(m, 1)
    assert len(basis) == 2
    d3 = heisenberg_deg3()
    assert len(annihilator_lattice(d3, 3)) == 1


def test_in_vanishing_subgroup():
    m = heisenberg_lcs()
    center = m.from_coords([0, 0, Fraction(2, 3)])
    assert in_vanishing_subgroup(m, 1, center)
    horizontal = m.from_coords([Fraction(1, 2), 0, 0])
    assert not in_vanishing_subgroup(m, 1, horizontal)


def test_is_irrational_examples():
    m = heisenberg_lcs()
    lattice_poly = PolynomialSequence(
        m, (m.identity(), m.from_coords([1, 2, 0]), m.from_coords([0, 0, 3]))
    )
    flag, witness = is_irrational(lattice_poly, 1)
    assert not flag
    level, xi, value = witness
    assert level == 1 and value.denominator == 1

    q = 103
    good = PolynomialSequence(
        m,
        (
            m.identity(),
            m.from_coords([Fraction(1, q), Fraction(5, q), 0]),
            m.from_coords([0, 0, Fraction(1, q)]),
        ),
    )
    flag, _ = is_irrational(good, 3)
    assert flag


def test_irrational_element_prime_denominator():
    m = heisenberg_lcs()
    q = 11  # prime > 2A for A = 2
    for t in range(2, q - 1):
        g = m.from_coords([Fraction(1, q), Fraction(t, q), 0])
        ok, _ = element_irrational(m, 1, g, 2)
        assert ok
    # t = +-1 mod q is killed by the complexity-2 character (1, -+1)
    for t in (1, q - 1):
        g = m.from_coords([Fraction(1, q), Fraction(t, q), 0])
        ok, witness = element_irrational(m, 1, g, 2)
        assert not ok and witness[2].denominator == 1


def test_abelian_half_is_not_2_irrational():
    t = torus(1, 1)
    g1 = t.from_coords([Fraction(1, 2)])
    ok, witness = element_irrational(t, 1, g1, 2)
    assert not ok
    assert abs(witness[1].frequency[0]) == 2


def test_factor_coefficient_lattice_element():
    m = heisenberg_lcs()
    gamma = m.from_coords([3, -1, 0])
    g_prime, out_gamma, xi = factor_coefficient(m, 1, gamma, 2)
    assert m.in_lattice_level(out_gamma, 1)
    assert xi.value(m, g_prime) == 0
    assert (g_prime * out_gamma).entries == gamma.entries


def test_factor_coefficient_abelian_integer():
    t = torus(1, 1)
    g = t.from_coords([3])
    g_prime, gamma, xi = factor_coefficient(t, 1, g, 1)
    assert t.malcev_coords(gamma) == (3,)
    assert t.malcev_coords(g_prime) == (0,)
    assert xi.frequency in ((1,), (-1,))


def test_factor_coefficient_planted_heisenberg():
    m = heisenberg_lcs()
    q = 997
    g = m.from_coords([2, Fraction(1, q), 0])
    g_prime, gamma, xi = factor_coefficient(m, 1, g, 2, q=q)
    assert m.in_lattice_level(gamma, 1)
    assert xi.value(m, g_prime) == 0
    assert (g_prime * gamma).entries == g.entries


def test_factor_coefficient_errors():
    m = heisenberg_lcs()
    q = 997
    irr = m.from_coords([Fraction(1, q), Fraction(3, q), 0])
    from cyclicforms.nil import FactorizationError

    with pytest.raises(FactorizationError):
        factor_coefficient(m, 1, irr, 2, q=q)
    with pytest.raises(FactorizationError):
        factor_coefficient(m, 1, m.from_coords([2, 0, 0]), 2, q=4)  # p_1(q) too small


# ---------------------------------------------------------------------------
# scaling lemma: coefficients of n -> g(qn) against powers, mod the
# vanishing subgroup


def test_scaling_lemma_invariant():
    rng = np.random.default_rng(52)
    for model in (heisenberg_lcs(), heisenberg_deg3(), torus(2, 2)):
        for _ in range(30):
            coeffs = []
            for i in range(model.degree + 1):
                cutoff = model.dim - model.level_dim(i)
                coords = [
                    Fraction(0)
                    if a < cutoff
                    else Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
                    for a in range(model.dim)
                ]
                coeffs.append(model.from_coords(coords))
            p = PolynomialSequence(model, tuple(coeffs))
            q = int(rng.integers(2, 7))
            scaled_values = [taylor_eval(p, q * n) for n in range(model.degree + 1)]
            h = taylor_expand(model, scaled_values)
            for i in range(1, model.degree + 1):
                power = p.coefficients[i] ** (q**i)
                ratio = h.coefficients[i] * power.inverse()
                assert in_vanishing_subgroup(model, i, ratio)

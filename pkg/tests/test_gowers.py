import numpy as np
import pytest

from cyclicforms.counting import CyclicFunction, CyclicSubset
from cyclicforms.forms import four_ap, three_ap, dilate_pair
from cyclicforms.gowers import (
    gowers_norm,
    gowers_norm_definitional,
    gvn_check,
    random_round,
)


def _random_complex(rng, n):
    return CyclicFunction(n, rng.random(n) * np.exp(2j * np.pi * rng.random(n)))


def test_constant_norms():
    f = CyclicFunction.constant(0.6, 12)
    for d in (1, 2, 3, 4):
        assert abs(gowers_norm(f, d) - 0.6) < 1e-12


def test_u1_is_mean_magnitude():
    f = CyclicSubset(8, (0,)).indicator()
    assert abs(gowers_norm(f, 1) - 1 / 8) < 1e-15


def test_exponential_phase_has_unit_norm():
    n = 20
    for r in (1, 3, 7):
        f = CyclicFunction(n, np.exp(2j * np.pi * r * np.arange(n) / n))
        for d in (2, 3, 4):
            assert abs(gowers_norm(f, d) - 1) < 1e-9
            if n ** (d + 1) <= 10**7:
                assert abs(gowers_norm_definitional(f, d) - 1) < 1e-9


def test_zero_and_full():
    z = CyclicFunction.constant(0.0, 5)
    assert gowers_norm_definitional(z, 3) == 0
    full = CyclicSubset.full(5).indicator()
    assert abs(gowers_norm_definitional(full, 2) - 1) < 1e-12


def test_oracle_agreement_random():
    rng = np.random.default_rng(2)
    for n in (9, 16):
        for d in (2, 3, 4):
            f = _random_complex(rng, n)
            assert abs(gowers_norm(f, d) - gowers_norm_definitional(f, d)) < 1e-9


def test_nesting():
    rng = np.random.default_rng(8)
    for _ in range(10):
        f = _random_complex(rng, 24)
        norms = [gowers_norm(f, d) for d in (1, 2, 3, 4)]
        for a, b in zip(norms, norms[1:]):
            assert a <= b + 1e-9


def test_modulation_and_translation_invariance():
    rng = np.random.default_rng(13)
    f = _random_complex(rng, 30)
    for r in (1, 5, 11):
        assert abs(gowers_norm(f.modulate(r), 2) - gowers_norm(f, 2)) < 1e-9
    for c in (1, 7, 13):
        for d in (1, 2, 3):
            assert abs(gowers_norm(f.translate(c), d) - gowers_norm(f, d)) < 1e-9


def test_budget_guards():
    f = CyclicFunction.constant(0.5, 101)
    with pytest.raises(ValueError):
        gowers_norm(f, 4, budget=10**3)
    with pytest.raises(ValueError):
        gowers_norm_definitional(f, 3, cap=10**4)
    with pytest.raises(ValueError):
        gowers_norm(f, 0)


def test_gvn_trivial_and_random():
    rng = np.random.default_rng(100)
    n = 53
    f = CyclicFunction(n, rng.random(n))
    rep = gvn_check(f, f, three_ap(), 1)
    assert rep.passed and rep.lhs == 0
    for _ in range(5):
        g = CyclicFunction(n, rng.random(n))
        h = CyclicFunction(n, rng.random(n))
        assert gvn_check(g, h, three_ap(), 1).passed


def test_gvn_4ap():
    rng = np.random.default_rng(44)
    n = 31
    for _ in range(3):
        g = CyclicFunction(n, rng.random(n))
        h = CyclicFunction(n, rng.random(n))
        assert gvn_check(g, h, four_ap(), 2).passed


def test_gvn_preconditions():
    n = 10
    f = CyclicFunction(n, np.full(n, 0.5))
    with pytest.raises(ValueError):
        gvn_check(f, f, three_ap(), 1)  # composite modulus
    assert gvn_check(f, f, three_ap(), 1, min_prime_factor=2).passed
    fc = CyclicFunction(13, np.full(13, 0.5) * 1j)
    with pytest.raises(ValueError):
        gvn_check(fc, fc, three_ap(), 1)
    g = CyclicFunction(13, np.full(13, 0.5))
    with pytest.raises(ValueError):
        gvn_check(g, g, dilate_pair(2), 1)  # not pairwise independent


def test_random_round_edges_and_determinism():
    n = 50
    ones = CyclicFunction.constant(1.0, n)
    zeros = CyclicFunction.constant(0.0, n)
    assert random_round(ones, seed=1) == CyclicSubset.full(n)
    assert random_round(zeros, seed=1) == CyclicSubset.empty(n)
    half = CyclicFunction.constant(0.5, n)
    a = random_round(half, seed=9)
    b = random_round(half, seed=9)
    c = random_round(half, seed=10)
    assert a == b
    assert a != c


def test_random_round_tracks_density():
    n = 4093
    f = CyclicFunction.constant(0.5, n)
    a = random_round(f, seed=0)
    assert abs(len(a) / n - 0.5) < 0.05
    diff = CyclicFunction(n, a.indicator_array().astype(np.complex128) - 0.5)
    assert gowers_norm(diff, 2) <= 5 * n**-0.25

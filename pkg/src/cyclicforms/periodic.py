"""Constructive synthesis of q-periodic, A-irrational polynomial sequences.

The construction walks the filtration one level at a time.  Entering
stage i the sequence g satisfies g(n+q)^{-1} g(n) in Gamma . G_i; the
stage splits that defect into a lattice polynomial and a G_i-valued
remainder, cancels the remainder with a G_i-valued antiderivative whose
coefficients solve an explicit triangular system by exact nilpotent q-th
roots, and then tops up the i-th coefficient with a q-th root mod the
level lattice chosen so the coefficient is irrational at the requested
complexity bound.  Every stage claim is re-verified with exact
coordinate checks before the next stage runs; a failure is a bug, never
an expected outcome.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from itertools import product as iter_product

import numpy as np

from .nil.characters import LevelCharacter, element_irrational, is_irrational
from .nil.model import FilteredNilmanifoldModel, UnitriangularElement
from .nil.poly import PolynomialSequence, binomial, taylor_eval, taylor_expand
from .primes import is_prime, smallest_prime_factor


class ConstructionError(ValueError):
    """Preconditions of a constructive routine were violated."""


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConstructionError(message)


def irrational_qth_root(
    model: FilteredNilmanifoldModel,
    i: int,
    h: UnitriangularElement,
    q: int,
    bound,
    rng: np.random.Generator | int | None = 0,
) -> UnitriangularElement:
    """A q-th root w mod the level-i lattice such that h w is irrational.

    Needs q >= (2A)^{r_i} and p_1(q) >= A; under those the set of good
    integer coordinate vectors t has density at least 1 - (A+1)^r / q, so
    seeded random probing finds one almost immediately.  After
    10 (A+1)^r rejections we fall back to a lexicographic sweep, which
    the counting bound guarantees will succeed.

    The rejection test is exact: t is good when k . t != a_k mod q for
    every integer vector 0 < |k|_1 <= A, where a_k = -k . psi_i(h^q)
    reduced mod q and non-integral a_k impose no constraint.  This runs
    over all small k, not only genuine characters, so the product h w is
    irrational in the stronger sense as well.
    """
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    r = model.block_rank(i)
    if r == 0:
        return model.identity()
    bound_f = Fraction(str(bound)) if not isinstance(bound, (int, Fraction)) else Fraction(bound)
    _require(q >= (2 * bound_f) ** r, f"need q >= (2A)^r_i = {(2 * bound_f) ** r}")
    _require(smallest_prime_factor(q) >= bound_f, f"need p_1({q}) >= {bound}")
    a_int = int(bound_f)  # |k|_1 <= A has integer solutions only up to floor(A)

    h_q = h**q
    psi_hq = model.psi_level(i, h_q)
    constraints: list[tuple[tuple[int, ...], int]] = []
    for k in iter_product(range(-a_int, a_int + 1), repeat=r):
        if not any(k) or sum(abs(x) for x in k) > a_int:
            continue
        a_k = -sum((ki * t for ki, t in zip(k, psi_hq)), Fraction(0))
        if a_k.denominator != 1:
            continue
        constraints.append((k, int(a_k) % q))

    def good(t) -> bool:
        return all(
            sum(ki * ti for ki, ti in zip(k, t)) % q != a_k for k, a_k in constraints
        )

    chosen = None
    max_rejects = 10 * (a_int + 1) ** r
    for _ in range(max_rejects):
        t = tuple(int(x) for x in rng.integers(0, q, size=r))
        if good(t):
            chosen = t
            break
    if chosen is None:
        for t in iter_product(range(q), repeat=r):
            if good(t):
                chosen = t
                break
    if chosen is None:
        raise AssertionError(
            "no admissible root coordinates exist; the counting bound rules this out "
            "under the stated preconditions"
        )
    gamma = model.from_level_coords(i, chosen)
    w = gamma.root(q)
    if not model.in_lattice_level(w**q, i):
        raise AssertionError("w^q left the level lattice")
    ok, witness = element_irrational(model, i, h * w, bound)
    if not ok:
        raise AssertionError(f"constructed product failed irrationality: {witness}")
    return w


def _integral_head(model: FilteredNilmanifoldModel, coords, cutoff: int) -> list[int]:
    head = []
    for a in range(cutoff):
        c = coords[a]
        if c.denominator != 1:
            raise AssertionError(
                "defect coefficient has a non-integral coordinate above the active level; "
                "stage invariant broken"
            )
        head.append(int(c))
    return head


def _lattice_head_split(
    g: PolynomialSequence, i: int
) -> tuple[PolynomialSequence, PolynomialSequence]:
    """Split h = gamma . h_tilde with gamma a lattice polynomial and h_tilde G_i-valued."""
    model = g.model
    s = model.degree
    cutoff = model.dim - model.level_dim(i)
    gamma_coeffs = []
    for h_j in g.coefficients:
        coords = model.malcev_coords(h_j)
        head = _integral_head(model, coords, cutoff)
        gamma_coeffs.append(model.from_coords(head + [Fraction(0)] * (model.dim - cutoff)))
    gamma = PolynomialSequence(model, tuple(gamma_coeffs))
    tilde_values = [
        taylor_eval(gamma, n).inverse() * taylor_eval(g, n) for n in range(s + 1)
    ]
    h_tilde = taylor_expand(model, tilde_values)
    for j, c in enumerate(h_tilde.coefficients):
        if not model.in_level(c, i):
            raise AssertionError(f"remainder coefficient {j} escaped G_{i}")
    return gamma, h_tilde


def _antiderivative(
    model: FilteredNilmanifoldModel, h_tilde: PolynomialSequence, i: int, q: int
) -> tuple[PolynomialSequence, UnitriangularElement]:
    """Solve ell_j^q ell_{j+1}^C(q,2) ... ell_i^C(q,i-j+1) = h~_{j-1} downward.

    Returns the polynomial with coefficients ell_1..ell_i (identity
    elsewhere) and the top coefficient ell_i.
    """
    ell: dict[int, UnitriangularElement] = {}
    for j in range(i, 0, -1):
        tail = model.identity()
        for u in range(j + 1, i + 1):
            tail = tail * ell[u] ** binomial(q, u - j + 1)
        rhs = h_tilde.coefficients[j - 1] * tail.inverse()
        ell[j] = rhs.root(q)
    coeffs = [model.identity()]
    for j in range(1, model.degree + 1):
        coeffs.append(ell.get(j, model.identity()))
    return PolynomialSequence(model, tuple(coeffs)), ell.get(i, model.identity())


def _defect_in_lattice_times_level(p: PolynomialSequence, q: int, i: int) -> bool:
    """Exact test that g(n+q)^{-1} g(n) is in Gamma . G_i for every n.

    Equivalent to every Taylor coefficient of the defect having integral
    coordinates above level i, by the subgroup-valued Taylor lemma.
    """
    model = p.model
    cutoff = model.dim - model.level_dim(i)
    defect = p.defect(q)
    for c in defect.coefficients:
        coords = model.malcev_coords(c)
        if any(coords[a].denominator != 1 for a in range(cutoff)):
            return False
    return True


def build_periodic_irrational(
    model: FilteredNilmanifoldModel,
    q: int,
    bound,
    seed: int = 0,
) -> PolynomialSequence:
    """A q-periodic (mod the lattice), A-irrational polynomial sequence.

    Requires q >= (2A)^m with p_1(q) >= A; q should be prime (composite q
    whose smallest prime factor exceeds both A and the degree also
    works, and is accepted).  Periodicity and irrationality are verified
    exactly before the sequence is returned.
    """
    _require(not model.prefiltration, "construction needs a genuine filtration")
    bound_f = Fraction(str(bound)) if not isinstance(bound, (int, Fraction)) else Fraction(bound)
    m = model.dim
    s = model.degree
    _require(q >= (2 * bound_f) ** m, f"need q >= (2A)^m = {(2 * bound_f) ** m}")
    _require(smallest_prime_factor(q) >= bound_f, f"need p_1({q}) >= {bound}")
    # q | C(q, j) for j <= s makes the appended root's contribution periodic;
    # that needs every prime factor of q to exceed the degree
    _require(
        is_prime(q) or smallest_prime_factor(q) > s,
        f"need q prime or p_1(q) > degree {s}",
    )
    rng = np.random.default_rng(seed)
    g = PolynomialSequence.identity(model)
    for i in range(1, s + 1):
        h = g.defect(q)
        _gamma, h_tilde = _lattice_head_split(h, i)
        ell_poly, ell_top = _antiderivative(model, h_tilde, i, q)
        w = irrational_qth_root(model, i, ell_top, q, bound_f, rng)
        values = [
            taylor_eval(g, n) * taylor_eval(ell_poly, n) * w ** binomial(n, i)
            for n in range(s + 1)
        ]
        g = taylor_expand(model, values)
        if not _defect_in_lattice_times_level(g, q, i + 1):
            raise AssertionError(f"stage {i} failed its defect invariant")
        for j in range(1, i + 1):
            if model.block_rank(j) == 0:
                continue
            ok, witness = element_irrational(model, j, g.coefficients[j], bound_f)
            if not ok:
                raise AssertionError(f"stage {i} lost irrationality at level {j}: {witness}")
    defect = g.defect(q)
    if not all(model.in_lattice(c) for c in defect.coefficients):
        raise AssertionError("final sequence is not exactly q-periodic mod the lattice")
    ok, witness = is_irrational(g, bound_f)
    if not ok:
        raise AssertionError(f"final sequence is not irrational: {witness}")
    return g


def verify_periodicity(p: PolynomialSequence, q: int, sample_range: int) -> bool:
    """Check g(n+q)^{-1} g(n) in Gamma for n in [-sample_range, sample_range]."""
    model = p.model
    for n in range(-sample_range, sample_range + 1):
        d = taylor_eval(p, n + q).inverse() * taylor_eval(p, n)
        if not model.in_lattice(d):
            return False
    return True


def _require_exact_periodicity(p: PolynomialSequence, q: int) -> None:
    cache = p.__dict__.setdefault("_periodicity_ok", set())
    if q in cache:
        return
    defect = p.defect(q)
    if not all(p.model.in_lattice(c) for c in defect.coefficients):
        raise ConstructionError("sequence is not q-periodic mod the lattice")
    cache.add(q)


def _orbit_head_coords(p: PolynomialSequence, q: int, head_len: int) -> list[tuple[Fraction, ...]]:
    """Head coordinates of g(0), ..., g(q-1); cached, character-independent."""
    cache = p.__dict__.setdefault("_head_orbit", {})
    key = (q, head_len)
    if key not in cache:
        model = p.model
        cache[key] = [
            model.head_coords(taylor_eval(p, n), head_len) for n in range(q)
        ]
    return cache[key]


def character_sum(p: PolynomialSequence, xi: LevelCharacter, q: int) -> complex:
    """E_{n in [q]} e(xi-phase of the level-1 coordinates of {g(n)}).

    The level-1 block of psi(g(n)) is exactly linear in n, so the sum is
    a full-period geometric sum: it is exactly 0 unless the step
    frequency vanishes mod q, in which case it is a single rounded root
    of unity.  The linear structure is re-derived from the fractional
    parts of the actual orbit, exactly, before the closed form is used.
    """
    if xi.level != 1:
        raise ValueError("character sums are taken against level-1 characters")
    model = p.model
    _require_exact_periodicity(p, q)
    blk = model.block(1)
    k = xi.frequency
    if len(k) != len(blk):
        raise ValueError("frequency length does not match the level-1 block")
    head_len = blk.stop

    def phase_of(coords) -> Fraction:
        # the fractional part shifts head coordinates by integers, so the
        # phase of {g} mod 1 can be read off g itself
        return sum((ki * coords[a] for ki, a in zip(k, blk)), Fraction(0))

    theta0 = phase_of(model.head_coords(p.coefficients[0], head_len))
    theta1 = phase_of(model.head_coords(p.coefficients[1], head_len))
    for n, coords in enumerate(_orbit_head_coords(p, q, head_len)):
        observed = phase_of(coords)
        predicted = theta0 + n * theta1
        if (observed - predicted).denominator != 1:
            raise AssertionError("level-1 phase is not linear in n; orbit is inconsistent")
    step = theta1 * q
    if step.denominator != 1:
        raise AssertionError("periodic orbit must have q * theta1 integral")
    if int(step) % q != 0:
        return 0j
    angle = theta0 % 1  # one final rounding below
    return cmath.exp(2j * cmath.pi * float(angle))


def vertical_sum(p: PolynomialSequence, q: int) -> float:
    """|E_{n in [q]} e(central coordinate of {g(n)})|.

    The central coordinate is the last Mal'cev coordinate; on the
    Heisenberg models this probes the equidistribution of the vertical
    circle, at Gauss-sum scale for a generic irrational orbit.
    """
    model = p.model
    _require_exact_periodicity(p, q)
    total = 0j
    for n in range(q):
        frac_part, _ = model.frac_int_parts(taylor_eval(p, n))
        c = model.malcev_coords(frac_part)[-1]
        total += cmath.exp(2j * cmath.pi * float(c))
    return abs(total) / q

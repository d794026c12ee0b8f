import math
from fractions import Fraction
from itertools import product

import pytest

from bce import errors
from bce.numberfield import FieldElement, context_from_coeffs, parse_polynomial
from bce.walk import (
    advance_level,
    brute_force_oracle,
    fair_coin,
    growth_sequences,
    is_free_up_to,
    make_step_distribution,
    min_separation,
    shannon_entropy,
    walk_level_zero,
)

GOLDEN = [-1, 1, 1]
MERCAT = [1, 1, 1, -1, 1, 1, 1]


@pytest.fixture(scope="module")
def dyadic_ctx():
    return context_from_coeffs([-1, 2])


@pytest.fixture(scope="module")
def golden_ctx():
    return context_from_coeffs(GOLDEN)


@pytest.fixture(scope="module")
def mercat_ctx():
    return context_from_coeffs(MERCAT)


def _levels(ctx, nu, n):
    level = walk_level_zero(ctx, nu)
    out = [level]
    for _ in range(n):
        level = advance_level(ctx, nu, level)
        out.append(level)
    return out


def _oracle_law(coeffs, nu, n):
    """Independent check: reduce every atom sequence with plain Fraction
    polynomial division, no shared code with the scaled-integer engine."""
    poly = [Fraction(c) for c in coeffs]
    r = len(poly) - 1

    def reduce(v):
        v = list(v)
        while len(v) - 1 >= r and any(v):
            while v and v[-1] == 0:
                v.pop()
            if len(v) - 1 < r:
                break
            q = v[-1] / poly[-1]
            d = len(v) - 1
            for i in range(r + 1):
                v[d - r + i] -= q * poly[i]
        v = v + [Fraction(0)] * (r + 1 - len(v))
        return tuple(v[:r])

    law: dict = {}
    for seq in product(range(len(nu.atoms)), repeat=n):
        residue = reduce([nu.atoms[i] * 1 for i in seq] if n else [])
        weight = math.prod((nu.probs[i] for i in seq), start=Fraction(1))
        law[residue] = law.get(residue, Fraction(0)) + weight
    return law


# ---------------------------------------------------------------------------
# step distribution
# ---------------------------------------------------------------------------

def test_default_fair_coin():
    nu = fair_coin()
    assert nu.atoms == (Fraction(-1), Fraction(1))
    assert nu.probs == (Fraction(1, 2), Fraction(1, 2))
    assert nu.entropy_bits() == 1.0


def test_biased_two_atom():
    nu = make_step_distribution([0, 1], [Fraction(1, 3), Fraction(2, 3)])
    assert nu.atoms == (Fraction(0), Fraction(1))


def test_step_distribution_errors():
    with pytest.raises(errors.DuplicateAtom):
        make_step_distribution([1, 1], [Fraction(1, 2), Fraction(1, 2)])
    with pytest.raises(errors.NonPositiveProbability):
        make_step_distribution([0, 1], [Fraction(0), Fraction(1)])
    with pytest.raises(errors.ProbabilitySumNotOne):
        make_step_distribution([0, 1], [Fraction(1, 2), Fraction(1, 3)])
    with pytest.raises(errors.ValidationError):
        make_step_distribution([1], [Fraction(1)])


# ---------------------------------------------------------------------------
# advance_level
# ---------------------------------------------------------------------------

def test_dyadic_three_steps(dyadic_ctx):
    levels = _levels(dyadic_ctx, fair_coin(), 3)
    assert levels[3].support_size == 8
    assert set(levels[3].masses.values()) == {Fraction(1, 8)}
    assert levels[3].total_mass() == 1


def test_golden_level3_masses_vs_oracle(golden_ctx):
    nu = fair_coin()
    levels = _levels(golden_ctx, nu, 3)
    assert levels[2].support_size == 4
    assert levels[3].support_size == 7
    oracle = _oracle_law(GOLDEN, nu, 3)
    got = {fe.residue: m for fe, m in levels[3].masses.items()}
    assert got == oracle
    zero = FieldElement((Fraction(0), Fraction(0)))
    assert levels[3].masses[zero] == Fraction(1, 4)


def test_mercat_level8_count_vs_oracle(mercat_ctx):
    nu = fair_coin()
    level = _levels(mercat_ctx, nu, 8)[8]
    oracle = _oracle_law(MERCAT, nu, 8)
    assert level.support_size == len(oracle) == 252
    got = {fe.residue: m for fe, m in level.masses.items()}
    assert got == oracle


def test_lambda_power_tracks_reduction(golden_ctx):
    nu = fair_coin()
    levels = _levels(golden_ctx, nu, 3)
    # lambda^2 = 1 - lambda mod x^2 + x - 1
    assert levels[2].lambda_power.residue == (Fraction(1), Fraction(-1))
    assert levels[3].lambda_power.residue == (Fraction(-1), Fraction(2))


def test_mass_conservation_biased(golden_ctx):
    nu = make_step_distribution([0, 1], [Fraction(1, 3), Fraction(2, 3)])
    for level in _levels(golden_ctx, nu, 6):
        assert level.total_mass() == 1


def test_budget_exceeded(dyadic_ctx):
    level = walk_level_zero(dyadic_ctx, fair_coin())
    with pytest.raises(errors.MemoryBudgetExceeded):
        for _ in range(40):
            level = advance_level(dyadic_ctx, fair_coin(), level,
                                  budget=10_000)


def test_mismatched_level_rejected(dyadic_ctx, golden_ctx):
    level = walk_level_zero(dyadic_ctx, fair_coin())
    with pytest.raises(errors.ValidationError):
        advance_level(golden_ctx, fair_coin(), level)


# ---------------------------------------------------------------------------
# entropy
# ---------------------------------------------------------------------------

def test_entropy_examples(dyadic_ctx, golden_ctx):
    nu = fair_coin()
    assert shannon_entropy(_levels(dyadic_ctx, nu, 3)[3]) == 3.0
    assert shannon_entropy(_levels(golden_ctx, nu, 3)[3]) == 2.75
    assert shannon_entropy(walk_level_zero(dyadic_ctx, nu)) == 0.0


def test_entropy_bounded_by_log_support(golden_ctx, mercat_ctx):
    nu = fair_coin()
    for ctx in (golden_ctx, mercat_ctx):
        for level in _levels(ctx, nu, 10)[1:]:
            assert shannon_entropy(level) <= math.log2(level.support_size) + 1e-12


# ---------------------------------------------------------------------------
# growth report
# ---------------------------------------------------------------------------

def test_growth_dyadic_all_ones(dyadic_ctx):
    report = growth_sequences(dyadic_ctx, fair_coin(), 10)
    for row in report.rows:
        assert row.H_over_n == 1.0
        assert row.log2_supp_over_n == 1.0
        assert row.free_so_far
    assert report.h_upper == report.rho_upper == 1.0
    assert not report.truncated


def test_growth_golden_decreasing_toward_log_phi(golden_ctx):
    report = growth_sequences(golden_ctx, fair_coin(), 12)
    log_phi = math.log2((1 + math.sqrt(5)) / 2)
    seq = [row.log2_supp_over_n for row in report.rows]
    assert all(s >= log_phi - 1e-12 for s in seq)
    assert seq[-1] < seq[0]
    assert report.rho_upper == min(seq)
    assert report.h_upper <= report.rho_upper


def test_growth_mercat_below_mahler_at_8(mercat_ctx):
    report = growth_sequences(mercat_ctx, fair_coin(), 8)
    assert report.rows[-1].supp_size == 252
    assert report.rows[-1].below_mahler_pow
    assert not report.rows[6].below_mahler_pow  # 127 > M^7


def test_growth_subadditivity(golden_ctx, mercat_ctx):
    nu = fair_coin()
    for ctx in (golden_ctx, mercat_ctx):
        rows = growth_sequences(ctx, nu, 12).rows
        H = {r.n: r.H_bits for r in rows}
        S = {r.n: math.log2(r.supp_size) for r in rows}
        for m in range(1, 12):
            for n in range(1, 12 - m + 1):
                assert H[m + n] <= H[m] + H[n] + 1e-9
                assert S[m + n] <= S[m] + S[n] + 1e-9


def test_growth_truncation_flag(dyadic_ctx):
    report = growth_sequences(dyadic_ctx, fair_coin(), 30, budget=20_000)
    assert report.truncated
    assert report.rows[-1].n < 30


# ---------------------------------------------------------------------------
# freeness
# ---------------------------------------------------------------------------

def test_dyadic_free(dyadic_ctx):
    assert is_free_up_to(dyadic_ctx, fair_coin(), 16).free


def test_golden_collision_witness(golden_ctx):
    rep = is_free_up_to(golden_ctx, fair_coin(), 3)
    assert not rep.free
    assert rep.first_collision_level == 3
    a, b = rep.witness
    assert a != b and len(a) == len(b) == 3
    # both sequences reduce to the same residue: their difference is a
    # multiple of the polynomial, checked by exact evaluation at the root
    poly = parse_polynomial(GOLDEN)
    from bce.numberfield import reduce_mod

    ra = reduce_mod(poly, a)
    rb = reduce_mod(poly, b)
    assert ra.residue == rb.residue


def test_freeness_validation(golden_ctx):
    with pytest.raises(errors.ValidationError):
        is_free_up_to(golden_ctx, fair_coin(), 0)


# ---------------------------------------------------------------------------
# separation
# ---------------------------------------------------------------------------

def test_min_separation_dyadic(dyadic_ctx):
    assert abs(min_separation(dyadic_ctx, fair_coin(), 4) - 0.25) < 1e-12
    assert abs(min_separation(dyadic_ctx, fair_coin(), 1) - 2.0) < 1e-12


def test_min_separation_golden_vs_oracle(golden_ctx):
    nu = fair_coin()
    got = min_separation(golden_ctx, nu, 8)
    lam = (math.sqrt(5) - 1) / 2
    vals = sorted(sum(a * lam ** i for i, a in enumerate(seq))
                  for seq in set(product((-1.0, 1.0), repeat=8)))
    vals = [v for i, v in enumerate(vals) if i == 0 or v - vals[i - 1] > 1e-11]
    oracle = min(b - a for a, b in zip(vals, vals[1:]))
    assert abs(got - oracle) < 1e-9
    # Garsia-style scale: separation times M^n stays order one
    fitted = got * ((1 + math.sqrt(5)) / 2) ** 8
    assert 0.1 < fitted < 10


def test_min_separation_complex_embedding(mercat_ctx):
    # no real root inside: distances through the inside-embedding vector
    d = min_separation(mercat_ctx, fair_coin(), 4)
    assert d > 0


def test_min_separation_requires_inside_root():
    ctx = context_from_coeffs([-3, 1])  # x - 3: no contracting embedding
    with pytest.raises(errors.ValidationError):
        min_separation(ctx, fair_coin(), 2)


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------

def test_oracle_golden_matches_exact(golden_ctx):
    nu = fair_coin()
    res = brute_force_oracle(0.6180339887498949, nu, 3)
    assert res.count == 7
    assert sorted(res.masses) == pytest.approx(
        [0.125] * 6 + [0.25], abs=1e-12)


def test_oracle_dyadic_1024():
    res = brute_force_oracle(0.5, fair_coin(), 10)
    assert res.count == 1024


def test_oracle_mercat_inside_root(mercat_ctx):
    inside = [iv for iv, t in zip(mercat_ctx.roots, mercat_ctx.classification)
              if t.value == "inside"][0]
    res = brute_force_oracle(inside.center, fair_coin(), 8)
    assert res.count == 252


def test_oracle_conjugate_independence():
    # both roots of x^2 + x - 1 see the same exact support count
    n = 8
    exact = growth_sequences(context_from_coeffs(GOLDEN), fair_coin(), n)
    target = exact.rows[-1].supp_size
    for root in (0.6180339887498949, -1.618033988749895):
        res = brute_force_oracle(root, fair_coin(), n,
                                 gap_threshold=1e-9)
        assert res.count == target


def test_oracle_cap_and_ambiguity(dyadic_ctx):
    with pytest.raises(errors.ValidationError):
        brute_force_oracle(0.5, fair_coin(), 30)
    with pytest.raises(errors.ClusterAmbiguity):
        # threshold chosen so clusters sit closer than 10x threshold
        brute_force_oracle(0.5, fair_coin(), 2, gap_threshold=0.2)

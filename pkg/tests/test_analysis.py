import math

import mpmath as mp
import pytest

from bce import errors
from bce.analysis import (
    affine_growth_alias,
    dimension_bracket,
    fourier_certificate,
    full_dimension_test,
    mercat_check,
    strictness_applicable,
)
from bce.numberfield import RootClass, context_from_coeffs, power_sums
from bce.smoothedentropy import c_constant
from bce.walk import fair_coin, growth_sequences, make_step_distribution

GOLDEN = [-1, 1, 1]
MERCAT = [1, 1, 1, -1, 1, 1, 1]
PHI = (1 + math.sqrt(5)) / 2


@pytest.fixture(scope="module")
def golden_ctx():
    return context_from_coeffs(GOLDEN)


@pytest.fixture(scope="module")
def mercat_ctx():
    return context_from_coeffs(MERCAT)


# ---------------------------------------------------------------------------
# dimension
# ---------------------------------------------------------------------------

def test_bracket_golden(golden_ctx):
    br = dimension_bracket(golden_ctx, fair_coin(), 20)
    assert abs(br.lambda_value - 1 / PHI) < 1e-12
    assert abs(br.log_inv_lambda - math.log2(PHI)) < 1e-12
    # M = 1/lambda for the golden parameter, so dim_lower = c exactly
    assert abs(br.dim_lower - 0.44) < 1e-9
    assert br.dim_upper == 1.0
    assert br.h_lower <= br.h_upper
    assert br.c_provenance == "paper"


def test_bracket_near_one_full_dimension():
    ctx = context_from_coeffs([-99, 100])
    br = dimension_bracket(ctx, fair_coin(), 8)
    assert br.h_lower == 0.44
    assert br.h_lower > br.log_inv_lambda
    assert br.dim_lower == 1.0


def test_bracket_dyadic_endpoint():
    ctx = context_from_coeffs([-1, 2])
    br = dimension_bracket(ctx, fair_coin(), 10)
    assert br.lambda_value == 0.5
    assert br.log_inv_lambda == 1.0
    assert br.dim_lower == pytest.approx(0.44)
    assert br.dim_upper == 1.0
    assert br.h_upper == 1.0  # exact from freeness


def test_bracket_requires_root_in_range(mercat_ctx):
    with pytest.raises(errors.NoRealRootInRange):
        dimension_bracket(mercat_ctx, fair_coin(), 6)


def test_bracket_with_certified_constant(golden_ctx):
    cert = c_constant(fair_coin(), cells=8)
    br = dimension_bracket(golden_ctx, fair_coin(), 8, c_used=cert)
    assert br.c_provenance == "certified"
    assert br.c_used == cert.c_lower


def test_full_dimension_examples(golden_ctx):
    assert full_dimension_test(context_from_coeffs([-9, 10]))      # 0.9
    assert full_dimension_test(context_from_coeffs([-99, 100]))    # 0.99
    assert not full_dimension_test(golden_ctx)                     # 1/phi
    with pytest.raises(errors.NoRealRootInRange):
        full_dimension_test(context_from_coeffs([-1, 1]))          # lambda = 1


def test_full_dimension_implies_bracket_one():
    for coeffs in ([-9, 10], [-99, 100], [-7, 8]):
        ctx = context_from_coeffs(coeffs)
        if full_dimension_test(ctx):
            br = dimension_bracket(ctx, fair_coin(), 6)
            assert br.dim_lower == 1.0


def test_strictness(golden_ctx, mercat_ctx):
    assert strictness_applicable(golden_ctx)
    assert not strictness_applicable(mercat_ctx)      # circle conjugates
    assert not strictness_applicable(context_from_coeffs([-2, 1]))  # M = 2


# ---------------------------------------------------------------------------
# Fourier singularity certificate
# ---------------------------------------------------------------------------

def test_fourier_golden_positive(golden_ctx):
    cert = fourier_certificate(golden_ctx, N=200)
    assert cert.certified_c > 0
    assert not cert.factor_near_zero
    assert cert.truncation >= 200
    assert 0 < cert.certified_c <= cert.truncated_product
    assert 0 < cert.tail_lower_bound <= 1.0
    # u_j is the inside-root power: (1/phi)^j for the golden parameter
    lam = 1 / PHI
    for j in (1, 2, 5, 10):
        assert abs(cert.u_sequence[j] - lam ** j) < 1e-10


def test_fourier_certificate_vs_direct_product(golden_ctx):
    # independent route: build the product straight from the inside root,
    # never using the exact power sums
    cert = fourier_certificate(golden_ctx, N=200)
    with mp.workdps(60):
        lam = (mp.sqrt(5) - 1) / 2
        prod = mp.mpf(1)
        for j in range(0, cert.truncation + 1):
            prod *= abs(mp.cos(2 * mp.pi * lam ** j))
        for j in range(1, cert.truncation + 1):
            prod *= abs(mp.cos(2 * mp.pi * (-lam) ** j))
        direct = float(prod)
    assert cert.certified_c <= direct * (1 + 1e-9)
    assert cert.certified_c == pytest.approx(direct, rel=1e-6)


def test_fourier_power_sum_identity(golden_ctx):
    # u_j + v_j must reproduce the exact integer power sums
    cert = fourier_certificate(golden_ctx, N=50)
    s = power_sums(golden_ctx.poly, 20)
    with mp.workdps(60):
        out = [iv for iv, t in zip(golden_ctx.roots, golden_ctx.classification)
               if t is RootClass.OUTSIDE][0]
        z = mp.mpf(out.re)
        for j in range(21):
            v_j = float(z ** j)
            assert abs(cert.u_sequence[j] + v_j - float(s[j])) < 1e-6


def test_fourier_rejections(mercat_ctx):
    with pytest.raises(errors.CircleRootPresent):
        fourier_certificate(mercat_ctx)
    with pytest.raises(errors.NotUnit):
        fourier_certificate(context_from_coeffs([-1, 2]))


def test_fourier_plastic_positive():
    cert = fourier_certificate(context_from_coeffs([-1, -1, 0, 1]), N=200)
    assert cert.certified_c > 0


# ---------------------------------------------------------------------------
# Mercat check and the affine alias
# ---------------------------------------------------------------------------

def test_mercat_check_at_8(mercat_ctx):
    chk = mercat_check(mercat_ctx, 8)
    assert chk.supp_size == 252
    assert chk.verdict
    assert chk.mahler_pow[0] < chk.mahler_pow[1]
    assert chk.supp_size < chk.mahler_pow[0]
    assert chk.rho_upper_at_n == pytest.approx(math.log2(252) / 8)


def test_mercat_check_equality_case():
    chk = mercat_check(context_from_coeffs([-1, 2]), 8)
    assert chk.supp_size == 256
    assert not chk.verdict  # 2^8 equals M^8 exactly


def test_mercat_check_golden_pisot_case(golden_ctx):
    chk = mercat_check(golden_ctx, 8)
    assert chk.supp_size == 88
    assert not chk.verdict  # 88 > phi^8 ~ 47


def test_affine_alias_matches_walk(golden_ctx):
    alias = affine_growth_alias(golden_ctx, fair_coin(), 6)
    direct = growth_sequences(golden_ctx, fair_coin(), 6)
    assert alias.growth.rows == direct.rows
    assert "rho_S" in alias.metadata["uniform_lower_bound"]


def test_affine_alias_requires_fair_coin(golden_ctx):
    from fractions import Fraction

    nu = make_step_distribution([0, 1], [Fraction(1, 2), Fraction(1, 2)])
    with pytest.raises(errors.ValidationError):
        affine_growth_alias(golden_ctx, nu, 4)


# ---------------------------------------------------------------------------
# cross-module soundness
# ---------------------------------------------------------------------------

def test_bracket_soundness_small_corpus():
    # every polynomial here has a real root in [1/2, 1)
    for coeffs in ([-1, 2], GOLDEN, [-1, 0, 2], [-3, 4], [-9, 10]):
        ctx = context_from_coeffs(coeffs)
        br = dimension_bracket(ctx, fair_coin(), 8)
        assert br.dim_lower <= br.dim_upper + 1e-12
        assert br.h_lower <= br.h_upper + 1e-12

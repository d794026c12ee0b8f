"""Headline quantities: dimension brackets, the full-dimension test, the
strictness precondition, the Fourier singularity certificate and the
degree-six support-deficiency check.

All dimension statements are restricted to a designated real root in
[1/2, 1); other parameters still get entropy and growth output from the walk
module, just no dimension claim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .errors import (
    CircleRootPresent,
    NoRealRootInRange,
    NotUnit,
    ValidationError,
)
from .numberfield import (
    AlgebraicContext,
    RootClass,
    power_sums,
    refine_enclosure,
)
from .smoothedentropy import CConstantCertificate, entropy_lower_bound
from .walk import (
    DEFAULT_BUDGET,
    GrowthReport,
    StepDistribution,
    fair_coin,
    growth_sequences,
)

PAPER_C = 0.44


def _real_root_in(ctx: AlgebraicContext, lo, hi, lo_closed: bool = False):
    """Largest certified real root whose enclosure lies in the interval."""
    best = None
    for i, iv in enumerate(ctx.roots):
        if not ctx.is_real[i]:
            continue
        a, b = iv.re - iv.radius, iv.re + iv.radius
        if (a > lo or (lo_closed and a >= lo)) and b < hi:
            if best is None or iv.re > ctx.roots[best].re:
                best = i
    if best is None:
        raise NoRealRootInRange(
            f"no certified real root of {ctx.poly} in "
            f"{'[' if lo_closed else '('}{lo}, {hi})")
    return best


# ---------------------------------------------------------------------------
# dimension bracket and tests
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DimensionBracket:
    lambda_value: float
    log_inv_lambda: float
    h_lower: float
    h_upper: float
    dim_lower: float
    dim_upper: float
    c_used: float
    c_provenance: str
    n_max: int


def dimension_bracket(ctx: AlgebraicContext, nu: StepDistribution, n_max: int,
                      c_used: float | CConstantCertificate = PAPER_C,
                      budget: int = DEFAULT_BUDGET) -> DimensionBracket:
    """Bracket min(h / log2(1/lambda), 1) for the designated real root.

    The upper side is the finite-stage Fekete bound H(n)/n; the lower side is
    the transported constant times min(1, log2 M).
    """
    if isinstance(c_used, CConstantCertificate):
        c_value, provenance = c_used.c_lower, "certified"
    else:
        c_value, provenance = float(c_used), "paper"
    idx = _real_root_in(ctx, Fraction(1, 2), Fraction(1), lo_closed=True)
    lam = ctx.roots[idx].re
    log_inv = -math.log2(lam)
    report = growth_sequences(ctx, nu, n_max, budget=budget)
    h_upper = report.h_upper
    h_lower = entropy_lower_bound(ctx.mahler[0], c_value)
    if log_inv <= 0:
        dim_lower = dim_upper = 1.0
    else:
        dim_lower = min(h_lower / log_inv, 1.0)
        dim_upper = min(h_upper / log_inv, 1.0)
    dim_lower = min(dim_lower, dim_upper)
    return DimensionBracket(
        lambda_value=lam,
        log_inv_lambda=log_inv,
        h_lower=h_lower,
        h_upper=h_upper,
        dim_lower=dim_lower,
        dim_upper=dim_upper,
        c_used=c_value,
        c_provenance=provenance,
        n_max=n_max,
    )


def full_dimension_test(ctx: AlgebraicContext) -> bool:
    """True iff min(M, 2)^(-0.44) <= lambda for the designated real root in
    (0, 1), evaluated with the conservative interval endpoints."""
    idx = _real_root_in(ctx, Fraction(0), Fraction(1))
    lam_lo = ctx.roots[idx].re - ctx.roots[idx].radius
    threshold = min(ctx.mahler[0], 2.0) ** (-PAPER_C)
    return threshold <= lam_lo


def strictness_applicable(ctx: AlgebraicContext) -> bool:
    """Preconditions of the strict upper bound: M < 2 (whole interval) and no
    Galois conjugate on the unit circle."""
    return ctx.mahler[1] < 2.0 and ctx.k_on_circle == 0


# ---------------------------------------------------------------------------
# Fourier singularity certificate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SingularityCertificate:
    """Certified positive lower bound for the limsup of Fourier coefficients
    of the embedded stationary law (fair-coin steps, unit parameter, no
    circle conjugates), which obstructs absolute continuity.

    certified_c = truncated_product * tail_lower_bound; when any cosine
    factor's enclosure touches zero the certificate degrades to 0 with
    factor_near_zero set rather than deciding.
    """

    truncation: int
    truncated_product: float
    tail_lower_bound: float
    certified_c: float
    u_sequence: tuple[float, ...]
    v_sequence: tuple[float, ...]
    factor_near_zero: bool


def fourier_certificate(ctx: AlgebraicContext, N: int = 200) -> SingularityCertificate:
    """Lower-bound the doubly infinite cosine product from exact power sums.

    u_j (sum of inside-conjugate j-th powers) is obtained as s_j - v_j with
    s_j the exact integer power sum and v_j the outside contribution at high
    precision; the tails use -log|cos x| <= x^2/2 + x^4 for |x| <= 1/2 with
    certified geometric envelopes for |u_j| and |v_{-j}|.
    """
    if not ctx.is_unit:
        raise NotUnit(f"{ctx.poly} is not an algebraic unit")
    if ctx.k_on_circle > 0:
        raise CircleRootPresent(
            f"{ctx.poly} has {ctx.k_on_circle} conjugates on the unit circle")
    inside = [iv for _, iv in ctx.roots_with_class(RootClass.INSIDE)]
    outside = [iv for _, iv in ctx.roots_with_class(RootClass.OUTSIDE)]
    n_in, n_out = len(inside), len(outside)
    if n_in == 0 or n_out == 0:
        raise ValidationError(
            "certificate needs conjugates on both sides of the unit circle")

    alpha = max(abs(iv.center) + iv.radius for iv in inside)     # < 1
    beta = max(1.0 / (abs(iv.center) - iv.radius) for iv in outside)
    # grow the truncation until both geometric envelopes are within the
    # valid range of the cosine bound
    N_eff = N
    while (2 * math.pi * n_in * alpha ** (N_eff + 1) > 0.5
           or 2 * math.pi * n_out * beta ** (N_eff + 1) > 0.5):
        N_eff += 50
        if N_eff > 100 * (N + 10):
            raise ValidationError("root moduli too close to 1 for the tail bound")

    out_mod_max = max(abs(iv.center) + iv.radius for iv in outside)
    dps = int(N_eff * math.log10(out_mod_max) + 60)
    s = power_sums(ctx.poly, N_eff)

    with mp.workdps(dps):
        out_roots = [refine_enclosure(ctx.poly, iv, dps) for iv in outside]
        two_pi = 2 * mp.pi

        u_seq: list[float] = []
        v_neg_seq: list[float] = []
        log_prod = mp.mpf(0)
        near_zero = False
        pw = [mp.mpc(1) for _ in out_roots]
        pw_inv = [mp.mpc(1) for _ in out_roots]
        for j in range(0, N_eff + 1):
            if j > 0:
                pw = [p * z for p, (z, _) in zip(pw, out_roots)]
                pw_inv = [p / z for p, (z, _) in zip(pw_inv, out_roots)]
            # v_j: outside contribution, with enclosure-propagated error
            v_j = mp.re(mp.fsum(pw))
            err_v = mp.fsum(j * (abs(z) + r) ** (j - 1) * r
                            for z, r in out_roots) if j > 0 else mp.mpf(0)
            s_j = mp.mpf(s[j].numerator) / s[j].denominator
            u_j = s_j - v_j
            u_seq.append(float(u_j))
            factor = abs(mp.cos(two_pi * u_j)) - two_pi * err_v
            if j > 0:
                v_negj = mp.re(mp.fsum(pw_inv))
                v_neg_seq.append(float(v_negj))
                err_nv = mp.fsum(j * r / (abs(z) - r) ** (j + 1)
                                 for z, r in out_roots)
                factor_v = abs(mp.cos(two_pi * v_negj)) - two_pi * err_nv
            else:
                factor_v = mp.mpf(1)
            if factor <= 0 or factor_v <= 0:
                near_zero = True
                break
            log_prod += mp.log(factor) + mp.log(factor_v)

        if near_zero:
            truncated_product = 0.0
            tail = 0.0
            certified = 0.0
        else:
            down = lambda x: max(0.0, math.nextafter(x, 0.0))  # noqa: E731
            truncated_product = down(float(mp.exp(log_prod)))
            a_env = 2 * math.pi * n_in
            b_env = 2 * math.pi * n_out
            tu = (a_env ** 2 * alpha ** (2 * (N_eff + 1)) / (2 * (1 - alpha ** 2))
                  + a_env ** 4 * alpha ** (4 * (N_eff + 1)) / (1 - alpha ** 4))
            tv = (b_env ** 2 * beta ** (2 * (N_eff + 1)) / (2 * (1 - beta ** 2))
                  + b_env ** 4 * beta ** (4 * (N_eff + 1)) / (1 - beta ** 4))
            tail = down(math.exp(-(tu + tv)))
            certified = down(truncated_product * tail)

    return SingularityCertificate(
        truncation=N_eff,
        truncated_product=truncated_product,
        tail_lower_bound=tail,
        certified_c=certified,
        u_sequence=tuple(u_seq),
        v_sequence=tuple(v_neg_seq),
        factor_near_zero=near_zero,
    )


# ---------------------------------------------------------------------------
# Mercat-style support deficiency and the affine-semigroup alias
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MercatCheck:
    n: int
    supp_size: int
    mahler_pow: tuple[float, float]
    verdict: bool
    rho_upper_at_n: float


def mercat_check(ctx: AlgebraicContext, n: int,
                 nu: StepDistribution | None = None,
                 budget: int = DEFAULT_BUDGET) -> MercatCheck:
    """Compare the exact level-n support size against the Mahler interval's
    n-th power; verdict is the certified strict inequality supp < M^n, which
    pins the growth rate strictly below log2 M at that level."""
    nu = nu or fair_coin()
    report = growth_sequences(ctx, nu, n, budget=budget)
    row = report.rows[-1]
    if row.n != n:
        from .errors import MemoryBudgetExceeded

        raise MemoryBudgetExceeded("enumeration truncated before the target level")
    lo, hi = ctx.mahler
    return MercatCheck(
        n=n,
        supp_size=row.supp_size,
        mahler_pow=(lo ** n, hi ** n),
        verdict=row.below_mahler_pow,
        rho_upper_at_n=row.log2_supp_over_n,
    )


@dataclass(frozen=True)
class AffineGrowth:
    """Ball growth of the two-generator affine semigroup x -> lambda*x +- 1.

    The n-step support of the walk is exactly the orbit of 0 under n-fold
    products of the two generators, so the table coincides with the walk's
    and the growth rates agree.  The metadata records the uniform semigroup
    bound (1/9) * log2 M that the growth inherits.
    """

    growth: GrowthReport
    metadata: dict


def affine_growth_alias(ctx: AlgebraicContext, nu: StepDistribution,
                        n: int, budget: int = DEFAULT_BUDGET) -> AffineGrowth:
    if nu != fair_coin():
        raise ValidationError(
            "the semigroup alias is defined for the fair +-1 step law")
    report = growth_sequences(ctx, nu, n, budget=budget)
    return AffineGrowth(
        growth=report,
        metadata={
            "semigroup": "x -> lambda*x + 1, x -> lambda*x - 1",
            "identification": "ball growth rate equals the walk support rate",
            "uniform_lower_bound": "rho_S >= (1/9) * log2 M for non-virtually-"
                                   "nilpotent affine semigroups (metadata only)",
            "mahler_lo": ctx.mahler[0],
        },
    )

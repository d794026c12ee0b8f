"""Exact enumeration of the n-step random-walk law on canonical residues.

The law of sum_{i<n} xi_i * lambda^i is supported on residues of the ring
Q[x]/(p); two coefficient sequences collide exactly when their difference is
divisible by the defining polynomial, so support sizes and entropies are
computed without any floating point.

Internally a level-n support point is stored as an integer vector: the
canonical residue multiplied by the common denominator d_a * a_r^n (d_a the
lcm of the atom denominators, a_r the leading coefficient), and masses are
stored as integer numerators over d_p^n (d_p the lcm of the probability
denominators) — for the fair coin these are plain path counts.  This keeps
the hot loop in machine-assisted big-int arithmetic while remaining exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import mpmath as mp
import numpy as np

from .errors import (
    ClusterAmbiguity,
    DuplicateAtom,
    MemoryBudgetExceeded,
    NonPositiveProbability,
    ProbabilitySumNotOne,
    ValidationError,
)
from .numberfield import (
    AlgebraicContext,
    FieldElement,
    IntPolynomial,
    RootClass,
    refine_enclosure,
)

DEFAULT_BUDGET = 200_000_000


# ---------------------------------------------------------------------------
# step distribution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StepDistribution:
    """Finitely supported rational step law: distinct sorted atoms with
    positive rational probabilities summing to one exactly."""

    atoms: tuple[Fraction, ...]
    probs: tuple[Fraction, ...]

    def entropy_bits(self) -> float:
        return -math.fsum(float(p) * math.log2(float(p)) for p in self.probs)

    def __str__(self) -> str:
        return ",".join(str(a) for a in self.atoms) + ":" + \
            ",".join(str(p) for p in self.probs)


def make_step_distribution(atoms, probs) -> StepDistribution:
    atoms = [Fraction(a) for a in atoms]
    probs = [Fraction(p) for p in probs]
    if len(atoms) != len(probs):
        raise ValidationError("atoms and probs length mismatch")
    if len(atoms) < 2:
        raise ValidationError("need at least 2 atoms")
    if len(set(atoms)) != len(atoms):
        raise DuplicateAtom("atoms must be pairwise distinct")
    for p in probs:
        if p <= 0:
            raise NonPositiveProbability(f"probability {p} is not positive")
    if sum(probs) != 1:
        raise ProbabilitySumNotOne(f"probabilities sum to {sum(probs)}")
    pairs = sorted(zip(atoms, probs))
    return StepDistribution(tuple(a for a, _ in pairs),
                            tuple(p for _, p in pairs))


def fair_coin() -> StepDistribution:
    return make_step_distribution([-1, 1], [Fraction(1, 2), Fraction(1, 2)])


# ---------------------------------------------------------------------------
# walk levels
# ---------------------------------------------------------------------------

def _poly_of(ctx) -> IntPolynomial:
    return ctx.poly if isinstance(ctx, AlgebraicContext) else ctx


def _lcm_denominator(fracs) -> int:
    d = 1
    for f in fracs:
        d = d * f.denominator // math.gcd(d, f.denominator)
    return d


class WalkLevel:
    """The exact law at one step count.

    Masses are exposed as a FieldElement -> Fraction map; materializing it
    costs O(support), so the heavy consumers (entropy, support size) read the
    internal integer representation instead.
    """

    def __init__(self, poly: IntPolynomial, nu: StepDistribution, n: int,
                 counts: dict, power_vec: tuple[int, ...]):
        self.poly = poly
        self.nu = nu
        self.n = n
        self._counts = counts
        self._power = power_vec  # residue of lambda^n scaled by a_r^n
        self._masses: dict | None = None

    @property
    def support_size(self) -> int:
        return len(self._counts)

    @property
    def mass_denominator(self) -> int:
        return _lcm_denominator(self.nu.probs) ** self.n

    @property
    def key_scale(self) -> int:
        return _lcm_denominator(self.nu.atoms) * self.poly.leading ** self.n

    def _key_to_element(self, key) -> FieldElement:
        scale = self.key_scale
        if self.poly.degree == 1:
            return FieldElement((Fraction(key, scale),))
        return FieldElement(tuple(Fraction(k, scale) for k in key))

    @property
    def lambda_power(self) -> FieldElement:
        den = self.poly.leading ** self.n
        return FieldElement(tuple(Fraction(w, den) for w in self._power))

    @property
    def masses(self) -> dict[FieldElement, Fraction]:
        if self._masses is None:
            den = self.mass_denominator
            self._masses = {self._key_to_element(k): Fraction(c, den)
                            for k, c in self._counts.items()}
        return self._masses

    def total_mass(self) -> Fraction:
        return Fraction(sum(self._counts.values()), self.mass_denominator)

    def iter_residue_fractions(self):
        """Yield each support point as a tuple of exact Fractions."""
        scale = self.key_scale
        if self.poly.degree == 1:
            for k in self._counts:
                yield (Fraction(k, scale),)
        else:
            for k in self._counts:
                yield tuple(Fraction(c, scale) for c in k)


def walk_level_zero(ctx, nu: StepDistribution) -> WalkLevel:
    poly = _poly_of(ctx)
    r = poly.degree
    key = 0 if r == 1 else (0,) * r
    power = tuple([1] + [0] * (r - 1))
    return WalkLevel(poly, nu, 0, {key: 1}, power)


def _advance_power(poly: IntPolynomial, power: tuple[int, ...]) -> tuple[int, ...]:
    """Scaled multiply-by-lambda: W_{n+1} = a_r * shift(W_n) - W_n[r-1] * low."""
    r = poly.degree
    ar = poly.leading
    low = poly.coeffs[:-1]
    t = power[r - 1]
    shifted = (0,) + power[:-1]
    return tuple(ar * s - t * c for s, c in zip(shifted, low))


def advance_level(ctx, nu: StepDistribution, level: WalkLevel,
                  budget: int = DEFAULT_BUDGET) -> WalkLevel:
    """One convolution step: masses'[v + a*lambda^n] += masses[v] * nu(a).

    Exact rational arithmetic throughout (integer-scaled); collisions are
    algebraic identities mod the defining polynomial, never float merges.
    """
    poly = _poly_of(ctx)
    if poly != level.poly:
        raise ValidationError("level was built for a different polynomial")
    if nu != level.nu:
        raise ValidationError("level was built for a different step law")
    r = poly.degree
    ar = poly.leading
    d_a = _lcm_denominator(nu.atoms)
    d_p = _lcm_denominator(nu.probs)
    atom_nums = [int(a * d_a) for a in nu.atoms]
    prob_nums = [int(p * d_p) for p in nu.probs]
    if len(level._counts) * len(nu.atoms) > budget:
        raise MemoryBudgetExceeded(
            f"level {level.n + 1} may need more than {budget} residues")

    W = level._power
    new: dict = {}
    if r == 1:
        w = W[0]
        steps = [(a * ar * w, p) for a, p in zip(atom_nums, prob_nums)]
        for key, cnt in level._counts.items():
            base = ar * key
            for step, p in steps:
                k2 = base + step
                c = new.get(k2)
                new[k2] = cnt * p if c is None else c + cnt * p
                if len(new) > budget:
                    raise MemoryBudgetExceeded(
                        f"residue budget {budget} exceeded at level {level.n + 1}")
    else:
        steps = [(tuple(a * ar * wi for wi in W), p)
                 for a, p in zip(atom_nums, prob_nums)]
        for key, cnt in level._counts.items():
            base = tuple(ar * k for k in key)
            for step, p in steps:
                k2 = tuple(b + s for b, s in zip(base, step))
                c = new.get(k2)
                new[k2] = cnt * p if c is None else c + cnt * p
                if len(new) > budget:
                    raise MemoryBudgetExceeded(
                        f"residue budget {budget} exceeded at level {level.n + 1}")
    return WalkLevel(poly, nu, level.n + 1, new, _advance_power(poly, W))


def shannon_entropy(level: WalkLevel) -> float:
    """-sum p log2 p in bits, evaluated in floating point from the exact
    integer masses; relative error is at the fsum level (~1e-15)."""
    n = level.n
    if n == 0:
        return 0.0
    d_p = _lcm_denominator(level.nu.probs)
    acc = math.fsum(c * math.log2(c) for c in level._counts.values() if c > 1)
    return n * math.log2(d_p) - acc / (d_p ** n)


# ---------------------------------------------------------------------------
# growth report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GrowthRow:
    n: int
    supp_size: int
    H_bits: float
    H_over_n: float
    log2_supp_over_n: float
    free_so_far: bool
    below_mahler_pow: bool


@dataclass(frozen=True)
class GrowthReport:
    """Per-level support/entropy table with the Fekete upper bounds.

    `h_upper` and `rho_upper` are running minima of H(n)/n and
    log2|Supp(n)|/n; by subadditivity they are valid upper bounds for the
    walk entropy and the support growth rate at every finite stage.
    """

    rows: tuple[GrowthRow, ...]
    h_upper: float
    rho_upper: float
    truncated: bool
    budget: int


def growth_sequences(ctx, nu: StepDistribution, n_max: int,
                     budget: int = DEFAULT_BUDGET) -> GrowthReport:
    if n_max < 1:
        raise ValidationError("n_max must be at least 1")
    poly = _poly_of(ctx)
    mahler_lo = ctx.mahler[0] if isinstance(ctx, AlgebraicContext) else None
    k_atoms = len(nu.atoms)
    rows = []
    truncated = False
    level = walk_level_zero(poly, nu)
    free = True
    for n in range(1, n_max + 1):
        try:
            level = advance_level(poly, nu, level, budget=budget)
        except MemoryBudgetExceeded:
            truncated = True
            break
        supp = level.support_size
        H = shannon_entropy(level)
        free = free and supp == k_atoms ** n
        # strict "supp < M^n" verdict, certified through the Mahler interval's
        # lower endpoint with slack for log rounding (supports stay < 2^53)
        below = (mahler_lo is not None and
                 math.log2(supp) < n * math.log2(mahler_lo) - 1e-11)
        rows.append(GrowthRow(
            n=n,
            supp_size=supp,
            H_bits=H,
            H_over_n=H / n,
            log2_supp_over_n=math.log2(supp) / n,
            free_so_far=free,
            below_mahler_pow=bool(below),
        ))
    if not rows:
        raise MemoryBudgetExceeded(f"budget {budget} too small for level 1")
    return GrowthReport(
        rows=tuple(rows),
        h_upper=min(r.H_over_n for r in rows),
        rho_upper=min(r.log2_supp_over_n for r in rows),
        truncated=truncated,
        budget=budget,
    )


# ---------------------------------------------------------------------------
# freeness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FreenessReport:
    free: bool
    first_collision_level: int | None
    witness: tuple[tuple[Fraction, ...], tuple[Fraction, ...]] | None


def is_free_up_to(ctx, nu: StepDistribution, n: int,
                  budget: int = DEFAULT_BUDGET) -> FreenessReport:
    """True iff |Supp| = (atom count)^m for all m <= n; on failure returns two
    distinct coefficient sequences (a_0, ..., a_{m-1}) with equal residue."""
    if n < 1:
        raise ValidationError("n must be at least 1")
    poly = _poly_of(ctx)
    k = len(nu.atoms)
    level = walk_level_zero(poly, nu)
    first_bad = None
    for m in range(1, n + 1):
        level = advance_level(poly, nu, level, budget=budget)
        if level.support_size != k ** m:
            first_bad = m
            break
    if first_bad is None:
        return FreenessReport(free=True, first_collision_level=None, witness=None)

    # re-enumerate level by level, keeping the first sequence per residue
    ar = poly.leading
    d_a = _lcm_denominator(nu.atoms)
    atom_nums = [int(a * d_a) for a in nu.atoms]
    r = poly.degree
    power = tuple([1] + [0] * (r - 1))
    seqs: dict = {(0,) * r if r > 1 else 0: ()}
    for m in range(first_bad):
        steps = [(tuple(a * ar * wi for wi in power), atom)
                 for a, atom in zip(atom_nums, nu.atoms)]
        new: dict = {}
        for key, seq in seqs.items():
            base = (tuple(ar * c for c in key) if r > 1 else ar * key)
            for step, atom in steps:
                k2 = (tuple(b + s for b, s in zip(base, step)) if r > 1
                      else base + step[0])
                if k2 in new:
                    # support sizes matched below first_bad, so the first
                    # duplicate key necessarily appears at that level
                    return FreenessReport(
                        False, first_bad, (seq + (atom,), new[k2]))
                new[k2] = seq + (atom,)
        seqs = new
        power = _advance_power(poly, power)
    raise AssertionError("deficient level reported but no collision found")


# ---------------------------------------------------------------------------
# separation and the float brute-force oracle
# ---------------------------------------------------------------------------

def _inside_roots(ctx: AlgebraicContext):
    return [iv for _, iv in ctx.roots_with_class(RootClass.INSIDE)]


def min_separation(ctx: AlgebraicContext, nu: StepDistribution, n: int,
                   budget: int = DEFAULT_BUDGET) -> float:
    """Minimum distance between distinct support values at level n.

    With a real root of modulus < 1 the points are evaluated on the real
    line; otherwise every embedding of modulus < 1 contributes coordinates
    (real pairs for complex embeddings) and Euclidean distances are used.
    Distinctness is certified against the propagated root-enclosure error.
    """
    from .errors import PrecisionExhausted

    if n < 1:
        raise ValidationError("n must be at least 1")
    inside = [(i, iv) for i, iv in ctx.roots_with_class(RootClass.INSIDE)]
    if not inside:
        raise ValidationError(
            "no root inside the unit circle: separation undefined")
    real_inside = [(i, iv) for i, iv in inside if ctx.is_real[i]]

    level = walk_level_zero(ctx, nu)
    for _ in range(n):
        level = advance_level(ctx, nu, level, budget=budget)
    points = list(level.iter_residue_fractions())
    if len(points) ** 2 > 4 * budget:
        raise MemoryBudgetExceeded("too many support points for pairwise scan")

    dps = 40
    for _ in range(5):
        with mp.workdps(dps):
            if real_inside:
                idx = max(real_inside, key=lambda t: abs(t[1].center))[0]
                z, rho = refine_enclosure(ctx.poly, ctx.roots[idx], dps)
                lam = mp.re(z)
                powers = [lam ** j for j in range(ctx.degree)]
                vals = sorted(mp.fsum(float_free * p for float_free, p
                                      in zip(pt, powers)) for pt in points)
                gap = min((b - a for a, b in zip(vals, vals[1:])),
                          default=mp.inf)
                err = _eval_error_bound(points, abs(z), rho, ctx.degree)
                if gap > 4 * err:
                    return float(gap)
            else:
                coords = []
                seen_conj = set()
                for i, iv in inside:
                    key = (round(iv.re, 10), round(abs(iv.im), 10))
                    if key in seen_conj:
                        continue  # one embedding per conjugate pair
                    seen_conj.add(key)
                    z, rho = refine_enclosure(ctx.poly, iv, dps)
                    coords.append((z, rho))
                pts = []
                for pt in points:
                    vec = []
                    for z, _ in coords:
                        v = mp.fsum(c * z ** j for j, c in enumerate(pt))
                        vec.extend([mp.re(v), mp.im(v)])
                    pts.append(vec)
                gap = mp.inf
                for a in range(len(pts)):
                    for b in range(a + 1, len(pts)):
                        d = mp.sqrt(mp.fsum((x - y) ** 2 for x, y
                                            in zip(pts[a], pts[b])))
                        gap = min(gap, d)
                err = max(_eval_error_bound(points, abs(z), rho, ctx.degree)
                          for z, rho in coords) * 2 * len(coords)
                if gap > 4 * err:
                    return float(gap)
        dps *= 2
    raise PrecisionExhausted(
        "support values too close to separate at the precision cap")


def _eval_error_bound(points, mod, rho, degree):
    cmax = max((max(abs(c) for c in pt) for pt in points), default=Fraction(0))
    grad = mp.fsum(j * (mod + rho) ** (j - 1) for j in range(1, degree))
    return float(cmax) * float(rho) * (float(grad) + 1.0) + 1e-30


@dataclass(frozen=True)
class OracleResult:
    count: int
    centers: tuple
    masses: tuple


def brute_force_oracle(lambda_approx, nu: StepDistribution, n: int,
                       gap_threshold: float | None = None) -> OracleResult:
    """Float evaluation of all (atom count)^n sequences, clustered by gap.

    Test-side cross-check for the exact enumeration: independent of the
    residue arithmetic, it sees only a numerical root value.
    """
    k = len(nu.atoms)
    if k ** n > 2 ** 24:
        raise ValidationError("brute force capped at 2^24 sequences")
    lam = complex(lambda_approx)
    is_real = abs(lam.imag) < 1e-300
    if gap_threshold is None:
        gap_threshold = 1e-9 * min(1.0, abs(lam)) ** n
    atoms = np.array([float(a) for a in nu.atoms],
                     dtype=np.float64 if is_real else np.complex128)
    probs = np.array([float(p) for p in nu.probs])
    vals = np.zeros(1, dtype=atoms.dtype)
    ws = np.ones(1)
    scale = lam.real if is_real else lam
    power = 1.0 if is_real else complex(1.0)
    for _ in range(n):
        vals = (vals[:, None] + atoms[None, :] * power).ravel()
        ws = (ws[:, None] * probs[None, :]).ravel()
        power *= scale

    if is_real:
        order = np.argsort(vals)
        vals, ws = vals[order], ws[order]
        breaks = np.nonzero(np.diff(vals) > gap_threshold)[0] + 1
        groups = np.split(np.arange(len(vals)), breaks)
    else:
        order = np.lexsort((vals.imag, vals.real))
        vals, ws = vals[order], ws[order]
        breaks = np.nonzero(np.diff(vals.real) > gap_threshold)[0] + 1
        groups = []
        for g in np.split(np.arange(len(vals)), breaks):
            sub = g[np.argsort(vals[g].imag)]
            b2 = np.nonzero(np.diff(vals[sub].imag) > gap_threshold)[0] + 1
            groups.extend(np.split(sub, b2))

    centers = []
    masses = []
    for g in groups:
        w = ws[g]
        centers.append(complex(np.sum(vals[g] * w) / np.sum(w)))
        masses.append(float(np.sum(w)))
    if is_real:
        # inter-cluster gaps in 1D are between consecutive cluster edges
        for g, h in zip(groups, groups[1:]):
            edge = vals[h[0]].real - vals[g[-1]].real
            if edge < 10 * gap_threshold:
                raise ClusterAmbiguity(
                    f"clusters separated by {edge:.3e} < 10x threshold")
    elif len(centers) <= 8192:
        c_arr = np.array(centers)
        for i in range(len(centers)):
            d = np.abs(c_arr - c_arr[i])
            d[i] = np.inf
            nearest = d.min()
            if nearest < 10 * gap_threshold:
                raise ClusterAmbiguity(
                    f"clusters separated by {nearest:.3e} < 10x threshold")
    return OracleResult(count=len(centers), centers=tuple(centers),
                        masses=tuple(masses))

"""Exact integer polynomial arithmetic, certified root isolation and
structural predicates on the defining polynomial.

The central object is a primitive integer polynomial p = a_r x^r + ... + a_0,
stored with ascending coefficients.  Roots are approximated by a simultaneous
Aberth-Ehrlich iteration and certified a posteriori through the
partial-fraction bound: p'(z)/p(z) = sum 1/(z - root_i) implies that the disk
of radius  r * |p(z)/p'(z)|  around z contains at least one root, so r
pairwise disjoint disks of that kind isolate one root each.

Whether a root lies exactly on the unit circle is never decided by tolerance
alone.  A root on |z| = 1 must divide gcd(p, x^r p(1/x)) (computed exactly
over the integers), and a root z of p is on the circle iff the map
z -> 1/conj(z) sends it to itself; with disjoint certified enclosures that
fixed-point test is rigorous.  Realness of roots is settled by an exact Sturm
count matched against the enclosures that touch the real axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd

import mpmath as mp

from .errors import (
    AmbiguousCircleRoot,
    ConstantPolynomial,
    EmptyInput,
    NotSquarefree,
    PrecisionExhausted,
    ValidationError,
    ZeroLeadingCoefficient,
)

DEFAULT_TARGET_RADIUS = 1e-14
DEFAULT_MAHLER_WIDTH = 1e-10

# Radii below ~1e-16 * |center| are not representable once the center is
# rounded to a float; conversion inflates the certified radius accordingly.
_FLOAT_EPS = 2.3e-16


class RootClass(Enum):
    INSIDE = "inside"
    ON_CIRCLE = "on_circle"
    OUTSIDE = "outside"


# ---------------------------------------------------------------------------
# integer polynomial helpers (coefficients ascending, arbitrary precision)
# ---------------------------------------------------------------------------

def _trim(coeffs):
    i = len(coeffs)
    while i > 0 and coeffs[i - 1] == 0:
        i -= 1
    return list(coeffs[:i])


def _content(coeffs) -> int:
    g = 0
    for c in coeffs:
        g = gcd(g, abs(c))
    return g


def _derivative(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def _pseudo_rem(a, b):
    """Pseudo-remainder of a by b over the integers (b nonzero)."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        da = len(a) - 1
        q = a[-1]
        a = [lb * c for c in a]
        for i in range(db + 1):
            a[da - db + i] -= q * b[i]
        a = _trim(a)
    return a


def int_poly_gcd(a, b):
    """Primitive gcd of two integer coefficient lists (ascending)."""
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pseudo_rem(a, b)
        if b:
            c = _content(b)
            b = [x // c for x in b]
    if not a:
        return []
    c = _content(a)
    a = [x // c for x in a]
    if a[-1] < 0:
        a = [-x for x in a]
    return a


def _eval_int_frac(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _eval_mpc(coeffs, z):
    acc = mp.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntPolynomial:
    """Primitive integer polynomial a_r x^r + ... + a_0, a_r > 0, content 1."""

    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        return self.coeffs[0]

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    @property
    def is_reciprocal(self) -> bool:
        """Palindromic coefficient vector: p = x^r p(1/x)."""
        return self.coeffs == tuple(reversed(self.coeffs))

    def reversed(self) -> "IntPolynomial":
        """x^r * p(1/x), normalized (roots are the inverses of p's roots)."""
        rev = _trim(list(reversed(self.coeffs)))
        if not rev or len(rev) == 1:
            raise ConstantPolynomial("reversed polynomial is constant")
        if rev[-1] < 0:
            rev = [-c for c in rev]
        return IntPolynomial(tuple(rev))

    def derivative_coeffs(self) -> list[int]:
        return _derivative(self.coeffs)

    def eval_fraction(self, x: Fraction) -> Fraction:
        return _eval_int_frac(self.coeffs, x)

    def __str__(self) -> str:
        parts = []
        for i in reversed(range(len(self.coeffs))):
            c = self.coeffs[i]
            if c == 0:
                continue
            term = "" if (abs(c) == 1 and i > 0) else str(abs(c))
            if i == 1:
                term += "x"
            elif i > 1:
                term += f"x^{i}"
            parts.append(("- " if c < 0 else "+ ") + term if parts else
                         ("-" if c < 0 else "") + term)
        return " ".join(parts) if parts else "0"


def parse_polynomial(coeffs) -> IntPolynomial:
    """Normalize ascending integer coefficients into an IntPolynomial.

    Content is divided out and the whole polynomial is negated if the leading
    coefficient is negative (the sign is never stored separately).
    """
    coeffs = list(coeffs)
    if not coeffs:
        raise EmptyInput("no coefficients given")
    for c in coeffs:
        if not isinstance(c, int) or isinstance(c, bool):
            raise ValidationError(f"coefficient {c!r} is not an integer")
    if coeffs[-1] == 0:
        raise ZeroLeadingCoefficient("leading coefficient must be nonzero")
    if len(coeffs) == 1:
        raise ConstantPolynomial("degree must be at least 1")
    c = _content(coeffs)
    coeffs = [x // c for x in coeffs]
    if coeffs[-1] < 0:
        coeffs = [-x for x in coeffs]
    return IntPolynomial(tuple(coeffs))


@dataclass(frozen=True)
class ComplexInterval:
    """Certified enclosure: the true root lies within `radius` of `center`."""

    center: complex
    radius: float

    @property
    def re(self) -> float:
        return self.center.real

    @property
    def im(self) -> float:
        return self.center.imag

    def modulus_bounds(self) -> tuple[float, float]:
        m = abs(self.center)
        return max(0.0, m - self.radius), m + self.radius


@dataclass(frozen=True)
class StructuralFlags:
    is_unit: bool
    is_pisot: bool
    is_salem: bool


@dataclass(frozen=True)
class RootClassification:
    tags: tuple[RootClass, ...]
    k_on_circle: int
    roots: tuple[ComplexInterval, ...]
    is_real: tuple[bool, ...]


@dataclass(frozen=True)
class AlgebraicContext:
    """A polynomial together with isolated, classified roots and flags.

    The Mahler interval rigorously contains |a_r| * prod of the moduli of the
    roots outside the unit circle.  `reducibility_warning` is set when a
    rational root or a proper reciprocal factor proves the polynomial
    reducible; all quantities remain well defined per polynomial.
    """

    poly: IntPolynomial
    roots: tuple[ComplexInterval, ...]
    classification: tuple[RootClass, ...]
    is_real: tuple[bool, ...]
    k_on_circle: int
    mahler: tuple[float, float]
    is_unit: bool
    is_pisot: bool
    is_salem: bool
    has_root_on_circle: bool
    reducibility_warning: bool

    @property
    def degree(self) -> int:
        return self.poly.degree

    def roots_with_class(self, tag: RootClass):
        return [(i, r) for i, (r, t) in
                enumerate(zip(self.roots, self.classification)) if t is tag]


@dataclass(frozen=True)
class FieldElement:
    """Canonical residue mod the defining polynomial: rational coefficients
    of the remainder, degree < r.  Equality and hashing are exact (Fractions
    normalize numerator/denominator)."""

    residue: tuple[Fraction, ...]

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.residue)

    def __repr__(self) -> str:
        return "FieldElement(" + ", ".join(str(c) for c in self.residue) + ")"


# ---------------------------------------------------------------------------
# Sturm chain: exact real-root counting
# ---------------------------------------------------------------------------

def _sturm_chain(coeffs):
    def frac_rem(a, b):
        a = list(a)
        db = len(b) - 1
        inv = Fraction(1, 1) / b[-1]
        while a and len(a) - 1 >= db:
            da = len(a) - 1
            q = a[-1] * inv
            for i in range(db + 1):
                a[da - db + i] -= q * b[i]
            while a and a[-1] == 0:
                a.pop()
        return a

    p0 = [Fraction(c) for c in coeffs]
    p1 = [Fraction(c) for c in _derivative(coeffs)]
    chain = [p0, p1]
    while chain[-1]:
        rem = frac_rem(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])
    return chain


def _variations_at(chain, x):
    """Sign variations of the chain at x; x may be +-math.inf."""
    signs = []
    for p in chain:
        if not p:
            continue
        if x == math.inf:
            s = 1 if p[-1] > 0 else -1
        elif x == -math.inf:
            s = (1 if p[-1] > 0 else -1) * (1 if (len(p) - 1) % 2 == 0 else -1)
        else:
            v = Fraction(0)
            for c in reversed(p):
                v = v * x + c
            if v == 0:
                continue
            s = 1 if v > 0 else -1
        signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(poly: IntPolynomial, lo=None, hi=None) -> int:
    """Exact count of distinct real roots in the open interval (lo, hi).

    Endpoints are Fractions or None for the corresponding infinity.  The
    polynomial must be squarefree.
    """
    chain = _sturm_chain(poly.coeffs)
    a = -math.inf if lo is None else Fraction(lo)
    b = math.inf if hi is None else Fraction(hi)
    n = _variations_at(chain, a) - _variations_at(chain, b)
    # Sturm counts roots in (a, b]; drop an exact root at b.
    if b != math.inf and poly.eval_fraction(b) == 0:
        n -= 1
    return n


# ---------------------------------------------------------------------------
# root isolation
# ---------------------------------------------------------------------------

def is_squarefree(poly: IntPolynomial) -> bool:
    g = int_poly_gcd(list(poly.coeffs), poly.derivative_coeffs())
    return len(g) == 1


def _aberth_once(coeffs, n, dps, z0=None, max_iter=400):
    """One Aberth-Ehrlich run at the given precision, seeded with z0 if given.

    Returns approximations only; certification happens separately.
    """
    d = coeffs
    dd = _derivative(coeffs)
    tol = mp.mpf(10) ** (-dps + 6)
    if z0 is None:
        # points on a circle of the coefficient-based radius, with an angular
        # offset and a slight spiral to break the symmetry of reciprocal
        # and even polynomials
        lead = abs(d[-1])
        upper = 1 + max(abs(c) for c in d[:-1]) / lead
        base = max(mp.mpf(abs(d[0])) / lead, mp.mpf(1) / upper) ** (mp.mpf(1) / n)
        rad = (base + upper) / 2
        z = [rad * (1 + mp.mpf(k) / (20 * n)) *
             mp.expjpi(2 * mp.mpf(k) / n + mp.mpf("0.3"))
             for k in range(n)]
    else:
        z = list(z0)
    for _ in range(max_iter):
        moved = mp.mpf(0)
        for j in range(n):
            pj = _eval_mpc(d, z[j])
            dpj = _eval_mpc(dd, z[j])
            if pj == 0:
                continue
            if dpj == 0:
                z[j] += mp.mpf(10) ** (-dps // 3)
                moved = max(moved, abs(z[j]))
                continue
            w = pj / dpj
            s = mp.mpc(0)
            for k in range(n):
                if k != j:
                    diff = z[j] - z[k]
                    if diff == 0:
                        diff = mp.mpf(10) ** (-dps)
                    s += 1 / diff
            corr = w / (1 - w * s)
            z[j] -= corr
            moved = max(moved, abs(corr))
        if moved < tol:
            break
    return z


def _enclosures_from_approx(coeffs, zs):
    """Certified (center, radius) pairs via the partial-fraction bound,
    or None when the resulting disks are not pairwise disjoint."""
    n = len(coeffs) - 1
    dd = _derivative(coeffs)
    # crude but safe inflation for evaluation rounding at working precision
    eps = mp.mpf(2) ** (-mp.mp.prec + 6) * (n + 1)
    out = []
    for z in zs:
        pz = _eval_mpc(coeffs, z)
        dpz = _eval_mpc(dd, z)
        scale = mp.fsum(abs(c) * max(1, abs(z)) ** i for i, c in enumerate(coeffs))
        err = eps * scale
        denom = abs(dpz) - eps * scale * n
        if denom <= 0:
            return None
        rho = n * (abs(pz) + err) / denom
        out.append((z, rho))
    for i in range(n):
        for j in range(i + 1, n):
            if abs(out[i][0] - out[j][0]) <= out[i][1] + out[j][1]:
                return None
    return out


def _isolate_mp(poly: IntPolynomial, target_radius, max_dps=1200):
    """Certified root enclosures as (mpc, mpf) pairs at working precision."""
    coeffs = list(poly.coeffs)
    n = poly.degree
    dps = max(30, int(-math.log10(target_radius)) + 15)
    seed = None
    while dps <= max_dps:
        with mp.workdps(dps):
            zs = _aberth_once(coeffs, n, dps, z0=seed)
            enc = _enclosures_from_approx(coeffs, zs)
            if enc is not None and all(r < target_radius for _, r in enc):
                return enc, dps
            seed = zs
        dps *= 2
    raise PrecisionExhausted(
        f"could not isolate roots of {poly} to radius {target_radius}")


def _to_interval(center, rho) -> ComplexInterval:
    c = complex(center)
    conv = abs(complex(center) - center) if not isinstance(center, complex) else 0
    rad = float(rho + conv) + _FLOAT_EPS * abs(c)
    return ComplexInterval(c, rad)


def isolate_roots(poly: IntPolynomial,
                  target_radius: float = DEFAULT_TARGET_RADIUS) -> list[ComplexInterval]:
    """Isolate all roots into pairwise disjoint certified disks.

    Radii are at most target_radius plus the float conversion slack.  The
    polynomial must be squarefree (gcd with its derivative trivial).
    """
    if not is_squarefree(poly):
        raise NotSquarefree(f"{poly} has a repeated root")
    if poly.degree == 1:
        a0, a1 = poly.coeffs
        root = Fraction(-a0, a1)
        center = float(root)
        rad = float(abs(root - Fraction(center)))
        return [ComplexInterval(complex(center), rad)]
    enc, _ = _isolate_mp(poly, target_radius)
    with mp.workdps(30):
        out = [_to_interval(z, r) for z, r in enc]
    out.sort(key=lambda iv: (iv.re, iv.im))
    return out


def _refine_seed(poly: IntPolynomial, seed, seed_radius, dps: int):
    """Newton-polish a root approximation to working precision dps.

    Returns (mpc center, mpf radius) certified by the partial-fraction bound
    at the higher precision.  `seed` must lie in the basin of a simple root;
    the polished center is required to stay within the seeded disk.
    """
    coeffs = list(poly.coeffs)
    n = poly.degree
    with mp.workdps(dps + 10):
        if n == 1:
            z = mp.mpf(-coeffs[0]) / coeffs[1]
            return mp.mpc(z), mp.mpf(10) ** (-dps - 5)
        dd = _derivative(coeffs)
        z = mp.mpc(seed)
        for _ in range(int(math.log2(max(dps, 16))) + 8):
            pz = _eval_mpc(coeffs, z)
            dpz = _eval_mpc(dd, z)
            if dpz == 0:
                break
            step = pz / dpz
            z = z - step
            if abs(step) < mp.mpf(10) ** (-dps - 5):
                break
        pz = _eval_mpc(coeffs, z)
        dpz = _eval_mpc(dd, z)
        if dpz == 0:
            raise PrecisionExhausted("derivative vanished during refinement")
        rho = n * abs(pz) / abs(dpz) * (1 + mp.mpf(10) ** -8) + mp.mpf(10) ** (-dps - 5)
        if seed_radius and abs(z - mp.mpc(seed)) > 2 * seed_radius + rho:
            raise PrecisionExhausted("refinement left the certified disk")
        return z, rho


def refine_enclosure(poly: IntPolynomial, iv: ComplexInterval, dps: int):
    """Certified (mpc center, mpf radius) at working precision dps, seeded
    from a float enclosure.  Used wherever root values feed long products or
    support-point evaluations."""
    return _refine_seed(poly, iv.center, iv.radius, dps)


# ---------------------------------------------------------------------------
# classification: inside / on-circle / outside, realness
# ---------------------------------------------------------------------------

def _reciprocal_factor(poly: IntPolynomial):
    return int_poly_gcd(list(poly.coeffs), list(reversed(poly.coeffs)))


def _match_factor_roots(factor_coeffs, enc) -> set[int] | None:
    """Indices of the enclosures in `enc` that hold a root of the factor.

    Each factor root lies in exactly one of the (disjoint) enclosures; the
    match is certified only when every factor-root disk meets exactly one
    enclosure.  Returns None when the factor disks are too coarse.
    """
    fpoly = IntPolynomial(tuple(factor_coeffs))
    fenc, _ = _isolate_mp(fpoly, 1e-20)
    matched: set[int] = set()
    for fz, fr in fenc:
        hits = [k for k, (zk, rk) in enumerate(enc)
                if abs(zk - fz) <= rk + fr]
        if len(hits) != 1 or hits[0] in matched:
            return None
        matched.add(hits[0])
    return matched


def classify_roots(poly: IntPolynomial,
                   roots: list[ComplexInterval] | None = None,
                   max_rounds: int = 10) -> RootClassification:
    """Tag every root Inside/OnCircle/Outside and settle realness.

    The on-circle decision is exact, never by tolerance: circle roots must be
    roots of gcd(p, x^r p(1/x)), and for those the map z -> 1/conj(z)
    permutes the roots, so an enclosure straddling |z| = 1 is tagged OnCircle
    only if its certified image disk meets its own enclosure and no other.
    Realness is matched against an exact Sturm count.
    """
    if roots is None:
        roots = isolate_roots(poly)
    n = poly.degree
    if n == 1:
        # rational root: everything is decided by exact comparison
        q = Fraction(-poly.constant, poly.leading)
        if abs(q) < 1:
            tag = RootClass.INSIDE
        elif abs(q) > 1:
            tag = RootClass.OUTSIDE
        else:
            tag = RootClass.ON_CIRCLE
        return RootClassification((tag,), int(tag is RootClass.ON_CIRCLE),
                                  (roots[0],), (True,))
    n_real = count_real_roots(poly)
    recip = _reciprocal_factor(poly)
    recip_deg = len(recip) - 1 if recip else 0
    recip_indices: set[int] | None = None  # resolved lazily, kept across rounds
    dps = 40
    enc = [(mp.mpc(iv.center), mp.mpf(iv.radius)) for iv in roots]
    for _ in range(max_rounds):
        with mp.workdps(dps):
            straddlers = [j for j, (z, r) in enumerate(enc)
                          if abs(z) - r <= 1 <= abs(z) + r]
            if recip_deg > 0 and straddlers and recip_indices is None:
                if recip_deg == n:
                    recip_indices = set(range(n))
                else:
                    recip_indices = _match_factor_roots(recip, enc)
            tags: list[RootClass | None] = [None] * n
            ok = True
            for j, (z, r) in enumerate(enc):
                lo, hi = abs(z) - r, abs(z) + r
                if hi < 1:
                    tags[j] = RootClass.INSIDE
                elif lo > 1:
                    tags[j] = RootClass.OUTSIDE
                elif recip_deg == 0 or recip_indices is None \
                        or j not in recip_indices or lo <= 0:
                    ok = False  # certified off the circle or unresolved: refine
                else:
                    # fixed-point test for z -> 1/conj(z) on the factor roots
                    w = 1 / mp.conj(z)
                    wr = r / (abs(z) * lo)
                    hits = [k for k, (zk, rk) in enumerate(enc)
                            if abs(zk - w) <= rk + wr]
                    if hits == [j]:
                        tags[j] = RootClass.ON_CIRCLE
                    else:
                        ok = False  # maps to a different root, or too coarse
            axis = [j for j, (z, r) in enumerate(enc) if abs(mp.im(z)) <= r]
            if len(axis) != n_real:
                ok = False
            if ok and all(t is not None for t in tags):
                k = sum(1 for t in tags if t is RootClass.ON_CIRCLE)
                is_real = tuple(j in axis for j in range(n))
                ivs = []
                for j, (z, r) in enumerate(enc):
                    if is_real[j]:
                        # snap certified-real roots onto the axis
                        iv = _to_interval(mp.mpc(mp.re(z)), r + abs(mp.im(z)))
                    else:
                        iv = _to_interval(z, r)
                    ivs.append(iv)
                return RootClassification(tuple(tags), k, tuple(ivs), is_real)
            enc = [_refine_seed(poly, z, r, dps * 2) for z, r in enc]
        dps *= 2
    raise AmbiguousCircleRoot(
        f"classification of {poly} unresolved at dps={dps}")


def mahler_measure(ctx: AlgebraicContext) -> tuple[float, float]:
    """Interval rigorously containing |a_r| * prod over outside roots of |root|.

    Endpoints are rounded outward; with no outside roots the measure is
    |a_r| exactly and the interval has zero width.
    """
    outside = ctx.roots_with_class(RootClass.OUTSIDE)
    if not outside:
        m = float(abs(ctx.poly.leading))
        return m, m
    with mp.workdps(40):
        lo = hi = mp.mpf(abs(ctx.poly.leading))
        for _, iv in outside:
            c, r = mp.mpc(iv.center), mp.mpf(iv.radius)
            lo *= abs(c) - r
            hi *= abs(c) + r
        lo_f, hi_f = float(lo), float(hi)
        if mp.mpf(lo_f) > lo:
            lo_f = math.nextafter(lo_f, -math.inf)
        if mp.mpf(hi_f) < hi:
            hi_f = math.nextafter(hi_f, math.inf)
    return max(1.0, lo_f), max(1.0, hi_f)


def structural_flags(poly: IntPolynomial,
                     classification: RootClassification) -> StructuralFlags:
    """Unit / Pisot / Salem predicates from exact coefficients and the
    certified classification.

    Pisot: monic, a single conjugate outside the unit circle, real and
    positive, everything else strictly inside.  Salem: monic, reciprocal,
    exactly one real root > 1 and one in (0, 1), all others on the circle.
    """
    is_unit = abs(poly.constant) == 1 and abs(poly.leading) == 1
    tags, roots, is_real = (classification.tags, classification.roots,
                            classification.is_real)
    outside = [i for i, t in enumerate(tags) if t is RootClass.OUTSIDE]
    inside = [i for i, t in enumerate(tags) if t is RootClass.INSIDE]

    is_pisot = (
        poly.is_monic
        and len(outside) == 1
        and is_real[outside[0]]
        and roots[outside[0]].re > 0
        and classification.k_on_circle == 0
    )
    real_out = [i for i in outside if is_real[i] and roots[i].re > 0]
    real_in_01 = [i for i in inside
                  if is_real[i] and roots[i].re - roots[i].radius > 0]
    is_salem = (
        poly.is_monic
        and poly.is_reciprocal
        and len(outside) == 1
        and len(real_out) == 1
        and len(inside) == 1
        and len(real_in_01) == 1
        and classification.k_on_circle == poly.degree - 2
        and classification.k_on_circle >= 1
    )
    return StructuralFlags(is_unit=is_unit, is_pisot=is_pisot, is_salem=is_salem)


def _reducibility_warning(poly: IntPolynomial, recip_deg: int) -> bool:
    """Cheap reducibility witnesses: a proper reciprocal factor, or a
    rational root (divisor scan skipped when the coefficients are huge)."""
    if 0 < recip_deg < poly.degree:
        return True
    a0, ar = abs(poly.constant), abs(poly.leading)
    if poly.degree >= 2 and a0 != 0:
        def divisors(v, cap=4096):
            out = []
            d = 1
            while d * d <= v and len(out) < cap:
                if v % d == 0:
                    out.append(d)
                    out.append(v // d)
                d += 1
            return out if d * d > v else None

        ps = divisors(a0)
        qs = divisors(ar)
        if ps is not None and qs is not None and len(ps) * len(qs) <= 20000:
            for p in ps:
                for q in qs:
                    for s in (1, -1):
                        if poly.eval_fraction(Fraction(s * p, q)) == 0:
                            return True
    return False


def algebraic_context(poly: IntPolynomial,
                      target_radius: float = DEFAULT_TARGET_RADIUS,
                      mahler_width: float = DEFAULT_MAHLER_WIDTH) -> AlgebraicContext:
    """Isolate, classify and flag; the one-stop constructor used by the CLI."""
    import dataclasses

    radius = target_radius
    for _ in range(4):
        roots = isolate_roots(poly, radius)
        cls = classify_roots(poly, roots)
        flags = structural_flags(poly, cls)
        recip = _reciprocal_factor(poly)
        ctx = AlgebraicContext(
            poly=poly,
            roots=cls.roots,
            classification=cls.tags,
            is_real=cls.is_real,
            k_on_circle=cls.k_on_circle,
            mahler=(0.0, 0.0),
            is_unit=flags.is_unit,
            is_pisot=flags.is_pisot,
            is_salem=flags.is_salem,
            has_root_on_circle=cls.k_on_circle > 0,
            reducibility_warning=_reducibility_warning(
                poly, len(recip) - 1 if recip else 0),
        )
        lo, hi = mahler_measure(ctx)
        if hi - lo <= mahler_width:
            return dataclasses.replace(ctx, mahler=(lo, hi))
        radius /= 1000
    raise PrecisionExhausted(
        f"Mahler interval width above {mahler_width} for {poly}")


def context_from_coeffs(coeffs, **kwargs) -> AlgebraicContext:
    return algebraic_context(parse_polynomial(coeffs), **kwargs)


# ---------------------------------------------------------------------------
# field arithmetic mod the defining polynomial
# ---------------------------------------------------------------------------

def reduce_mod(poly: IntPolynomial, value) -> FieldElement:
    """Canonical remainder of a rational-coefficient polynomial mod poly.

    `value` is an ascending coefficient sequence (ints, Fractions or strings
    accepted).  Exact arithmetic throughout; result has degree < r.
    """
    r = poly.degree
    v = [Fraction(c) for c in value]
    while v and v[-1] == 0:
        v.pop()
    lead = Fraction(poly.leading)
    divisor = [Fraction(c) for c in poly.coeffs]
    while len(v) - 1 >= r:
        d = len(v) - 1
        q = v[-1] / lead
        for i in range(r + 1):
            v[d - r + i] -= q * divisor[i]
        while v and v[-1] == 0:
            v.pop()
    v = v + [Fraction(0)] * (r - len(v))
    return FieldElement(tuple(v))


def field_zero(poly: IntPolynomial) -> FieldElement:
    return FieldElement((Fraction(0),) * poly.degree)


def power_sums(poly: IntPolynomial, n_max: int) -> list[Fraction]:
    """Power sums s_j = sum of root^j for j = 0..n_max, by Newton's identities.

    Exact over the rationals; for a monic polynomial every s_j is an integer.
    Non-monic polynomials are handled through the elementary symmetric
    functions e_i = (-1)^i a_{r-i} / a_r, which is the scaled-roots transform
    made implicit.
    """
    r = poly.degree
    lead = Fraction(poly.leading)
    e = [Fraction(0)] * (r + 1)
    e[0] = Fraction(1)
    for i in range(1, r + 1):
        e[i] = Fraction((-1) ** i) * Fraction(poly.coeffs[r - i]) / lead
    s: list[Fraction] = [Fraction(r)]
    for k in range(1, n_max + 1):
        acc = Fraction(0)
        for i in range(1, min(k, r) + 1):
            acc += Fraction((-1) ** (i - 1)) * e[i] * (s[k - i] if k - i > 0 else Fraction(0))
        if k <= r:
            acc += Fraction((-1) ** (k - 1)) * Fraction(k) * e[k]
        s.append(acc)
    return s

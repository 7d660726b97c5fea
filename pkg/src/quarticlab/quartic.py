"""Monic integer quartic analysis: irreducibility, discriminant, the two
cubic resolvents, Galois classification, canonical root ordering with
r1r2+r3r4 rational, and the derived sieve constants q0 and D_q2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Optional, Tuple

from .errors import (
    ImpossibleForIrreducible,
    NotIrreducible,
    PrecisionExhausted,
    WrongGaloisClass,
)
from .exactalg import ComplexBall, MultiPoly, certified_roots, discriminant

_PAIRINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


def divisors(n: int):
    n = abs(n)
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


def is_rational_square(q) -> bool:
    q = Fraction(q)
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    return rn * rn == n and rd * rd == d


def integer_roots_monic(coeffs) -> list:
    """All integer roots (with multiplicity) of a monic integer polynomial,
    given low-to-high coefficients."""
    cs = list(coeffs)
    roots = []
    while len(cs) > 1 and cs[0] == 0:
        roots.append(0)
        cs = cs[1:]
    if len(cs) <= 1:
        return roots
    cands = set()
    for d in divisors(cs[0]):
        cands.update((d, -d))
    for r in sorted(cands):
        while True:
            val = 0
            for c in reversed(cs):
                val = val * r + c
            if val == 0 and len(cs) > 1:
                # deflate
                out = [0] * (len(cs) - 1)
                carry = cs[-1]
                for i in range(len(cs) - 2, -1, -1):
                    out[i] = carry
                    carry = cs[i] + carry * r
                cs = out
                roots.append(r)
            else:
                break
    return roots


def is_irreducible_quartic(c0: int, c1: int, c2: int, c3: int) -> bool:
    """Exhaustive rational-root and integer quadratic-factor test."""
    if integer_roots_monic([c0, c1, c2, c3, 1]):
        return False
    if c0 == 0:
        return False
    for b in divisors(c0):
        for bb in (b, -b):
            if c0 % bb:
                continue
            d = c0 // bb
            s = c3
            pr = c2 - bb - d
            disc = s * s - 4 * pr
            if disc < 0:
                continue
            r = isqrt(disc)
            if r * r != disc or (s - r) % 2:
                continue
            for a in {(s + r) // 2, (s - r) // 2}:
                c = s - a
                if a * d + bb * c == c1:
                    return False
    return True


@dataclass(frozen=True)
class GaloisReport:
    label: str
    resolvent_pairprod: MultiPoly
    pairprod_rational_roots: Tuple[int, ...]
    resolvent_sumprod: MultiPoly
    sumprod_rational_roots: Tuple[int, ...]
    disc_is_square: bool

    def to_dict(self):
        from .exactalg import poly_to_csv

        return {
            "class": self.label,
            "resolvent_pairprod": poly_to_csv(self.resolvent_pairprod),
            "pairprod_rational_roots": list(self.pairprod_rational_roots),
            "resolvent_sumprod": poly_to_csv(self.resolvent_sumprod),
            "sumprod_rational_roots": list(self.sumprod_rational_roots),
            "disc_is_square": self.disc_is_square,
        }


@dataclass(frozen=True)
class QuarticPoly:
    """Monic irreducible X^4 + c3 X^3 + c2 X^2 + c1 X + c0 with derived data.

    For Galois class C4/D4 the roots tuple is ordered so that
    r1r2 + r3r4 = t1 and (r1+r2)(r3+r4) = t2 exactly.
    """

    c0: int
    c1: int
    c2: int
    c3: int
    disc: int
    galois: str
    roots: Tuple[ComplexBall, ...]
    t1: Optional[int]
    t2: Optional[int]

    @property
    def coeffs(self):
        return (self.c0, self.c1, self.c2, self.c3)

    def poly(self, var: str = "x") -> MultiPoly:
        return MultiPoly.from_coeffs([self.c0, self.c1, self.c2, self.c3, 1], var)

    @staticmethod
    def analyze(c0: int, c1: int, c2: int, c3: int, precision_bits: int = 160) -> "QuarticPoly":
        if not is_irreducible_quartic(c0, c1, c2, c3):
            raise NotIrreducible(f"X^4+{c3}X^3+{c2}X^2+{c1}X+{c0} is reducible over Q")
        P = MultiPoly.from_coeffs([c0, c1, c2, c3, 1], "x")
        disc = int(discriminant(P))
        report = _classify(c0, c1, c2, c3, disc)
        if report.label in ("C4", "D4"):
            roots, t1, t2 = _order_roots(c0, c1, c2, c3, report, precision_bits)
        else:
            roots = tuple(
                sorted(certified_roots(P, precision_bits), key=lambda b: (b.re, b.im))
            )
            t1 = t2 = None
        return QuarticPoly(c0, c1, c2, c3, disc, report.label, roots, t1, t2)

    def galois_report(self) -> GaloisReport:
        return _classify(self.c0, self.c1, self.c2, self.c3, self.disc)

    def label(self) -> str:
        cs = []
        for c, mono in ((self.c3, "X^3"), (self.c2, "X^2"), (self.c1, "X"), (self.c0, "")):
            if c:
                sign = "+" if c > 0 else "-"
                mag = abs(c)
                coef = "" if (mag == 1 and mono) else str(mag)
                cs.append(f"{sign}{coef}{mono}")
        return "X^4" + "".join(cs)


def resolvent_pairprod(c0: int, c1: int, c2: int, c3: int) -> MultiPoly:
    """Cubic with roots r_i r_j + r_k r_l over the three pairings."""
    return MultiPoly.from_coeffs(
        [-(c3 * c3 * c0 + c1 * c1 - 4 * c2 * c0), c3 * c1 - 4 * c0, -c2, 1], "x"
    )


def resolvent_sumprod(c0: int, c1: int, c2: int, c3: int) -> MultiPoly:
    """Cubic with roots (r_i + r_j)(r_k + r_l) over the three pairings."""
    return MultiPoly.from_coeffs(
        [c3 * c3 * c0 + c1 * c1 - c3 * c2 * c1, c2 * c2 + c3 * c1 - 4 * c0, -2 * c2, 1],
        "x",
    )


def _classify(c0, c1, c2, c3, disc) -> GaloisReport:
    r3 = resolvent_pairprod(c0, c1, c2, c3)
    rs = resolvent_sumprod(c0, c1, c2, c3)
    from .exactalg import uni_coeffs

    pp_roots = tuple(sorted(set(integer_roots_monic(uni_coeffs(r3, "x")))))
    sp_roots = tuple(sorted(set(integer_roots_monic(uni_coeffs(rs, "x")))))
    disc_sq = is_rational_square(disc)
    k = len(pp_roots)
    if k == 0:
        label = "A4" if disc_sq else "S4"
    elif k == 3:
        label = "V"
    else:
        t = pp_roots[0]
        d1 = c3 * c3 - 4 * (c2 - t)
        d2 = t * t - 4 * c0
        if _square_in_quad(d1, disc) and _square_in_quad(d2, disc):
            label = "C4"
        else:
            label = "D4"
    return GaloisReport(label, r3, pp_roots, rs, sp_roots, disc_sq)


def _square_in_quad(d: int, disc: int) -> bool:
    """d is a square in Q(sqrt(disc)): d = 0, or d or d*disc a rational square."""
    return d == 0 or is_rational_square(d) or is_rational_square(d * disc)


def classify_galois(c0: int, c1: int, c2: int, c3: int) -> GaloisReport:
    if not is_irreducible_quartic(c0, c1, c2, c3):
        raise NotIrreducible("classification requires an irreducible quartic")
    P = MultiPoly.from_coeffs([c0, c1, c2, c3, 1], "x")
    return _classify(c0, c1, c2, c3, int(discriminant(P)))


def _order_roots(c0, c1, c2, c3, report: GaloisReport, precision_bits: int):
    if report.label not in ("C4", "D4"):
        raise WrongGaloisClass(report.label)
    t1 = report.pairprod_rational_roots[0]
    # the sum-product resolvent has a unique rational root t2 for C4/D4,
    # and it belongs to the same partition of the roots
    t2_candidates = report.sumprod_rational_roots
    P = MultiPoly.from_coeffs([c0, c1, c2, c3, 1], "x")
    prec = precision_bits
    while prec <= 16384:
        balls = certified_roots(P, prec)
        hits = []
        for pa, pb in _PAIRINGS:
            val = balls[pa[0]] * balls[pa[1]] + balls[pb[0]] * balls[pb[1]]
            if val.contains_real(t1):
                hits.append((pa, pb))
        if len(hits) == 1:
            (pa, pb) = hits[0]
            sums = (balls[pa[0]] + balls[pa[1]]) * (balls[pb[0]] + balls[pb[1]])
            t2_hits = [t for t in t2_candidates if sums.contains_real(t)]
            if len(t2_hits) == 1:
                t2 = t2_hits[0]
                if t1 + t2 != c2:
                    raise ImpossibleForIrreducible(
                        f"t1+t2 = {t1 + t2} != c2 = {c2}: resolvent inconsistency"
                    )
                pair_a = sorted((balls[pa[0]], balls[pa[1]]), key=lambda b: (b.re, b.im))
                pair_b = sorted((balls[pb[0]], balls[pb[1]]), key=lambda b: (b.re, b.im))
                if (pair_b[0].re, pair_b[0].im) < (pair_a[0].re, pair_a[0].im):
                    pair_a, pair_b = pair_b, pair_a
                ordered = (pair_a[0], pair_a[1], pair_b[0], pair_b[1])
                return ordered, t1, t2
        prec *= 2
    raise PrecisionExhausted("could not certify the canonical root pairing")


def order_roots(P: QuarticPoly):
    """Canonically ordered roots plus (t1, t2) for a C4/D4 quartic."""
    if P.galois not in ("C4", "D4"):
        raise WrongGaloisClass(P.galois)
    return P.roots, P.t1, P.t2


def _lcm(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    if a == 0 or b == 0:
        return max(a, b)
    return a // gcd(a, b) * b


def pairing_quadratics(P: QuarticPoly):
    """P1 = (X-(r1+r2))(X-(r3+r4)) and P2 = (X - (r1^2+r1r2+r2^2))(X - ...),
    both with exact integer coefficients from symmetric functions."""
    if P.galois not in ("C4", "D4"):
        raise WrongGaloisClass(P.galois)
    t1, t2, c = P.t1, P.t2, P
    x = MultiPoly.var("x")
    p1 = x**2 + c.c3 * x + t2
    n_sum = c.c3 * c.c3 - 2 * t2 - t1
    n_prod = t2 * t2 + t1 * t2 - c.c1 * c.c3 + c.c0
    p2 = x**2 - n_sum * x + n_prod
    return p1, p2


def derived_constants(P: QuarticPoly, delta_P: Optional[int] = None):
    """(q0, Dq2, Delta1, Delta2).

    delta_P (splitting-field discriminant) defaults to Disc(P)^2, a multiple
    of every bad prime; the resulting q0 is an upper version ("q0_upper").
    """
    if P.galois not in ("C4", "D4"):
        raise WrongGaloisClass(P.galois)
    p1, p2 = pairing_quadratics(P)
    d1 = int(discriminant(p1))
    d2 = int(discriminant(p2))
    if d1 == 0 and d2 == 0:
        raise ImpossibleForIrreducible("Delta1 = Delta2 = 0 cannot happen")
    if d1 * d2 != 0:
        dq2 = _lcm(_lcm(8, d1), d2)
    else:
        dq2 = _lcm(8, d1 + d2)
    if delta_P is None:
        delta_P = P.disc * P.disc
    q0 = 512 * (1 + P.c3**2 + abs(P.c2) + abs(P.t1) + abs(P.t2)) * abs(delta_P) * abs(P.disc)
    return q0, dq2, d1, d2

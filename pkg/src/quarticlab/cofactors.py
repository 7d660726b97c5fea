"""Multiplication-by-alpha matrix, norm form, cofactors B_ij, the auxiliary
forms q3, R, R0, q, the Bezout pair (U, V), and the residue k_alpha.

Everything is computed from first principles (determinants, cofactor
expansion, Sylvester resultants, exact division) and the full identity
battery is checked exactly before a suite is returned.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from .errors import (
    BezoutFailure,
    IdentityViolation,
    InternalIdentityViolation,
    NotCoprime,
)
from .exactalg import ComplexBall, MultiPoly, divexact, resultant
from .quartic import QuarticPoly

AVARS = ("a0", "a1", "a2", "a3")


def _avar(i: int) -> MultiPoly:
    return MultiPoly.var(AVARS[i])


def mult_matrix(P, symbolic: bool = False):
    """4x4 matrix of multiplication by alpha = a0+a1r+a2r^2+a3r^3 in the
    basis {1, r, r^2, r^3}; entries linear in a0..a3.

    With symbolic=True the quartic's coefficients stay as variables c0..c3.
    """
    if symbolic:
        cs = [MultiPoly.var(f"c{i}") for i in range(4)]
    else:
        cs = [MultiPoly.const(c, ()) for c in P.coeffs]
    col = [_avar(i) for i in range(4)]
    cols = [col]
    for _ in range(3):
        v0, v1, v2, v3 = col
        col = [-cs[0] * v3, v0 - cs[1] * v3, v1 - cs[2] * v3, v2 - cs[3] * v3]
        cols.append(col)
    return [[cols[j][i] for j in range(4)] for i in range(4)]


def _det(rows) -> MultiPoly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    out = MultiPoly.const(0, rows[0][0].variables)
    for j in range(n):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = rows[0][j] * _det(minor)
        out = out + (term if j % 2 == 0 else -term)
    return out


def norm_form(P, symbolic: bool = False) -> MultiPoly:
    """N_P(alpha) = det M_alpha: quartic form in a0..a3."""
    return _det(mult_matrix(P, symbolic))


def cofactor_array(M):
    """B[i][j] = (-1)^(i+j) * minor(i, j); transpose(B) @ M = det(M) * I."""
    B = []
    for i in range(4):
        row = []
        for j in range(4):
            minor = [
                [M[a][b] for b in range(4) if b != j] for a in range(4) if a != i
            ]
            d = _det(minor)
            row.append(d if (i + j) % 2 == 0 else -d)
        B.append(row)
    return B


@dataclass(frozen=True)
class CofactorSuite:
    P: QuarticPoly
    NP: MultiPoly
    B: Tuple[Tuple[MultiPoly, ...], ...]
    q3: MultiPoly
    R: MultiPoly
    R0: MultiPoly
    q: MultiPoly
    U: MultiPoly
    V: MultiPoly
    tP: Fraction

    @property
    def B13(self):
        return self.B[0][2]

    @property
    def B14(self):
        return self.B[0][3]

    @property
    def B23(self):
        return self.B[1][2]

    @property
    def B24(self):
        return self.B[1][3]

    def eval_form(self, form: MultiPoly, a: Sequence[int]):
        names = form.variables
        env = {}
        for v in names:
            if v in AVARS:
                env[v] = a[AVARS.index(v)]
            else:
                raise ValueError(f"unbound variable {v}")
        return form.evaluate(env)


def q3_printed(P) -> MultiPoly:
    """The closed form a2^2 - a1a3 - c3 a2a3 + c2 a3^2."""
    a1, a2, a3 = _avar(1), _avar(2), _avar(3)
    return a2 * a2 - a1 * a3 - P.c3 * a2 * a3 + P.c2 * a3 * a3


def _raw_suite(P: QuarticPoly):
    M = mult_matrix(P)
    NP = _det(M)
    B = cofactor_array(M)
    B13, B14, B23, B24 = B[0][2], B[0][3], B[1][2], B[1][3]
    from .exactalg import drop_zero_vars

    q3 = drop_zero_vars(divexact(B24 * B13 - B14 * B23, NP))
    R = resultant(B14, NP, "a0")
    R0 = resultant(B13, B14, "a0")
    q = drop_zero_vars(divexact(R0, q3))
    U, V = _solve_bezout(P, B13, B14, q * q3)
    return M, NP, B, q3, R, R0, q, U, V


def _monomials(deg: int):
    out = []
    for i in range(deg + 1):
        for j in range(deg + 1 - i):
            out.append((i, j, deg - i - j))
    return out


def _solve_bezout(P, B13, B14, target):
    """U, V with deg_a0 <= 1 and U*B13 + V*B14 = target.

    The a0^3 coefficient equation forces U1 = a3*w, V1 = -a2*w for a cubic
    form w, so the unknowns are w (10 coeffs) plus the quintic forms U0, V0
    (21 each); the system has a unique solution.
    """
    vs = AVARS
    a0 = _avar(0)

    def mono(i, j, k):
        return MultiPoly(("a1", "a2", "a3"), {(i, j, k): 1})

    gens = []
    a2m, a3m = _avar(2), _avar(3)
    for e in _monomials(3):  # w coefficients
        m = mono(*e)
        gens.append(a0 * (a3m * m * B13 - a2m * m * B14))
    m5 = _monomials(5)
    for e in m5:  # U0
        gens.append(mono(*e) * B13)
    for e in m5:  # V0
        gens.append(mono(*e) * B14)

    target_al = target
    support = set()
    cols = []
    for g in gens:
        g, target_al = g, target_al
        ga, ta = _align_many(g, target_al)
        cols.append(ga)
        target_al = ta
        support.update(ga.terms)
    support.update(target_al.terms)
    support = sorted(support)
    idx = {e: i for i, e in enumerate(support)}
    nrows, ncols = len(support), len(cols)
    rows = [[Fraction(0)] * (ncols + 1) for _ in range(nrows)]
    for j, g in enumerate(cols):
        for e, c in g.terms.items():
            rows[idx[e]][j] = Fraction(c)
    for e, c in target_al.terms.items():
        rows[idx[e]][ncols] = Fraction(c)
    sol = _solve_linear(rows, ncols)
    if sol is None:
        raise BezoutFailure("Bezout system has no solution in the expected shape")
    w = MultiPoly(("a1", "a2", "a3"), {})
    U0 = MultiPoly(("a1", "a2", "a3"), {})
    V0 = MultiPoly(("a1", "a2", "a3"), {})
    m3 = _monomials(3)
    for i, e in enumerate(m3):
        w = w + MultiPoly(("a1", "a2", "a3"), {e: sol[i]})
    off = len(m3)
    for i, e in enumerate(m5):
        U0 = U0 + MultiPoly(("a1", "a2", "a3"), {e: sol[off + i]})
    off += len(m5)
    for i, e in enumerate(m5):
        V0 = V0 + MultiPoly(("a1", "a2", "a3"), {e: sol[off + i]})
    U = a0 * (a3m * w) + U0
    V = a0 * (-(a2m * w)) + V0
    return U, V


def _align_many(a, b):
    from .exactalg import _align

    return _align(a, b)


def _solve_linear(rows, ncols):
    """Gaussian elimination; rows are [coeffs..., rhs]. Returns the unique
    solution or None when inconsistent / underdetermined."""
    m = len(rows)
    piv_of_col = [-1] * ncols
    r = 0
    for c in range(ncols):
        p = None
        for i in range(r, m):
            if rows[i][c]:
                p = i
                break
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        piv_of_col[c] = r
        r += 1
    for i in range(r, m):
        if rows[i][ncols]:
            return None
    if any(p < 0 for p in piv_of_col):
        return None
    sol = [rows[piv_of_col[c]][ncols] for c in range(ncols)]
    return sol


def build_suite(P: QuarticPoly) -> CofactorSuite:
    """Compute every suite ingredient and verify the full identity battery
    exactly; raises InternalIdentityViolation naming the first failure."""
    M, NP, B, q3, R, R0, q, U, V = _raw_suite(P)
    for name, ok in _identity_checks(P, M, NP, B, q3, R, R0, q, U, V):
        if not ok:
            raise InternalIdentityViolation(name)
    return CofactorSuite(
        P,
        NP,
        tuple(tuple(r) for r in B),
        q3,
        R,
        R0,
        q,
        U,
        V,
        Fraction(1, P.disc),
    )


def _identity_checks(P, M, NP, B, q3, R, R0, q, U, V):
    zero = MultiPoly.const(0, ("a0", "a1", "a2", "a3"))
    checks = []
    # adjugate identity: transpose(B) @ M = NP * I
    ok = True
    for i in range(4):
        for j in range(4):
            s = zero
            for k in range(4):
                s = s + B[k][i] * M[k][j]
            want = NP if i == j else zero
            if s != want:
                ok = False
    checks.append(("adjugate: B^T M = N_P I", ok))
    c0, c1, c2, c3 = P.coeffs
    checks.append(
        (
            "columns: B21=-c0 B14, B22=B11-c1 B14, B23=B12-c2 B14, B24=B13-c3 B14",
            B[1][0] == -c0 * B[0][3]
            and B[1][1] == B[0][0] - c1 * B[0][3]
            and B[1][2] == B[0][1] - c2 * B[0][3]
            and B[1][3] == B[0][2] - c3 * B[0][3],
        )
    )
    checks.append(
        ("B24*B13 - B14*B23 = q3*N_P", B[1][3] * B[0][2] - B[0][3] * B[1][2] == q3 * NP)
    )
    checks.append(("q3 matches its closed form", q3 == q3_printed(P)))
    checks.append(("q3 has no a0", q3.degree("a0") == 0))
    checks.append(("q3^2 R = R0^2", q3 * q3 * R == R0 * R0))
    checks.append(("R0 = q*q3", R0 == q * q3))
    checks.append(
        ("q homogeneous of degree 6", q.is_homogeneous() and q.total_degree() == 6)
    )
    checks.append(("U*B13 + V*B14 = q*q3", U * B[0][2] + V * B[0][3] == q * q3))
    checks.append(("deg_a0 U <= 1 and deg_a0 V <= 1", U.degree("a0") <= 1 and V.degree("a0") <= 1))
    U1 = U.coeff_of("a0", 1)
    V1 = V.coeff_of("a0", 1)
    a2, a3 = _avar(2), _avar(3)
    from .exactalg import _align

    lhs = _align(a2, U1)[0] * U1 + _align(a3, V1)[0] * V1
    checks.append(("a2*U1 + a3*V1 = 0", lhs.is_zero()))
    nlink = (B[0][2] - c3 * B[0][3]) * B[0][2] - B[0][3] * (B[0][1] - c2 * B[0][3])
    checks.append(("(B13-c3B14)B13 - B14(B12-c2B14) = q3*N_P", nlink == q3 * NP))
    return checks


def identity_report(P: QuarticPoly):
    """All suite identities as (name, passed) pairs, never raising."""
    M, NP, B, q3, R, R0, q, U, V = _raw_suite(P)
    return _identity_checks(P, M, NP, B, q3, R, R0, q, U, V)


def bezout_UV(suite: CofactorSuite):
    return suite.U, suite.V


def k_alpha(suite: CofactorSuite, a: Sequence[int]) -> int:
    """Residue k with: (alpha) | (n - r1)  iff  n = k mod |N_P(a)|.

    Requires gcd(N_P(a), B14(a)) = 1.
    """
    n = suite.eval_form(suite.NP, a)
    if n == 0:
        raise NotCoprime("alpha has norm 0")
    n = abs(int(n))
    if n == 1:
        return 0
    b14 = int(suite.eval_form(suite.B14, a)) % n
    c3 = suite.P.c3
    b24 = int(suite.eval_form(suite.B13, a) - c3 * suite.eval_form(suite.B14, a)) % n
    from math import gcd as _g

    if _g(b14, n) != 1:
        raise NotCoprime(f"gcd(N_P(a), B14(a)) = {_g(b14, n)} != 1")
    return (b24 * pow(b14, -1, n)) % n


def alpha_divides(P: QuarticPoly, a: Sequence[int], n: int) -> bool:
    """Whether (n - r1) lies in the ideal (alpha) of Z[r1]: solve
    (n - r1) = beta*alpha over Q[x]/(P) and test beta's integrality."""
    suite_m = mult_matrix(P)
    # solve M_alpha * beta = (n, -1, 0, 0)
    rows = []
    env = {v: a[i] for i, v in enumerate(AVARS)}
    for i in range(4):
        rows.append([Fraction(suite_m[i][j].evaluate(env)) for j in range(4)])
    rhs = [Fraction(n), Fraction(-1), Fraction(0), Fraction(0)]
    aug = [rows[i] + [rhs[i]] for i in range(4)]
    sol = _solve_linear(aug, 4)
    if sol is None:
        return False
    return all(s.denominator == 1 for s in sol)


def q_product_check(P: QuarticPoly, samples: int = 12, seed: int = 0, band: int = 9):
    """Spot-check Lemma-level factorisations of q and R at seeded integer
    points using certified root balls:

      |q(a)| = prod |a(r_i)-a(r_j)| / |r_i-r_j|   with one global sign,
      R(a) * disc(P) = prod (a(r_i)-a(r_j))^2.
    """
    suite = build_suite(P)
    rng = random.Random(seed)
    pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    sign = 0
    rows = []
    for _ in range(samples):
        a = (rng.randint(-band, band), rng.randint(-band, band), rng.randint(-band, band))
        qv = suite.eval_form(suite.q, (0,) + a)
        rv = suite.eval_form(suite.R, (0,) + a)
        prod = ComplexBall(Fraction(1), Fraction(0), Fraction(0))
        prod_sq = ComplexBall(Fraction(1), Fraction(0), Fraction(0))
        for (i, j) in pairs:
            ri, rj = P.roots[i], P.roots[j]
            lij = a[0] + (ri + rj) * a[1] + (ri * ri + ri * rj + rj * rj) * a[2]
            prod = prod * lij
            diff = lij * (ri - rj)
            prod_sq = prod_sq * (diff * diff)
        ok_q = prod.contains_real(qv) or prod.contains_real(-qv)
        if qv != 0 and prod.radius * 2 < abs(Fraction(qv)):
            s = 1 if prod.contains_real(qv) else -1
            if sign == 0:
                sign = s
            elif sign != s:
                raise IdentityViolation("sign of q vs root product is not constant")
        ok_r = prod_sq.contains_real(rv * P.disc)
        if not (ok_q and ok_r):
            raise IdentityViolation(f"product check failed at a={a}")
        rows.append({"a": list(a), "q": str(qv), "ok": True})
    return {"samples": samples, "seed": seed, "sign": sign, "rows": rows, "pass": True}

"""Finite mod-p and mod-p^k computations: Q_p solution counts, B14 root
counts, the norm/B13 divisibility link, q2 splitting mod p, and the
densities rho_P (root congruence) and rho_v (incomplete norm form).

Every lemma-level claim is paired with brute-force enumeration; reports
carry both values so disagreement is visible, never silently absorbed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple, Union

from .cofactors import CofactorSuite, build_suite, mult_matrix
from .errors import (
    BadModulus,
    BadPrime,
    HypothesisViolation,
    TheoryViolation,
    TooLarge,
)
from .exactalg import (
    MultiPoly,
    clear_denominators,
    content,
    primitive_part,
    resultant,
    uni_coeffs,
)
from .intfact import is_squarefree
from .lattice import hnf_basis, in_row_lattice, lattice_det
from .modarith import is_prime, poly_roots_mod_p, primes_up_to, roots_mod_pk, sqrt_mod
from .normform import NormFieldData, split_q
from .quartic import QuarticPoly, derived_constants


@dataclass(frozen=True)
class PrimeLocalReport:
    p: int
    predicate_value: Union[bool, int]
    brute_force_value: int
    agree: bool

    def to_dict(self):
        return {
            "p": self.p,
            "predicate": self.predicate_value,
            "brute_force": self.brute_force_value,
            "agree": self.agree,
        }


@dataclass(frozen=True)
class DegreeOnePrime:
    """Degree-one prime (p, c): norm p, with c a simple root of the defining
    minimal polynomial mod p."""

    p: int
    c: int


def make_degree_one(minpoly: Sequence[int], p: int, c: int) -> DegreeOnePrime:
    from .exactalg import MultiPoly, discriminant

    if not is_prime(p):
        raise BadModulus(f"{p} is not prime")
    val = 0
    for co in reversed(list(minpoly)):
        val = (val * c + co) % p
    if val % p:
        raise BadModulus(f"{c} is not a root of the minimal polynomial mod {p}")
    d = discriminant(MultiPoly.from_coeffs(list(minpoly), "x"))
    if Fraction(d).numerator % p == 0:
        raise BadModulus(f"{p} divides the defining discriminant")
    return DegreeOnePrime(p, c % p)


def degree_one_primes(minpoly: Sequence[int], count: int, p_start: int = 2,
                      avoid: int = 1) -> List[DegreeOnePrime]:
    """The first `count` degree-one primes (p, c) of the order Z[x]/(minpoly),
    skipping p | avoid and ramified p."""
    from .exactalg import MultiPoly, discriminant

    d = int(Fraction(discriminant(MultiPoly.from_coeffs(list(minpoly), "x"))))
    out: List[DegreeOnePrime] = []
    p = max(2, p_start)
    while len(out) < count:
        if is_prime(p) and d % p and avoid % p:
            roots = poly_roots_mod_p(list(minpoly), p)
            if roots != "all":
                for c in roots:
                    out.append(DegreeOnePrime(p, c))
                    if len(out) >= count:
                        break
        p += 1
    return out


# ----------------------------------------------------------------------
# context for the q1/q2 lemmas (C4/D4 only)


@dataclass(frozen=True)
class LocalContext:
    P: QuarticPoly
    suite: CofactorSuite
    q1: MultiPoly
    q2: MultiPoly
    q1z: MultiPoly
    q2z: MultiPoly
    Dq2: int
    bad: int  # factors excluded from every local lemma (2 * disc * Dq2 * scales)
    bad_strict: int  # sampling variant: additionally excludes 2,3,5

    def q_at(self, a1: int, a2: int, a3: int) -> int:
        return int(self.suite.q.evaluate({"a1": a1, "a2": a2, "a3": a3}))

    def q3_at(self, a1: int, a2: int, a3: int) -> int:
        return int(self.suite.q3.evaluate({"a1": a1, "a2": a2, "a3": a3}))


def _primitive_int_form(f: MultiPoly) -> Tuple[MultiPoly, int]:
    g, den = clear_denominators(f)
    c = content(g)
    if c > 1:
        g = primitive_part(g)
    return g, den * max(c, 1)


def local_context(P: QuarticPoly) -> LocalContext:
    suite = build_suite(P)
    q1, q2 = split_q(P, suite)
    q1z, s1 = _primitive_int_form(q1)
    q2z, s2 = _primitive_int_form(q2)
    _, dq2, _, _ = derived_constants(P)
    bad = 2 * abs(P.disc) * abs(dq2) * s1 * s2
    return LocalContext(P, suite, q1, q2, q1z, q2z, dq2, bad, 30 * bad)


def _by_a1_degree(f: MultiPoly):
    """Group a ternary form's terms by a1-exponent: {k: [(e2, e3, c), ...]}."""
    i1 = f.variables.index("a1")
    i2 = f.variables.index("a2")
    i3 = f.variables.index("a3")
    out = {}
    for e, c in f.terms.items():
        out.setdefault(e[i1], []).append((e[i2], e[i3], int(c)))
    return out


def _a1_poly_mod(groups, a2: int, a3: int, p: int) -> List[int]:
    deg = max(groups)
    cs = [0] * (deg + 1)
    for k, terms in groups.items():
        v = 0
        for e2, e3, c in terms:
            v += c * pow(a2, e2, p) * pow(a3, e3, p)
        cs[k] = v % p
    return cs


def count_Qp(ctx: LocalContext, p: int, a2: int, a3: int) -> PrimeLocalReport:
    """Q_p(a2, a3) = #{a1 mod p : q1 = q2 = 0 mod p}, versus the root
    predicate P((a2 - c3 a3)/a3) = 0 mod p."""
    if not is_prime(p):
        raise BadPrime(f"{p} is not prime")
    if (a3 * ctx.bad) % p == 0:
        raise BadPrime(f"p={p} violates the admissibility precondition")
    g1 = _a1_poly_mod(_by_a1_degree(ctx.q1z), a2, a3, p)
    g2 = _a1_poly_mod(_by_a1_degree(ctx.q2z), a2, a3, p)
    count = 0
    for a1 in range(p):
        v1 = 0
        for c in reversed(g1):
            v1 = (v1 * a1 + c) % p
        if v1:
            continue
        v2 = 0
        for c in reversed(g2):
            v2 = (v2 * a1 + c) % p
        if v2 == 0:
            count += 1
    c0, c1, c2, c3 = ctx.P.coeffs
    val = (a2 - c3 * a3) * pow(a3, -1, p) % p
    pred = (((val**4 + c3 * val**3 + c2 * val**2 + c1 * val + c0) % p) == 0)
    return PrimeLocalReport(p, pred, count, count == (1 if pred else 0))


def b14_roots_mod_p(ctx: LocalContext, p: int, a1: int, a2: int, a3: int,
                    q_squarefree: Optional[bool] = None) -> PrimeLocalReport:
    """Root count in a0 of B14 = 0 mod p versus the two-case prediction:
    2 when p | q1 or p does not divide c3^2-4t2; 1 when p | q2 and
    p | c3^2-4t2."""
    fails = []
    if not is_prime(p):
        fails.append(f"{p} not prime")
    qv = ctx.q_at(a1, a2, a3)
    if qv % p:
        fails.append("p does not divide q(a)")
    if gcd(qv, ctx.q3_at(a1, a2, a3)) != 1:
        fails.append("gcd(q, q3) != 1 at the point")
    if (a2 * a3 * ctx.bad) % p == 0:
        fails.append("p divides a2*a3*(bad primes)")
    if q_squarefree is None:
        q_squarefree = is_squarefree(qv)
    if not q_squarefree:
        fails.append("q(a) is not squarefree")
    if fails:
        raise HypothesisViolation("; ".join(fails))
    b14 = ctx.suite.B14
    coeffs = [
        int(b14.coeff_of("a0", k).evaluate({"a1": a1, "a2": a2, "a3": a3})) % p
        for k in range(3)
    ]
    count = 0
    for a0 in range(p):
        if (coeffs[0] + a0 * (coeffs[1] + a0 * coeffs[2])) % p == 0:
            count += 1
    q1v = int(ctx.q1z.evaluate({"a1": a1, "a2": a2, "a3": a3}))
    q2v = int(ctx.q2z.evaluate({"a1": a1, "a2": a2, "a3": a3}))
    ds = ctx.P.c3**2 - 4 * ctx.P.t2
    if q1v % p == 0 or ds % p:
        predicted = 2
    elif q2v % p == 0 and ds % p == 0:
        predicted = 1
    else:
        raise HypothesisViolation("p divides q but neither q1 nor q2 (scales?)")
    return PrimeLocalReport(p, predicted, count, predicted == count)


def norm_link(ctx: LocalContext, p: int, a: Sequence[int]) -> Tuple[bool, bool]:
    """(p | N_P(a), p | B13(a)) under p | gcd(q, B14); Lemma-level equivalence
    of the two booleans is asserted."""
    a0, a1, a2, a3 = a
    env = {"a0": a0, "a1": a1, "a2": a2, "a3": a3}
    env3 = {"a1": a1, "a2": a2, "a3": a3}
    qv = int(ctx.suite.q.evaluate(env3))
    b14 = int(ctx.suite.B14.evaluate(env))
    fails = []
    if qv % p or b14 % p:
        fails.append("p does not divide gcd(q(a), B14(a))")
    if gcd(qv, int(ctx.suite.q3.evaluate(env3))) != 1:
        fails.append("gcd(q, q3) != 1")
    if not is_squarefree(qv):
        fails.append("q not squarefree")
    if fails:
        raise HypothesisViolation("; ".join(fails))
    div_n = int(ctx.suite.NP.evaluate(env)) % p == 0
    div_b13 = int(ctx.suite.B13.evaluate(env)) % p == 0
    if div_n != div_b13:
        raise TheoryViolation(
            f"p|N_P <-> p|B13 failed at a={tuple(a)}, p={p}"
        )
    return div_n, div_b13


def q2_split_mod_p(ctx: LocalContext, p: int):
    """Two linear forms (u, v, w) meaning u*a1+v*a2+w*a3 with
    L1*L2 = q2 (primitive integer model) mod p, for p = 1 mod D_q2.
    Returns None (NonSplit) when p is not 1 mod D_q2."""
    if p % abs(ctx.Dq2) != 1 % abs(ctx.Dq2):
        return None
    if p == 2 or ctx.bad % p == 0:
        raise BadPrime(f"p={p} is excluded by the bad-prime bound")
    g = _by_a1_degree(ctx.q2z)
    alpha = g.get(2, [(0, 0, 0)])[0][2] % p
    if alpha == 0:
        raise BadPrime("leading coefficient vanishes mod p")
    # beta = b2*a2 + b3*a3; gamma = g22*a2^2 + g23*a2*a3 + g33*a3^2
    b2 = b3 = g22 = g23 = g33 = 0
    for e2, e3, c in g.get(1, []):
        if (e2, e3) == (1, 0):
            b2 = c % p
        elif (e2, e3) == (0, 1):
            b3 = c % p
    for e2, e3, c in g.get(0, []):
        if (e2, e3) == (2, 0):
            g22 = c % p
        elif (e2, e3) == (1, 1):
            g23 = c % p
        elif (e2, e3) == (0, 2):
            g33 = c % p
    E = (b2 * b2 - 4 * alpha * g22) % p
    F = (2 * b2 * b3 - 4 * alpha * g23) % p
    G = (b3 * b3 - 4 * alpha * g33) % p
    if (F * F - 4 * E * G) % p:
        raise TheoryViolation(
            f"discriminant form is not a perfect square mod {p} despite p=1 mod Dq2"
        )
    if E:
        e = sqrt_mod(E, p)
        if e is None:
            raise TheoryViolation(f"E is a non-residue mod {p}")
        f = F * pow(2 * e, -1, p) % p
    elif G:
        f = sqrt_mod(G, p)
        if f is None:
            raise TheoryViolation(f"G is a non-residue mod {p}")
        e = 0
    else:
        e = f = 0
    inv2a = pow(2 * alpha, -1, p)
    inv2 = pow(2, -1, p)
    L1 = (1, (b2 - e) * inv2a % p, (b3 - f) * inv2a % p)
    L2 = (alpha, (b2 + e) * inv2 % p, (b3 + f) * inv2 % p)
    # exact check of all six coefficients of L1*L2 - q2z mod p
    prod = {
        (2, 0, 0): L1[0] * L2[0],
        (1, 1, 0): L1[0] * L2[1] + L1[1] * L2[0],
        (1, 0, 1): L1[0] * L2[2] + L1[2] * L2[0],
        (0, 2, 0): L1[1] * L2[1],
        (0, 1, 1): L1[1] * L2[2] + L1[2] * L2[1],
        (0, 0, 2): L1[2] * L2[2],
    }
    for e_, c in ctx.q2z.terms.items():
        if (prod.get(e_, 0) - int(c)) % p:
            raise TheoryViolation("reconstructed linear forms fail to multiply back")
        prod.pop(e_, None)
    if any(v % p for v in prod.values()):
        raise TheoryViolation("reconstructed linear forms fail to multiply back")
    return L1, L2


# ----------------------------------------------------------------------
# rho_P: density of the root congruence


def _ideal_basis_degree_one(P: QuarticPoly, d: DegreeOnePrime):
    M = mult_matrix(P)
    env = {"a0": -d.c, "a1": 1, "a2": 0, "a3": 0}
    gens = [[0] * 4 for _ in range(4)]
    for i in range(4):
        gens[i][i] = d.p
    cols = [[int(M[i][j].evaluate(env)) for i in range(4)] for j in range(4)]
    basis = hnf_basis(gens + cols)
    return basis


def _vec_mult(P: QuarticPoly, u: Sequence[int], v: Sequence[int]) -> List[int]:
    M = mult_matrix(P)
    env = {f"a{i}": u[i] for i in range(4)}
    return [
        sum(int(M[i][j].evaluate(env)) * v[j] for j in range(4)) for i in range(4)
    ]


def rho_P(P: QuarticPoly, ideal) -> int:
    """#{0 <= n < N : n - r1 in the ideal}, by enumeration.

    ideal: AlphaVec 4-tuple (principal, via exact division in Q[x]/(P)),
    a DegreeOnePrime, or a list of DegreeOnePrime with pairwise distinct p
    (their product ideal, built from HNF Z-bases).
    """
    from .cofactors import alpha_divides

    if isinstance(ideal, DegreeOnePrime):
        ideal = [ideal]
    if isinstance(ideal, (tuple,)) and all(isinstance(x, int) for x in ideal):
        a = tuple(ideal)
        n_abs = abs(int(build_norm(P, a)))
        if n_abs == 0:
            raise BadModulus("alpha is zero or a zero divisor")
        if gcd(n_abs, P.disc) != 1:
            raise BadModulus(f"gcd(N, disc) = {gcd(n_abs, P.disc)} != 1")
        return sum(1 for n in range(n_abs) if alpha_divides(P, a, n))
    if isinstance(ideal, list):
        ps = [d.p for d in ideal]
        if len(set(ps)) != len(ps):
            raise BadModulus("residue characteristics must be pairwise distinct")
        for d in ideal:
            make_degree_one([P.c0, P.c1, P.c2, P.c3, 1], d.p, d.c)
        basis = _ideal_basis_degree_one(P, ideal[0])
        if lattice_det(basis) != ideal[0].p:
            raise BadModulus("(p, c) is not a degree-one prime of Z[r1]")
        for d in ideal[1:]:
            nxt = _ideal_basis_degree_one(P, d)
            if lattice_det(nxt) != d.p:
                raise BadModulus("(p, c) is not a degree-one prime of Z[r1]")
            prods = []
            for u in basis:
                for v in nxt:
                    prods.append(_vec_mult(P, u, v))
            basis = hnf_basis(prods)
        N = lattice_det(basis)
        expected = 1
        for p_ in ps:
            expected *= p_
        if N != expected:
            raise BadModulus(f"product ideal has norm {N}, expected {expected}")
        if gcd(N, P.disc) != 1:
            raise BadModulus("ideal norm shares a factor with disc(P)")
        return sum(1 for n in range(N) if in_row_lattice(basis, (n, -1, 0, 0)))
    raise BadModulus(f"unsupported ideal spec {ideal!r}")


def build_norm(P: QuarticPoly, a: Sequence[int]) -> int:
    from .cofactors import norm_form

    return int(norm_form(P).evaluate({f"a{i}": a[i] for i in range(4)}))


# ----------------------------------------------------------------------
# rho_v: divisibility density for the incomplete norm form


@dataclass(frozen=True)
class NuBasis:
    """First three basis elements nu_i given as polynomials in a root of
    minpoly (rational coefficients, low-to-high)."""

    minpoly: Tuple[int, ...]
    nus: Tuple[Tuple[Fraction, ...], ...]

    def nu_mod(self, c: int, p: int) -> List[int]:
        out = []
        for poly in self.nus:
            acc = Fraction(0)
            for co in reversed(poly):
                acc = acc * c + co
            f = Fraction(acc)
            if f.denominator % p == 0:
                raise BadPrime(f"basis denominator not invertible mod {p}")
            out.append(f.numerator * pow(f.denominator, -1, p) % p)
        return out


def nu_basis_from_normdata(nf: NormFieldData) -> NuBasis:
    g = tuple(Fraction(c) for c in uni_coeffs(nf.nu3_in_theta, "x"))
    return NuBasis(
        tuple(int(c) for c in uni_coeffs(nf.theta_minpoly, "x")),
        ((Fraction(1),), (Fraction(0), Fraction(1)), g),
    )


def power_nu_basis(minpoly: Sequence[int]) -> NuBasis:
    return NuBasis(
        tuple(int(c) for c in minpoly),
        ((Fraction(1),), (Fraction(0), Fraction(1)), (Fraction(0), Fraction(0), Fraction(1))),
    )


def degree_one_divides(basis: NuBasis, d: DegreeOnePrime, a: Sequence[int]) -> bool:
    v = basis.nu_mod(d.c, d.p)
    return (a[0] * v[0] + a[1] * v[1] + a[2] * v[2]) % d.p == 0


def norm_form_of_basis(basis: NuBasis) -> Tuple[MultiPoly, int]:
    """(integer form N*, scale) with N* = scale * Norm(a1 nu1+a2 nu2+a3 nu3)."""
    x = MultiPoly.var("x")
    mp = MultiPoly.from_coeffs(list(basis.minpoly), "x")
    h = MultiPoly.const(0, ("x",))
    for name, poly in zip(("a1", "a2", "a3"), basis.nus):
        av = MultiPoly.var(name)
        for i, c in enumerate(poly):
            if c:
                h = h + av * c * x**i
    form = resultant(mp, h, "x")
    formz, scale = clear_denominators(form)
    return formz, scale


def rho_v(basis: NuBasis, d) -> Fraction:
    """Density count for d | (a1 nu1 + a2 nu2 + a3 nu3) over the cube
    [1, N(d)]^3, divided by N(d)^2.

    d: DegreeOnePrime, or a tuple ("pk", p, k) for the prime-power count
    with k <= 4 and p^k <= 10^6.
    """
    if isinstance(d, DegreeOnePrime):
        p = d.p
        make_degree_one(list(basis.minpoly), p, d.c)
        v = basis.nu_mod(d.c, p)
        count = 0
        for a2 in range(1, p + 1):
            for a3 in range(1, p + 1):
                rhs = (a2 * v[1] + a3 * v[2]) % p
                if v[0] % p:
                    count += 1
                elif rhs == 0:
                    count += p
        return Fraction(count, p * p)
    if isinstance(d, tuple) and d and d[0] == "pk":
        _, p, k = d
        if k > 4 or p**k > 10**6:
            raise TooLarge(f"p^k = {p**k} beyond the enumeration bound")
        count = count_pk_norm_divisible(basis, p, k)
        return Fraction(count, p ** (2 * k))
    raise BadModulus(f"unsupported divisor spec {d!r}")


def count_pk_norm_divisible(basis: NuBasis, p: int, k: int) -> int:
    """#{x in [1, p^k]^3 : p^k | Norm(x1 nu1 + x2 nu2 + x3 nu3)}."""
    formz, scale = norm_form_of_basis(basis)
    if scale % p == 0:
        raise BadPrime(f"cleared denominator divisible by {p}")
    groups = _by_a1_degree(formz)
    q = p**k
    total = 0
    for a2 in range(q):
        for a3 in range(q):
            cs = [0] * (max(groups) + 1)
            for deg, terms in groups.items():
                v = 0
                for e2, e3, c in terms:
                    v += c * pow(a2, e2, q) * pow(a3, e3, q)
                cs[deg] = v % q
            total += roots_mod_pk(cs, p, k)
    return total


def rho_v_product(basis: NuBasis, ds: List[DegreeOnePrime]) -> Fraction:
    """Full-cube enumeration of rho_v for a product of degree-one primes
    with coprime norms (norms small enough for the cube to be scanned)."""
    N = 1
    for d in ds:
        N *= d.p
    if N > 80:
        raise TooLarge(f"cube side {N} too large for the honest triple scan")
    vs = [(d.p, basis.nu_mod(d.c, d.p)) for d in ds]
    count = 0
    for a1 in range(1, N + 1):
        for a2 in range(1, N + 1):
            for a3 in range(1, N + 1):
                if all(
                    (a1 * v[0] + a2 * v[1] + a3 * v[2]) % p == 0 for p, v in vs
                ):
                    count += 1
    return Fraction(count, N * N)

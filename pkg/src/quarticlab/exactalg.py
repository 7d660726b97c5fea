"""Exact arithmetic substrate: rationals, dense multivariate polynomials,
Sylvester resultants with fraction-free (Bareiss) elimination, discriminants,
and certified complex root isolation.

Coefficients are python ints wherever no denominator has appeared and
`fractions.Fraction` otherwise; the two interoperate transparently. All
values are immutable after construction and every operation is pure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Mapping, Sequence, Union

from mpmath import mp, mpc

from .errors import (
    DegreeTooLow,
    InexactDivision,
    NotSquarefree,
    PrecisionExhausted,
    ZeroPolynomial,
)

Coeff = Union[int, Fraction]

# Canonical variable order used throughout: the four alpha coordinates first,
# then the quartic's coefficients, then anything else alphabetically.
_CANON = {n: i for i, n in enumerate(("a0", "a1", "a2", "a3", "c0", "c1", "c2", "c3"))}


def _var_key(name: str):
    return (0, _CANON[name]) if name in _CANON else (1, name)


def _norm(c: Coeff) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def _div(a: Coeff, b: Coeff) -> Coeff:
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        return q if r == 0 else Fraction(a, b)
    return _norm(Fraction(a) / Fraction(b))


class MultiPoly:
    """Dense-exponent multivariate polynomial with exact coefficients.

    terms maps exponent tuples (aligned with `variables`) to nonzero
    coefficients. Instances are never mutated after construction.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Coeff]):
        vs = tuple(variables)
        clean = {}
        for e, c in terms.items():
            c = _norm(c)
            if c:
                if len(e) != len(vs):
                    raise ValueError("exponent tuple length mismatch")
                clean[tuple(e)] = c
        self.variables = vs
        self.terms = clean

    # ------------------------------------------------------------------
    # constructors
    @staticmethod
    def const(c: Coeff, variables: Sequence[str] = ()) -> "MultiPoly":
        vs = tuple(variables)
        return MultiPoly(vs, {(0,) * len(vs): c} if c else {})

    @staticmethod
    def var(name: str) -> "MultiPoly":
        return MultiPoly((name,), {(1,): 1})

    @staticmethod
    def from_coeffs(coeffs: Sequence[Coeff], var: str = "x") -> "MultiPoly":
        """Univariate from low-to-high coefficient list."""
        return MultiPoly((var,), {(i,): c for i, c in enumerate(coeffs) if c})

    # ------------------------------------------------------------------
    # basic structure
    def is_zero(self) -> bool:
        return not self.terms

    def copy_with(self, terms) -> "MultiPoly":
        return MultiPoly(self.variables, terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, Fraction)):
                other = MultiPoly.const(other, self.variables)
            else:
                return NotImplemented
        a, b = _align(self, other)
        return a.terms == b.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, key=lambda t: (sum(t), t), reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v
                for v, k in zip(self.variables, e)
                if k
            )
            if mono:
                cs = "" if c == 1 else ("-" if c == -1 else f"{c}*")
                bits.append(f"{cs}{mono}")
            else:
                bits.append(f"{c}")
        out = "+".join(bits).replace("+-", "-")
        return out

    def degree(self, var: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var not in self.variables:
            return 0
        i = self.variables.index(var)
        return max(e[i] for e in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def coeff_of(self, var: str, k: int) -> "MultiPoly":
        """Coefficient of var**k, as a polynomial in the remaining variables."""
        if var not in self.variables:
            return self if k == 0 else MultiPoly(self.variables, {})
        i = self.variables.index(var)
        rest = self.variables[:i] + self.variables[i + 1 :]
        terms = {}
        for e, c in self.terms.items():
            if e[i] == k:
                terms[e[:i] + e[i + 1 :]] = c
        return MultiPoly(rest, terms)

    # ------------------------------------------------------------------
    # arithmetic
    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other, self.variables)
        a, b = _align(self, other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MultiPoly(a.variables, terms)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other, self.variables)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MultiPoly(self.variables, {})
            return MultiPoly(
                self.variables, {e: c * other for e, c in self.terms.items()}
            )
        a, b = _align(self, other)
        terms: dict = {}
        bt = b.terms
        for e1, c1 in a.terms.items():
            for e2, c2 in bt.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return MultiPoly(a.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = MultiPoly.const(1, self.variables)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def leading_term(self):
        """Graded-lex leading term: (exponents, coeff)."""
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        e = max(self.terms, key=lambda t: (sum(t), t))
        return e, self.terms[e]

    # ------------------------------------------------------------------
    # substitution / evaluation
    def subs(self, assignment: Mapping[str, Union[Coeff, "MultiPoly"]]) -> "MultiPoly":
        """Substitute values or polynomials for some variables."""
        out = MultiPoly.const(0, ())
        cache: dict = {}
        for e, c in self.terms.items():
            m = MultiPoly.const(c, ())
            for v, k in zip(self.variables, e):
                if not k:
                    continue
                if v in assignment:
                    rep = assignment[v]
                    if not isinstance(rep, MultiPoly):
                        rep = MultiPoly.const(rep, ())
                    key = (v, k)
                    if key not in cache:
                        cache[key] = rep**k
                    m = m * cache[key]
                else:
                    m = m * MultiPoly((v,), {(k,): 1})
            out = out + m
        return out

    def evaluate(self, assignment: Mapping[str, Coeff]) -> Coeff:
        """Evaluate with every variable bound; exact."""
        total: Coeff = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(self.variables, e):
                if k:
                    t *= assignment[v] ** k
            total += t
        return _norm(total if isinstance(total, int) else Fraction(total))


def _align(a: MultiPoly, b: MultiPoly):
    if a.variables == b.variables:
        return a, b
    vs = tuple(sorted(set(a.variables) | set(b.variables), key=_var_key))

    def remap(p: MultiPoly) -> MultiPoly:
        idx = [p.variables.index(v) if v in p.variables else None for v in vs]
        terms = {}
        for e, c in p.terms.items():
            terms[tuple(e[i] if i is not None else 0 for i in idx)] = c
        return MultiPoly(vs, terms)

    return remap(a), remap(b)


# ----------------------------------------------------------------------
# division and the poly_arith dispatcher


def divexact(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Exact quotient f/g in the polynomial ring.

    Raises InexactDivision (carrying the offending leading term) whenever g
    does not divide f exactly.
    """
    if g.is_zero():
        raise ZeroPolynomial("division by the zero polynomial")
    f, g = _align(f, g)
    if f.is_zero():
        return f
    ge, gc = g.leading_term()
    q_terms: dict = {}
    rem = f
    while rem.terms:
        re_, rc = rem.leading_term()
        diff = tuple(x - y for x, y in zip(re_, ge))
        if any(d < 0 for d in diff):
            raise InexactDivision(
                f"inexact division: remainder leading term {re_} -> {rc}",
                leading_term=(re_, rc),
            )
        qc = _div(rc, gc)
        q_terms[diff] = qc
        # rem -= qc * x^diff * g
        upd = dict(rem.terms)
        for e2, c2 in g.terms.items():
            e = tuple(x + y for x, y in zip(diff, e2))
            s = upd.get(e, 0) - qc * c2
            if s:
                upd[e] = s
            else:
                upd.pop(e, None)
        rem = MultiPoly(rem.variables, upd)
    return MultiPoly(f.variables, q_terms)


def poly_arith(lhs: MultiPoly, rhs: MultiPoly, op: str) -> MultiPoly:
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "divexact":
        return divexact(lhs, rhs)
    raise ValueError(f"unknown op {op!r}")


# ----------------------------------------------------------------------
# resultants and discriminants


def sylvester_matrix(f: MultiPoly, g: MultiPoly, var: str):
    """Sylvester matrix of f, g with respect to var; entries are MultiPoly
    in the remaining variables."""
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomial("resultant of a zero polynomial")
    m, n = f.degree(var), g.degree(var)
    if m == 0 and n == 0:
        raise ValueError(f"variable {var!r} occurs in neither polynomial")
    fc = [f.coeff_of(var, k) for k in range(m, -1, -1)]
    gc = [g.coeff_of(var, k) for k in range(n, -1, -1)]
    size = m + n
    zero = MultiPoly.const(0, fc[0].variables)
    rows = []
    for i in range(n):
        rows.append([zero] * i + fc + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + gc + [zero] * (size - n - 1 - i))
    return rows


def _bareiss_det(mat) -> MultiPoly:
    """Fraction-free determinant of a square matrix of MultiPoly entries."""
    n = len(mat)
    if n == 0:
        return MultiPoly.const(1, ())
    m = [row[:] for row in mat]
    sign = 1
    prev = MultiPoly.const(1, m[0][0].variables)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return MultiPoly.const(0, m[0][0].variables)
        piv = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = divexact(piv * m[i][j] - m[i][k] * m[k][j], prev)
            m[i][k] = MultiPoly.const(0, piv.variables)
        prev = piv
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def resultant(f: MultiPoly, g: MultiPoly, var: str) -> MultiPoly:
    """Sylvester resultant eliminating var, by Bareiss elimination."""
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomial("resultant of a zero polynomial")
    m, n = f.degree(var), g.degree(var)
    if m == 0 and n == 0:
        raise ValueError(f"variable {var!r} occurs in neither polynomial")
    if m == 0:
        return f ** n if n else MultiPoly.const(1, f.variables)
    if n == 0:
        return g ** m
    return _bareiss_det(sylvester_matrix(f, g, var))


def discriminant(f: MultiPoly) -> Coeff:
    """(-1)^{n(n-1)/2} Res(f, f') / lc(f) for univariate f of degree >= 2."""
    vs = [v for v in f.variables if f.degree(v) > 0]
    if len(vs) != 1:
        raise ValueError("discriminant needs a univariate polynomial")
    var = vs[0]
    n = f.degree(var)
    if n < 2:
        raise DegreeTooLow(f"degree {n} < 2")
    fp = uni_derivative(f, var)
    res = resultant(f, fp, var)
    lc = f.coeff_of(var, n)
    val = divexact(res, lc)
    if val.total_degree() > 0:
        raise ValueError("coefficients must be numeric")
    c = val.terms.get((0,) * len(val.variables), 0)
    return _norm(-c if (n * (n - 1) // 2) % 2 else c)


# ----------------------------------------------------------------------
# univariate helpers


def uni_coeffs(f: MultiPoly, var: str = "x") -> list:
    """Low-to-high coefficient list of a univariate polynomial."""
    n = f.degree(var)
    if n < 0:
        return []
    out = [0] * (n + 1)
    if var not in f.variables:
        if any(sum(e) for e in f.terms):
            raise ValueError("not univariate in " + var)
        out[0] = f.terms.get((0,) * len(f.variables), 0)
        return out
    i = f.variables.index(var)
    for e, c in f.terms.items():
        if any(k for j, k in enumerate(e) if j != i):
            raise ValueError("not univariate in " + var)
        out[e[i]] = c
    return out


def uni_derivative(f: MultiPoly, var: str) -> MultiPoly:
    i = f.variables.index(var)
    terms = {}
    for e, c in f.terms.items():
        if e[i]:
            e2 = e[:i] + (e[i] - 1,) + e[i + 1 :]
            terms[e2] = terms.get(e2, 0) + c * e[i]
    return MultiPoly(f.variables, terms)


def uni_gcd(f: MultiPoly, g: MultiPoly, var: str = "x") -> MultiPoly:
    """Monic gcd of univariate polynomials over Q."""
    a = [Fraction(c) for c in uni_coeffs(f, var)]
    b = [Fraction(c) for c in uni_coeffs(g, var)]

    def strip(p):
        while p and not p[-1]:
            p.pop()
        return p

    a, b = strip(a), strip(b)
    while b:
        # a mod b
        r = a[:]
        db, lb = len(b) - 1, b[-1]
        while True:
            while r and not r[-1]:
                r.pop()
            if not r or len(r) - 1 < db:
                break
            q = r[-1] / lb
            shift = len(r) - 1 - db
            for i, bc in enumerate(b):
                r[shift + i] -= q * bc
            r.pop()
        a, b = b, strip(r)
    if not a:
        return MultiPoly((var,), {})
    lc = a[-1]
    return MultiPoly.from_coeffs([_norm(c / lc) for c in a], var)


def poly_sqrt(f: MultiPoly, var: str = "x") -> MultiPoly:
    """Exact square root of a monic even-degree univariate polynomial.

    Raises InexactDivision when f is not a perfect square.
    """
    cs = uni_coeffs(f, var)
    n = len(cs) - 1
    if n % 2 or cs[-1] != 1:
        raise InexactDivision("not a monic even-degree polynomial")
    m = n // 2
    g = [Fraction(0)] * (m + 1)
    g[m] = Fraction(1)
    for k in range(1, m + 1):
        # match coefficient of x^(2m-k)
        acc = Fraction(0)
        for i in range(m - k + 1, m):
            j = 2 * m - k - i
            if m - k < j <= m:
                acc += Fraction(g[i]) * g[j]
        g[m - k] = (Fraction(cs[2 * m - k]) - acc) / 2
    G = MultiPoly.from_coeffs([_norm(c) for c in g], var)
    if G * G != _align(f, G)[0]:
        raise InexactDivision("polynomial is not a perfect square")
    return G


# ----------------------------------------------------------------------
# text formats


_TERM_RE = re.compile(
    r"(?P<sign>[+-]?)\s*(?P<coef>\d+(?:/\d+)?)?\s*(?:\*?\s*(?P<var>[A-Za-z]\w*)\s*(?:\^\s*(?P<exp>\d+))?)?"
)


def parse_poly_text(text: str, var: str = "x") -> MultiPoly:
    """Parse either CSV low-to-high coefficients or a human form like X^4+2."""
    s = text.strip()
    if "," in s:
        coeffs = []
        for tok in s.split(","):
            tok = tok.strip()
            coeffs.append(_norm(Fraction(tok)))
        return MultiPoly.from_coeffs(coeffs, var)
    terms: dict = {}
    names = set()
    pos = 0
    while pos < len(s):
        mt = _TERM_RE.match(s, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"cannot parse polynomial text at {s[pos:]!r}")
        sign = -1 if mt.group("sign") == "-" else 1
        coef = Fraction(mt.group("coef")) if mt.group("coef") else Fraction(1)
        name = mt.group("var")
        exp = int(mt.group("exp")) if mt.group("exp") else (1 if name else 0)
        if name:
            names.add(name)
        e = exp if name else 0
        terms[e] = terms.get(e, 0) + sign * coef
        pos = mt.end()
        while pos < len(s) and s[pos].isspace():
            pos += 1
    if len(names) > 1:
        raise ValueError("human form supports one variable")
    return MultiPoly.from_coeffs(
        [_norm(terms.get(i, 0)) for i in range(max(terms, default=0) + 1)], var
    )


def poly_to_csv(f: MultiPoly, var: str = "x") -> str:
    return ",".join(str(c) for c in uni_coeffs(f, var))


# ----------------------------------------------------------------------
# exact square-root bounds and complex balls


def sqrt_lower(x: Fraction, bits: int = 64) -> Fraction:
    """Rational lower bound on sqrt(x), within a relative 2^-bits."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative")
    if x == 0:
        return Fraction(0)
    n, d = x.numerator, x.denominator
    k = 1 << bits
    return Fraction(isqrt(n * d * k * k), d * k)


def sqrt_upper(x: Fraction, bits: int = 64) -> Fraction:
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative")
    if x == 0:
        return Fraction(0)
    n, d = x.numerator, x.denominator
    k = 1 << bits
    return Fraction(isqrt(n * d * k * k) + 1, d * k)


@dataclass(frozen=True)
class ComplexBall:
    """Disk in the complex plane: exact dyadic-rational center, rational
    radius certifiably bounding the distance to the represented value."""

    re: Fraction
    im: Fraction
    radius: Fraction

    def abs_sq_center(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def contains_zero(self) -> bool:
        return self.abs_sq_center() <= self.radius * self.radius

    def contains_real(self, v) -> bool:
        d2 = (self.re - Fraction(v)) ** 2 + self.im * self.im
        return d2 <= self.radius * self.radius

    def __add__(self, other):
        if isinstance(other, ComplexBall):
            return ComplexBall(
                self.re + other.re, self.im + other.im, self.radius + other.radius
            )
        v = Fraction(other)
        return ComplexBall(self.re + v, self.im, self.radius)

    __radd__ = __add__

    def __neg__(self):
        return ComplexBall(-self.re, -self.im, self.radius)

    def __sub__(self, other):
        if isinstance(other, ComplexBall):
            return self + (-other)
        return ComplexBall(self.re - Fraction(other), self.im, self.radius)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ComplexBall):
            v = Fraction(other)
            return ComplexBall(self.re * v, self.im * v, self.radius * abs(v))
        c_re = self.re * other.re - self.im * other.im
        c_im = self.re * other.im + self.im * other.re
        m1 = sqrt_upper(self.abs_sq_center())
        m2 = sqrt_upper(other.abs_sq_center())
        r = m1 * other.radius + m2 * self.radius + self.radius * other.radius
        return ComplexBall(c_re, c_im, r)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = ComplexBall(Fraction(1), Fraction(0), Fraction(0))
        for _ in range(n):
            out = out * self
        return out

    def abs_upper(self) -> Fraction:
        return sqrt_upper(self.abs_sq_center()) + self.radius

    def abs_lower(self) -> Fraction:
        lo = sqrt_lower(self.abs_sq_center()) - self.radius
        return lo if lo > 0 else Fraction(0)


def eval_on_ball(coeffs: Sequence[Coeff], ball: ComplexBall) -> ComplexBall:
    """Horner evaluation of a univariate polynomial (low-to-high coeffs) on a
    complex disk; the result disk encloses the image of every point."""
    acc = ComplexBall(Fraction(0), Fraction(0), Fraction(0))
    for c in reversed(list(coeffs)):
        acc = acc * ball + ComplexBall(Fraction(c), Fraction(0), Fraction(0))
    return acc


# ----------------------------------------------------------------------
# certified root isolation


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = x._mpf_
    man, exp = int(man), int(exp)  # mpmath may hand back gmpy2 mpz
    if man == 0:
        return Fraction(0)
    v = Fraction(man)
    if exp >= 0:
        v *= 1 << exp
    else:
        v /= 1 << (-exp)
    return -v if sign else v


def _aberth_once(coeffs, prec: int, seed_rot: float):
    """One Aberth-Ehrlich run at a fixed binary precision; returns mpc list."""
    n = len(coeffs) - 1
    with mp.workprec(prec):
        cs = [mp.mpf(c.numerator) / mp.mpf(c.denominator) for c in coeffs]

        def horner(z):
            p = mp.mpc(0)
            dp = mp.mpc(0)
            for c in reversed(cs):
                dp = dp * z + p
                p = p * z + c
            return p, dp

        r = 1 + max(abs(c) for c in cs[:-1]) / abs(cs[-1])
        zs = [
            r * mp.e ** (mpc(0, 1) * (2 * mp.pi * (k + seed_rot) / n))
            for k in range(n)
        ]
        tol = mp.mpf(2) ** (-(prec * 3) // 4)
        for _ in range(120):
            moved = mp.mpf(0)
            for i in range(n):
                p, dp = horner(zs[i])
                if dp == 0:
                    zs[i] = zs[i] + mp.mpf(2) ** (-prec // 2)
                    moved = max(moved, abs(tol) * 2)
                    continue
                newton = p / dp
                s = mp.mpc(0)
                ok = True
                for j in range(n):
                    if j != i:
                        d = zs[i] - zs[j]
                        if d == 0:
                            ok = False
                            break
                        s += 1 / d
                if not ok:
                    zs[i] = zs[i] + mp.mpf(2) ** (-prec // 2)
                    moved = max(moved, abs(tol) * 2)
                    continue
                denom = 1 - newton * s
                w = newton if denom == 0 else newton / denom
                zs[i] = zs[i] - w
                moved = max(moved, abs(w))
            if moved < tol:
                break
        return [(_mpf_to_fraction(z.real), _mpf_to_fraction(z.imag)) for z in zs]


def certified_roots(f: MultiPoly, precision_bits: int = 128, var: str | None = None):
    """All complex roots of a squarefree univariate polynomial as pairwise
    disjoint ComplexBalls, one root per ball, radii <= 2^(-precision_bits/2).

    Certification: with Weierstrass corrections W_i = f(z_i)/prod(z_i - z_j),
    every disk D(z_i, n|W_i|) contains a root and disjoint disks contain
    exactly one each; the radii are computed in exact rational arithmetic
    from the dyadic iterates, so no floating-point step is trusted.
    """
    vs = [v for v in f.variables if f.degree(v) > 0]
    if len(vs) != 1:
        raise ValueError("certified_roots needs a univariate polynomial")
    v = vs[0] if var is None else var
    n = f.degree(v)
    if n < 1:
        raise ZeroPolynomial("constant polynomial")
    g = uni_gcd(f, uni_derivative(f, v), v)
    if g.degree(v) > 0:
        raise NotSquarefree(f"gcd(f, f') has degree {g.degree(v)}")
    coeffs = [Fraction(c) for c in uni_coeffs(f, v)]
    target = Fraction(1, 1 << (precision_bits // 2))
    prec = max(128, precision_bits)
    seed_rot = 0.3
    while prec <= 16384:
        centers = _aberth_once(coeffs, prec, seed_rot)
        balls = _certify(coeffs, centers, n)
        if balls is not None and all(b.radius <= target for b in balls):
            return balls
        prec *= 2
        seed_rot += 0.17
    raise PrecisionExhausted(
        f"could not certify roots of {f} at precision_bits={precision_bits}"
    )


def _certify(coeffs, centers, n):
    lc = coeffs[-1]
    balls = []
    for i, (re_, im_) in enumerate(centers):
        # f(z_i) exactly
        p_re, p_im = Fraction(0), Fraction(0)
        for c in reversed(coeffs):
            p_re, p_im = p_re * re_ - p_im * im_ + c, p_re * im_ + p_im * re_
        # prod_{j != i} (z_i - z_j) exactly
        q_re, q_im = Fraction(lc), Fraction(0)
        for j, (re2, im2) in enumerate(centers):
            if j == i:
                continue
            dr, di = re_ - re2, im_ - im2
            q_re, q_im = q_re * dr - q_im * di, q_re * di + q_im * dr
        q_abs2 = q_re * q_re + q_im * q_im
        if q_abs2 == 0:
            return None
        w_abs2 = (p_re * p_re + p_im * p_im) / q_abs2
        radius = n * sqrt_upper(w_abs2)
        balls.append(ComplexBall(re_, im_, radius))
    # pairwise disjointness, exact
    for i in range(n):
        for j in range(i + 1, n):
            d2 = (balls[i].re - balls[j].re) ** 2 + (balls[i].im - balls[j].im) ** 2
            rs = balls[i].radius + balls[j].radius
            if d2 <= rs * rs:
                return None
    return balls


# ----------------------------------------------------------------------
# rational reconstruction


def reconstruct_rational(x: Fraction, max_den: int) -> Fraction | None:
    """Best rational approximation to x with denominator <= max_den, by
    continued-fraction rounding. Caller must verify the result exactly."""
    x = Fraction(x)
    p0, q0, p1, q1 = 0, 1, 1, 0
    a = x
    while True:
        n = a.numerator // a.denominator
        p0, q0, p1, q1 = p1, q1, n * p1 + p0, n * q1 + q0
        if q1 > max_den:
            return Fraction(p0, q0) if q0 else None
        frac = a - n
        if frac == 0:
            return Fraction(p1, q1)
        a = 1 / frac


# convenience: integer content / denominator clearing


def clear_denominators(f: MultiPoly):
    """Return (g, d) with g = d*f having integer coefficients, d minimal."""
    d = 1
    for c in f.terms.values():
        if isinstance(c, Fraction):
            d = d * c.denominator // _gcd(d, c.denominator)
    g = MultiPoly(f.variables, {e: _norm(c * d) for e, c in f.terms.items()})
    return g, d


def content(f: MultiPoly) -> int:
    g = 0
    for c in f.terms.values():
        if not isinstance(c, int):
            raise ValueError("content needs integer coefficients")
        g = _gcd(g, abs(c))
    return g


def primitive_part(f: MultiPoly) -> MultiPoly:
    c = content(f)
    if c in (0, 1):
        return f
    return MultiPoly(f.variables, {e: v // c for e, v in f.terms.items()})


def drop_zero_vars(f: MultiPoly) -> MultiPoly:
    """Remove variables in which f has degree 0."""
    keep = [i for i, v in enumerate(f.variables) if f.degree(v) > 0]
    vs = tuple(f.variables[i] for i in keep)
    return MultiPoly(vs, {tuple(e[i] for i in keep): c for e, c in f.terms.items()})


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a

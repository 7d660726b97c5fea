"""Prime and mod-p utilities: deterministic Miller-Rabin, prime sieves,
Tonelli-Shanks square roots, root-finding for small-degree polynomials
mod p and mod p^k, and exact rational-exponent comparisons.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import gcd
from typing import Iterable, List, Optional, Sequence


def cmp_pow(n: int, X: int, e) -> int:
    """Sign of n - X^e for positive integers n, X and positive rational e.

    A float-log screen decides all but near-ties (its error is orders of
    magnitude below the margin); near-ties fall back to exact integer
    powers, so the answer is always exact.
    """
    if n <= 0:
        return -1
    e = Fraction(e)
    lhs = e.denominator * math.log(n)
    rhs = e.numerator * math.log(X)
    if abs(lhs - rhs) > 1e-9 * max(1.0, abs(lhs), abs(rhs)):
        return -1 if lhs < rhs else 1
    a, b = n ** e.denominator, X ** e.numerator
    return (a > b) - (a < b)

# Deterministic MR witness set for n < 3.317e24 (Sorenson-Webster).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
MR_DETERMINISTIC_BOUND = 3317044064679887385961981


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n below 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    if n >= MR_DETERMINISTIC_BOUND:
        raise ValueError("n beyond the deterministic witness bound")
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> List[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, b in enumerate(sieve) if b]


def sqrt_mod(a: int, p: int) -> Optional[int]:
    """A square root of a mod an odd prime p, or None for a non-residue."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


# ----------------------------------------------------------------------
# dense polynomial arithmetic mod p (small degrees)


def _pstrip(f: List[int]) -> List[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(f: Sequence[int], g: Sequence[int], p: int) -> List[int]:
    f = [c % p for c in f]
    _pstrip(f)
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    while len(f) - 1 >= dg and f:
        q = f[-1] * inv % p
        shift = len(f) - 1 - dg
        for i, c in enumerate(g):
            f[shift + i] = (f[shift + i] - q * c) % p
        _pstrip(f)
    return f


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pstrip(out)


def _pgcd(a: List[int], b: List[int], p: int) -> List[int]:
    a, b = _pstrip([c % p for c in a]), _pstrip([c % p for c in b])
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _powmod_x(e: int, modpoly: Sequence[int], p: int) -> List[int]:
    """x^e mod (modpoly, p)."""
    result = [1]
    base = _pmod([0, 1], modpoly, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), modpoly, p)
        base = _pmod(_pmul(base, base, p), modpoly, p)
        e >>= 1
    return result


def _pow_poly(h: Sequence[int], e: int, modpoly: Sequence[int], p: int) -> List[int]:
    result = [1]
    base = _pmod(list(h), modpoly, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), modpoly, p)
        base = _pmod(_pmul(base, base, p), modpoly, p)
        e >>= 1
    return result


ALL_RESIDUES = "all"


def poly_roots_mod_p(coeffs: Sequence[int], p: int):
    """Distinct roots in F_p of an integer polynomial (low-to-high coeffs).

    Returns the sentinel ALL_RESIDUES when the polynomial vanishes
    identically mod p.
    """
    f = _pstrip([c % p for c in coeffs])
    if not f:
        return ALL_RESIDUES
    if len(f) == 1:
        return []
    if p <= 64 or len(f) - 1 <= 1:
        if len(f) - 1 == 1:
            return [(-f[0] * pow(f[1], -1, p)) % p]
        return [r for r in range(p) if _peval(f, r, p) == 0]
    # distinct-root part: gcd(x^p - x, f)
    xp = _powmod_x(p, f, p)
    xp_minus_x = xp[:]
    while len(xp_minus_x) < 2:
        xp_minus_x.append(0)
    xp_minus_x[1] = (xp_minus_x[1] - 1) % p
    g = _pgcd(f, xp_minus_x, p)
    return sorted(_split_linear(g, p))


def _peval(f: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def _split_linear(g: List[int], p: int) -> List[int]:
    """Roots of a product of distinct linear factors, by Cantor-Zassenhaus."""
    d = len(g) - 1
    if d <= 0:
        return []
    if d == 1:
        return [(-g[0] * pow(g[1], -1, p)) % p]
    if d == 2:
        a, b, c = g[2], g[1], g[0]
        disc = (b * b - 4 * a * c) % p
        r = sqrt_mod(disc, p)
        inv = pow(2 * a, -1, p)
        return [((-b + r) * inv) % p, ((-b - r) * inv) % p]
    shift = 1
    while True:
        h = _pow_poly([shift, 1], (p - 1) // 2, g, p)
        h = list(h)
        if h:
            h[0] = (h[0] - 1) % p
        h = _pstrip(h)
        sub = _pgcd(g, h, p)
        if 0 < len(sub) - 1 < d:
            rest = _pdivexact(g, sub, p)
            return _split_linear(sub, p) + _split_linear(rest, p)
        shift += 1


def _pdivexact(f: Sequence[int], g: Sequence[int], p: int) -> List[int]:
    f = [c % p for c in f]
    out = [0] * (len(f) - len(g) + 1)
    inv = pow(g[-1], -1, p)
    for k in range(len(out) - 1, -1, -1):
        q = f[k + len(g) - 1] * inv % p
        out[k] = q
        for i, c in enumerate(g):
            f[k + i] = (f[k + i] - q * c) % p
    return out


def roots_mod_pk(coeffs: Sequence[int], p: int, k: int) -> int:
    """Number of roots mod p^k of an integer polynomial, by Hensel-style
    level lifting (exact count, handles singular roots)."""
    if k == 1:
        rs = poly_roots_mod_p(coeffs, p)
        return p if rs == ALL_RESIDUES else len(rs)
    base = poly_roots_mod_p(coeffs, p)
    if base == ALL_RESIDUES:
        base = list(range(p))
    fprime = [c * i for i, c in enumerate(coeffs)][1:]
    sols = list(base)
    mod = p
    for _ in range(1, k):
        nxt = []
        mod_next = mod * p
        for r in sols:
            fr = 0
            for c in reversed(coeffs):
                fr = (fr * r + c) % mod_next
            fpr = 0
            for c in reversed(fprime):
                fpr = (fpr * r + c) % p
            if fpr % p:
                t = (-(fr // mod) * pow(fpr, -1, p)) % p
                nxt.append(r + t * mod)
            elif fr % mod_next == 0:
                nxt.extend(r + t * mod for t in range(p))
        sols = nxt
        mod = mod_next
    return len(sols)

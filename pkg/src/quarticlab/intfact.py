"""Integer factorization: trial division, Brent-cycle Pollard rho, and
deterministic Miller-Rabin certification (n < 3.3e24).
"""

from __future__ import annotations

from math import gcd, isqrt
from typing import Dict, List, Optional, Tuple

from .errors import Undecided
from .modarith import is_prime, primes_up_to

try:  # big-int mulmod is measurably faster under gmpy2 when available
    from gmpy2 import mpz as _mpz
    from gmpy2 import gcd as _gcd
except ImportError:  # pragma: no cover
    _mpz = int
    _gcd = gcd

_TRIAL_BOUND = 100_000
_small_primes: Optional[List[int]] = None


def small_primes() -> List[int]:
    global _small_primes
    if _small_primes is None:
        _small_primes = primes_up_to(_TRIAL_BOUND)
    return _small_primes


def _brent(n0: int, max_iters: int) -> Optional[int]:
    """One nontrivial factor of composite odd n, or None if out of budget."""
    if n0 % 2 == 0:
        return 2
    n = _mpz(n0)
    for c in range(1, 64):
        y, m = _mpz(2), 128
        g, r, q = _mpz(1), 1, _mpz(1)
        iters = 0
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                k += m
                g = _gcd(q, n)
            r <<= 1
            iters += r
            if iters > max_iters:
                return None
        if g == n:
            g = _mpz(1)
            while g == 1:
                ys = (ys * ys + c) % n
                g = _gcd(abs(x - ys), n)
        if g != n:
            return int(g)
    return None


def factorize(
    n: int, rho_budget: int = 4_000_000, trial_bound: Optional[int] = None
) -> List[Tuple[int, int]]:
    """Complete factorization of 1 <= n, certified by deterministic MR.

    trial_bound = 0 skips trial division (callers that know n is rough).
    Raises Undecided (carrying the partial split) when the rho budget runs
    out before every cofactor is prime.
    """
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    out: Dict[int, int] = {}
    if trial_bound != 0:
        for p in small_primes():
            if trial_bound and p > trial_bound:
                break
            if p * p > n:
                break
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
    if n == 1:
        return sorted(out.items())
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = isqrt(m)
        if r * r == m:
            stack.extend((r, r))
            continue
        d = _brent(m, rho_budget)
        if d is None or d in (1, m):
            raise Undecided(
                f"factorization budget exhausted on cofactor {m}",
                partial=(sorted(out.items()), m),
            )
        stack.extend((d, m // d))
    return sorted(out.items())


def largest_prime_factor(n: int, rho_budget: int = 4_000_000) -> int:
    if n in (0, 1, -1):
        raise ValueError("no prime factors")
    return factorize(abs(n), rho_budget)[-1][0]


def is_squarefree(n: int, rho_budget: int = 4_000_000) -> bool:
    n = abs(n)
    if n == 0:
        return False
    return all(e == 1 for _, e in factorize(n, rho_budget))

"""Desk-scale counting experiments: largest-prime-factor scans over
quartic values, localized-divisor box counts with their internal
partition identities, and Type-I style Gamma_d counts with main-term
diagnostics.

Asymptotics are emphatically not reproducible at this scale; the
contract here is exact counting, exact threshold decisions, and
deterministic byte-stable reports.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, log
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import TooLarge, Undecided
from .intfact import factorize
from .localcount import DegreeOnePrime, NuBasis, norm_form_of_basis, rho_v
from .exactalg import MultiPoly
from .modarith import ALL_RESIDUES, is_prime, poly_roots_mod_p, primes_up_to
from .quartic import QuarticPoly


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        for p, e in self.factors:
            prod *= p**e
        if prod != self.n:
            raise ValueError("factor product does not reconstruct n")

    @property
    def largest_prime(self) -> int:
        return self.factors[-1][0] if self.factors else 1


def factorization(
    n: int, rho_budget: int = 4_000_000, trial_bound: Optional[int] = None
) -> Factorization:
    return Factorization(n, tuple(factorize(n, rho_budget, trial_bound)))


@dataclass(frozen=True)
class ScanRow:
    c: Fraction
    count: int
    proportion: Fraction
    x: int

    def to_dict(self):
        return {
            "c": str(self.c),
            "count": self.count,
            "proportion": str(self.proportion),
            "x": self.x,
        }


def _iroot(n: int, k: int) -> int:
    """floor(n^(1/k)) for n >= 0."""
    if n < 2 or k == 1:
        return n
    x = 1 << (-(-n.bit_length() // k))
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    return x


def pow_floor(X: int, e: Fraction) -> int:
    """floor(X^e) for positive rational e."""
    e = Fraction(e)
    return _iroot(X**e.numerator, e.denominator)


def pow_ceil(X: int, e: Fraction) -> int:
    f = pow_floor(X, e)
    e = Fraction(e)
    return f if f**e.denominator == X**e.numerator else f + 1


def _ge_threshold(v: int, x: int, num: int, den: int) -> bool:
    """v >= x^(num/den), exactly (v > 0)."""
    from .modarith import cmp_pow

    return v > 0 and cmp_pow(v, x, Fraction(num, den)) >= 0


# ----------------------------------------------------------------------
# largest-prime-factor scan


def _poly_value(coeffs: Sequence[int], n: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


def _scan_chunk(coeffs, lo, hi, x, roots_by_p, thresholds, rho_budget):
    """Counts per threshold over n in [lo, hi); returns (counts, undecided)."""
    ns = list(range(lo, hi))
    vals = [abs(_poly_value(coeffs, n)) for n in ns]
    best = [1] * len(ns)
    for p, roots in roots_by_p:
        for r in roots:
            start = lo + (r - lo) % p
            for idx in range(start - lo, len(ns), p):
                v = vals[idx]
                if v % p == 0:
                    v //= p
                    while v % p == 0:
                        v //= p
                    vals[idx] = v
                    best[idx] = p
    counts = [0] * len(thresholds)
    undecided = 0
    for i in range(len(ns)):
        R, b = vals[i], best[i]
        r_prime = R > 1 and is_prime(R)
        pplus: Optional[int] = None
        kmax = 0
        if R > 1 and not r_prime:
            k = 1
            while x ** (k + 1) <= R:
                k += 1
            kmax = k
        for t_idx, (num, den) in enumerate(thresholds):
            if R == 1:
                hit = _ge_threshold(b, x, num, den)
            elif r_prime:
                hit = _ge_threshold(R, x, num, den)
            elif num <= den:  # threshold <= x, and R has a factor > x
                hit = True
            elif _ge_threshold(R, x, num * kmax, den):
                hit = True  # largest >= R^(1/kmax) >= x^(num/den)
            elif not _ge_threshold(R, x, num + den, den):
                hit = False  # largest <= R/x < threshold
            else:
                if pplus is None:
                    try:
                        # the residual is x-rough: skip trial division
                        pplus = factorization(R, rho_budget, trial_bound=0).largest_prime
                    except Undecided:
                        pplus = -1
                if pplus < 0:
                    undecided += 1
                    hit = False
                else:
                    hit = _ge_threshold(pplus, x, num, den)
            if hit:
                counts[t_idx] += 1
    return counts, undecided


def lpf_scan(
    P: QuarticPoly,
    x: int,
    c_grid: Sequence[Fraction],
    threads: int = 1,
    rho_budget: int = 4_000_000,
) -> Dict:
    """For n in (x, 2x]: the proportion with P^+(P(n)) >= x^(1+c), per c.

    All prime factors <= x are removed by a quartic root sieve; threshold
    decisions on the residual are exact (bounds first, Pollard rho only on
    the ambiguous band). Output is independent of the thread count.
    """
    if x > 10**6:
        raise TooLarge("desk budget is x <= 10^6")
    coeffs = [P.c0, P.c1, P.c2, P.c3, 1]
    cs = [Fraction(c) for c in c_grid]
    thresholds = []
    for c in cs:
        e = 1 + c
        thresholds.append((e.numerator, e.denominator))
    roots_by_p = []
    for p in primes_up_to(x):
        roots = poly_roots_mod_p(coeffs, p)
        if roots == ALL_RESIDUES:
            roots = list(range(p))
        if roots:
            roots_by_p.append((p, roots))
    total = x
    nchunks = max(1, min(threads * 4, 64)) if threads > 1 else 1
    step = -(-total // nchunks)
    spans = [
        (x + 1 + i * step, min(x + 1 + (i + 1) * step, 2 * x + 1))
        for i in range(nchunks)
        if x + 1 + i * step < 2 * x + 1
    ]
    results = []
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            futs = [
                ex.submit(
                    _scan_chunk, coeffs, lo, hi, x, roots_by_p, thresholds, rho_budget
                )
                for lo, hi in spans
            ]
            results = [f.result() for f in futs]
    else:
        results = [
            _scan_chunk(coeffs, lo, hi, x, roots_by_p, thresholds, rho_budget)
            for lo, hi in spans
        ]
    counts = [0] * len(cs)
    undecided = 0
    for cvec, und in results:
        undecided += und
        for i, v in enumerate(cvec):
            counts[i] += v
    rows = [
        ScanRow(c, counts[i], Fraction(counts[i], total), x) for i, c in enumerate(cs)
    ]
    ordered = sorted(rows, key=lambda r: r.c)
    monotone = all(
        a.count >= b.count for a, b in zip(ordered, ordered[1:])
    )
    if not monotone:
        raise AssertionError("monotonicity violated; counting bug")
    return {
        "x": x,
        "n_scanned": total,
        "rows": [r.to_dict() for r in ordered],
        "undecided": undecided,
        "identities": [
            {"name": "proportions non-increasing in c", "pass": monotone}
        ],
    }


# ----------------------------------------------------------------------
# localized-divisor box counts


@dataclass(frozen=True)
class DistrinormParams:
    X: int
    box: Tuple[Tuple[int, int], Tuple[int, int], Tuple[int, int]]
    windows: Tuple[Tuple[Fraction, Fraction], ...]
    m: int
    u0: Tuple[int, int, int]
    p_window: Tuple[Fraction, Fraction]
    Df: int


def _euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out -= out // p
    return out


def _box_points(box):
    total = 1
    for lo, hi in box:
        total *= max(0, hi - lo)
    return total


def distrinorm_count(basis: NuBasis, f: MultiPoly, prm: DistrinormParams) -> Dict:
    """Exact |A|, summed |A(u0,m,p)| and |A_d(u0,m,p)| over the window
    tuples, plus the internal identities; the theorem's main term is
    emitted as a qualitative diagnostic only."""
    vol = _box_points(prm.box)
    if vol > 10**8:
        raise TooLarge(f"box of {vol} points")
    X = prm.X
    win_primes: List[List[int]] = []
    for th, thp in prm.windows:
        lo, hi = pow_ceil(X, th), pow_floor(X, thp)
        if hi > 10**7:
            raise TooLarge("window bound beyond desk scale")
        win_primes.append([p for p in primes_up_to(hi) if p >= lo])
    plo, phi = pow_ceil(X, prm.p_window[0]), pow_floor(X, prm.p_window[1])
    if phi > 10**7:
        raise TooLarge("p-window beyond desk scale")
    f_primes = [p for p in primes_up_to(phi) if p >= plo and p % prm.Df == 1 % prm.Df]
    formz, scale = norm_form_of_basis(basis)
    fvars = {v: i for i, v in enumerate(("a1", "a2", "a3"))}

    def eval3(g: MultiPoly, a):
        env = {"a1": a[0], "a2": a[1], "a3": a[2]}
        return int(Fraction(g.evaluate(env)))

    count_A = 0
    count_A_ump = 0  # sum over p of |A(u0, m, p)|
    sum_tuples = 0  # sum over (p, q_1..q_l) of |A_{q...}(u0,m,p)|
    sum_zero_one = 0
    exactly_one = True
    by_residue: Dict[Tuple[int, int, int], int] = {}
    zero_norm = 0
    (l1, h1), (l2, h2), (l3, h3) = prm.box
    for a1 in range(l1, h1):
        for a2 in range(l2, h2):
            for a3 in range(l3, h3):
                a = (a1, a2, a3)
                count_A += 1
                nv = eval3(formz, a)
                if nv == 0:
                    zero_norm += 1
                    continue
                in_class = all(
                    (a[i] - prm.u0[i]) % prm.m == 0 for i in range(3)
                )
                fv = eval3(f, a)
                multp = sum(1 for p in f_primes if fv % p == 0) if fv else len(f_primes)
                if in_class and multp:
                    count_A_ump += multp
                cnts = []
                for plist in win_primes:
                    cnts.append(sum(1 for p in plist if nv % p == 0))
                prod = 1
                for c_ in cnts:
                    prod *= c_
                if in_class and multp and prod:
                    sum_tuples += multp * prod
                    sum_zero_one += multp
                    if any(c_ != 1 for c_ in cnts):
                        exactly_one = False
                    key = tuple(x % prm.m for x in a)
                    by_residue[key] = by_residue.get(key, 0) + multp * prod
    # identity 1: per-residue recount equals the bucketed totals
    recount_ok = True
    sample = sorted(by_residue)[:3]
    for key in sample:
        c2 = 0
        for a1 in range(l1, h1):
            if (a1 - key[0]) % prm.m:
                continue
            for a2 in range(l2, h2):
                if (a2 - key[1]) % prm.m:
                    continue
                for a3 in range(l3, h3):
                    if (a3 - key[2]) % prm.m:
                        continue
                    a = (a1, a2, a3)
                    nv = eval3(formz, a)
                    if nv == 0:
                        continue
                    fv = eval3(f, a)
                    multp = (
                        sum(1 for p in f_primes if fv % p == 0)
                        if fv
                        else len(f_primes)
                    )
                    prod = 1
                    for plist in win_primes:
                        prod *= sum(1 for p in plist if nv % p == 0)
                    c2 += multp * prod
        if c2 != by_residue.get(key, 0):
            recount_ok = False
    # identity 2: factorization recount of window primes on a sample
    fact_ok = True
    checked = 0
    for a1 in range(l1, h1):
        for a2 in range(l2, h2):
            for a3 in range(l3, h3):
                if checked >= 50:
                    break
                a = (a1, a2, a3)
                nv = eval3(formz, a)
                if nv == 0:
                    continue
                fac = dict(factorize(abs(nv)))
                for plist in win_primes:
                    direct = sum(1 for p in plist if nv % p == 0)
                    via_fac = sum(1 for p in plist if p in fac)
                    if direct != via_fac:
                        fact_ok = False
                checked += 1
            if checked >= 50:
                break
        if checked >= 50:
            break
    main = 0.0
    if prm.p_window[0] > 0 and all(th > 0 for th, _ in prm.windows):
        main = (
            float(vol)
            * 2.0
            * log(float(prm.p_window[1] / prm.p_window[0]))
            / (prm.m**3 * _euler_phi(prm.Df))
        )
        for th, thp in prm.windows:
            main *= log(float(thp / th))
    identities = [
        {"name": "residue-partition recount", "pass": recount_ok},
        {"name": "window counts match factorization", "pass": fact_ok},
        {"name": "exactly one prime per window on counted points", "pass": exactly_one},
    ]
    return {
        "A": count_A,
        "A_u0_m_p": count_A_ump,
        "Ad_sum_tuples": sum_tuples,
        "Ad_sum_zero_one": sum_zero_one,
        "zero_norm_points": zero_norm,
        "norm_scale": scale,
        "identities": identities,
        "main_term": main,
    }


# ----------------------------------------------------------------------
# Type-I Gamma_d counts


def gamma_d_count(
    basis: NuBasis,
    box: Tuple[Tuple[int, int], Tuple[int, int], Tuple[int, int]],
    u0: Tuple[int, int, int],
    q: int,
    ds: Sequence[DegreeOnePrime],
) -> Dict:
    """|Gamma_d| by enumeration versus rho_v(d) vol / (q^3 N(d))."""
    vol = _box_points(box)
    if vol > 10**8:
        raise TooLarge(f"box of {vol} points")
    Nd = 1
    for d in ds:
        Nd *= d.p
    if len({d.p for d in ds}) != len(ds):
        raise ValueError("degree-one primes must have distinct p")
    if gcd(Nd, q) != 1:
        raise ValueError("need (N(d), q) = 1")
    conds = [(d.p, basis.nu_mod(d.c, d.p)) for d in ds]
    count_gamma = 0
    count_gd = 0
    by_residue: Dict[Tuple[int, int, int], int] = {}
    (l1, h1), (l2, h2), (l3, h3) = box
    for a1 in range(l1, h1):
        for a2 in range(l2, h2):
            for a3 in range(l3, h3):
                divisible = all(
                    (a1 * v[0] + a2 * v[1] + a3 * v[2]) % p == 0 for p, v in conds
                )
                if not divisible:
                    continue
                key = (a1 % q, a2 % q, a3 % q)
                by_residue[key] = by_residue.get(key, 0) + 1
                if key == tuple(u % q for u in u0):
                    count_gd += 1
                count_gamma += 1
    rho = Fraction(1)
    for d in ds:
        rho *= rho_v(basis, d)
    main = float(rho) * vol / (q**3 * Nd)
    partition_ok = sum(by_residue.values()) == count_gamma
    return {
        "Gamma_d_all_classes": count_gamma,
        "Gamma_d": count_gd,
        "main_term": main,
        "difference": count_gd - main,
        "rho_v": rho,
        "N_d": Nd,
        "identities": [
            {"name": "partition over residue classes", "pass": partition_ok}
        ],
    }


# ----------------------------------------------------------------------
# reports


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, (ScanRow,)):
        return _jsonable(obj.to_dict())
    return obj


def emit_report(results, fmt: str = "json", path: Optional[str] = None) -> bytes:
    """Deterministic, byte-stable serialization: sorted keys, rationals as
    num/den strings, newline-terminated."""
    if fmt == "json":
        data = (
            json.dumps(_jsonable(results), sort_keys=True, separators=(",", ":"))
            + "\n"
        ).encode()
    elif fmt == "csv":
        rows = results["rows"] if isinstance(results, dict) else results
        lines = ["c,count,proportion,x"]
        for r in rows:
            d = r.to_dict() if isinstance(r, ScanRow) else r
            lines.append(f'{d["c"]},{d["count"]},{d["proportion"]},{d["x"]}')
        data = ("\n".join(lines) + "\n").encode()
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
    return data

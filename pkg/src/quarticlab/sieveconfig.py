"""The explicit sieve-constant system and its constraint families, the
localized-divisor hypothesis checker, membership in the ideal set J via
conditions (C1)-(C5), and the friable-part membership test.

Every inequality is evaluated in exact rational arithmetic: the margins
are as small as 4e-6, so floating point is banned here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import Undecided
from .intfact import factorize, small_primes
from .localcount import LocalContext, local_context
from .modarith import primes_up_to
from .quartic import QuarticPoly, derived_constants

I_C: Tuple[Tuple[int, int], ...] = ((1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (2, 1))


@dataclass(frozen=True)
class SieveConfig:
    alpha0: Fraction
    theta: Dict[Tuple[int, int], Fraction]
    tau: Dict[Tuple[int, int], Fraction]
    theta0: Fraction
    X: int
    ell: int
    ell_prime: int
    tau_lo: Fraction
    tau_hi: Fraction

    def __post_init__(self):
        if tuple(sorted(self.theta)) != tuple(sorted(I_C)):
            raise ValueError("theta must be indexed exactly by the seven I_C pairs")
        if tuple(sorted(self.tau)) != tuple(sorted(I_C)):
            raise ValueError("tau must be indexed exactly by the seven I_C pairs")


@dataclass(frozen=True)
class ConstraintEntry:
    name: str
    satisfied: bool
    slack: Fraction

    def to_dict(self):
        return {"name": self.name, "pass": self.satisfied, "slack": str(self.slack)}


@dataclass(frozen=True)
class ConstraintReport:
    entries: Tuple[ConstraintEntry, ...]

    @property
    def all_pass(self) -> bool:
        return all(e.satisfied for e in self.entries)

    def failing(self) -> List[str]:
        return [e.name for e in self.entries if not e.satisfied]

    def entry(self, name: str) -> ConstraintEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_dict(self):
        return {"pass": self.all_pass, "constraints": [e.to_dict() for e in self.entries]}


def paper_config(X: int = 10**6) -> SieveConfig:
    """The explicit constant table, as exact rationals."""
    theta = {
        (1, 1): Fraction("0.1398"),
        (1, 2): Fraction("0.1401"),
        (1, 3): Fraction("0.1402"),
        (1, 4): Fraction("0.21"),
        (1, 5): Fraction("0.19"),
        (1, 6): Fraction("0.1799"),
        (2, 1): Fraction("0.001"),
    }
    tau = {ij: Fraction("0.0000001") for ij in I_C}
    alpha0 = Fraction("0.00001")
    scale = Fraction(4) / (1 + alpha0)
    return SieveConfig(
        alpha0=alpha0,
        theta=theta,
        tau=tau,
        theta0=Fraction("0.0001"),
        X=X,
        ell=6,
        ell_prime=3,
        tau_lo=theta[(2, 1)] * scale,
        tau_hi=(theta[(2, 1)] + tau[(2, 1)]) * scale,
    )


def _parse_key(k: str) -> Tuple[int, int]:
    ks = k.strip().lstrip("t")
    if len(ks) == 2 and ks.isdigit():
        return int(ks[0]), int(ks[1])
    i, j = ks.split(",")
    return int(i), int(j)


def load_config(path: str) -> SieveConfig:
    """TOML or JSON config; every numeric constant is a decimal or num/den
    string parsed to an exact Fraction."""
    if path.endswith(".json"):
        with open(path, "rb") as fh:
            data = json.load(fh)
    else:
        import tomli

        with open(path, "rb") as fh:
            data = tomli.load(fh)
    theta = {_parse_key(k): Fraction(str(v)) for k, v in data["theta"].items()}
    tau = {_parse_key(k): Fraction(str(v)) for k, v in data["tau"].items()}
    return SieveConfig(
        alpha0=Fraction(str(data["alpha0"])),
        theta=theta,
        tau=tau,
        theta0=Fraction(str(data.get("theta0", "0.0001"))),
        X=int(data.get("X", 10**6)),
        ell=int(data.get("ell", 6)),
        ell_prime=int(data.get("ell_prime", 3)),
        tau_lo=Fraction(str(data.get("tau_lo", "0.004"))),
        tau_hi=Fraction(str(data.get("tau_hi", "0.0040004"))),
    )


def verify_constants(cfg: SieveConfig) -> ConstraintReport:
    """The nine constraint families, with exact slacks (slack > 0 iff
    satisfied; for multi-part families the slack is the minimum margin)."""
    th, ta, a0 = cfg.theta, cfg.tau, cfg.alpha0
    entries: List[ConstraintEntry] = []

    def add(name: str, slack: Fraction):
        entries.append(ConstraintEntry(name, slack > 0, slack))

    # range: every constant in (0,1)
    vals = [a0] + [th[ij] for ij in I_C] + [ta[ij] for ij in I_C]
    add("range(0,1)", min(min(v for v in vals), min(1 - v for v in vals)))
    # con10: pairwise disjoint windows
    ivs = sorted((th[ij], th[ij] + ta[ij]) for ij in I_C)
    add("con10:disjoint", min(b[0] - a[1] for a, b in zip(ivs, ivs[1:])))
    # con1: theta_1j + tau_1j < 7/32
    add(
        "con1:upper7/32",
        min(Fraction(7, 32) - th[(1, j)] - ta[(1, j)] for j in range(1, 7)),
    )
    # con8
    add("con8:alpha0", Fraction(1, 1 << 15) - a0)
    s_theta = sum(th[(1, j)] for j in range(1, 7))
    s_tau = sum(ta[(1, j)] for j in range(1, 7))
    # con3
    add("con3:sum", 1 + a0 / 2 - (s_theta + s_tau))
    # con5: every window's theta above 1+alpha0-sum
    bound5 = 1 + a0 - s_theta
    add("con5:lower", min(th[ij] for ij in I_C) - bound5)
    # con4: the first three windows
    s3 = th[(1, 1)] + th[(1, 2)] + th[(1, 3)]
    t3 = ta[(1, 1)] + ta[(1, 2)] + ta[(1, 3)]
    add("con4:window", min(s3 - (1 + a0) / 4, (2 + a0) / 4 - t3 - s3))
    t21 = th[(2, 1)] + ta[(2, 1)]
    # con13
    add("con13:theta21", (2 + a0) / 200 - (s3 + t3) / 50 - t21)
    # con14
    add("con14:theta21", (4 * s3 / (1 + a0) - 1) * (2 + a0) / 800 - t21)
    return ConstraintReport(tuple(entries))


# ----------------------------------------------------------------------
# Localized-divisor hypotheses (the counting theorem's conditions)


def distrinorm_params(cfg: SieveConfig, scale: Fraction, ell: Optional[int] = None):
    """Map the constant table to hypothesis-checker inputs at a given
    exponent scale (log X / log A1 lies in [4/(1+a0), 4/(1+a0/2)])."""
    if ell is None:
        ell = cfg.ell
    thetas = [cfg.theta[(1, j)] * scale for j in range(1, ell + 1)]
    theta_primes = [
        (cfg.theta[(1, j)] + cfg.tau[(1, j)]) * scale for j in range(1, ell + 1)
    ]
    tau_lo = cfg.theta[(2, 1)] * scale
    tau_hi = (cfg.theta[(2, 1)] + cfg.tau[(2, 1)]) * scale
    return thetas, theta_primes, tau_lo, tau_hi


def verify_distrinorm_hypotheses(
    thetas: Sequence[Fraction],
    theta_primes: Sequence[Fraction],
    ell_prime: Optional[int],
    tau_lo: Fraction,
    tau_hi: Fraction,
    delta: Fraction,
) -> ConstraintReport:
    """Exact checks of the five window conditions plus the tau' bound.

    ell_prime = None searches for a witness in [1, ell-1]; the report's
    th5 entry records the best (maximal) margin over candidates.
    """
    ell = len(thetas)
    if len(theta_primes) != ell:
        raise ValueError("thetas and theta_primes must have equal length")
    entries: List[ConstraintEntry] = []

    def add(name, slack):
        entries.append(ConstraintEntry(name, slack > 0, slack))

    add("delta>0", Fraction(delta))
    add(
        "th1:nontrivial",
        min(
            min(t - delta for t in thetas)
            if thetas
            else Fraction(1),
            min(tp - t for t, tp in zip(thetas, theta_primes)),
            min(1 - delta - tp for tp in theta_primes),
        ),
    )
    ivs = sorted(zip(thetas, theta_primes))
    add(
        "th2:disjoint",
        min((b[0] - a[1] for a, b in zip(ivs, ivs[1:])), default=Fraction(1)),
    )
    add("th3:sum<4", 4 - delta - sum(theta_primes))
    add("th4:nosquare", min(t + sum(thetas) - 4 - delta for t in thetas))
    cands = [ell_prime] if ell_prime is not None else list(range(1, ell))
    best = None
    best_lp = None
    for lp in cands:
        if not 1 <= lp <= ell - 1:
            continue
        s_lo = sum(thetas[:lp])
        s_hi = sum(theta_primes[:lp])
        slack = min(s_lo - 1 - delta, 2 - delta - s_hi)
        if best is None or slack > best:
            best, best_lp = slack, lp
    add(f"th5:ellprime={best_lp}", best if best is not None else Fraction(-1))
    if best_lp is not None:
        s_hi = sum(theta_primes[:best_lp])
        s_lo = sum(thetas[:best_lp])
        bound = min((4 - 2 * s_hi) / 100, (s_lo - 1) / 100)
        add("tau':bound", bound - tau_hi)
    else:
        add("tau':bound", Fraction(-1))
    add("tau:ordered", tau_hi - tau_lo)
    return ConstraintReport(tuple(entries))


# ----------------------------------------------------------------------
# membership in the ideal set J


def _ge_pow(n: int, X: int, e: Fraction) -> bool:
    """n >= X^e, exactly (n, X positive integers, e a positive rational)."""
    from .modarith import cmp_pow

    return n > 0 and cmp_pow(n, X, e) >= 0


def _le_pow(n: int, X: int, e: Fraction) -> bool:
    from .modarith import cmp_pow

    return n <= 0 or cmp_pow(n, X, e) <= 0


def _gt_pow(n: int, X: int, e: Fraction) -> bool:
    from .modarith import cmp_pow

    return n > 0 and cmp_pow(n, X, e) > 0


@dataclass
class JDecision:
    decision: str  # "member" | "non_member" | "undecided"
    conditions: Dict[str, Optional[bool]]
    notes: Dict[str, object] = field(default_factory=dict)

    def to_dict(self):
        return {
            "decision": self.decision,
            "conditions": self.conditions,
            "notes": {k: str(v) for k, v in self.notes.items()},
        }


def _factor_or_none(n: int, budget: int):
    try:
        return factorize(abs(n), budget)
    except Undecided:
        return None


def membership_J(
    P: QuarticPoly,
    a: Sequence[int],
    X: int,
    cfg: SieveConfig,
    factor_budget: int = 2_000_000,
    ctx: Optional[LocalContext] = None,
) -> JDecision:
    """Conditions (C1)-(C5) for alpha = a0+a1r+a2r^2+a3r^3 at scale X.

    Three-valued: factorization-limited conditions report None and the
    decision becomes "undecided" rather than a wrong boolean.
    """
    if ctx is None:
        ctx = local_context(P)
    a0, a1, a2, a3 = (int(x) for x in a)
    cond: Dict[str, Optional[bool]] = {}
    notes: Dict[str, object] = {}
    env = {"a0": a0, "a1": a1, "a2": a2, "a3": a3}
    env3 = {"a1": a1, "a2": a2, "a3": a3}
    qv = int(ctx.suite.q.evaluate(env3))
    q3v = int(ctx.suite.q3.evaluate(env3))
    b14v = int(ctx.suite.B14.evaluate(env))
    npv = int(ctx.suite.NP.evaluate(env))
    q1v = Fraction(ctx.q1.evaluate(env3))
    q2v = Fraction(ctx.q2.evaluate(env3))
    assert q1v.denominator == 1 and q2v.denominator == 1
    q1v, q2v = int(q1v), int(q2v)
    q0, dq2, _, _ = derived_constants(P)
    notes["q0_upper"] = q0
    notes["Dq2"] = dq2

    # (C5)(a)
    cond["C5a"] = (
        gcd(a2, a3) == 30 and a2 % 900 == 30 and a3 % 900 == 30 and a1 % 30 == 1
    )
    # (C1) squarefree q
    if qv == 0:
        cond["C1"] = False
    else:
        sq = None
        for p in small_primes()[:200]:
            if qv % (p * p) == 0:
                sq = False
                break
        if sq is None:
            fac = _factor_or_none(qv, factor_budget)
            sq = None if fac is None else all(e == 1 for _, e in fac)
        cond["C1"] = sq
    # (C2) size conditions
    cond["C2"] = (
        _ge_pow(qv, X, Fraction(3, 2))
        and _ge_pow(abs(b14v), X, Fraction(3, 4))
        and _ge_pow(npv, X, 1 + cfg.alpha0 / 2)
        and _le_pow(npv, X, 1 + cfg.alpha0)
    )
    # (C3) prime-ideal factor witness
    fac_n = _factor_or_none(npv, factor_budget) if npv else []
    if fac_n is None:
        cond["C3"] = None
    else:
        ok3 = False
        for p, _e in fac_n or []:
            if _gt_pow(p, X, 4 * cfg.alpha0) and _le_pow(p, X, 5 * cfg.alpha0):
                # degree-one witness: some root c of P mod p with alpha(c) = 0
                from .modarith import poly_roots_mod_p

                roots = poly_roots_mod_p(list(P.coeffs) + [1], p)
                if roots == "all":
                    continue
                for c in roots:
                    if (a0 + a1 * c + a2 * c * c + a3 * c**3) % p == 0:
                        ok3 = True
                        break
            if ok3:
                break
        cond["C3"] = ok3
    # (C4) factorization patterns
    fac1 = _factor_or_none(q1v, factor_budget) if q1v else None
    fac2 = _factor_or_none(q2v, factor_budget) if q2v else None
    if fac1 is None or fac2 is None or q1v == 0 or q2v == 0:
        cond["C4"] = None if (q1v and q2v) else False
    else:
        ok4 = True
        rough = []
        for j in range(1, 7):
            lo_e = cfg.theta[(1, j)]
            hi_e = cfg.theta[(1, j)] + cfg.tau[(1, j)]
            inwin = [
                p
                for p, _e in fac1
                if _ge_pow(p, X, lo_e) and _le_pow(p, X, hi_e)
            ]
            if len(inwin) != 1:
                ok4 = False
                break
        if ok4:
            q17 = abs(q1v)
            for j in range(1, 7):
                lo_e = cfg.theta[(1, j)]
                hi_e = cfg.theta[(1, j)] + cfg.tau[(1, j)]
                for p, _e in fac1:
                    if _ge_pow(p, X, lo_e) and _le_pow(p, X, hi_e):
                        q17 //= p
            ok4 = all(
                p > q0
                for p, _e in factorize(q17)
            ) if q17 > 1 else True
        if ok4:
            lo_e, hi_e = cfg.theta[(2, 1)], cfg.theta[(2, 1)] + cfg.tau[(2, 1)]
            ok21 = False
            for p, _e in fac2:
                if (
                    p % dq2 == 1 % dq2
                    and _ge_pow(p, X, lo_e)
                    and _le_pow(p, X, hi_e)
                ):
                    q22 = abs(q2v) // p
                    if q22 == 1 or all(pp > q0 for pp, _ in factorize(q22)):
                        ok21 = True
                        break
            ok4 = ok21
        cond["C4"] = ok4
    # (C5) (b)-(e)
    cond["C5b"] = gcd(npv, q0) == 1
    cond["C5c"] = gcd(qv, q3v) == 1
    cond["C5d"] = gcd(qv, b14v) == 1
    cond["C5e"] = gcd(qv, a2 * a3) == 1
    if any(v is False for v in cond.values()):
        decision = "non_member"
    elif any(v is None for v in cond.values()):
        decision = "undecided"
    else:
        decision = "member"
    return JDecision(decision, cond, notes)


def friable_membership(
    P: QuarticPoly, n: int, X: int, delta: Fraction, factor_budget: int = 0
) -> bool:
    """Whether the X-smooth part of P(n) (full multiplicity over rational
    primes <= X, the conservative stand-in for small-norm prime ideals)
    is at least X^(1+delta). Exact for X <= 10^6."""
    if not X < n <= 2 * X:
        raise ValueError("need X < n <= 2X")
    if X > 10**6:
        raise Undecided("trial-division bound exceeded; no exact answer")
    val = n**4 + P.c3 * n**3 + P.c2 * n * n + P.c1 * n + P.c0
    val = abs(val)
    smooth = 1
    for p in primes_up_to(X):
        while val % p == 0:
            smooth *= p
            val //= p
    return _ge_pow(smooth, X, 1 + Fraction(delta))

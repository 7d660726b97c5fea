import random
from fractions import Fraction

import pytest

from conftest import analyzed
from quarticlab.errors import TooLarge
from quarticlab.exactalg import MultiPoly
from quarticlab.experiments import (
    DistrinormParams,
    ScanRow,
    distrinorm_count,
    emit_report,
    factorization,
    gamma_d_count,
    lpf_scan,
    pow_ceil,
    pow_floor,
)
from quarticlab.intfact import factorize, largest_prime_factor
from quarticlab.localcount import (
    DegreeOnePrime,
    degree_one_primes,
    nu_basis_from_normdata,
    power_nu_basis,
)
from quarticlab.normform import verify_normform


def test_factorization_examples():
    assert factorization(18).factors == ((2, 1), (3, 2))
    assert factorization(10002).factors == ((2, 1), (3, 1), (1667, 1))
    assert factorization(83).factors == ((83, 1),)
    assert factorization(1).factors == ()
    assert largest_prime_factor(3) == 3  # P(1) for X^4+2


def test_factorize_remultiplication_seeded():
    rng = random.Random(42)
    for _ in range(1500):
        n = rng.randint(2, 10**12)
        prod = 1
        for p, e in factorize(n):
            prod *= p**e
        assert prod == n


@pytest.mark.slow
def test_factorize_remultiplication_bulk():
    rng = random.Random(43)
    for _ in range(10**4):
        n = rng.randint(2, 10**12)
        prod = 1
        for p, e in factorize(n):
            prod *= p**e
        assert prod == n


def test_pow_bounds():
    assert pow_floor(100, Fraction(1, 2)) == 10
    assert pow_ceil(100, Fraction(1, 2)) == 10
    assert pow_floor(10, Fraction(3, 2)) == 31
    assert pow_ceil(10, Fraction(3, 2)) == 32


def test_lpf_scan_exact_against_bruteforce():
    """Oracle: factor every P(n) outright and compare each threshold count."""
    P = analyzed((2, 0, 0, 0))
    x = 300
    grid = [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1), Fraction(3, 2)]
    rep = lpf_scan(P, x, grid)
    for row in rep["rows"]:
        c = Fraction(row["c"])
        e = 1 + c
        want = 0
        for n in range(x + 1, 2 * x + 1):
            pp = largest_prime_factor(n**4 + 2)
            if pp ** e.denominator >= x**e.numerator:
                want += 1
        assert row["count"] == want, c
    assert rep["undecided"] == 0


def test_lpf_scan_monotone_and_thread_stable():
    P = analyzed((2, 0, 0, 0))
    grid = [Fraction(0), Fraction(1, 2), Fraction(1)]
    r1 = lpf_scan(P, 2000, grid)
    r2 = lpf_scan(P, 2000, grid, threads=4)
    assert emit_report(r1) == emit_report(r2)
    counts = [row["count"] for row in r1["rows"]]
    assert counts == sorted(counts, reverse=True)


def test_lpf_scan_budget():
    with pytest.raises(TooLarge):
        lpf_scan(analyzed((2, 0, 0, 0)), 10**7, [Fraction(0)])


def _x4p2_field():
    nf = verify_normform(analyzed((2, 0, 0, 0)))
    return nu_basis_from_normdata(nf)


def test_distrinorm_degenerate_no_windows():
    nb = _x4p2_field()
    a1sq = MultiPoly.var("a1") ** 2
    f = a1sq + 2 * MultiPoly.var("a3") ** 2
    prm = DistrinormParams(
        X=100,
        box=((5, 25), (5, 25), (5, 25)),
        windows=(),
        m=1,
        u0=(0, 0, 0),
        p_window=(Fraction(1, 4), Fraction(1, 2)),
        Df=8,
    )
    rep = distrinorm_count(nb, f, prm)
    assert rep["A"] == 20**3
    for ident in rep["identities"]:
        assert ident["pass"], ident


def test_distrinorm_identities_narrow_windows():
    nb = _x4p2_field()
    f = MultiPoly.var("a1") ** 2 + 2 * MultiPoly.var("a3") ** 2
    X = 120
    prm = DistrinormParams(
        X=X,
        box=((20, 60), (20, 60), (20, 60)),
        windows=((Fraction(33, 100), Fraction(42, 100)),),
        m=2,
        u0=(1, 0, 1),
        p_window=(Fraction(25, 100), Fraction(65, 100)),
        Df=8,
    )
    rep = distrinorm_count(nb, f, prm)
    assert rep["A"] == 40**3
    names = {i["name"]: i["pass"] for i in rep["identities"]}
    assert names["residue-partition recount"]
    assert names["window counts match factorization"]
    assert rep["Ad_sum_tuples"] >= rep["Ad_sum_zero_one"] > 0


def test_distrinorm_budget():
    nb = _x4p2_field()
    f = MultiPoly.var("a1") ** 2
    prm = DistrinormParams(
        X=100, box=((0, 1000), (0, 1000), (0, 1000)), windows=(), m=1,
        u0=(0, 0, 0), p_window=(Fraction(1, 4), Fraction(1, 2)), Df=8,
    )
    with pytest.raises(TooLarge):
        distrinorm_count(nb, f, prm)


def test_gamma_count_full_period_box_is_exact():
    nb = power_nu_basis([2, 0, 0, 0, 1])
    d = degree_one_primes([2, 0, 0, 0, 1], 1, p_start=5)[0]
    side = 2 * d.p * max(1, 60 // (2 * d.p))  # a full period in every axis
    box = ((1, side + 1),) * 3
    rep = gamma_d_count(nb, box, (0, 0, 0), 2, [d])
    assert rep["identities"][0]["pass"]
    assert rep["Gamma_d"] == rep["main_term"]


def test_gamma_count_congruence_partition_sums():
    nb = power_nu_basis([2, 0, 0, 0, 1])
    d = DegreeOnePrime(3, 1)
    box = ((1, 31), (1, 31), (1, 31))
    total = gamma_d_count(nb, box, (0, 0, 0), 1, [d])["Gamma_d"]
    parts = 0
    for u1 in range(2):
        for u2 in range(2):
            for u3 in range(2):
                parts += gamma_d_count(nb, box, (u1, u2, u3), 2, [d])["Gamma_d"]
    assert parts == total


def test_gamma_boundary_tolerance():
    # cube of side 10p: |Gamma_d| within 5 percent of vol/p
    nb = power_nu_basis([2, 0, 0, 0, 1])
    d = DegreeOnePrime(11, 5)
    side = 110
    rep = gamma_d_count(nb, ((1, side + 1), (1, side + 1), (1, side + 1)), (0, 0, 0), 1, [d])
    vol_over_p = side**3 / 11
    assert abs(rep["Gamma_d"] - vol_over_p) <= 0.05 * vol_over_p


def test_emit_report_determinism_and_csv():
    rows = [ScanRow(Fraction(1, 2), 3, Fraction(3, 10), 10)]
    b1 = emit_report({"rows": rows, "z": Fraction(1, 3)}, "json")
    b2 = emit_report({"z": Fraction(1, 3), "rows": rows}, "json")
    assert b1 == b2
    assert b"1/3" in b1
    csv = emit_report({"rows": rows}, "csv").decode()
    assert csv.splitlines()[0] == "c,count,proportion,x"
    assert csv.splitlines()[1] == "1/2,3,3/10,10"
    empty = emit_report({"rows": []}, "json")
    assert empty.endswith(b"\n")

import random
from fractions import Fraction
from math import gcd

import pytest

from conftest import SIX_NAMED, analyzed, random_irreducible_quartics
from oracles import printed_B13, printed_B14, printed_U, printed_V
from quarticlab.cofactors import (
    alpha_divides,
    build_suite,
    identity_report,
    k_alpha,
    mult_matrix,
    norm_form,
    q_product_check,
)
from quarticlab.errors import NotCoprime
from quarticlab.exactalg import MultiPoly

_suites = {}


def suite_of(cs):
    if cs not in _suites:
        _suites[cs] = build_suite(analyzed(cs))
    return _suites[cs]


def test_mult_matrix_x4p2():
    M = mult_matrix(analyzed((2, 0, 0, 0)))
    a = [MultiPoly.var(f"a{i}") for i in range(4)]
    assert [M[i][0] for i in range(4)] == a
    assert M[0][1] == -2 * a[3]
    assert M[1][1] == a[0]
    assert M[2][1] == a[1]
    assert M[3][1] == a[2]


def test_mult_matrix_symbolic_entry():
    P = analyzed((2, 0, 0, 0))
    M = mult_matrix(P, symbolic=True)
    a3 = MultiPoly.var("a3")
    c0 = MultiPoly.var("c0")
    assert M[0][1] == -(c0 * a3)
    # column 1 is always (a0, a1, a2, a3)
    assert [M[i][0] for i in range(4)] == [MultiPoly.var(f"a{i}") for i in range(4)]


def test_norm_form_values():
    P = analyzed((2, 0, 0, 0))
    NP = norm_form(P)
    assert NP.evaluate({"a0": 1, "a1": 1, "a2": 0, "a3": 0}) == 3
    assert NP.evaluate({"a0": 1, "a1": 0, "a2": 0, "a3": 0}) == 1
    # N(n - r1) = P(n)
    for n in (2, 5, -3):
        val = NP.evaluate({"a0": n, "a1": -1, "a2": 0, "a3": 0})
        assert val == n**4 + 2


def test_suite_identities_on_named():
    for cs in SIX_NAMED.values():
        for name, ok in identity_report(analyzed(cs)):
            assert ok, (cs, name)


def test_suite_identities_on_random():
    for cs in random_irreducible_quartics(4, seed=99):
        for name, ok in identity_report(analyzed(cs)):
            assert ok, (cs, name)


def test_q3_examples():
    s = suite_of((2, 0, 0, 0))
    a1, a2, a3 = (MultiPoly.var(n) for n in ("a1", "a2", "a3"))
    assert s.q3 == a2 * a2 - a1 * a3
    assert s.q3.degree("a0") == 0
    assert s.q.is_homogeneous() and s.q.total_degree() == 6


def test_b_values_at_point():
    s = suite_of((2, 0, 0, 0))
    a = (1, 1, 0, 0)
    assert s.eval_form(s.B14, a) == -1
    assert s.eval_form(s.B13, a) == 1
    assert s.eval_form(s.NP, a) == 3


def test_printed_formulas_match():
    for cs in list(SIX_NAMED.values()) + random_irreducible_quartics(3, seed=4):
        s = suite_of(cs)
        c0, c1, c2, c3 = cs
        assert s.B13 == printed_B13(c0, c1, c2, c3)
        assert s.B14 == printed_B14(c0, c1, c2, c3)
        assert s.U == printed_U(c0, c1, c2, c3)
        assert s.V == printed_V(c0, c1, c2, c3)


def test_tP_is_inverse_disc():
    s = suite_of((1, 1, 1, 1))
    assert s.tP == Fraction(1, 125)


def test_k_alpha_examples():
    s = suite_of((2, 0, 0, 0))
    assert k_alpha(s, (1, 1, 0, 0)) == 2
    assert k_alpha(s, (1, 0, 0, 0)) == 0  # unit: modulus 1
    # a = (c, 1, 0, 0) with P(-c) = p prime: k = p - c
    for c in (1, 3):
        p = (-c) ** 4 + 2
        k = k_alpha(s, (c, 1, 0, 0))
        assert k == (p - c) % p
        assert (k**4 + 2) % p == 0  # P(k) = 0 mod p: k is the root class


def test_k_alpha_requires_coprime():
    s = suite_of((2, 0, 0, 0))
    # alpha = r1^2: N = 4 and B14 vanishes, so the inverse cannot exist
    assert s.eval_form(s.B14, (0, 0, 1, 0)) == 0
    with pytest.raises(NotCoprime):
        k_alpha(s, (0, 0, 1, 0))
    # alpha = r1 itself is fine: N = 2, B14 = -1, and k = 0 (even n only)
    assert k_alpha(s, (0, 1, 0, 0)) == 0


def test_ideal_membership_enumeration():
    P = analyzed((2, 0, 0, 0))
    assert [alpha_divides(P, (1, 1, 0, 0), n) for n in range(3)] == [False, False, True]


def test_lemma_r_full_period_equivalence():
    """n = k mod N  <=>  B14*n = B24 mod N over a full period, for 100
    seeded (P, a) pairs with the coprimality hypothesis."""
    rng = random.Random(17)
    polys = list(SIX_NAMED.values())
    done = 0
    while done < 100:
        cs = polys[rng.randrange(len(polys))]
        s = suite_of(cs)
        a = tuple(rng.randint(-3, 3) for _ in range(4))
        n_val = s.eval_form(s.NP, a)
        if n_val == 0 or abs(n_val) > 400:
            continue
        N = abs(int(n_val))
        b14 = int(s.eval_form(s.B14, a))
        if gcd(b14, N) != 1:
            continue
        b24 = int(s.eval_form(s.B13, a)) - cs[3] * b14
        k = k_alpha(s, a)
        for n in range(N):
            assert ((n - k) % N == 0) == ((b14 * n - b24) % N == 0)
        done += 1


def test_q_product_check_named():
    rep = q_product_check(analyzed((2, 0, 0, 0)), samples=6, seed=1)
    assert rep["pass"] and rep["sign"] in (-1, 1)
    rep = q_product_check(analyzed((1, 1, 1, 1)), samples=5, seed=2)
    assert rep["pass"]


def test_q_homogeneous_scaling():
    s = suite_of((2, 0, 0, 0))
    a = (0, 2, -3, 5)
    t = 3
    qa = s.eval_form(s.q, a)
    qta = s.eval_form(s.q, (0, t * a[1], t * a[2], t * a[3]))
    assert qta == t**6 * qa
    # zero point
    assert s.eval_form(s.q, (0, 0, 0, 0)) == 0

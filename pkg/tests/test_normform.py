from fractions import Fraction

import pytest

from conftest import SIX_NAMED, analyzed, find_c4d4_quartics, random_irreducible_quartics
from quarticlab.cofactors import build_suite
from quarticlab.errors import WrongGaloisClass
from quarticlab.exactalg import MultiPoly, clear_denominators, eval_on_ball, uni_coeffs
from quarticlab.normform import (
    delta14_link,
    incomplete_norm_resultant,
    nu3_over_theta,
    split_q,
    sum_resolvent_sextic,
    theta_minpoly,
    verify_normform,
)
from quarticlab.quartic import is_irreducible_quartic

a1, a2, a3 = (MultiPoly.var(n) for n in ("a1", "a2", "a3"))

_nf = {}


def normdata(cs):
    if cs not in _nf:
        _nf[cs] = verify_normform(analyzed(cs))
    return _nf[cs]


def test_split_x4p2():
    P = analyzed((2, 0, 0, 0))
    q1, q2 = split_q(P)
    assert q2 == a1 * a1 + 2 * (a3 * a3)
    s = build_suite(P)
    assert q1 * q2 == s.q


def test_split_phi5_exact_expansion():
    # s-roots of X^2+X-1, e-roots of X^2-2X+1 = (X-1)^2; oracle q1*q2 = q
    P = analyzed((1, 1, 1, 1))
    q1, q2 = split_q(P)
    expected = (
        a1 * a1 - a1 * a2 + a1 * a3 - a2 * a2 + 2 * a2 * a3 - a3 * a3
    )
    assert q2 == expected
    assert q1 * q2 == build_suite(P).q


def test_split_homogeneity():
    for cs in SIX_NAMED.values():
        q1, q2 = split_q(analyzed(cs))
        assert q1.is_homogeneous() and q1.total_degree() == 4
        assert q2.is_homogeneous() and q2.total_degree() == 2


def test_split_rejects_wrong_class():
    P = analyzed(random_irreducible_quartics(1, seed=20250809)[0])
    with pytest.raises(WrongGaloisClass):
        split_q(P)


def test_branch_pairing_identity():
    # the successful branch satisfies (sA-sB)(eA-eB) = 2c1 - c3 t1
    for cs in SIX_NAMED.values():
        P = analyzed(cs)
        ds = P.c3**2 - 4 * P.t2
        de = P.t1**2 - 4 * P.c0
        g2 = ds * de
        from math import isqrt

        assert g2 >= 0 and isqrt(g2) ** 2 == g2
        assert g2 == (2 * P.c1 - P.c3 * P.t1) ** 2


def test_sum_resolvent_x4p2():
    P = analyzed((2, 0, 0, 0))
    s6 = sum_resolvent_sextic(P)
    x = MultiPoly.var("x")
    assert s6 == x * x * (x**4 - 8)


def test_theta_minpoly_examples():
    assert uni_coeffs(theta_minpoly(analyzed((2, 0, 0, 0)))) == [-8, 0, 0, 0, 1]
    m = theta_minpoly(analyzed((1, 1, 1, 1)))
    cs = [int(c) for c in uni_coeffs(m)]
    assert len(cs) == 5 and cs[4] == 1
    assert is_irreducible_quartic(cs[0], cs[1], cs[2], cs[3])


def test_theta_ball_containment():
    for cs in SIX_NAMED.values():
        P = analyzed(cs)
        m = theta_minpoly(P)
        theta = P.roots[0] + P.roots[2]  # r1 + r3 crosses the pairing
        assert eval_on_ball(uni_coeffs(m), theta).contains_zero()


def test_nu3_x4p2():
    P = analyzed((2, 0, 0, 0))
    g = nu3_over_theta(P)
    x = MultiPoly.var("x")
    assert g == Fraction(1, 2) * (x * x)


def test_nu3_conjugate_consistency():
    P = analyzed((3, 3, 0, 0))
    m = theta_minpoly(P)
    g = nu3_over_theta(P, m)
    assert g.degree("x") >= 2
    r = P.roots
    for (i, j) in ((0, 2), (0, 3), (1, 2), (1, 3)):
        theta = r[i] + r[j]
        nu3 = r[i] * r[i] + r[i] * r[j] + r[j] * r[j]
        coeffs = uni_coeffs(g, "x")
        acc = eval_on_ball(coeffs, theta)
        diff = acc - nu3
        assert diff.contains_zero()


def test_verify_normform_named():
    for cs in SIX_NAMED.values():
        nf = normdata(cs)
        assert nf.sign in (1, -1)
        res = incomplete_norm_resultant(nf.theta_minpoly, nf.nu3_in_theta)
        assert nf.sign * nf.q1 == res


def test_normform_trivial_values():
    nf = normdata((2, 0, 0, 0))
    assert abs(nf.q1.evaluate({"a1": 1, "a2": 0, "a3": 0})) == 1
    # |q1(0,1,0)| = |N(theta)| = |constant term of the minimal polynomial|
    assert abs(nf.q1.evaluate({"a1": 0, "a2": 1, "a3": 0})) == 8
    assert nf.norm_of(1, 0, 0) == 1


def test_delta14_link_named():
    for cs in SIX_NAMED.values():
        P = analyzed(cs)
        nf = normdata(cs)
        assert delta14_link(P, q2=nf.q2)


def test_delta14_against_printed_h():
    from oracles import printed_h

    for cs in SIX_NAMED.values():
        P = analyzed(cs)
        s = build_suite(P)
        b14 = s.B14
        d14 = b14.coeff_of("a0", 1) ** 2 - 4 * b14.coeff_of("a0", 2) * b14.coeff_of("a0", 0)
        assert d14 == -(s.q3 * printed_h(*cs))


def test_content_and_denominators():
    for cs in list(SIX_NAMED.values()) + find_c4d4_quartics(8, seed=6):
        P = analyzed(cs)
        nf = verify_normform(P)
        d1v = P.c3**2 - 4 * P.t2
        for f in (nf.q1, nf.q2):
            g, den = clear_denominators(f)
            from quarticlab.exactalg import content, primitive_part

            assert content(g) >= 1
            assert den <= max(4, 4 * d1v * d1v)


def test_normform_random_c4d4():
    for cs in find_c4d4_quartics(20, seed=123):
        P = analyzed(cs)
        nf = verify_normform(P)
        assert nf.sign * nf.q1 == incomplete_norm_resultant(
            nf.theta_minpoly, nf.nu3_in_theta
        )
        assert delta14_link(P, q2=nf.q2)

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quarticlab.errors import (
    DegreeTooLow,
    InexactDivision,
    NotSquarefree,
    ZeroPolynomial,
)
from quarticlab.exactalg import (
    ComplexBall,
    MultiPoly,
    certified_roots,
    clear_denominators,
    discriminant,
    divexact,
    eval_on_ball,
    parse_poly_text,
    poly_arith,
    poly_sqrt,
    poly_to_csv,
    reconstruct_rational,
    resultant,
    sqrt_lower,
    sqrt_upper,
    sylvester_matrix,
    uni_coeffs,
    uni_gcd,
)
from oracles import leibniz_det

x = MultiPoly.var("x")
a1, a2, a3 = (MultiPoly.var(n) for n in ("a1", "a2", "a3"))
PHI5 = x**4 + x**3 + x**2 + x + 1


def test_difference_of_squares():
    assert poly_arith(a1 + a2, a1 - a2, "mul") == a1**2 - a2**2


def test_divexact_identity_divisor():
    f = a2**2 - a1 * a3
    assert poly_arith(f, MultiPoly.const(1, f.variables), "divexact") == f


def test_divexact_inexact_carries_leading_term():
    with pytest.raises(InexactDivision) as ei:
        divexact(a1**2 + 1, a1 + 1)
    assert ei.value.leading_term is not None


def test_divexact_by_zero():
    with pytest.raises(ZeroPolynomial):
        divexact(a1, MultiPoly.const(0, ("a1",)))


def test_divexact_roundtrip_seeded():
    rng = random.Random(13)
    names = ("a1", "a2", "a3")
    for _ in range(1000):
        f = MultiPoly(names, {})
        g = MultiPoly(names, {})
        for _ in range(rng.randint(1, 4)):
            e = tuple(rng.randint(0, 2) for _ in range(3))
            f = f + MultiPoly(names, {e: rng.randint(-9, 9)})
        for _ in range(rng.randint(1, 3)):
            e = tuple(rng.randint(0, 2) for _ in range(3))
            g = g + MultiPoly(names, {e: rng.randint(-9, 9)})
        if g.is_zero():
            continue
        assert divexact(f * g, g) == f


def test_resultant_linear_evaluates():
    assert resultant(x - 2, x**2 + 1, "x") == MultiPoly.const(5, ())


def test_resultant_self_vanishes():
    f = x**4 + 2
    assert resultant(f, f, "x").is_zero()


def test_resultant_swap_sign_seeded():
    rng = random.Random(7)
    for _ in range(30):
        f = MultiPoly.from_coeffs([rng.randint(-5, 5) for _ in range(rng.randint(2, 5))] + [1], "x")
        g = MultiPoly.from_coeffs([rng.randint(-5, 5) for _ in range(rng.randint(2, 5))] + [1], "x")
        m, n = f.degree("x"), g.degree("x")
        assert resultant(f, g, "x") * (-1) ** (m * n) == resultant(g, f, "x")


def test_resultant_root_product_formula():
    rng = random.Random(3)
    for _ in range(25):
        fr = [rng.randint(-6, 6) for _ in range(rng.randint(1, 4))]
        gr = [rng.randint(-6, 6) for _ in range(rng.randint(1, 4))]
        f = MultiPoly.const(1, ("x",))
        for r in fr:
            f = f * (x - r)
        g = MultiPoly.const(1, ("x",))
        for r in gr:
            g = g * (x - r)
        prod = 1
        for af in fr:
            for bg in gr:
                prod *= af - bg
        assert resultant(f, g, "x") == MultiPoly.const(prod, ())


def test_resultant_matches_leibniz_oracle():
    f = x**4 + 2
    fp = 4 * x**3
    assert resultant(f, fp, "x") == leibniz_det(sylvester_matrix(f, fp, "x"))
    g = x**3 - 2 * x + 5
    assert resultant(f, g, "x") == leibniz_det(sylvester_matrix(f, g, "x"))


def test_resultant_degree_bookkeeping_homogeneous():
    # Res(B13, B14; a0) for a quartic is homogeneous of degree 8 in a1..a3
    from quarticlab.cofactors import build_suite
    from quarticlab.quartic import QuarticPoly

    s = build_suite(QuarticPoly.analyze(3, 3, 0, 0))
    assert s.R0.is_homogeneous() and s.R0.total_degree() == 8


def test_discriminants():
    assert discriminant(x**2 + 1) == -4
    assert discriminant(x**4 + 2) == 2048
    assert discriminant(PHI5) == 125
    with pytest.raises(DegreeTooLow):
        discriminant(x + 1)


def test_disc_oracle_sylvester_leibniz():
    # independent oracle: Leibniz determinant of the Sylvester matrix
    for f in (x**4 + 2, PHI5):
        n = f.degree("x")
        fp = MultiPoly.from_coeffs(
            [c * i for i, c in enumerate(uni_coeffs(f, "x"))][1:], "x"
        )
        det = leibniz_det(sylvester_matrix(f, fp, "x"))
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        assert MultiPoly.const(sign, ()) * det == MultiPoly.const(discriminant(f), ())


def test_certified_roots_basic():
    balls = certified_roots(x**2 - 1, 80)
    assert len(balls) == 2
    assert any(b.contains_real(1) for b in balls)
    assert any(b.contains_real(-1) for b in balls)


def test_certified_roots_x4_plus_2():
    balls = certified_roots(x**4 + 2, 128)
    assert len(balls) == 4
    for b in balls:
        assert b.radius <= Fraction(1, 2**64)
        # |z|^4 = 2 to within the certified radius
        m4 = (b.re**2 + b.im**2) ** 2
        assert abs(m4 - 2) < Fraction(1, 2**40)
        assert eval_on_ball(uni_coeffs(x**4 + 2, "x"), b).contains_zero()


def test_certified_roots_phi5_unit_circle():
    for b in certified_roots(PHI5, 96):
        assert abs(b.re**2 + b.im**2 - 1) < Fraction(1, 2**30)


def test_certified_roots_rejects_nonsquarefree():
    with pytest.raises(NotSquarefree):
        certified_roots((x - 1) ** 2 * (x + 2), 64)


def test_ball_eval_contains_zero_random():
    rng = random.Random(11)
    for _ in range(10):
        coeffs = [rng.randint(-9, 9) for _ in range(rng.randint(2, 4))] + [1]
        f = MultiPoly.from_coeffs(coeffs, "x")
        g = uni_gcd(f, MultiPoly.from_coeffs([c * i for i, c in enumerate(coeffs)][1:], "x"))
        if g.degree("x") > 0:
            continue
        for b in certified_roots(f, 96):
            assert eval_on_ball(coeffs, b).contains_zero()


def test_poly_text_formats():
    f = x**4 + 2
    assert parse_poly_text("X^4+2") == f
    assert parse_poly_text("2,0,0,0,1") == f
    assert poly_to_csv(f) == "2,0,0,0,1"
    assert parse_poly_text("x^4-5x^2+5") == x**4 - 5 * x**2 + 5
    assert parse_poly_text("3/2,0,1") == MultiPoly.from_coeffs([Fraction(3, 2), 0, 1])


@given(st.lists(st.integers(-30, 30), min_size=1, max_size=7))
@settings(max_examples=120, deadline=None)
def test_csv_roundtrip(coeffs):
    f = MultiPoly.from_coeffs(coeffs, "x")
    if f.is_zero():
        return
    assert parse_poly_text(poly_to_csv(f)) == f


def test_poly_sqrt_exact_and_failure():
    g = x**3 + 2 * x - 7
    assert poly_sqrt(g * g) == g
    with pytest.raises(InexactDivision):
        poly_sqrt(g * g + 1)


def test_sqrt_bounds():
    for v in (Fraction(2), Fraction(3, 7), Fraction(10**12, 13)):
        lo, hi = sqrt_lower(v), sqrt_upper(v)
        assert lo * lo <= v <= hi * hi
        assert hi - lo < Fraction(1, 2**40) * max(1, hi)


def test_reconstruct_rational():
    target = Fraction(-355, 113)
    fuzz = target + Fraction(1, 2**90)
    assert reconstruct_rational(fuzz, 10**6) == target


def test_clear_denominators():
    f = Fraction(1, 2) * a1 + Fraction(1, 3) * a2
    g, d = clear_denominators(f)
    assert d == 6 and g == 3 * a1 + 2 * a2


def test_complexball_arithmetic_encloses():
    b = ComplexBall(Fraction(1), Fraction(1), Fraction(1, 100))
    sq = b * b
    # (1+i)^2 = 2i must be inside the product ball
    assert (sq.re - 0) ** 2 + (sq.im - 2) ** 2 <= (sq.radius + Fraction(1, 10**9)) ** 2

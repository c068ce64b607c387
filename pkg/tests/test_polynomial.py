from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from zforce.polynomial import ONE, AlphaForm, Order, Poly, cmp_preceq, eval_alpha

from conftest import P

polys = st.lists(st.integers(min_value=0, max_value=50), max_size=7).map(Poly)


def test_add():
    assert P("t^2+t") + P("t") == P("t^2+2t")


def test_mul_t():
    assert P("t^3+2t^2").mul_t() == P("t^4+2t^3")


def test_square():
    assert P("t^2+t").square() == P("t^4+2t^3+t^2")


def test_scale():
    assert P("t^2+1").scale(3) == Poly([3, 0, 3])
    assert P("t").scale(0) == Poly()


def test_zero_polynomial_has_no_coefficients():
    assert Poly([0, 0]).coeffs == ()
    assert Poly().degree == -1
    assert str(Poly()) == "0"


def test_negative_coefficients_rejected():
    with pytest.raises(ValueError):
        Poly([1, -1])


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ("t^4+2t^3+4t^2+2t", "t^4+3t^3+4t^2", Order.LESS),
        ("t^4+3t^3+4t^2", "t^4+3t^3+4t^2", Order.EQUAL),
        ("t^3", "5t^2+100t+100", Order.GREATER),
    ],
)
def test_cmp_preceq(a, b, expected):
    assert cmp_preceq(P(a), P(b)) is expected


@pytest.mark.parametrize(
    "poly, x, value",
    [("t^2+t", 1, 2), ("t^4+3t^3+4t^2", 1, 8)],
)
def test_eval(poly, x, value):
    assert P(poly).eval(x) == value


def test_eval_against_direct_sum():
    p = P("t^9+8t^8+21t^7+20t^6+5t^5")
    direct = 2**9 + 8 * 2**8 + 21 * 2**7 + 20 * 2**6 + 5 * 2**5
    assert direct == 6688
    assert p.eval(2) == 6688
    assert p.eval(2.0) == pytest.approx(6688.0, rel=0, abs=0)
    assert p.eval(Fraction(1, 2)) == sum(c * Fraction(1, 2) ** k for k, c in enumerate(p.coeffs))


def test_big_coefficients_stay_exact():
    p = Poly([1, 1])
    for _ in range(200):
        p = p * Poly([1, 1])
    assert p[100] == __import__("math").comb(201, 100)
    assert p.to_json()["coeffs"][100] == str(p[100])
    assert Poly.from_json(p.to_json()) == p


def test_pretty_printer_descending():
    assert str(Poly([0, 0, 4, 3, 1])) == "t^4+3t^3+4t^2"
    assert str(Poly([1, 2])) == "2t+1"


@given(polys)
def test_parse_roundtrip(p):
    assert Poly.parse(str(p)) == p


@given(polys)
def test_json_roundtrip(p):
    assert Poly.from_json(p.to_json()) == p


@given(polys, polys, polys)
def test_preceq_is_a_total_order(a, b, c):
    assert (a < b) + (b < a) + (a == b) == 1
    if a <= b and b <= c:
        assert a <= c


@given(polys, polys)
def test_preceq_agrees_with_numeric_comparison_past_crossover(a, b):
    # beyond 1 + max coefficient sum the leading difference dominates
    big = 1 + max(sum(a.coeffs), sum(b.coeffs), 1)
    order = cmp_preceq(a, b)
    if order is Order.LESS:
        assert a.eval(big) < b.eval(big)
    elif order is Order.GREATER:
        assert a.eval(big) > b.eval(big)
    else:
        assert a.eval(big) == b.eval(big)


@given(polys, polys, polys, polys)
def test_preceq_is_compatible_with_addition(a, b, c, d):
    if a <= b and c <= d:
        assert a + c <= b + d


@given(polys, polys)
def test_mul_matches_evaluation(a, b):
    assert (a * b).eval(3) == a.eval(3) * b.eval(3)


def test_alpha_form_collapse_and_coefficients():
    f = AlphaForm({1: P("t"), 3: P("t^2+t")})
    assert f.coefficient(3) == P("t^2+t")
    assert f.coefficient(5) == Poly()
    assert f.collapse() == P("t^2+2t")
    assert f.sum_of_squares() == P("t^4+2t^3+2t^2")
    assert eval_alpha(f, 2) == {1: 2, 3: 6}


def test_alpha_form_drops_zero_terms():
    f = AlphaForm({1: Poly(), 2: ONE})
    assert f.terms == {2: ONE}


def test_alpha_form_json_roundtrip():
    f = AlphaForm({1: P("t"), 3: P("t^2+t")})
    assert f.to_json() == {"alpha": {"1": {"coeffs": [0, 1]}, "3": {"coeffs": [0, 1, 1]}}}
    assert AlphaForm.from_json(f.to_json()) == f

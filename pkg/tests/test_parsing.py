from fractions import Fraction

import pytest

from fdk.parsing import PolynomialSyntaxError, infer_context, parse_polynomial
from fdk.polyring import VarContext

W = VarContext(("w0", "w1", "w2"))


def test_simple_polynomial():
    p = parse_polynomial("w1*w2 - w0^2", W)
    w0, w1, w2 = W.gens()
    assert p == w1 * w2 - w0 ** 2


def test_rational_coefficients():
    ctx = VarContext(("x",))
    p = parse_polynomial("(1/3)*x^2 + x", ctx)
    assert p.terms == {(2,): Fraction(1, 3), (1,): Fraction(1)}


def test_unbalanced_parenthesis_offset():
    with pytest.raises(PolynomialSyntaxError) as info:
        parse_polynomial("w1*(w2", W)
    assert info.value.offset == 6


def test_unknown_identifier():
    with pytest.raises(PolynomialSyntaxError) as info:
        parse_polynomial("w1*q", W)
    assert info.value.offset == 3


def test_bad_character():
    with pytest.raises(PolynomialSyntaxError):
        parse_polynomial("w1 $ w2", W)


def test_nested_products_and_powers():
    p = parse_polynomial("-(w1 - w2)^2*(w0 + 1)", W)
    w0, w1, w2 = W.gens()
    assert p == -((w1 - w2) ** 2) * (w0 + 1)


@pytest.mark.parametrize("text", ["w1*w2 - w0^2", "(1/3)*w0^2 + w1", "-w0*w1*w2 + 7", "0"])
def test_parse_render_roundtrip(text):
    p = parse_polynomial(text, W)
    assert parse_polynomial(p.render(), W) == p
    assert parse_polynomial(p.render(), W).render() == p.render()


def test_infer_context_keeps_first_appearance_order():
    assert infer_context("b*a + c - a").names == ("b", "a", "c")

from fractions import Fraction

import pytest

from fdk.polyring import (ContextMismatch, PolyMatrix, Polynomial, VarContext, determinant,
                          determinant_by_permutations, gcd, is_squarefree, proportionality_constant)

import oracles

R = VarContext(("x", "y", "z"))
x, y, z = R.gens()


def test_arithmetic_matches_dict_oracle():
    a = x ** 2 - y.scale(Fraction(1, 3)) + 2
    b = x * y * z + z ** 3 - 1
    assert dict((a * b).terms) == oracles.pmul(dict(a.terms), dict(b.terms))
    assert dict((a + b).terms) == oracles.padd(dict(a.terms), dict(b.terms))


def test_zero_coefficients_are_dropped():
    p = x - x
    assert p.is_zero()
    assert p.terms == {}


def test_context_mismatch():
    other = VarContext(("x", "y"))
    with pytest.raises(ContextMismatch):
        x + other.var("x")


def test_differentiate_matches_oracle():
    p = x ** 3 * y - Fraction(2, 5) * y ** 2 * z + z
    for i, name in enumerate(R.names):
        assert dict(p.differentiate(name).terms) == oracles.pdiff(dict(p.terms), i)


def test_weighted_degree_and_homogeneity():
    ctx = VarContext(("a", "b"), (2, 3))
    a, b = ctx.gens()
    p = a ** 3 - b ** 2
    assert p.weighted_degree() == 6
    assert p.is_homogeneous()
    assert not (a + b).is_homogeneous()


def test_evaluate_and_substitute():
    p = x * y - z ** 2
    assert p.evaluate({"x": 2, "y": Fraction(1, 2), "z": 3}) == -8
    q = p.substitute({"z": x + y})
    assert q == x * y - (x + y) ** 2


def test_gcd_and_squarefree():
    f = (x - y) * (x + z)
    g = (x - y) * (y + 1)
    assert gcd(f, g).monic() == (x - y).monic()
    assert is_squarefree(x * y * z)
    assert not is_squarefree(x ** 2 * y)


def test_exact_division():
    f = (x + y) * (x - z)
    assert f.exact_div(x + y) == x - z
    assert f.exact_div(x + 2) is None


def test_determinant_matches_leibniz_oracle():
    rows = [[x, y, Fraction(0) * x], [z, x + y, y], [x - z, R.one(), z ** 2]]
    rows = [[e if isinstance(e, Polynomial) else R.const(e) for e in r] for r in rows]
    m = PolyMatrix.from_rows(rows)
    expected = oracles.leibniz_det([[dict(e.terms) for e in r] for r in rows], 3)
    assert dict(determinant(m).terms) == expected
    assert determinant_by_permutations(m) == determinant(m)


def test_proportionality_constant():
    assert proportionality_constant((x * y).scale(-3), x * y) == -3
    assert proportionality_constant(x * y + z, x * y) is None


def test_render_is_canonical():
    p = (x * y).scale(Fraction(1, 3)) - x ** 2 + 1
    assert p.render() == "-x^2 + (1/3)*x*y + 1"

"""Randomized property suites (hypothesis)."""

from itertools import combinations

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from fdk.groebner import MonomialOrder, buchberger, ideal_dimension, is_regular_sequence, s_polynomial
from fdk.polyring import PolyMatrix, Polynomial, VarContext, determinant, gcd
from fdk.weyl import (ORDER, WeylContext, WeylOperator, apply, apply_to_symbolic_power, commutator,
                      fourier_laplace, principal_symbol, transpose)

import oracles

R3 = VarContext(("x", "y", "z"))
R2 = VarContext(("x", "y"))
W2 = WeylContext.standard(["x", "y"])
W2S = WeylContext.standard(["x", "y"], ["s"])
FL_DICT = [("x", "lx"), ("y", "ly")]

coefficients = st.fractions(min_value=-4, max_value=4, max_denominator=3)
small_ints = st.integers(min_value=-3, max_value=3)


def polynomials(ctx, max_degree=2, max_terms=4, coeffs=coefficients):
    nv = len(ctx.names)
    exps = st.tuples(*[st.integers(0, max_degree)] * nv).filter(lambda e: sum(e) <= max_degree)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda d: Polynomial(ctx, d))


def homogeneous(ctx, degree, max_terms=3):
    nv = len(ctx.names)
    exps = oracles.monomials_of_degree(nv, degree, [1] * nv)
    return (st.dictionaries(st.sampled_from(exps), small_ints.filter(bool), min_size=1, max_size=max_terms)
            .map(lambda d: Polynomial(ctx, d)))


def operators(ctx, max_exp=2, max_terms=4):
    size = ctx.size
    keys = st.tuples(*[st.integers(0, max_exp)] * size)
    return st.dictionaries(keys, coefficients, max_size=max_terms).map(lambda d: WeylOperator(ctx, d))


# -- polynomial ring ---------------------------------------------------------------------

@given(polynomials(R3), polynomials(R3), polynomials(R3))
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert dict((a * b).terms) == oracles.pmul(dict(a.terms), dict(b.terms))


@given(polynomials(R2), polynomials(R2), polynomials(R2, max_degree=1))
@settings(max_examples=50, deadline=None)
def test_gcd_properties(a, b, g):
    assume(not a.is_zero() and not b.is_zero() and not g.is_zero())
    d = gcd(a, b)
    assert d.divides(a) and d.divides(b)
    assert gcd(a * g, b * g) == (g * d).monic()


@given(polynomials(R3), polynomials(R3))
def test_leibniz_rule(a, b):
    for name in R3.names:
        assert (a * b).differentiate(name) == a.differentiate(name) * b + a * b.differentiate(name)


@given(st.integers(2, 4).flatmap(lambda n: st.lists(st.lists(polynomials(R2, 1, 2), min_size=n, max_size=n),
                                                      min_size=n, max_size=n)))
@settings(max_examples=40, deadline=None)
def test_determinant_against_permutation_sum(rows):
    m = PolyMatrix.from_rows(rows)
    expected = oracles.leibniz_det([[dict(e.terms) for e in r] for r in rows], 2)
    assert dict(determinant(m).terms) == expected


# -- Weyl algebra ----------------------------------------------------------------------------

@given(operators(W2), operators(W2), operators(W2))
@settings(max_examples=100, deadline=None)
def test_weyl_associativity_and_commutation(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    for i, x in enumerate(W2.positions):
        for j, d in enumerate(W2.derivations):
            expected = W2.one() if i == j else W2.zero()
            assert commutator(W2.gen(d), W2.gen(x)) == expected


@given(operators(W2), operators(W2), polynomials(R2, max_degree=3))
@settings(max_examples=100, deadline=None)
def test_action_is_a_module_structure(a, b, p):
    assert apply(a * b, p) == apply(a, apply(b, p))
    assert dict(apply(a, p).terms) == oracles.apply_operator(dict(a.terms), 2, dict(p.terms))


@given(operators(W2S), operators(W2S))
@settings(max_examples=100, deadline=None)
def test_fourier_laplace_is_a_homomorphism(a, b):
    fa, fb = fourier_laplace(a, FL_DICT), fourier_laplace(b, FL_DICT)
    assert fourier_laplace(a * b, FL_DICT) == fa * fb
    assert fourier_laplace(a + b, FL_DICT) == fa + fb


@given(operators(W2))
@settings(max_examples=100, deadline=None)
def test_fourier_laplace_is_invertible(a):
    # applying FL four times is the identity (x -> d -> -x -> -d -> x)
    img = a
    names = ["x", "y"]
    for _ in range(4):
        img = fourier_laplace(img, list(zip(img.ctx.positions, names)))
    assert img == a


@given(operators(W2S), operators(W2S))
@settings(max_examples=100, deadline=None)
def test_transpose_is_an_antiautomorphism(a, b):
    assert transpose(a * b) == transpose(b) * transpose(a)
    assert transpose(transpose(a)) == a


@given(operators(W2), operators(W2))
@settings(max_examples=100, deadline=None)
def test_principal_symbol_is_multiplicative(a, b):
    assume(not a.is_zero() and not b.is_zero())
    assert principal_symbol(a * b, ORDER) == principal_symbol(a, ORDER) * principal_symbol(b, ORDER)


@given(operators(W2S, max_exp=2, max_terms=3), st.integers(1, 2).flatmap(lambda d: homogeneous(R2, d)))
@settings(max_examples=100, deadline=None)
def test_symbolic_power_specializes_to_integers(op, h):
    n = 2
    res = apply_to_symbolic_power(op, h)
    for k in range(max(op.order(), res.shift, 0), n + 3):
        assert res.specialize(k) == apply(op, h ** k, {"s": k})


# -- Groebner bases --------------------------------------------------------------------------

@given(st.lists(polynomials(R3, max_degree=2, max_terms=3), min_size=1, max_size=3))
@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_groebner_basis_properties(gens):
    gens = [g for g in gens if not g.is_zero()]
    assume(gens)
    gb = buchberger(gens)
    for g in gens:
        assert gb.reduce(g).is_zero()
    for f, g in combinations(gb.elements, 2):
        assert gb.reduce(s_polynomial(f, g)).is_zero()


@given(st.lists(polynomials(R3, max_degree=2, max_terms=3), min_size=1, max_size=3),
       st.lists(polynomials(R3, max_degree=1, max_terms=2), min_size=3, max_size=3))
@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_ideal_membership(gens, multipliers):
    gens = [g for g in gens if not g.is_zero()]
    assume(gens)
    gb = buchberger(gens)
    combo = sum((m * g for m, g in zip(multipliers, gens)), R3.zero())
    assert gb.contains(combo)


@given(st.lists(polynomials(R3, max_degree=2, max_terms=3), min_size=1, max_size=3))
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_dimension_does_not_depend_on_the_order(gens):
    gens = [g for g in gens if not g.is_zero()]
    assume(gens)
    dims = {ideal_dimension(buchberger(gens, order)) for order in
            (MonomialOrder("degrevlex"), MonomialOrder("lex"), MonomialOrder("lex", (2, 1, 0)))}
    assert len(dims) == 1


def homogeneous_sequences():
    one = st.integers(1, 2).flatmap(lambda d: homogeneous(R3, d))
    return st.lists(one, min_size=1, max_size=3)


@given(homogeneous_sequences())
@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_regularity_matches_koszul_oracle(seq):
    degs = [g.total_degree() for g in seq]
    expected = oracles.koszul_h1_vanishes([dict(g.terms) for g in seq], 3, [1, 1, 1], sum(degs) + 2)
    assert is_regular_sequence(seq) == expected


CORPUS = [
    (["x", "y", "z"], True),
    (["x*y", "x*z"], False),
    (["x*y", "x + y"], True),
    (["x^2", "x*y"], False),
    (["x^2 - y*z", "y^2 - x*z"], True),
    (["x^2 - y*z", "y^2 - x*z", "z^2 - x*y"], False),
    (["x^2", "y^2", "z^2"], True),
    (["x*y", "y*z", "x*z"], False),
    (["x^2 + y^2", "x*y", "z^2"], True),
]


def test_regularity_corpus_against_koszul_oracle():
    from fdk.parsing import parse_polynomial

    for texts, regular in CORPUS:
        seq = [parse_polynomial(t, R3) for t in texts]
        degs = [g.total_degree() for g in seq]
        oracle = oracles.koszul_h1_vanishes([dict(g.terms) for g in seq], 3, [1, 1, 1], sum(degs) + 2)
        assert oracle == regular, texts
        assert is_regular_sequence(seq) == regular, texts

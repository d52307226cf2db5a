"""End-to-end acceptance checks, one test per criterion.

Each test measures its own wall time against the stated bound and prints a
single PASS/FAIL line (visible even when pytest captures output).
"""

import time
from contextlib import contextmanager
from fractions import Fraction

from fdk.bernstein import (REDUCTION, S_RING, BernsteinPolynomial, bernstein_selfdual,
                           convert_normalization, resonance_constant, symmetry_sign)
from fdk.catalog import lookup
from fdk.groebner import DEFAULT_PRIME, SK_ORDER, SK_TOTAL, sk_check
from fdk.logfields import analyze, compute_log_algebra
from fdk.polyring import determinant, proportionality_constant
from fdk.reduction import (T_CTX, ZT_CTX, gauge_normalize, localized_fl_presentation, poly_in_theta,
                           quantum_de_specialize, reduced_presentation, theta, transpose_identity_check)
from fdk.spencer import build_spencer, check_d_squared, graded_koszul_matrix, infer_brackets
from fdk.tautsys import (annihilates_dual, fl_presentation, gkz_presentation, hat_presentation,
                         homogenized_generators)
from fdk.weyl import ORDER, TOTAL_ORDER

import test_properties as props

s = S_RING.var("s")
NC = [f"nc:{n}" for n in range(1, 7)]


@contextmanager
def criterion(capsys, number, title, bound):
    start = time.monotonic()
    status = "FAIL"
    detail = ""
    try:
        yield
        elapsed = time.monotonic() - start
        if elapsed >= bound:
            detail = f" (runtime bound {bound}s exceeded)"
            raise AssertionError(f"criterion {number} took {elapsed:.2f}s >= {bound}s")
        status = "PASS"
    finally:
        elapsed = time.monotonic() - start
        with capsys.disabled():
            print(f"\n[{status}] criterion {number}: {title} ({elapsed:.2f}s, bound {bound}s){detail}")


def h_of(ident):
    return lookup(ident).divisor.polynomial()


def test_criterion_01_saito(capsys):
    with criterion(capsys, 1, "Saito criterion for nc:1..6 and star3", 10):
        for ident in NC + ["star3"]:
            h = h_of(ident)
            n = len(h.ctx)
            gD, aD = compute_log_algebra(h)
            a = analyze(h)
            c = proportionality_constant(determinant(a.saito_matrix), h)
            assert c is not None and c != 0, ident
            assert len(gD) == n and len(aD) == n - 1, ident
            assert all(f.trace() == 0 for f in a.aD_basis), ident


def test_criterion_02_bfunction_normal_crossing(capsys):
    with criterion(capsys, 2, "b-function of nc:n is s^n and (s+1)^n classical", 30):
        for n in range(1, 5):
            b = bernstein_selfdual(h_of(f"nc:{n}"))
            assert b.poly == s ** n and b.leading_constant == 1
            assert convert_normalization(b).poly == (s + 1) ** n


def test_criterion_03_bfunction_star3(capsys):
    with criterion(capsys, 3, "b-function of star3: roots -4/3, -1 x4, -2/3 and symmetry", 300):
        bc = convert_normalization(bernstein_selfdual(h_of("star3")))
        expected = [Fraction(-4, 3), Fraction(-1), Fraction(-1), Fraction(-1), Fraction(-1), Fraction(-2, 3)]
        assert bc.rational_roots == expected
        assert bc.nonrational_part.is_constant()
        assert symmetry_sign(bc) in (1, -1)


def test_criterion_04_resonance(capsys):
    with criterion(capsys, 4, "resonance c(star3) = -8, beta0 = -9; c(nc:n) = -n", 1):
        star = resonance_constant(convert_normalization(bernstein_selfdual(h_of("star3"))), 6)
        assert star.c == -8 and star.largest_admissible_integer() == -9
        for n in range(1, 7):
            res = resonance_constant(convert_normalization(bernstein_selfdual(h_of(f"nc:{n}"))), n)
            assert res.c == -n


def test_criterion_05_sk(capsys):
    with criterion(capsys, 5, "(SK) for nc:1..4 and star3 (modular), order and total modes agree", 600):
        for n in (1, 2, 3):
            a = analyze(h_of(f"nc:{n}"))
            assert sk_check(a, SK_ORDER).verdict and sk_check(a, SK_TOTAL).verdict
        a = analyze(h_of("nc:4"))
        assert sk_check(a, SK_ORDER, DEFAULT_PRIME).verdict and sk_check(a, SK_TOTAL, DEFAULT_PRIME).verdict
        a = analyze(h_of("star3"))
        order = sk_check(a, SK_ORDER, DEFAULT_PRIME, time_budget=600)
        total = sk_check(a, SK_TOTAL, DEFAULT_PRIME, time_budget=600)
        assert order.verdict and total.verdict
        assert order.dimension == order.expected_dimension
        assert total.dimension == total.expected_dimension


def test_criterion_06_tautological(capsys):
    with criterion(capsys, 6, "FL of hat presentation is the GKZ system; star3 fields kill h", 10):
        for n in range(1, 7):
            a = analyze(h_of(f"nc:{n}"))
            taut = fl_presentation(hat_presentation(a, 1, -n - 1), a)
            assert taut.rendered() == gkz_presentation(n, 1, -n - 1)
        a = analyze(h_of("star3"))
        taut = fl_presentation(hat_presentation(a, 1, -9), a)
        assert annihilates_dual(taut, a)


def test_criterion_07_spencer(capsys):
    with criterion(capsys, 7, "Spencer complexes: d^2 = 0 and graded pieces are Koszul", 60):
        for ident in ("nc:2", "nc:3", "star3"):
            a = analyze(h_of(ident))
            gens, _ = homogenized_generators(a, 1, a.n)
            p = infer_brackets(gens, split_first=True)
            cx = build_spencer(p)
            assert check_d_squared(cx), ident
            for kind in (TOTAL_ORDER, ORDER):
                assert graded_koszul_matrix(p, kind, complex_=cx).equal, (ident, kind)


def test_criterion_08_reduction(capsys):
    with criterion(capsys, 8, "reduction pipeline gives z^n(t dt)^n - h(p)t and the quantum DE", 10):
        z, t = ZT_CTX.gen("z"), ZT_CTX.gen("t")
        th = theta(ZT_CTX)
        for n in range(1, 5):
            a = analyze(h_of(f"nc:{n}"))
            for hp in (Fraction(1), Fraction(-3, 2)):
                g = gauge_normalize(localized_fl_presentation(reduced_presentation(a, hp, -n - 1)))
                assert g.bgen == z ** n * th ** n - t.scale(hp)
                assert g.euler == z * z * ZT_CTX.gen("dz") + (t * z * ZT_CTX.gen("dt")).scale(n)
            g = gauge_normalize(localized_fl_presentation(reduced_presentation(a, 1, -n - 1)))
            assert quantum_de_specialize(g) == theta(T_CTX) ** n - T_CTX.gen("t")
        # star3: b-generator assembled from the classical roots -4/3, -1 x4, -2/3
        roots = [Fraction(-4, 3)] + [Fraction(-1)] * 4 + [Fraction(-2, 3)]
        b_red = S_RING.one()
        for r in roots:
            b_red = b_red * (s - (r + 1))
        a = analyze(h_of("star3"))
        g = gauge_normalize(localized_fl_presentation(reduced_presentation(a, 1, -9)))
        assert g.bgen == z ** 6 * poly_in_theta(b_red, ZT_CTX) - t
        assert g.bgen == z ** 6 * th ** 4 * (th * th - Fraction(1, 9)) - t


def test_criterion_09_transpose(capsys):
    with criterion(capsys, 9, "transpose identity for s^n (n <= 4) and the star3 b-function", 1):
        for n in range(1, 5):
            assert transpose_identity_check(BernsteinPolynomial(s ** n, REDUCTION))
        b = BernsteinPolynomial(s ** 4 * (s * s - Fraction(1, 9)), REDUCTION, Fraction(27))
        assert transpose_identity_check(b)


def test_criterion_10_properties(capsys):
    with criterion(capsys, 10, "property suites: Weyl, symbolic powers, Groebner, Koszul oracle", 600):
        props.test_weyl_associativity_and_commutation()
        props.test_action_is_a_module_structure()
        props.test_fourier_laplace_is_a_homomorphism()
        props.test_fourier_laplace_is_invertible()
        props.test_transpose_is_an_antiautomorphism()
        props.test_symbolic_power_specializes_to_integers()
        props.test_groebner_basis_properties()
        props.test_ideal_membership()
        props.test_regularity_matches_koszul_oracle()
        props.test_regularity_corpus_against_koszul_oracle()

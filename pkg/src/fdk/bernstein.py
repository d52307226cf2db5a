"""Bernstein-Sato polynomials of self-dual prehomogeneous equations.

For h homogeneous of degree n in self-dual coordinates the functional
equation ``h(d) h^s = b(s) h^(s-1)`` holds with b of degree n.  That is the
"reduction" normalization; the "classical" one, ``h(d) h^(s+1) = b(s) h^s``,
is its shift ``b_classical(s) = b_reduction(s + 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as igcd
from typing import Dict, List, Optional, Sequence, Tuple

from .polyring import Polynomial, VarContext, as_rational, render_rational
from .weyl import WeylContext, apply, apply_to_symbolic_power

CLASSICAL = "classical"
REDUCTION = "reduction"
S_RING = VarContext(("s",))


class NotSelfDualEquation(ValueError):
    """h(d) h^s is not of the form b(s) h^(s-1)."""

    def __init__(self, message: str, payload: Optional[Polynomial] = None):
        super().__init__(message)
        self.payload = payload


def _coeffs(p: Polynomial) -> List[Fraction]:
    """Coefficient list (constant term first) of a univariate polynomial."""
    deg = p.total_degree() if not p.is_zero() else 0
    out = [Fraction(0)] * (deg + 1)
    for (e,), c in p.terms.items():
        out[e] = c
    return out


def _from_coeffs(cs: Sequence[Fraction]) -> Polynomial:
    return Polynomial(S_RING, {(i,): c for i, c in enumerate(cs) if c})


def _eval(cs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def _deflate(cs: List[Fraction], r: Fraction) -> List[Fraction]:
    """Synthetic division by (s - r); the remainder must be zero."""
    out = [Fraction(0)] * (len(cs) - 1)
    acc = Fraction(0)
    for i in range(len(cs) - 1, 0, -1):
        acc = acc * r + cs[i]
        out[i - 1] = acc
    return out


def _divisors(m: int) -> List[int]:
    m = abs(m)
    small = [d for d in range(1, int(m ** 0.5) + 1) if m % d == 0]
    return sorted(set(small + [m // d for d in small]))


def rational_roots(p: Polynomial) -> Tuple[List[Fraction], Polynomial]:
    """Rational roots with multiplicity (ascending) and the remaining factor.

    Candidates come from the rational root theorem applied to the
    integer-scaled polynomial; every root is removed by exact synthetic
    division, so the product of the linear factors and the remainder
    reconstructs p.
    """
    if p.ctx != S_RING:
        p = Polynomial(S_RING, {(sum(e),): c for e, c in p.terms.items()})
    cs = _coeffs(p)
    roots: List[Fraction] = []
    while len(cs) > 1 and cs[0] == 0:
        roots.append(Fraction(0))
        cs = cs[1:]
    while len(cs) > 1:
        lcm = 1
        for c in cs:
            lcm = lcm * c.denominator // igcd(lcm, c.denominator)
        ints = [int(c * lcm) for c in cs]
        found = None
        for q in _divisors(ints[-1]):
            for pnum in _divisors(ints[0]):
                for cand in (Fraction(pnum, q), Fraction(-pnum, q)):
                    if _eval(cs, cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        roots.append(found)
        cs = _deflate(cs, found)
    return sorted(roots), _from_coeffs(cs)


@dataclass(frozen=True)
class BernsteinPolynomial:
    poly: Polynomial  # monic, in S_RING
    normalization: str
    leading_constant: Fraction = Fraction(1)

    def __post_init__(self):
        if self.normalization not in (CLASSICAL, REDUCTION):
            raise ValueError(f"unknown normalization {self.normalization!r}")
        if self.poly.ctx != S_RING:
            raise ValueError("a b-function is a polynomial in s")

    @property
    def degree(self) -> int:
        return self.poly.total_degree()

    @property
    def roots(self) -> Tuple[List[Fraction], Polynomial]:
        return rational_roots(self.poly)

    @property
    def rational_roots(self) -> List[Fraction]:
        return self.roots[0]

    @property
    def nonrational_part(self) -> Polynomial:
        return self.roots[1]

    def evaluate(self, x) -> Fraction:
        return self.poly.evaluate({"s": as_rational(x)})

    def factored(self) -> str:
        roots, rest = self.roots
        counts: Dict[Fraction, int] = {}
        for r in roots:
            counts[r] = counts.get(r, 0) + 1
        parts = []
        for r in sorted(counts, key=lambda x: (abs(x), -x)):
            if r == 0:
                base = "s"
            else:
                base = f"(s {'+' if r < 0 else '-'} {render_rational(abs(r))})"
            parts.append(base if counts[r] == 1 else f"{base}^{counts[r]}")
        if not rest.is_constant():
            parts.append(f"({rest.render()})")
        return "*".join(parts) or "1"

    def as_json(self) -> dict:
        roots = self.rational_roots
        counts: Dict[Fraction, int] = {}
        for r in roots:
            counts[r] = counts.get(r, 0) + 1
        return {
            "normalization": self.normalization,
            "polynomial": self.poly.render(),
            "coefficients": [str(c) for c in _coeffs(self.poly)],
            "factored": self.factored(),
            "rational_roots": [{"root": str(r), "multiplicity": counts[r]} for r in sorted(counts)],
            "nonrational_part": self.nonrational_part.render(),
            "leading_constant": str(self.leading_constant),
        }


def bernstein_selfdual(h: Polynomial) -> BernsteinPolynomial:
    """b(s) with h(d) h^s = c * b(s) h^(s-1), b monic; c is kept as leading_constant."""
    if h.is_zero() or not h.is_homogeneous([1] * len(h.ctx)):
        raise NotSelfDualEquation("h must be a nonzero homogeneous polynomial")
    ctx = WeylContext.standard(h.ctx.names)
    op = ctx.derivation_polynomial(h)
    cls = apply_to_symbolic_power(op, h)
    b = cls.s_only()
    if cls.shift != 1 or b is None:
        raise NotSelfDualEquation(
            f"h(d) h^s = h^(s-{cls.shift}) * ({cls.payload.render()}) is not b(s) h^(s-1); "
            "h is not a self-dual prehomogeneous equation in these coordinates", cls.payload)
    b = Polynomial(S_RING, b.terms)
    lead = b.terms[(b.total_degree(),)]
    return BernsteinPolynomial(b.scale(1 / lead), REDUCTION, lead)


def functional_equation_holds(h: Polynomial, b: BernsteinPolynomial, ks: Sequence[int]) -> bool:
    """apply(h(d), h^k) == c * b(k) * h^(k-1) for every k in ks (reduction normalization)."""
    if b.normalization != REDUCTION:
        b = convert_normalization(b)
    ctx = WeylContext.standard(h.ctx.names)
    op = ctx.derivation_polynomial(h)
    for k in ks:
        lhs = apply(op, h ** k)
        rhs = (h ** (k - 1)).scale(b.leading_constant * b.evaluate(k)) if k >= 1 else None
        if rhs is None or lhs != rhs:
            return False
    return True


def _shift(p: Polynomial, a: Fraction) -> Polynomial:
    """p(s + a)."""
    return p.substitute({"s": S_RING.var("s") + a})


def convert_normalization(b: BernsteinPolynomial) -> BernsteinPolynomial:
    """reduction -> classical is s -> s + 1; classical -> reduction is s -> s - 1."""
    if b.normalization == REDUCTION:
        return BernsteinPolynomial(_shift(b.poly, Fraction(1)), CLASSICAL, b.leading_constant)
    return BernsteinPolynomial(_shift(b.poly, Fraction(-1)), REDUCTION, b.leading_constant)


def symmetry_sign(b: BernsteinPolynomial) -> Optional[int]:
    """The sign e with b(-s-2) = e b(s) (classical) or b(-s) = e b(s) (reduction), if any."""
    s = S_RING.var("s")
    image = b.poly.substitute({"s": -s - 2 if b.normalization == CLASSICAL else -s})
    if image == b.poly:
        return 1
    if image == -b.poly:
        return -1
    return None


def check_symmetry(b: BernsteinPolynomial) -> bool:
    return symmetry_sign(b) is not None


@dataclass(frozen=True)
class ResonanceData:
    n: int
    c: Optional[int]
    roots: Tuple[Fraction, ...]
    nonrational_part: Polynomial
    description: str

    def is_admissible(self, beta0) -> bool:
        """beta0 avoids k + n*roots for all k >= 0."""
        beta0 = as_rational(beta0)
        for r in self.roots:
            k = beta0 - self.n * r
            if k.denominator == 1 and k >= 0:
                return False
        return True

    def is_beta_admissible(self, beta, d: Optional[int] = None) -> bool:
        """beta avoids k/d + roots for all k >= 0 (d defaults to n)."""
        beta = as_rational(beta)
        d = self.n if d is None else d
        if d < 1:
            raise ValueError("d must be positive")
        for r in self.roots:
            k = (beta - r) * d
            if k.denominator == 1 and k >= 0:
                return False
        return True

    def largest_admissible_integer(self) -> Optional[int]:
        return None if self.c is None else self.c - 1

    def as_json(self) -> dict:
        return {
            "n": self.n,
            "c": self.c,
            "largest_admissible_beta0": self.largest_admissible_integer(),
            "classical_roots": [str(r) for r in self.roots],
            "description": self.description,
        }


def resonance_constant(b: BernsteinPolynomial, n: int) -> ResonanceData:
    """c = min(Z meet the union over k >= 0 of k + n*roots), classical roots."""
    if b.normalization != CLASSICAL:
        raise ValueError("resonance_constant expects the classical normalization")
    roots, rest = rational_roots(b.poly)
    integral = [n * r for r in roots if (n * r).denominator == 1]
    c = int(min(integral)) if integral else None
    desc = f"union over k >= 0 of k + {n}*{{{', '.join(render_rational(r) for r in roots)}}}"
    if not rest.is_constant():
        desc += f"; nonlinear factor {rest.render()} has no rational roots and cannot meet Z"
    return ResonanceData(n, c, tuple(roots), rest, desc)

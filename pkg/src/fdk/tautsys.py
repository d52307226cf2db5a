"""Tautological-system presentations attached to a linear free divisor.

The w-side ("hat") system lives on the homogenized space with coordinates
(w0, w1..wn); its Fourier-Laplace image (the "taut" side) lives on the dual
coordinates (l0, l1..ln).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .logfields import DivisorAnalysis, dual_name, dualize, embed_operator
from .polyring import Polynomial, as_rational
from .weyl import WeylContext, WeylOperator, apply, fourier_laplace, specialize_centrals

HAT = "hat"
TAUT = "taut"
W0 = "w0"
L0 = "l0"


class PresentationMismatch(ValueError):
    """A computed presentation differs from its expected closed form."""


@dataclass(frozen=True)
class SystemPresentation:
    ctx: WeylContext
    generators: Tuple[WeylOperator, ...]
    side: str
    parameters: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.side not in (HAT, TAUT):
            raise ValueError(f"unknown side {self.side!r}")
        if any(g.is_zero() for g in self.generators):
            raise ValueError("generators must be nonzero")
        if any(g.ctx != self.ctx for g in self.generators):
            raise ValueError("generators must live in the presentation context")

    def rendered(self) -> List[str]:
        return [g.render() for g in self.generators]

    def as_json(self) -> dict:
        return {
            "side": self.side,
            "positions": list(self.ctx.positions),
            "centrals": list(self.ctx.centrals),
            "parameters": {k: _jsonable(v) for k, v in self.parameters.items()},
            "generators": self.rendered(),
        }


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    return v


@dataclass(frozen=True)
class HomogenizedData:
    h_tilde: WeylOperator
    chi_tilde: WeylOperator
    c: Fraction
    d: int


def _homogenized_context(analysis: DivisorAnalysis, centrals: Sequence[str] = ()) -> WeylContext:
    if W0 in analysis.names:
        raise ValueError(f"divisor variables must not contain {W0!r}")
    return WeylContext.standard((W0,) + analysis.names, centrals)


def homogenized_data(analysis: DivisorAnalysis, c, d: int, ctx: WeylContext) -> HomogenizedData:
    """h~ = h - c w0^d and chi~ = chi + (n/d) w0 d_w0, so that chi~(h~) = n h~."""
    c = as_rational(c)
    if c == 0:
        raise ValueError("the deformation constant c must be nonzero")
    if d < 1:
        raise ValueError("the w0-degree d must be positive")
    h = ctx.from_polynomial(analysis.h)
    w0 = ctx.gen(W0)
    h_tilde = h - (w0 ** d).scale(c)
    chi = embed_operator(analysis.field_operators()[-1], ctx)
    chi_tilde = chi + (w0 * ctx.gen(ctx.derivation_of(W0))).scale(Fraction(analysis.n, d))
    return HomogenizedData(h_tilde, chi_tilde, c, d)


def homogenized_generators(analysis: DivisorAnalysis, c, d: int,
                           with_s: bool = True) -> Tuple[List[WeylOperator], WeylContext]:
    """(h~, delta_1..delta_(n-1), chi~ - n s); without s the last entry is chi~."""
    ctx = _homogenized_context(analysis, ("s",) if with_s else ())
    data = homogenized_data(analysis, c, d, ctx)
    fields = [embed_operator(op, ctx) for op in analysis.field_operators()[:-1]]
    last = data.chi_tilde - ctx.gen("s").scale(analysis.n) if with_s else data.chi_tilde
    return [data.h_tilde] + fields + [last], ctx


def homogenized_ideal_Is(analysis: DivisorAnalysis, c, d: Optional[int] = None) -> SystemPresentation:
    """Generators of I(s) in the (w0, w; s) context."""
    d = analysis.n if d is None else d
    gens, ctx = homogenized_generators(analysis, c, d, with_s=True)
    return SystemPresentation(ctx, tuple(gens), HAT, {"c": as_rational(c), "d": d})


def specialize_s(pres: SystemPresentation, beta) -> SystemPresentation:
    """I(s) -> I(beta): substitute s = beta in every generator."""
    beta = as_rational(beta)
    gens = tuple(specialize_centrals(g, {"s": beta}) for g in pres.generators)
    params = dict(pres.parameters)
    params["beta"] = beta
    return SystemPresentation(gens[0].ctx, gens, pres.side, params)


def hat_presentation(analysis: DivisorAnalysis, hp, beta0) -> SystemPresentation:
    """(h(p) w0^n - h, delta_1..delta_(n-1), chi~ - beta0) on the homogenized space."""
    hp, beta0 = as_rational(hp), as_rational(beta0)
    if hp == 0:
        raise ValueError("h(p) must be nonzero: the point p must lie off the divisor")
    n = analysis.n
    ctx = _homogenized_context(analysis)
    data = homogenized_data(analysis, hp, n, ctx)
    first = -data.h_tilde
    # the defining equation of the cone is chi~-homogeneous of degree n
    poly = _as_position_polynomial(first)
    chi_poly = apply(data.chi_tilde, poly)
    if chi_poly != poly.scale(n):
        raise PresentationMismatch("h(p) w0^n - h is not an eigenvector of chi~ with eigenvalue n")
    fields = [embed_operator(op, ctx) for op in analysis.field_operators()[:-1]]
    gens = (first,) + tuple(fields) + (data.chi_tilde - beta0,)
    return SystemPresentation(ctx, gens, HAT, {"n": n, "hp": hp, "beta0": beta0, "c": hp, "d": n})


def _as_position_polynomial(op: WeylOperator) -> Polynomial:
    ctx = op.ctx
    ring = ctx.position_context()
    m = ctx.m
    if any(any(k[m:]) for k in op.terms):
        raise ValueError("operator is not a multiplication operator")
    return Polynomial(ring, {k[:m]: c for k, c in op.terms.items()})


def fl_dictionary(ctx: WeylContext) -> List[Tuple[str, str]]:
    return [(x, L0 if x == W0 else dual_name(x)) for x in ctx.positions]


def expected_taut_generators(analysis: DivisorAnalysis, hp, beta0, ctx: WeylContext) -> List[WeylOperator]:
    """(h(p) d_l0^n - h(d_l), dual fields, chi~v + (n+1) + beta0) in closed form."""
    n = analysis.n
    dual = dualize(analysis)
    dl0 = ctx.gen(ctx.derivation_of(L0))
    h_of_d = ctx.derivation_polynomial(dual.h_dual)
    first = (dl0 ** n).scale(hp) - h_of_d
    fields = [embed_operator(op, ctx) for op in dual.operators()]
    euler = ctx.zero()
    for lam in ctx.positions:
        euler = euler + ctx.gen(lam) * ctx.gen(ctx.derivation_of(lam))
    return [first] + fields + [euler + (n + 1) + beta0]


def fl_presentation(hat: SystemPresentation, analysis: DivisorAnalysis) -> SystemPresentation:
    """Fourier-Laplace image of the hat presentation, checked against its closed form.

    Each generator is normalized by the sign that makes it agree with the
    closed form; a mismatch beyond sign raises PresentationMismatch.
    """
    if hat.side != HAT:
        raise ValueError("fl_presentation expects a hat-side presentation")
    hp, beta0 = hat.parameters["hp"], hat.parameters["beta0"]
    images = [fourier_laplace(g, fl_dictionary(hat.ctx)) for g in hat.generators]
    ctx = images[0].ctx
    expected = expected_taut_generators(analysis, hp, beta0, ctx)
    signs = []
    out = []
    for k, (img, exp) in enumerate(zip(images, expected)):
        if img == exp:
            signs.append(1)
            out.append(img)
        elif img == -exp:
            signs.append(-1)
            out.append(-img)
        else:
            raise PresentationMismatch(
                f"generator {k + 1}: image {img.render()} does not match {exp.render()} up to sign")
    params = dict(hat.parameters)
    params["signs"] = signs
    return SystemPresentation(ctx, tuple(out), TAUT, params)


def gkz_presentation(n: int, hp, beta0) -> List[str]:
    """Closed-form lambda-side system for normal crossings, as rendered strings."""
    ctx = WeylContext.standard([L0] + [f"l{i}" for i in range(1, n + 1)])
    d = [ctx.gen("d" + x) for x in ctx.positions]
    lam = [ctx.gen(x) for x in ctx.positions]
    prod = ctx.one()
    for i in range(1, n + 1):
        prod = prod * d[i]
    gens = [(d[0] ** n).scale(as_rational(hp)) - prod]
    for i in range(2, n + 1):
        gens.append(lam[1] * d[1] - lam[i] * d[i])
    euler = ctx.zero()
    for i in range(n + 1):
        euler = euler + lam[i] * d[i]
    gens.append(euler + (n + 1) + as_rational(beta0))
    return [g.render() for g in gens]


def annihilates_dual(pres: SystemPresentation, analysis: DivisorAnalysis) -> bool:
    """Every field generator of the taut side kills h(l1..ln)."""
    dual = dualize(analysis)
    ring = pres.ctx.position_context()
    h = dual.h_dual.embed(ring)
    return all(apply(g, h).is_zero() for g in pres.generators[1:-1])

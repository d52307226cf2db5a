"""Dimensional reduction of the tautological system to two variables.

Operators on the dual space are pushed through phi = (id, h_dual / kappa)
to the (l0, t) plane, then a one-variable localized Fourier-Laplace
transform in l0 leads to the (z, t) plane.  The convention used for the
latter is ``d_l0 -> tau, l0 -> -d_tau`` followed by ``tau = 1/z,
d_tau = -z^2 d_z``, i.e. ``d_l0 -> z^-1`` and ``l0 -> z^2 d_z``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Tuple

from .bernstein import REDUCTION, BernsteinPolynomial, bernstein_selfdual, convert_normalization
from .logfields import DivisorAnalysis, dualize
from .polyring import Polynomial, VarContext, as_rational
from .weyl import WeylContext, WeylOperator, apply, apply_to_symbolic_power, substitute, transpose

L0_T = "l0_t"
Z_T = "z_t"
T_CTX = WeylContext.standard(["t"], localized=["t"])
L0T_CTX = WeylContext.standard(["l0", "t"], localized=["t"])
ZT_CTX = WeylContext.standard(["z", "t"], localized=["z", "t"])


class RestrictionError(ValueError):
    """The operator has no restriction of bounded order through h."""


def theta(ctx: WeylContext) -> WeylOperator:
    """The Euler operator t d_t."""
    return ctx.gen("t") * ctx.gen("dt")


def poly_in_theta(p: Polynomial, ctx: WeylContext) -> WeylOperator:
    """p(t d_t) for a univariate polynomial p."""
    th = theta(ctx)
    out = ctx.zero()
    power = ctx.one()
    deg = p.total_degree() if not p.is_zero() else 0
    coeffs = {sum(e): c for e, c in p.terms.items()}
    for k in range(deg + 1):
        if coeffs.get(k):
            out = out + power.scale(coeffs[k])
        power = power * th
    return out


def _falling_coefficients(q: Polynomial) -> List[Fraction]:
    """c_b with q(s) = sum_b c_b s(s-1)...(s-b+1), via forward differences at 0."""
    deg = q.total_degree() if not q.is_zero() else 0
    values = [q.evaluate({q.ctx.names[0]: k}) if q.ctx.names else q.constant_value() for k in range(deg + 1)]
    out = []
    row = values
    for b in range(deg + 1):
        out.append(row[0] / factorial(b))
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
    return out


def _decompose_in_h(payload: Polynomial, h: Polynomial) -> Dict[int, Polynomial]:
    """payload(s, l) = sum_j q_j(s) h^j, or raise RestrictionError."""
    ring = payload.ctx
    n = h.total_degree()
    hh = h.embed(ring)
    s_ring = VarContext((ring.names[0],))
    groups: Dict[int, Dict[Tuple[int, ...], Fraction]] = {}
    for e, c in payload.terms.items():
        groups.setdefault(sum(e[1:]), {})[e] = c
    out: Dict[int, Polynomial] = {}
    for D, terms in groups.items():
        if D % n:
            raise RestrictionError(f"a component of degree {D} is not a power of h")
        j = D // n
        q = Polynomial(ring, terms).exact_div(hh ** j)
        if q is None or any(any(e[1:]) for e in q.terms):
            raise RestrictionError("the image of h^s is not a polynomial in h over Q[s]")
        out[j] = Polynomial(s_ring, {(e[0],): c for e, c in q.terms.items()})
    return out


def restrict_through_h(op: WeylOperator, h: Polynomial, max_order: Optional[int] = None,
                       kappa=1, verify: bool = True) -> WeylOperator:
    """The operator T in (t, d_t) with op(phi^* f) = phi^*(T f) for t = h / kappa.

    op(h^s) = h^(s-k) Q(s, l) is computed symbolically; Q must split as
    sum_j q_j(s) h^j, and each q_(j-k) is rewritten in the falling
    factorial basis, which gives T = sum c_(e,b) kappa^e t^(e+b) d_t^b.
    With ``verify`` the result is checked against op(h^k) for two values
    of k computed by direct application.
    """
    kappa = as_rational(kappa)
    n = h.total_degree()
    max_order = n if max_order is None else max_order
    cls = apply_to_symbolic_power(op, h)
    if cls.payload.is_zero():
        return T_CTX.zero()
    parts = _decompose_in_h(cls.payload, h)
    result = T_CTX.zero()
    for j, q in parts.items():
        e = j - cls.shift
        coeffs = _falling_coefficients(q)
        if len(coeffs) - 1 > max_order:
            raise RestrictionError(f"restriction would have order {len(coeffs) - 1} > {max_order}")
        for b, c in enumerate(coeffs):
            if c:
                result = result + WeylOperator(T_CTX, {(e + b, b): c * kappa ** e})
    if verify:
        for k in (max(cls.shift, 1), max(cls.shift, 1) + 1):
            if not _pullback_agrees(op, h, result, k, kappa):
                raise RestrictionError(f"restriction fails the check at k = {k}")
    return result


def _pullback_agrees(op: WeylOperator, h: Polynomial, T: WeylOperator, k: int, kappa: Fraction) -> bool:
    lhs = apply(op, h ** k)
    rhs = Polynomial(h.ctx, {})
    # T(t^k) = sum c t^(a+k-b) (k)_b, pulled back along t = h / kappa
    for key, c in T.terms.items():
        a, b = key[0], key[1]
        ff = Fraction(1)
        for i in range(b):
            ff *= k - i
        if ff == 0:
            continue
        power = a + k - b
        if power < 0:
            return False
        rhs = rhs + (h ** power).scale(c * ff * kappa ** (k - power))
    return lhs == rhs


@dataclass(frozen=True)
class ReducedPresentation:
    kind: str  # L0_T or Z_T
    ctx: WeylContext
    euler: WeylOperator
    bgen: WeylOperator
    parameters: Dict[str, object] = field(default_factory=dict)

    @property
    def generators(self) -> Tuple[WeylOperator, WeylOperator]:
        if self.kind == L0_T:
            return (self.euler, self.bgen)
        return (self.bgen, self.euler)

    def rendered(self) -> List[str]:
        return [g.render() for g in self.generators]

    def as_json(self) -> dict:
        return {
            "plane": "(l0,t)" if self.kind == L0_T else "(z,t)",
            "generators": self.rendered(),
            "parameters": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.parameters.items()},
        }


def b_over_s(b: BernsteinPolynomial) -> Polynomial:
    """B(s) = b(s) / s for a reduction-normalized b."""
    if b.normalization != REDUCTION:
        raise ValueError("expects the reduction normalization")
    q = b.poly.exact_div(b.poly.ctx.var("s"))
    if q is None:
        raise ValueError("0 is not a root of b; not a reduction-normalized b-function")
    return q


def transpose_identity(b: BernsteinPolynomial) -> Tuple[bool, Optional[int]]:
    """Check t * (d_t B(t d_t))^T = sign * b(t d_t); returns (holds, sign)."""
    B = b_over_s(b)
    T = T_CTX.gen("dt") * poly_in_theta(B, T_CTX)
    lhs = T_CTX.gen("t") * transpose(T)
    rhs = poly_in_theta(b.poly, T_CTX)
    if lhs == rhs:
        return True, 1
    if lhs == -rhs:
        return True, -1
    return False, None


def transpose_identity_check(b: BernsteinPolynomial) -> bool:
    return transpose_identity(b)[0]


@dataclass(frozen=True)
class RestrictionCertificate:
    euler_restriction: str
    h_restriction: str
    field_restrictions: Tuple[str, ...]
    transpose_sign: int

    def as_json(self) -> dict:
        return {
            "sum l_i d_l_i": self.euler_restriction,
            "h(d_l)": self.h_restriction,
            "dual fields": list(self.field_restrictions),
            "transpose sign": self.transpose_sign,
        }


def restriction_certificate(analysis: DivisorAnalysis, b: BernsteinPolynomial) -> RestrictionCertificate:
    """Restrict the distinguished operators and check them against n t d_t and d_t B(t d_t)."""
    n = analysis.n
    dual = dualize(analysis)
    ctx = WeylContext.standard(dual.names)
    euler = ctx.zero()
    for lam in ctx.positions:
        euler = euler + ctx.gen(lam) * ctx.gen(ctx.derivation_of(lam))
    r_euler = restrict_through_h(euler, dual.h_dual)
    if r_euler != theta(T_CTX).scale(n):
        raise RestrictionError(f"sum l_i d_l_i restricts to {r_euler.render()}, not {n} t d_t")
    kappa = b.leading_constant
    r_h = restrict_through_h(ctx.derivation_polynomial(dual.h_dual), dual.h_dual, kappa=kappa)
    expected = T_CTX.gen("dt") * poly_in_theta(b_over_s(b), T_CTX)
    if r_h != expected:
        raise RestrictionError(f"h(d_l) restricts to {r_h.render()}, not {expected.render()}")
    fields = []
    for op in dual.operators(ctx):
        r = restrict_through_h(op, dual.h_dual)
        if not r.is_zero():
            raise RestrictionError(f"a dual field restricts to {r.render()} instead of 0")
        fields.append(r.render())
    holds, sign = transpose_identity(b)
    if not holds:
        raise RestrictionError("the transpose identity fails; roots of b are not symmetric")
    return RestrictionCertificate(r_euler.render(), r_h.render(), tuple(fields), sign)


def reduced_presentation(analysis: DivisorAnalysis, hp, beta0,
                         b: Optional[BernsteinPolynomial] = None,
                         cross_check: bool = True) -> ReducedPresentation:
    """(l0 d_l0 + n t d_t + (n+1) + beta0, h(p) t d_l0^n - b(t d_t)) on the (l0, t) plane.

    b is monic in the reduction normalization; its leading constant kappa
    is absorbed into the coordinate t = h_dual / kappa.
    """
    hp, beta0 = as_rational(hp), as_rational(beta0)
    if hp == 0:
        raise ValueError("h(p) must be nonzero")
    n = analysis.n
    if b is None:
        b = bernstein_selfdual(analysis.h)
    elif b.normalization != REDUCTION:
        b = convert_normalization(b)
    params: Dict[str, object] = {"n": n, "hp": hp, "beta0": beta0, "kappa": b.leading_constant}
    if cross_check:
        cert = restriction_certificate(analysis, b)
        params["transpose_sign"] = cert.transpose_sign
    ctx = L0T_CTX
    l0, dl0, t = ctx.gen("l0"), ctx.gen("dl0"), ctx.gen("t")
    euler = l0 * dl0 + theta(ctx).scale(n) + (n + 1) + beta0
    bgen = (t * dl0 ** n).scale(hp) - poly_in_theta(b.poly, ctx)
    return ReducedPresentation(L0_T, ctx, euler, bgen, params)


def _fl_images() -> Dict[str, WeylOperator]:
    z, dz = ZT_CTX.gen("z"), ZT_CTX.gen("dz")
    zinv = WeylOperator(ZT_CTX, {(-1, 0, 0, 0): Fraction(1)})
    return {"l0": z * z * dz, "dl0": zinv, "t": ZT_CTX.gen("t"), "dt": ZT_CTX.gen("dt")}


def localized_fl_image(op: WeylOperator) -> WeylOperator:
    """Image of an (l0, t) operator under d_l0 -> 1/z, l0 -> z^2 d_z."""
    return substitute(op, ZT_CTX, _fl_images())


def localized_fl_presentation(r: ReducedPresentation) -> ReducedPresentation:
    """(z^n b(t d_t) - h(p) t, z^2 d_z + n t z d_t + z (n + beta0)) on the (z, t) plane."""
    if r.kind != L0_T:
        raise ValueError("expects a presentation on the (l0, t) plane")
    n = r.parameters["n"]
    z = ZT_CTX.gen("z")
    euler = z * localized_fl_image(r.euler)
    bgen = -((z ** n) * localized_fl_image(r.bgen))
    params = dict(r.parameters)
    params["gauged"] = False
    return ReducedPresentation(Z_T, ZT_CTX, euler, bgen, params)


def _z_coefficient(op: WeylOperator) -> Fraction:
    return op.terms.get((1, 0, 0, 0), Fraction(0))


def _clear_z_denominators(op: WeylOperator) -> WeylOperator:
    low = min((k[0] for k in op.terms), default=0)
    if low >= 0:
        return op
    return (ZT_CTX.gen("z") ** (-low)) * op


def gauge_normalize(r: ReducedPresentation) -> ReducedPresentation:
    """Conjugate by z^a, a the coefficient of z in the Euler generator (a = n + beta0).

    d_z -> d_z - a/z removes the z*a term; generators without d_z are unchanged.
    """
    if r.kind != Z_T:
        raise ValueError("expects a presentation on the (z, t) plane")
    a = _z_coefficient(r.euler)
    params = dict(r.parameters)
    params["gauged"] = True
    if a == 0:
        return ReducedPresentation(Z_T, r.ctx, r.euler, r.bgen, params)
    zinv = WeylOperator(ZT_CTX, {(-1, 0, 0, 0): Fraction(1)})
    images = {"dz": ZT_CTX.gen("dz") - zinv.scale(a)}
    euler = _clear_z_denominators(substitute(r.euler, ZT_CTX, images))
    bgen = _clear_z_denominators(substitute(r.bgen, ZT_CTX, images))
    params["gauge_exponent"] = a
    return ReducedPresentation(Z_T, r.ctx, euler, bgen, params)


def quantum_de_specialize(r: ReducedPresentation) -> WeylOperator:
    """z = 1 in the b-generator: b(t d_t) - h(p) t."""
    if r.kind != Z_T:
        raise ValueError("expects a presentation on the (z, t) plane")
    if any(k[2] for k in r.bgen.terms):
        raise ValueError("the b-generator involves d_z; cannot set z = 1")
    out = {}
    for key, c in r.bgen.terms.items():
        nk = (key[1], key[3])
        out[nk] = out.get(nk, 0) + c
    return WeylOperator(T_CTX, {k: c for k, c in out.items() if c})


def expected_zt_generators(n: int, hp, b_poly: Polynomial) -> Tuple[WeylOperator, WeylOperator]:
    """Closed forms (z^n b(t d_t) - h(p) t, z^2 d_z + n t z d_t) after gauging."""
    ctx = ZT_CTX
    z, t = ctx.gen("z"), ctx.gen("t")
    bgen = (z ** n) * poly_in_theta(b_poly, ctx) - t.scale(as_rational(hp))
    euler = z * z * ctx.gen("dz") + (t * z * ctx.gen("dt")).scale(n)
    return bgen, euler


def inverse_image_reduction(n: int, beta0) -> List[str]:
    """The inverse-image presentation for normal crossings, stored as a closed form only."""
    ctx = L0T_CTX
    l0, dl0, t = ctx.gen("l0"), ctx.gen("dl0"), ctx.gen("t")
    th = theta(ctx)
    return [(t * dl0 ** n - th ** n).render(),
            (l0 * dl0 + th.scale(n) + (n + 1) + as_rational(beta0)).render()]

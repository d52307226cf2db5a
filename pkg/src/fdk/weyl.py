"""Normally ordered Weyl-algebra arithmetic with central parameters.

An operator is stored as a map from flat exponent keys

    (position exponents..., derivation exponents..., central exponents...)

to nonzero rational coefficients, always in normal order (all position
variables to the left of all derivations).  Central parameters such as ``s``
or ``beta0`` commute with everything.  Position variables listed as
*localized* may carry negative exponents, which is how ``t^-1`` and ``z^-1``
enter the reduction pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .polyring import (ContextMismatch, Polynomial, VarContext, as_rational,
                       _join_term, _join_terms)

Key = Tuple[int, ...]

ORDER = "order"
TOTAL_ORDER = "total-order"
FILTRATIONS = (ORDER, TOTAL_ORDER)


@dataclass(frozen=True)
class WeylContext:
    pairs: Tuple[Tuple[str, str], ...]
    centrals: Tuple[str, ...] = ()
    localized: frozenset = frozenset()

    def __post_init__(self):
        pairs = tuple((str(x), str(d)) for x, d in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "centrals", tuple(self.centrals))
        object.__setattr__(self, "localized", frozenset(self.localized))
        names = [x for x, _ in pairs] + [d for _, d in pairs] + list(self.centrals)
        if len(set(names)) != len(names):
            raise ValueError(f"identifiers of a Weyl context must be distinct: {names}")
        if not self.localized <= set(self.positions):
            raise ValueError("only position variables can be localized")

    @classmethod
    def standard(cls, positions: Sequence[str], centrals: Sequence[str] = (),
                 localized: Iterable[str] = ()) -> "WeylContext":
        """Context whose derivation variables are named ``"d" + position``."""
        return cls(tuple((x, "d" + x) for x in positions), tuple(centrals), frozenset(localized))

    @property
    def m(self) -> int:
        return len(self.pairs)

    @property
    def positions(self) -> Tuple[str, ...]:
        return tuple(x for x, _ in self.pairs)

    @property
    def derivations(self) -> Tuple[str, ...]:
        return tuple(d for _, d in self.pairs)

    @property
    def size(self) -> int:
        return 2 * self.m + len(self.centrals)

    def locate(self, name: str) -> int:
        """Flat key index of a generator name."""
        if name in self.positions:
            return self.positions.index(name)
        if name in self.derivations:
            return self.m + self.derivations.index(name)
        if name in self.centrals:
            return 2 * self.m + self.centrals.index(name)
        raise KeyError(f"unknown generator {name!r} in Weyl context")

    def gen(self, name: str) -> "WeylOperator":
        key = [0] * self.size
        key[self.locate(name)] = 1
        return WeylOperator(self, {tuple(key): Fraction(1)})

    def const(self, c) -> "WeylOperator":
        c = as_rational(c)
        return WeylOperator(self, {(0,) * self.size: c} if c else {})

    def zero(self) -> "WeylOperator":
        return WeylOperator(self, {})

    def one(self) -> "WeylOperator":
        return self.const(1)

    def position_context(self) -> VarContext:
        return VarContext(self.positions)

    def symbol_context(self) -> VarContext:
        """Commutative ring (positions, xi_<position>..., centrals) of principal symbols."""
        return VarContext(self.positions + tuple("xi_" + x for x in self.positions) + self.centrals)

    def derivation_of(self, position: str) -> str:
        return self.pairs[self.positions.index(position)][1]

    def from_polynomial(self, p: Polynomial) -> "WeylOperator":
        """Multiplication operator by p; p's variables may be positions or centrals."""
        idx = [self.locate(n) for n in p.ctx.names]
        if any(self.m <= i < 2 * self.m for i in idx):
            raise ValueError("a multiplication operator cannot involve derivation variables")
        return self._embed(p, idx)

    def derivation_polynomial(self, p: Polynomial, mapping: Optional[Mapping[str, str]] = None) -> "WeylOperator":
        """Constant-coefficient operator p(d): variable v of p becomes derivation mapping[v].

        By default a variable named like a position is sent to its derivation.
        """
        idx = []
        for n in p.ctx.names:
            target = (mapping or {}).get(n)
            if target is None:
                target = self.derivation_of(n) if n in self.positions else n
            idx.append(self.locate(target))
        return self._embed(p, idx)

    def _embed(self, p: Polynomial, idx: Sequence[int]) -> "WeylOperator":
        out = {}
        for e, c in p.terms.items():
            key = [0] * self.size
            for i, k in zip(idx, e):
                key[i] += k
            out[tuple(key)] = c
        return WeylOperator(self, out)


@lru_cache(maxsize=None)
def _commute(b: int, c: int) -> Tuple[Tuple[int, int], ...]:
    """d^b x^c = sum coeff * x^(c-k) d^(b-k); returns ((k, coeff), ...).

    Valid for negative c (Laurent monomials) via the falling factorial.
    """
    out = []
    ff = 1
    for k in range(b + 1):
        if k:
            ff *= c - k + 1
        if ff == 0:
            break
        out.append((k, comb(b, k) * ff))
    return tuple(out)


def _mono_product(m: int, ka: Key, kb: Key) -> List[Tuple[Key, int]]:
    """Normally ordered product of two monomials, integer coefficients."""
    size = len(ka)
    partial: List[Tuple[List[int], int]] = [([0] * size, 1)]
    for i in range(m):
        b = ka[m + i]
        c = kb[i]
        if b == 0 or c == 0:
            for key, _ in partial:
                key[i] = ka[i] + c
                key[m + i] = b + kb[m + i]
            continue
        expansions = _commute(b, c)
        new = []
        for key, coeff in partial:
            for k, cc in expansions:
                nk = list(key)
                nk[i] = ka[i] + c - k
                nk[m + i] = b - k + kb[m + i]
                new.append((nk, coeff * cc))
        partial = new
    for j in range(2 * m, size):
        for key, _ in partial:
            key[j] = ka[j] + kb[j]
    return [(tuple(k), c) for k, c in partial]


class WeylOperator:
    """Immutable normally ordered Weyl-algebra element."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: WeylContext, terms: Mapping[Key, object] = ()):
        self.ctx = ctx
        clean = {}
        for k, c in dict(terms).items():
            if len(k) != ctx.size:
                raise ValueError("key length does not match the Weyl context")
            c = as_rational(c)
            if c:
                clean[tuple(k)] = c
        for k in clean:
            for i, x in enumerate(k[:ctx.m]):
                if x < 0 and ctx.positions[i] not in ctx.localized:
                    raise ValueError(f"negative power of non-localized {ctx.positions[i]}")
            if any(x < 0 for x in k[ctx.m:]):
                raise ValueError("derivation and central exponents must be nonnegative")
        self.terms: Dict[Key, Fraction] = clean
        self._hash = None

    @classmethod
    def _raw(cls, ctx, terms):
        op = cls.__new__(cls)
        op.ctx = ctx
        op.terms = terms
        op._hash = None
        return op

    def __eq__(self, other):
        if isinstance(other, WeylOperator):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ctx.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        return f"WeylOperator({self.render()!r})"

    def __str__(self):
        return self.render()

    def _coerce(self, other) -> "WeylOperator":
        if isinstance(other, WeylOperator):
            if other.ctx != self.ctx:
                raise ContextMismatch("operators live in different Weyl contexts")
            return other
        return self.ctx.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return WeylOperator._raw(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return WeylOperator._raw(self.ctx, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "WeylOperator":
        c = as_rational(c)
        if not c:
            return self.ctx.zero()
        return WeylOperator._raw(self.ctx, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, WeylOperator):
            return self.scale(other)
        return normal_product(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers of operators are not defined")
        out = self.ctx.one()
        for _ in range(k):
            out = out * self
        return out

    # -- structure ----------------------------------------------------------------

    def order(self) -> int:
        """Order in the derivations (-1 for the zero operator)."""
        m = self.ctx.m
        return max((sum(k[m:2 * m]) for k in self.terms), default=-1)

    def filtration_degree(self, kind: str = ORDER, graded_centrals: Sequence[str] = ("s",)) -> int:
        m = self.ctx.m
        graded = [2 * m + self.ctx.centrals.index(c) for c in graded_centrals if c in self.ctx.centrals]
        if kind == TOTAL_ORDER and not graded:
            raise ValueError("total-order filtration needs a graded central such as s")
        return max((_fdeg(k, m, graded if kind == TOTAL_ORDER else ()) for k in self.terms), default=-1)

    def render(self) -> str:
        if not self.terms:
            return "0"
        names = list(self.ctx.positions) + list(self.ctx.derivations) + list(self.ctx.centrals)
        m = self.ctx.m

        def sort_key(k):
            return (sum(k[m:2 * m]), sum(k[:m]) + sum(k[2 * m:]), k)

        parts = []
        for k in sorted(self.terms, key=sort_key, reverse=True):
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, k) if e)
            parts.append(_join_term(self.terms[k], mono))
        return _join_terms(parts)


def _fdeg(k: Key, m: int, graded: Sequence[int]) -> int:
    return sum(k[m:2 * m]) + sum(k[j] for j in graded)


def normal_product(a: WeylOperator, b: WeylOperator) -> WeylOperator:
    """Normally ordered product a*b using d^b x^c = sum_k C(b,k) (c)_k x^(c-k) d^(b-k)."""
    b = a._coerce(b)
    m = a.ctx.m
    out: Dict[Key, Fraction] = {}
    get = out.get
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            cab = ca * cb
            for key, coeff in _mono_product(m, ka, kb):
                out[key] = get(key, 0) + cab * coeff
    return WeylOperator._raw(a.ctx, {k: c for k, c in out.items() if c})


def commutator(a: WeylOperator, b: WeylOperator) -> WeylOperator:
    return a * b - b * a


# -- module actions -------------------------------------------------------------------

def apply(op: WeylOperator, p: Polynomial, central_values: Optional[Mapping[str, object]] = None) -> Polynomial:
    """Natural action on polynomials in the position variables.

    Central parameters act through ``central_values`` (default 0, i.e. they
    annihilate polynomials, as s does in D[s] acting on C[x]).
    """
    ctx = op.ctx
    if p.ctx.names != ctx.positions:
        raise ContextMismatch(f"polynomial ring {p.ctx.names} does not match positions {ctx.positions}")
    values = {c: as_rational((central_values or {}).get(c, 0)) for c in ctx.centrals}
    m = ctx.m
    out: Dict[Tuple[int, ...], Fraction] = {}
    for key, c in op.terms.items():
        cc = c
        for name, e in zip(ctx.centrals, key[2 * m:]):
            if e:
                cc *= values[name] ** e
        if not cc:
            continue
        a, b = key[:m], key[m:2 * m]
        for e, v in p.terms.items():
            coeff = cc * v
            ne = []
            for ai, bi, ei in zip(a, b, e):
                if bi:
                    if ei < bi:
                        coeff = 0
                        break
                    for j in range(bi):
                        coeff *= ei - j
                ne.append(ei - bi + ai)
            if coeff:
                ne = tuple(ne)
                out[ne] = out.get(ne, 0) + coeff
    return Polynomial(p.ctx, {e: c for e, c in out.items() if c})


@dataclass(frozen=True)
class SymbolicPowerClass:
    """The expression h^(s - shift) * payload(s, w)."""

    shift: int
    payload: Polynomial
    h: Polynomial

    def specialize(self, k: int) -> Polynomial:
        """Value at s = k >= shift as a polynomial in w."""
        if k < self.shift:
            raise ValueError("specialization would need a negative power of h")
        w = Polynomial(self.h.ctx, {})
        for e, c in self.payload.terms.items():
            w = w + Polynomial(self.h.ctx, {e[1:]: c * k ** e[0]})
        return w * self.h ** (k - self.shift)

    def s_only(self) -> Optional[Polynomial]:
        """Payload as a univariate polynomial in s, if it involves no w."""
        if any(any(e[1:]) for e in self.payload.terms):
            return None
        ring = VarContext((self.payload.ctx.names[0],))
        return Polynomial(ring, {(e[0],): c for e, c in self.payload.terms.items()})


def apply_to_symbolic_power(op: WeylOperator, h: Polynomial, s_name: str = "s",
                            reduce: bool = True) -> SymbolicPowerClass:
    """Compute op(h^s) = h^(s-k) * Q(s, w) by the chain rule.

    ``d_i(h^(s-j) g) = h^(s-j-1) ((s-j) (d_i h) g + h d_i g)``.  The only
    central allowed in ``op`` is ``s_name``, acting as multiplication by s.
    With ``reduce`` the payload is divided by h as long as that is exact.
    """
    ctx = op.ctx
    if h.ctx.names != ctx.positions:
        raise ContextMismatch("h must live in the position variables of the operator")
    m = ctx.m
    for key in op.terms:
        for c, e in zip(ctx.centrals, key[2 * m:]):
            if e and c != s_name:
                raise ValueError(f"central {c!r} cannot act on h^{s_name}")
    ring = VarContext((s_name,) + ctx.positions)
    s = ring.var(s_name)
    hh = h.embed(ring)
    grads = [hh.differentiate(x) for x in ctx.positions]
    cache: Dict[Tuple[int, ...], Polynomial] = {(0,) * m: ring.one()}

    def derived(b: Tuple[int, ...]) -> Polynomial:
        # payload g with d^b (h^s) = h^(s-|b|) g
        if b in cache:
            return cache[b]
        i = max(j for j, x in enumerate(b) if x)
        prev_b = b[:i] + (b[i] - 1,) + b[i + 1:]
        g = derived(prev_b)
        j = sum(prev_b)
        res = (s - j) * grads[i] * g + hh * g.differentiate(ctx.positions[i])
        cache[b] = res
        return res

    groups: Dict[Tuple[int, ...], Polynomial] = {}
    for key, c in op.terms.items():
        b = key[m:2 * m]
        mono = {}
        e = key[:m]
        sexp = key[2 * m + ctx.centrals.index(s_name)] if s_name in ctx.centrals else 0
        mono[(sexp,) + tuple(e)] = c
        groups[b] = groups.get(b, ring.zero()) + Polynomial(ring, mono)
    if not groups:
        return SymbolicPowerClass(0, ring.zero(), h)
    top = max(sum(b) for b in groups)
    total = ring.zero()
    for b, mult in groups.items():
        g = derived(b)
        total = total + mult * g * hh ** (top - sum(b))
    shift = top
    if reduce:
        while shift > 0 and not total.is_zero():
            q = total.exact_div(hh)
            if q is None:
                break
            total = q
            shift -= 1
        if total.is_zero():
            shift = 0
    return SymbolicPowerClass(shift, total, h)


# -- symbols ----------------------------------------------------------------------

def principal_symbol(op: WeylOperator, kind: str = ORDER, graded_centrals: Sequence[str] = ("s",)) -> Polynomial:
    """Top filtration part of op as a commutative polynomial in (w, xi, centrals)."""
    if kind not in FILTRATIONS:
        raise ValueError(f"unknown filtration {kind!r}")
    ctx = op.ctx
    ring = ctx.symbol_context()
    if not op.terms:
        return ring.zero()
    m = ctx.m
    graded = [2 * m + ctx.centrals.index(c) for c in graded_centrals if c in ctx.centrals]
    if kind == TOTAL_ORDER and not graded:
        raise ValueError("total-order filtration needs a graded central such as s")
    graded = graded if kind == TOTAL_ORDER else []
    top = max(_fdeg(k, m, graded) for k in op.terms)
    return Polynomial(ring, {k: c for k, c in op.terms.items() if _fdeg(k, m, graded) == top})


def symbol_of_degree(op: WeylOperator, degree: int, kind: str = ORDER,
                     graded_centrals: Sequence[str] = ("s",)) -> Polynomial:
    """Degree-``degree`` part of op (zero if op has lower filtration degree)."""
    ctx = op.ctx
    ring = ctx.symbol_context()
    m = ctx.m
    graded = [2 * m + ctx.centrals.index(c) for c in graded_centrals if c in ctx.centrals]
    graded = graded if kind == TOTAL_ORDER else []
    return Polynomial(ring, {k: c for k, c in op.terms.items() if _fdeg(k, m, graded) == degree})


# -- anti-automorphism and homomorphisms ------------------------------------------------

def transpose(op: WeylOperator) -> WeylOperator:
    """Anti-automorphism fixing positions and centrals, d -> -d."""
    ctx = op.ctx
    m = ctx.m
    out = ctx.zero()
    for key, c in op.terms.items():
        dpart = [0] * ctx.size
        dpart[m:2 * m] = key[m:2 * m]
        xpart = [0] * ctx.size
        xpart[:m] = key[:m]
        xpart[2 * m:] = key[2 * m:]
        sign = -1 if sum(key[m:2 * m]) % 2 else 1
        d = WeylOperator._raw(ctx, {tuple(dpart): c * sign})
        x = WeylOperator._raw(ctx, {tuple(xpart): Fraction(1)})
        out = out + d * x
    return out


def substitute(op: WeylOperator, target: WeylContext, images: Mapping[str, WeylOperator]) -> WeylOperator:
    """Image of op under the algebra map given on generators.

    ``images`` maps every generator name of ``op.ctx`` (positions,
    derivations, centrals) to an operator in ``target``; generators missing
    from ``images`` go to the equally named generator of ``target``.
    Negative powers of localized positions need a monomial image.
    """
    src = op.ctx
    names = list(src.positions) + list(src.derivations) + list(src.centrals)
    imgs = []
    for n in names:
        img = images.get(n)
        if img is None:
            img = target.gen(n)
        elif not isinstance(img, WeylOperator):
            img = target.const(img)
        if img.ctx != target:
            raise ContextMismatch(f"image of {n!r} is not in the target context")
        imgs.append(img)
    cache: Dict[Tuple[int, int], WeylOperator] = {}

    def power(i: int, k: int) -> WeylOperator:
        if (i, k) not in cache:
            if k >= 0:
                cache[(i, k)] = imgs[i] ** k
            else:
                cache[(i, k)] = _monomial_inverse(imgs[i], names[i]) ** (-k)
        return cache[(i, k)]

    out = target.zero()
    for key, c in op.terms.items():
        term = target.const(c)
        for i, k in enumerate(key):
            if k:
                term = term * power(i, k)
        out = out + term
    return out


def _monomial_inverse(img: WeylOperator, name: str) -> WeylOperator:
    if len(img.terms) != 1:
        raise ValueError(f"image of localized {name!r} must be an invertible monomial")
    (key, c), = img.terms.items()
    m = img.ctx.m
    if any(key[m:2 * m]):
        raise ValueError(f"image of localized {name!r} must not involve derivations")
    inv = tuple(-k for k in key[:m]) + key[m:2 * m] + key[2 * m:]
    if any(key[2 * m:]):
        raise ValueError(f"image of localized {name!r} must not involve centrals")
    return WeylOperator(img.ctx, {inv: 1 / c})


def fourier_laplace(op: WeylOperator, dictionary: Sequence[Tuple[str, str]],
                    target: Optional[WeylContext] = None) -> WeylOperator:
    """Fourier-Laplace isomorphism w_i -> d_(lambda_i), d_(w_i) -> -lambda_i.

    ``dictionary`` pairs every source position with its dual position
    variable; the target context defaults to the standard one on those duals
    with the same centrals.
    """
    src = op.ctx
    mapping = dict(dictionary)
    missing = [x for x in src.positions if x not in mapping]
    if missing:
        raise ValueError(f"Fourier-Laplace dictionary misses {missing}")
    if target is None:
        target = WeylContext.standard([mapping[x] for x in src.positions], src.centrals)
    images = {}
    for x, dx in src.pairs:
        lam = mapping[x]
        images[x] = target.gen(target.derivation_of(lam))
        images[dx] = -target.gen(lam)
    for c in src.centrals:
        images[c] = target.gen(c)
    return substitute(op, target, images)


def specialize_centrals(op: WeylOperator, values: Mapping[str, object],
                        target: Optional[WeylContext] = None) -> WeylOperator:
    """Substitute rational values for some central parameters."""
    src = op.ctx
    if target is None:
        target = WeylContext(src.pairs, tuple(c for c in src.centrals if c not in values), src.localized)
    images = {c: target.const(v) for c, v in values.items()}
    return substitute(op, target, images)


def operator_from_symbol_ring(p: Polynomial, ctx: WeylContext) -> WeylOperator:
    """Normally ordered operator whose monomials mirror the symbol-ring monomials of p."""
    if p.ctx != ctx.symbol_context():
        raise ContextMismatch("polynomial is not in the symbol ring of this context")
    return WeylOperator(ctx, dict(p.terms))

"""Exact multivariate polynomials over the rationals.

A polynomial is a sparse map from exponent tuples to nonzero ``Fraction``
coefficients, tied to a :class:`VarContext` that fixes the variable names,
their order and their weights::

    ctx = VarContext(("w1", "w2"))
    p = ctx.var("w1") ** 2 - ctx.var("w2")    # {(2, 0): 1, (0, 1): -1}

Everything here is exact; no floating point is involved anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import permutations
from numbers import Rational
from typing import Callable, Dict, Mapping, Optional, Sequence, Tuple

Exponent = Tuple[int, ...]
Coeff = Fraction


class ContextMismatch(ValueError):
    """Raised when two objects living in different rings are combined."""


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-1/3"`` to ``Fraction``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def render_rational(q: Fraction) -> str:
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class VarContext:
    names: Tuple[str, ...]
    weights: Tuple[int, ...] = ()

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        weights = tuple(self.weights) if self.weights else (1,) * len(names)
        if len(weights) != len(names):
            raise ValueError("weights length must equal names length")
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be positive integers")
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}; context is {self.names}") from None

    def var(self, name: str) -> "Polynomial":
        e = [0] * len(self.names)
        e[self.index(name)] = 1
        return Polynomial(self, {tuple(e): Fraction(1)})

    def gens(self) -> Tuple["Polynomial", ...]:
        return tuple(self.var(n) for n in self.names)

    def const(self, c) -> "Polynomial":
        c = as_rational(c)
        if c == 0:
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * len(self.names): c})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def with_weights(self, weights: Sequence[int]) -> "VarContext":
        return VarContext(self.names, tuple(weights))


# -- monomial orders --------------------------------------------------------

def degrevlex_key(e: Exponent):
    return (sum(e), tuple(-x for x in reversed(e)))


def lex_key(e: Exponent):
    return e


ORDER_KEYS: Dict[str, Callable[[Exponent], object]] = {
    "degrevlex": degrevlex_key,
    "lex": lex_key,
}


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: VarContext, terms: Mapping[Exponent, object] = ()):
        self.ctx = ctx
        n = len(ctx)
        clean: Dict[Exponent, Fraction] = {}
        for e, c in dict(terms).items():
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match context of size {n}")
            c = as_rational(c)
            if c != 0:
                clean[tuple(e)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ctx: VarContext, terms: Dict[Exponent, Fraction]) -> "Polynomial":
        # terms must already be clean (tuples, nonzero Fractions)
        p = cls.__new__(cls)
        p.ctx = ctx
        p.terms = terms
        p._hash = None
        return p

    # -- basic protocol -----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
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

    def __repr__(self):
        return f"Polynomial({self.render()!r})"

    def __str__(self):
        return self.render()

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * len(self.ctx), Fraction(0))

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"{self.ctx.names} vs {other.ctx.names}")
            return other
        return self.ctx.const(other)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ctx, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        c = as_rational(c)
        if c == 0:
            return self.ctx.zero()
        return Polynomial._raw(self.ctx, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._coerce(other)
        if len(self.terms) < len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        out: Dict[Exponent, Fraction] = {}
        get = out.get
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
        return Polynomial._raw(self.ctx, {e: c for e, c in out.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        result = self.ctx.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, e: Exponent, c=1) -> "Polynomial":
        c = as_rational(c)
        return Polynomial._raw(self.ctx, {_add_exp(x, e): v * c for x, v in self.terms.items()})

    # -- structure ------------------------------------------------------------

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.ctx.index(name)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def weighted_degree(self, weights: Optional[Sequence[int]] = None) -> Optional[int]:
        """Common weighted degree if the polynomial is weighted-homogeneous, else None."""
        w = tuple(weights) if weights is not None else self.ctx.weights
        degs = {sum(a * b for a, b in zip(e, w)) for e in self.terms}
        if len(degs) == 1:
            return degs.pop()
        if not degs:
            return None
        return None

    def is_homogeneous(self, weights: Optional[Sequence[int]] = None) -> bool:
        return self.is_zero() or self.weighted_degree(weights) is not None

    def homogeneous_components(self) -> Dict[int, "Polynomial"]:
        parts: Dict[int, Dict[Exponent, Fraction]] = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {d: Polynomial._raw(self.ctx, t) for d, t in parts.items()}

    def variables(self) -> Tuple[str, ...]:
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return tuple(self.ctx.names[i] for i in sorted(used))

    def leading(self, order: str = "degrevlex") -> Tuple[Exponent, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = ORDER_KEYS[order]
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def monic(self, order: str = "degrevlex") -> "Polynomial":
        if not self.terms:
            return self
        _, c = self.leading(order)
        return self.scale(1 / c)

    def content(self) -> Fraction:
        """Positive rational c with self/c having coprime integer coefficients."""
        from math import gcd, lcm
        if not self.terms:
            return Fraction(0)
        num = reduce(gcd, (c.numerator for c in self.terms.values()))
        den = reduce(lcm, (c.denominator for c in self.terms.values()))
        return Fraction(abs(num), den)

    # -- calculus and substitution -------------------------------------------------

    def differentiate(self, name: str) -> "Polynomial":
        i = self.ctx.index(name)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = c * k
        return Polynomial._raw(self.ctx, out)

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        """Evaluate at a full rational point."""
        pts = [as_rational(values[n]) for n in self.ctx.names]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(pts, e):
                if k:
                    term *= x ** k
            total += term
        return total

    def substitute(self, images: Mapping[str, "Polynomial"], target: Optional[VarContext] = None) -> "Polynomial":
        """Ring map sending each variable to a polynomial in ``target``.

        Variables missing from ``images`` are sent to the equally named
        variable of ``target`` (which must then contain it).
        """
        target = target or self.ctx
        imgs = []
        for n in self.ctx.names:
            if n in images:
                img = images[n]
                if not isinstance(img, Polynomial):
                    img = target.const(img)
                imgs.append(img)
            else:
                imgs.append(target.var(n))
        powers: Dict[Tuple[int, int], Polynomial] = {}

        def pw(i, k):
            if (i, k) not in powers:
                powers[(i, k)] = imgs[i] ** k
            return powers[(i, k)]

        out = target.zero()
        for e, c in self.terms.items():
            term = target.const(c)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            out = out + term
        return out

    def embed(self, target: VarContext) -> "Polynomial":
        """Reinterpret in a context containing all of this context's variables."""
        idx = [target.index(n) for n in self.ctx.names]
        m = len(target)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * m
            for i, k in zip(idx, e):
                ne[i] = k
            out[tuple(ne)] = c
        return Polynomial._raw(target, out)

    # -- division -----------------------------------------------------------------

    def divmod(self, divisors: Sequence["Polynomial"], order: str = "degrevlex"):
        """Multivariate division; returns (quotients, remainder)."""
        key = ORDER_KEYS[order]
        divs = [self._coerce(d) for d in divisors]
        leads = [d.leading(order) for d in divs]
        quots: list = [dict() for _ in divs]
        rem: Dict[Exponent, Fraction] = {}
        work = dict(self.terms)
        while work:
            e = max(work, key=key)
            c = work[e]
            for i, (le, lc) in enumerate(leads):
                if all(x >= y for x, y in zip(e, le)):
                    qe = tuple(x - y for x, y in zip(e, le))
                    qc = c / lc
                    quots[i][qe] = quots[i].get(qe, 0) + qc
                    for de, dc in divs[i].terms.items():
                        ne = _add_exp(de, qe)
                        v = work.get(ne, 0) - qc * dc
                        if v:
                            work[ne] = v
                        else:
                            work.pop(ne, None)
                    break
            else:
                rem[e] = c
                del work[e]
        return [Polynomial(self.ctx, q) for q in quots], Polynomial._raw(self.ctx, rem)

    def exact_div(self, other: "Polynomial") -> Optional["Polynomial"]:
        """Quotient self/other if the division is exact, else None."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        (q,), r = self.divmod([other])
        return q if r.is_zero() else None

    def divides(self, other: "Polynomial") -> bool:
        return self._coerce(other).exact_div(self) is not None

    # -- rendering ------------------------------------------------------------------

    def render(self, order: str = "degrevlex", names: Optional[Sequence[str]] = None) -> str:
        if not self.terms:
            return "0"
        names = list(names or self.ctx.names)
        key = ORDER_KEYS[order]
        out = []
        for e in sorted(self.terms, key=key, reverse=True):
            c = self.terms[e]
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            out.append(_join_term(c, mono))
        return _join_terms(out)


def _join_term(c: Fraction, mono: str) -> Tuple[bool, str]:
    neg = c < 0
    a = abs(c)
    if not mono:
        return neg, render_rational(a)
    if a == 1:
        return neg, mono
    coeff = render_rational(a)
    if a.denominator != 1:
        coeff = f"({coeff})"
    return neg, f"{coeff}*{mono}"


def _join_terms(parts) -> str:
    s = ""
    for i, (neg, body) in enumerate(parts):
        if i == 0:
            s = ("-" if neg else "") + body
        else:
            s += (" - " if neg else " + ") + body
    return s


# -- gcd and squarefreeness --------------------------------------------------------

def _as_univariate(p: Polynomial, i: int) -> Dict[int, Polynomial]:
    """Coefficients of p as a polynomial in variable i (coefficients free of it)."""
    parts: Dict[int, Dict[Exponent, Fraction]] = {}
    for e, c in p.terms.items():
        k = e[i]
        parts.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
    return {k: Polynomial._raw(p.ctx, t) for k, t in parts.items()}


def _from_univariate(coeffs: Dict[int, Polynomial], i: int, ctx: VarContext) -> Polynomial:
    out: Dict[Exponent, Fraction] = {}
    for k, c in coeffs.items():
        for e, v in c.terms.items():
            out[e[:i] + (k,) + e[i + 1:]] = v
    return Polynomial._raw(ctx, out)


def _main_variable(a: Polynomial, b: Polynomial) -> Optional[int]:
    used = set()
    for p in (a, b):
        for e in p.terms:
            used.update(j for j, x in enumerate(e) if x)
    return max(used) if used else None


def _content_in(p: Polynomial, i: int) -> Polynomial:
    coeffs = list(_as_univariate(p, i).values())
    return reduce(gcd, coeffs)


def _pseudo_rem(a: Dict[int, Polynomial], b: Dict[int, Polynomial]) -> Dict[int, Polynomial]:
    db = max(b)
    lb = b[db]
    r = dict(a)
    while r and max(r) >= db:
        dr = max(r)
        lr = r[dr]
        shift = dr - db
        new: Dict[int, Polynomial] = {}
        for k, c in r.items():
            new[k] = c * lb
        for k, c in b.items():
            v = new.get(k + shift, lb.ctx.zero()) - lr * c
            new[k + shift] = v
        r = {k: c for k, c in new.items() if not c.is_zero()}
    return r


def gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic (degrevlex) greatest common divisor via primitive PRS on the last variable."""
    b = a._coerce(b)
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    i = _main_variable(a, b)
    if i is None:
        return a.ctx.one()
    ua, ub = _as_univariate(a, i), _as_univariate(b, i)
    if max(ua) == 0 and max(ub) == 0:
        return _gcd_polys([a, b] )
    if max(ua) == 0:
        return _gcd_polys([a] + list(ub.values()))
    if max(ub) == 0:
        return _gcd_polys([b] + list(ua.values()))
    ca = _gcd_polys(list(ua.values()))
    cb = _gcd_polys(list(ub.values()))
    cont = gcd(ca, cb)
    pa = {k: v.exact_div(ca) for k, v in ua.items()}
    pb = {k: v.exact_div(cb) for k, v in ub.items()}
    if max(pa) < max(pb):
        pa, pb = pb, pa
    while pb and max(pb) > 0:
        r = _pseudo_rem(pa, pb)
        pa = pb
        if not r:
            pb = {}
            break
        cr = _gcd_polys(list(r.values()))
        pb = {k: v.exact_div(cr) for k, v in r.items()}
    if pb:  # nonzero constant in the main variable: primitive parts are coprime
        prim = a.ctx.one()
    else:
        cp = _gcd_polys(list(pa.values()))
        prim = _from_univariate({k: v.exact_div(cp) for k, v in pa.items()}, i, a.ctx)
    return (prim * cont).monic()


def _gcd_polys(ps: Sequence[Polynomial]) -> Polynomial:
    g = ps[0].ctx.zero()
    for p in ps:
        g = gcd(g, p) if not g.is_zero() else p.monic()
        if g.is_constant() and not g.is_zero():
            return g.ctx.one()
    return g


def is_squarefree(p: Polynomial) -> bool:
    """True iff p has no repeated irreducible factor (characteristic zero)."""
    if p.is_zero():
        raise ValueError("squarefreeness of the zero polynomial is undefined")
    g = p.monic()
    for name in p.variables():
        g = gcd(g, p.differentiate(name))
        if g.is_constant():
            return True
    return g.is_constant()


def weighted_degree(p: Polynomial, weights: Optional[Sequence[int]] = None) -> Optional[int]:
    return p.weighted_degree(weights)


def differentiate(p: Polynomial, name: str) -> Polynomial:
    return p.differentiate(name)


def multiply(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * a._coerce(b)


# -- matrices ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolyMatrix:
    rows: int
    cols: int
    entries: Tuple[Polynomial, ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if self.rows <= 0 or self.cols <= 0:
            raise ValueError("matrix dimensions must be positive")
        if len(entries) != self.rows * self.cols:
            raise ValueError("entries length must be rows*cols")
        ctxs = {e.ctx for e in entries}
        if len(ctxs) != 1:
            raise ContextMismatch("matrix entries must share one context")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Polynomial]]) -> "PolyMatrix":
        r = len(rows)
        c = len(rows[0])
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return cls(r, c, tuple(x for row in rows for x in row))

    @property
    def ctx(self) -> VarContext:
        return self.entries[0].ctx

    def __getitem__(self, ij) -> Polynomial:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[Polynomial, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.cols, self.rows,
                          tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))


def determinant(m: PolyMatrix) -> Polynomial:
    """Exact determinant by Laplace expansion along rows with memoized minors."""
    if m.rows != m.cols:
        raise ValueError(f"determinant of a non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    memo: Dict[Tuple[int, frozenset], Polynomial] = {}

    def minor(row: int, cols: Tuple[int, ...]) -> Polynomial:
        if row == n:
            return m.ctx.one()
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = m.ctx.zero()
        for pos, j in enumerate(cols):
            entry = m[row, j]
            if entry.is_zero():
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1:])
            term = entry * sub
            total = total - term if pos % 2 else total + term
        memo[key] = total
        return total

    return minor(0, tuple(range(n)))


def determinant_by_permutations(m: PolyMatrix) -> Polynomial:
    """Leibniz formula; exponential cost, used as an independent check."""
    n = m.rows
    total = m.ctx.zero()
    for perm in permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = m.ctx.one()
        for i, j in enumerate(perm):
            term = term * m[i, j]
        total = total - term if inversions % 2 else total + term
    return total


def proportionality_constant(p: Polynomial, q: Polynomial) -> Optional[Fraction]:
    """Rational c with p == c*q, or None."""
    if q.is_zero():
        return None if not p.is_zero() else Fraction(0)
    e, c = q.leading()
    ratio = p.terms.get(e, Fraction(0)) / c
    return ratio if p == q.scale(ratio) else None

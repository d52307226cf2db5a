"""Commutative Groebner bases, Krull dimension and regular-sequence certificates.

Buchberger's algorithm with the normal selection strategy (smallest lcm
degree first) and Gebauer-Moeller pair elimination.  Coefficients are exact
rationals, or integers modulo a prime in modular mode.  Regularity of a
homogeneous sequence is decided by the dimension count
``dim V(gens) == #vars - #gens``, which is exact in a graded polynomial
ring because polynomial rings are Cohen-Macaulay.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .polyring import ORDER_KEYS, Polynomial, VarContext
from .weyl import ORDER, TOTAL_ORDER, principal_symbol

DEFAULT_PRIME = 2147483647
UNIT_IDEAL_DIMENSION = -1  # stands in for -infinity

Exp = Tuple[int, ...]

SK_ORDER = "sk_order"
SK_TOTAL = "sk_total"
IS_SYMBOLS = "Is_symbols"
IS_SYMBOLS_WITH_S = "Is_symbols_with_s"
HOLONOMICITY_BETA = "holonomicity_beta"
MODES = (SK_ORDER, SK_TOTAL, IS_SYMBOLS, IS_SYMBOLS_WITH_S, HOLONOMICITY_BETA)


class GroebnerCancelled(RuntimeError):
    pass


class GroebnerBudgetExceeded(RuntimeError):
    pass


class InhomogeneousInput(ValueError):
    pass


class CancellationToken:
    """Cooperative cancellation flag, checked between reduction steps."""

    def __init__(self):
        self._cancelled = False

    def cancel(self):
        self._cancelled = True

    @property
    def cancelled(self) -> bool:
        return self._cancelled


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "degrevlex"
    variable_order: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ORDER_KEYS:
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key_function(self, nvars: int):
        perm = self.variable_order or tuple(range(nvars))
        if sorted(perm) != list(range(nvars)):
            raise ValueError("variable order must be a permutation of the context")
        base = ORDER_KEYS[self.kind]
        if perm == tuple(range(nvars)):
            return base
        return lambda e: base(tuple(e[i] for i in perm))


@dataclass(frozen=True)
class GroebnerBasis:
    ctx: VarContext
    order: MonomialOrder
    elements: Tuple[Polynomial, ...]
    modulus: Optional[int] = None

    def leading_monomials(self) -> List[Exp]:
        key = self.order.key_function(len(self.ctx))
        return [max(g.terms, key=key) for g in self.elements]

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.elements)

    def reduce(self, f: Polynomial) -> Polynomial:
        """Normal form of f modulo the basis."""
        eng = _Engine(len(self.ctx), self.order, self.modulus)
        basis = []
        for g in self.elements:
            gm = eng.monic(eng.convert(g))
            basis.append((eng.lead(gm), gm))
        rem = eng.reduce(eng.convert(f), basis, full=True)
        return eng.back(rem, self.ctx)

    def contains(self, f: Polynomial) -> bool:
        return self.reduce(f).is_zero()


class _Engine:
    """Coefficient arithmetic and reduction over Q or GF(p)."""

    def __init__(self, nvars: int, order: MonomialOrder, modulus: Optional[int],
                 cancel: Optional[CancellationToken] = None, deadline: Optional[float] = None):
        self.n = nvars
        self.key = order.key_function(nvars)
        self.p = modulus
        self.cancel = cancel
        self.deadline = deadline
        self._keys: Dict[Exp, object] = {}

    def k(self, e: Exp):
        v = self._keys.get(e)
        if v is None:
            v = self.key(e)
            self._keys[e] = v
        return v

    def coeff(self, c: Fraction):
        if self.p is None:
            return Fraction(c)
        c = Fraction(c)
        if c.denominator % self.p == 0:
            raise ZeroDivisionError(f"coefficient denominator divisible by p={self.p}")
        return c.numerator * pow(c.denominator, -1, self.p) % self.p

    def inv(self, c):
        return pow(c, -1, self.p) if self.p else 1 / c

    def convert(self, f: Polynomial) -> Dict[Exp, object]:
        out = {}
        for e, c in f.terms.items():
            v = self.coeff(c)
            if v:
                out[e] = v
        return out

    def back(self, f: Dict[Exp, object], ctx: VarContext) -> Polynomial:
        return Polynomial(ctx, {e: Fraction(c) for e, c in f.items()})

    def lead(self, f: Dict[Exp, object]) -> Exp:
        return max(f, key=self.k)

    def monic(self, f: Dict[Exp, object]) -> Dict[Exp, object]:
        lc = f[self.lead(f)]
        if lc == 1:
            return f
        inv = self.inv(lc)
        if self.p:
            return {e: c * inv % self.p for e, c in f.items()}
        return {e: c * inv for e, c in f.items()}

    def check(self):
        if self.cancel is not None and self.cancel.cancelled:
            raise GroebnerCancelled("Groebner computation cancelled")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise GroebnerBudgetExceeded("Groebner time budget exceeded")

    def reduce(self, f: Dict[Exp, object], basis: Sequence[Tuple[Exp, Dict[Exp, object]]],
               full: bool = False) -> Dict[Exp, object]:
        """Reduce f by monic basis elements given as (lead, terms)."""
        p = self.p
        work = dict(f)
        heap = [(_neg(self.k(e)), e) for e in work]
        heapq.heapify(heap)
        rem: Dict[Exp, object] = {}
        steps = 0
        while heap:
            _, e = heapq.heappop(heap)
            c = work.get(e)
            if c is None:
                continue
            while heap and heap[0][1] == e:
                heapq.heappop(heap)
            for le, g in basis:
                if all(a >= b for a, b in zip(e, le)):
                    q = tuple(a - b for a, b in zip(e, le))
                    for ge, gc in g.items():
                        ne = tuple(a + b for a, b in zip(ge, q))
                        old = work.get(ne)
                        if p:
                            v = ((old or 0) - c * gc) % p
                        else:
                            v = (old or 0) - c * gc
                        if v:
                            work[ne] = v
                            if old is None:
                                heapq.heappush(heap, (_neg(self.k(ne)), ne))
                        elif old is not None:
                            del work[ne]
                    steps += 1
                    if steps % 64 == 0:
                        self.check()
                    break
            else:
                rem[e] = c
                del work[e]
                if not full:
                    rem.update(work)
                    return rem
        return rem


class _NegKey:
    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return self.k > other.k

    def __eq__(self, other):
        return self.k == other.k


def _neg(k):
    return _NegKey(k)


def _lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def _divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _coprime(a: Exp, b: Exp) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def _spoly(eng: _Engine, f, lf, g, lg):
    l = _lcm(lf, lg)
    qf = tuple(a - b for a, b in zip(l, lf))
    qg = tuple(a - b for a, b in zip(l, lg))
    out = {}
    p = eng.p
    for e, c in f.items():
        out[tuple(a + b for a, b in zip(e, qf))] = c
    for e, c in g.items():
        ne = tuple(a + b for a, b in zip(e, qg))
        v = out.get(ne, 0) - c
        if p:
            v %= p
        if v:
            out[ne] = v
        else:
            out.pop(ne, None)
    return out


def buchberger(gens: Sequence[Polynomial], order: Optional[MonomialOrder] = None,
               modulus: Optional[int] = None, cancel: Optional[CancellationToken] = None,
               time_budget: Optional[float] = None,
               weights: Optional[Sequence[int]] = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    ``weights`` only steers pair selection (smallest weighted lcm degree
    first); the result does not depend on it.
    """
    if not gens:
        raise ValueError("need at least one generator")
    ctx = gens[0].ctx
    if any(g.ctx != ctx for g in gens):
        raise ValueError("generators must share one context")
    order = order or MonomialOrder()
    n = len(ctx)
    w = tuple(weights) if weights else (1,) * n
    deadline = time.monotonic() + time_budget if time_budget is not None else None
    eng = _Engine(n, order, modulus, cancel, deadline)

    polys: List[Dict[Exp, object]] = []
    leads: List[Exp] = []
    G: List[int] = []
    B: List[Tuple[int, int]] = []

    def wdeg(e):
        return sum(a * b for a, b in zip(e, w))

    def update(hi: int):
        nonlocal G, B
        lh = leads[hi]
        C = list(G)
        D: List[int] = []
        while C:
            g1 = C.pop(0)
            l1 = _lcm(lh, leads[g1])
            if _coprime(lh, leads[g1]):
                D.append(g1)
                continue
            dominated = any(_divides(_lcm(lh, leads[g2]), l1) for g2 in C + D)
            if not dominated:
                D.append(g1)
        E = [(hi, g) for g in D if not _coprime(lh, leads[g])]
        newB = []
        for (a, b) in B:
            lab = _lcm(leads[a], leads[b])
            if _divides(lh, lab) and _lcm(leads[a], lh) != lab and _lcm(lh, leads[b]) != lab:
                continue
            newB.append((a, b))
        B = newB + E
        G = [g for g in G if not _divides(lh, leads[g])] + [hi]

    def basis_view():
        return [(leads[i], polys[i]) for i in G]

    start = [eng.convert(g) for g in gens]
    start = [f for f in start if f]
    start.sort(key=lambda f: eng.k(eng.lead(f)))
    for f in start:
        r = eng.reduce(f, basis_view(), full=False)
        if not r:
            continue
        r = eng.monic(r)
        polys.append(r)
        leads.append(eng.lead(r))
        update(len(polys) - 1)

    while B:
        eng.check()
        B.sort(key=lambda ab: (wdeg(_lcm(leads[ab[0]], leads[ab[1]])), eng.k(_lcm(leads[ab[0]], leads[ab[1]]))))
        a, b = B.pop(0)
        s = _spoly(eng, polys[a], leads[a], polys[b], leads[b])
        if not s:
            continue
        r = eng.reduce(s, basis_view(), full=False)
        if not r:
            continue
        r = eng.monic(r)
        polys.append(r)
        leads.append(eng.lead(r))
        update(len(polys) - 1)

    # minimal then reduced basis
    minimal = [i for i in G if not any(j != i and _divides(leads[j], leads[i]) for j in G)]
    minimal.sort(key=lambda i: eng.k(leads[i]))
    reduced = []
    for i in minimal:
        others = [(leads[j], polys[j]) for j in minimal if j != i]
        lead_term = {leads[i]: polys[i][leads[i]]}
        tail = {e: c for e, c in polys[i].items() if e != leads[i]}
        tail_red = eng.reduce(tail, others, full=True) if tail else {}
        tail_red.update(lead_term)
        reduced.append(eng.monic(tail_red))
    reduced.sort(key=lambda f: eng.k(eng.lead(f)), reverse=True)
    return GroebnerBasis(ctx, order, tuple(eng.back(f, ctx) for f in reduced), modulus)


def s_polynomial(f: Polynomial, g: Polynomial, order: Optional[MonomialOrder] = None) -> Polynomial:
    order = order or MonomialOrder()
    eng = _Engine(len(f.ctx), order, None)
    F, G = eng.monic(eng.convert(f)), eng.monic(eng.convert(g))
    return eng.back(_spoly(eng, F, eng.lead(F), G, eng.lead(G)), f.ctx)


# -- dimension --------------------------------------------------------------------

def _min_hitting_set(supports: List[frozenset]) -> int:
    memo: Dict[frozenset, int] = {}

    def solve(sets: frozenset) -> int:
        if not sets:
            return 0
        if sets in memo:
            return memo[sets]
        smallest = min(sets, key=len)
        best = None
        for v in sorted(smallest):
            rest = frozenset(s for s in sets if v not in s)
            val = 1 + solve(rest)
            if best is None or val < best:
                best = val
        memo[sets] = best
        return best

    minimal = []
    for s in sorted(set(supports), key=len):
        if not any(m <= s for m in minimal):
            minimal.append(s)
    return solve(frozenset(minimal))


def dimension_from_leads(leads: Sequence[Exp], nvars: int) -> int:
    """Krull dimension of a monomial ideal: nvars minus its minimal hitting set."""
    supports = []
    for e in leads:
        s = frozenset(i for i, x in enumerate(e) if x)
        if not s:
            return UNIT_IDEAL_DIMENSION
        supports.append(s)
    return nvars - _min_hitting_set(supports)


def ideal_dimension(gb: GroebnerBasis) -> int:
    """Krull dimension of the ideal via a maximal independent set of its leading terms."""
    if gb.is_unit():
        return UNIT_IDEAL_DIMENSION
    return dimension_from_leads(gb.leading_monomials(), len(gb.ctx))


# -- regular sequences ----------------------------------------------------------------

@dataclass(frozen=True)
class RegularityCertificate:
    mode: str
    sequence: Tuple[str, ...]
    nvars: int
    expected_dimension: int
    dimension: int
    verdict: bool
    arithmetic: str
    basis_size: int
    seconds: float

    def as_json(self) -> dict:
        return {
            "mode": self.mode,
            "sequence": list(self.sequence),
            "vars": self.nvars,
            "expected_dimension": self.expected_dimension,
            "dimension": self.dimension,
            "verdict": self.verdict,
            "arithmetic": self.arithmetic,
            "basis_size": self.basis_size,
            "seconds": round(self.seconds, 3),
        }


def find_positive_grading(gens: Sequence[Polynomial], weights: Optional[Sequence[int]] = None) -> Tuple[int, ...]:
    """Return weights making every generator homogeneous, or raise InhomogeneousInput."""
    ctx = gens[0].ctx
    candidates = [tuple(weights)] if weights else [ctx.weights, (1,) * len(ctx)]
    for w in candidates:
        if all(g.is_homogeneous(w) for g in gens):
            return tuple(w)
    raise InhomogeneousInput("sequence is not homogeneous for the given weights; "
                             "the dimension criterion for regularity would be invalid")


def certify_regular_sequence(gens: Sequence[Polynomial], weights: Optional[Sequence[int]] = None,
                             modulus: Optional[int] = None, mode: str = "custom",
                             cancel: Optional[CancellationToken] = None,
                             time_budget: Optional[float] = None) -> RegularityCertificate:
    t0 = time.monotonic()
    w = find_positive_grading(gens, weights)
    nvars = len(gens[0].ctx)
    expected = nvars - len(gens)
    seq = tuple(g.render() for g in gens)
    arithmetic = "exact" if modulus is None else f"modular {modulus}"
    if any(g.is_zero() for g in gens):
        return RegularityCertificate(mode, seq, nvars, expected, nvars, False, arithmetic, 0,
                                     time.monotonic() - t0)
    gb = buchberger(gens, modulus=modulus, cancel=cancel, time_budget=time_budget, weights=w)
    dim = ideal_dimension(gb)
    return RegularityCertificate(mode, seq, nvars, expected, dim, dim == expected, arithmetic,
                                 len(gb.elements), time.monotonic() - t0)


def is_regular_sequence(gens: Sequence[Polynomial], weights: Optional[Sequence[int]] = None,
                        modulus: Optional[int] = None) -> bool:
    """True iff the homogeneous sequence is regular (codim V(gens) == len(gens))."""
    return certify_regular_sequence(gens, weights, modulus).verdict


# -- the (SK) and homogenized symbol sequences --------------------------------------------

def sk_sequence(analysis, mode: str = SK_ORDER) -> Tuple[List[Polynomial], Tuple[int, ...]]:
    """(h, sigma(delta_i)) or, in total-order mode, (h, sigma(delta_i), sigma(chi) - d s)."""
    if mode not in (SK_ORDER, SK_TOTAL):
        raise ValueError(f"{mode!r} is not an (SK) mode")
    centrals = ("s",) if mode == SK_TOTAL else ()
    ctx = analysis.weyl_context(centrals)
    ops = analysis.field_operators(ctx)
    h_op = ctx.from_polynomial(analysis.h)
    kind = TOTAL_ORDER if mode == SK_TOTAL else ORDER
    seq = [principal_symbol(h_op, kind)] + [principal_symbol(op, kind) for op in ops[:-1]]
    n = analysis.n
    if mode == SK_TOTAL:
        seq.append(principal_symbol(ops[-1] - ctx.gen("s").scale(analysis.h.total_degree()), kind))
    weights = [1] * n + [1] * n + ([2] if mode == SK_TOTAL else [])
    return seq, tuple(weights)


def sk_check(analysis, mode: str = SK_ORDER, modulus: Optional[int] = None,
             cancel: Optional[CancellationToken] = None,
             time_budget: Optional[float] = None) -> RegularityCertificate:
    seq, weights = sk_sequence(analysis, mode)
    return certify_regular_sequence(seq, weights, modulus, mode, cancel, time_budget)


def homogenized_sequence(analysis, c, d: int, mode: str) -> Tuple[List[Polynomial], Tuple[int, ...]]:
    """Symbol sequence of the homogenized ideal in Q[w0, w, xi0, xi(, s)]."""
    from .tautsys import homogenized_generators

    if mode not in (IS_SYMBOLS, IS_SYMBOLS_WITH_S, HOLONOMICITY_BETA):
        raise ValueError(f"{mode!r} is not a homogenized-symbol mode")
    with_s = mode != HOLONOMICITY_BETA
    gens, ctx = homogenized_generators(analysis, c, d, with_s=with_s)
    kind = TOTAL_ORDER if with_s else ORDER
    seq = [principal_symbol(g, kind) for g in gens]
    if mode == IS_SYMBOLS_WITH_S:
        seq = [seq[0].ctx.var("s")] + seq
    n = analysis.n
    # w0 -> n, w -> d, xi0 -> d, xi -> n, s -> n + d makes every element homogeneous
    weights = [n] + [d] * n + [d] + [n] * n + ([n + d] if with_s else [])
    return seq, tuple(weights)


def homogenized_symbol_check(analysis, c, d: int, mode: str, modulus: Optional[int] = None,
                             cancel: Optional[CancellationToken] = None,
                             time_budget: Optional[float] = None) -> RegularityCertificate:
    seq, weights = homogenized_sequence(analysis, c, d, mode)
    return certify_regular_sequence(seq, weights, modulus, mode, cancel, time_budget)

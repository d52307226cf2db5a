"""Spencer (Chevalley-Eilenberg-Rinehart) complexes over Weyl rings.

The term in homological degree e is the free module with basis r_I for
e-subsets I of {1..m}, listed in lexicographic order.  A differential is a
matrix M with ``d(P (x) r_I) = sum_J P * M[J][I] (x) r_J``, i.e. entries act
by right multiplication, so composing d^(-e+1) after d^(-e) is the matrix
product in the order ``M_e[J][I] * M_(e-1)[K][J]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .polyring import Polynomial
from .weyl import (ORDER, TOTAL_ORDER, WeylContext, WeylOperator, commutator,
                   symbol_of_degree)

Subset = Tuple[int, ...]
BracketTable = Dict[Tuple[int, int], Tuple[WeylOperator, ...]]


class InvalidPresentation(ValueError):
    pass


@dataclass(frozen=True)
class LieRinehartPresentation:
    """Generators r_1..r_m with [r_i, r_j] = sum_k c^k_ij r_k (0-based indices, i < j).

    The coefficients c^k_ij are operators of order 0 (polynomials in the
    positions and centrals).  With ``split_first`` r_1 is an order-0
    element (the equation) and all others are first order.
    """

    ctx: WeylContext
    generators: Tuple[WeylOperator, ...]
    brackets: BracketTable
    split_first: bool = False

    @property
    def m(self) -> int:
        return len(self.generators)

    def bracket(self, i: int, j: int) -> Tuple[WeylOperator, ...]:
        if i == j:
            return tuple(self.ctx.zero() for _ in range(self.m))
        if i < j:
            return self.brackets.get((i, j), tuple(self.ctx.zero() for _ in range(self.m)))
        return tuple(-c for c in self.bracket(j, i))

    def degree(self, i: int) -> int:
        return 0 if (self.split_first and i == 0) else 1


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    mismatches: Tuple[Tuple[int, int], ...]
    symbol_rank: int
    messages: Tuple[str, ...] = ()


def _operator_coordinates(ops: Sequence[WeylOperator]) -> Tuple[List[List[Polynomial]], List[Tuple[int, ...]]]:
    """Write each operator as a row of w-polynomials indexed by (d, central) monomials."""
    ctx = ops[0].ctx
    m = ctx.m
    ring = ctx.position_context()
    cols = sorted({k[m:] for op in ops for k in op.terms})
    rows = []
    for op in ops:
        row = {c: {} for c in cols}
        for k, v in op.terms.items():
            row[k[m:]][k[:m]] = v
        rows.append([Polynomial(ring, row[c]) for c in cols])
    return rows, cols


def rank_over_fraction_field(rows: List[List[Polynomial]]) -> int:
    """Rank of a polynomial matrix over Q(w) by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in rows]
    if not a or not a[0]:
        return 0
    nrows, ncols = len(a), len(a[0])
    prev = None
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if not a[i][col].is_zero()), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            for j in range(col + 1, ncols):
                num = a[r][col] * a[i][j] - a[i][col] * a[r][j]
                if prev is not None:
                    q = num.exact_div(prev)
                    if q is None:
                        raise ArithmeticError("Bareiss division was not exact")
                    num = q
                a[i][j] = num
            a[i][col] = a[i][col] * 0
        prev = a[r][col]
        r += 1
        if r == nrows:
            break
    return r


def validate_presentation(p: LieRinehartPresentation, strict: bool = True) -> ValidationReport:
    """Recompute all commutators, compare with the table, check independence."""
    mismatches = []
    messages = []
    for i, j in combinations(range(p.m), 2):
        actual = commutator(p.generators[i], p.generators[j])
        claimed = p.ctx.zero()
        for c, r in zip(p.bracket(i, j), p.generators):
            if c.order() > 0:
                messages.append(f"coefficient of [{i + 1},{j + 1}] is not of order 0")
                mismatches.append((i, j))
                break
            claimed = claimed + c * r
        else:
            if actual != claimed:
                mismatches.append((i, j))
                messages.append(f"[r{i + 1}, r{j + 1}] = {actual.render()} but the table gives {claimed.render()}")
    for i, g in enumerate(p.generators):
        if g.order() > p.degree(i):
            messages.append(f"r{i + 1} has order {g.order()} > {p.degree(i)}")
    rows, _ = _operator_coordinates(p.generators)
    rk = rank_over_fraction_field(rows)
    if rk < p.m:
        messages.append(f"generators are dependent over Q[w] (rank {rk} < {p.m})")
    valid = not messages
    report = ValidationReport(valid, tuple(mismatches), rk, tuple(messages))
    if strict and not valid:
        raise InvalidPresentation("; ".join(messages))
    return report


def infer_brackets(generators: Sequence[WeylOperator], split_first: bool = False) -> LieRinehartPresentation:
    """Presentation whose bracket table expresses each commutator as a Q-combination."""
    gens = tuple(generators)
    ctx = gens[0].ctx
    m = len(gens)
    keys = sorted({k for g in gens for k in g.terms})
    table: BracketTable = {}
    for i, j in combinations(range(m), 2):
        br = commutator(gens[i], gens[j])
        if br.is_zero():
            continue
        allkeys = sorted(set(keys) | set(br.terms))
        rows = [[g.terms.get(k, Fraction(0)) for g in gens] for k in allkeys]
        rhs = [br.terms.get(k, Fraction(0)) for k in allkeys]
        sol = linalg.solve(rows, rhs)
        if sol is None:
            raise InvalidPresentation(f"[r{i + 1}, r{j + 1}] is not a Q-combination of the generators")
        table[(i, j)] = tuple(ctx.const(x) for x in sol)
    return LieRinehartPresentation(ctx, gens, table, split_first)


@dataclass(frozen=True)
class SpencerComplex:
    m: int
    bases: Tuple[Tuple[Subset, ...], ...]  # bases[e] = e-subsets in lex order
    differentials: Dict[int, List[List[WeylOperator]]]  # e -> matrix [J][I], J in bases[e-1]
    ctx: WeylContext

    def rank(self, e: int) -> int:
        return len(self.bases[e])

    def summary(self) -> dict:
        return {"m": self.m, "ranks": [len(b) for b in self.bases]}


def _wedge_sign_insert(k: int, rest: Subset) -> Tuple[int, Optional[Subset]]:
    """Sign and sorted subset of r_k ^ r_rest (None when k is repeated)."""
    if k in rest:
        return 0, None
    pos = sum(1 for x in rest if x < k)
    return (-1) ** pos, tuple(sorted(rest + (k,)))


def build_spencer(p: LieRinehartPresentation, validate: bool = True) -> SpencerComplex:
    """All differential matrices of the Spencer complex, bracket terms included."""
    if validate:
        validate_presentation(p)
    ctx = p.ctx
    m = p.m
    bases = tuple(tuple(combinations(range(m), e)) for e in range(m + 1))
    diffs: Dict[int, List[List[WeylOperator]]] = {}
    for e in range(1, m + 1):
        index = {J: a for a, J in enumerate(bases[e - 1])}
        mat = [[ctx.zero() for _ in bases[e]] for _ in bases[e - 1]]
        for col, I in enumerate(bases[e]):
            # sum_i (-1)^(i-1) P r_i (x) (... r_i omitted ...)
            for pos, i in enumerate(I):
                J = I[:pos] + I[pos + 1:]
                term = p.generators[i] if pos % 2 == 0 else -p.generators[i]
                mat[index[J]][col] = mat[index[J]][col] + term
            # sum_(a<b) (-1)^(a+b) P (x) [r_a, r_b] ^ (... both omitted ...)
            for a, b in combinations(range(len(I)), 2):
                sign = (-1) ** (a + b)  # positions are 0-based; same parity as 1-based a+b
                rest = tuple(x for t, x in enumerate(I) if t not in (a, b))
                for k, coeff in enumerate(p.bracket(I[a], I[b])):
                    if coeff.is_zero():
                        continue
                    s, J = _wedge_sign_insert(k, rest)
                    if J is None:
                        continue
                    mat[index[J]][col] = mat[index[J]][col] + coeff.scale(sign * s)
        diffs[e] = mat
    return SpencerComplex(m, bases, diffs, ctx)


def compose(c: SpencerComplex, e: int) -> List[List[WeylOperator]]:
    """Matrix of d^(-e+1) after d^(-e) (right-multiplication convention)."""
    upper, lower = c.differentials[e], c.differentials[e - 1]
    out = []
    for K in range(len(c.bases[e - 2])):
        row = []
        for I in range(len(c.bases[e])):
            acc = c.ctx.zero()
            for J in range(len(c.bases[e - 1])):
                a, b = upper[J][I], lower[K][J]
                if a.terms and b.terms:
                    acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def check_d_squared(c: SpencerComplex) -> bool:
    for e in range(2, c.m + 1):
        if any(not x.is_zero() for row in compose(c, e) for x in row):
            return False
    return True


def koszul_matrix(symbols: Sequence[Polynomial], e: int) -> List[List[Polynomial]]:
    """Koszul differential K(e_I) = sum_pos (-1)^pos s_(I[pos]) e_(I minus I[pos])."""
    m = len(symbols)
    ring = symbols[0].ctx
    rows_b = list(combinations(range(m), e - 1))
    cols_b = list(combinations(range(m), e))
    index = {J: a for a, J in enumerate(rows_b)}
    mat = [[ring.zero() for _ in cols_b] for _ in rows_b]
    for col, I in enumerate(cols_b):
        for pos, i in enumerate(I):
            J = I[:pos] + I[pos + 1:]
            mat[index[J]][col] = symbols[i] if pos % 2 == 0 else -symbols[i]
    return mat


@dataclass(frozen=True)
class KoszulComparison:
    kind: str
    split_first: bool
    symbols: Tuple[Polynomial, ...]
    equal: bool
    mismatches: Tuple[Tuple[int, int, int], ...]  # (e, row, col)

    def as_json(self) -> dict:
        return {
            "filtration": self.kind,
            "split_first": self.split_first,
            "symbols": [s.render() for s in self.symbols],
            "equal": self.equal,
            "mismatches": [list(x) for x in self.mismatches],
        }


def graded_koszul_matrix(p: LieRinehartPresentation, kind: str = ORDER,
                         split_first: Optional[bool] = None,
                         complex_: Optional[SpencerComplex] = None) -> KoszulComparison:
    """Compare the associated graded differentials with the Koszul complex of the symbols.

    The basis element r_I sits in filtration degree sum of deg(r_i); each
    matrix entry contributes its part of degree deg(I) - deg(J).
    """
    split = p.split_first if split_first is None else split_first
    if kind not in (ORDER, TOTAL_ORDER):
        raise ValueError(f"unknown filtration {kind!r}")
    c = complex_ or build_spencer(p)

    def deg(i):
        return 0 if (split and i == 0) else 1

    symbols = tuple(symbol_of_degree(r, deg(i), kind) for i, r in enumerate(p.generators))
    mismatches = []
    for e in range(1, p.m + 1):
        K = koszul_matrix(symbols, e)
        for row, J in enumerate(c.bases[e - 1]):
            for col, I in enumerate(c.bases[e]):
                dj = sum(deg(i) for i in I) - sum(deg(j) for j in J)
                graded = symbol_of_degree(c.differentials[e][row][col], dj, kind)
                if graded != K[row][col]:
                    mismatches.append((e, row, col))
    return KoszulComparison(kind, split, symbols, not mismatches, tuple(mismatches))

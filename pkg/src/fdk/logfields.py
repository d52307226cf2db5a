"""Linear logarithmic vector fields, Saito matrices and dual fields.

A linear field is stored by its matrix A.  Under the primal convention it
is the vector field ``w . A^tr . d_w = sum_ij A[j][i] w_i d_(w_j)``, under
the dual convention ``-lambda . A . d_lambda``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .polyring import (PolyMatrix, Polynomial, VarContext, determinant, is_squarefree,
                       proportionality_constant)
from .weyl import WeylContext, WeylOperator, commutator

PRIMAL = "primal"
DUAL = "dual"

Mat = Tuple[Tuple[Fraction, ...], ...]


class NotFreeError(ValueError):
    """The input does not define a (linear) free divisor with the given data."""

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


class DualizationError(ValueError):
    pass


def _mat(rows) -> Mat:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def mat_mul(a: Mat, b: Mat) -> Mat:
    n = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n))
                 for i in range(n))


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def identity(n: int) -> Mat:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class LinearField:
    matrix: Mat
    convention: str = PRIMAL

    def __post_init__(self):
        object.__setattr__(self, "matrix", _mat(self.matrix))
        if self.convention not in (PRIMAL, DUAL):
            raise ValueError(f"unknown convention {self.convention!r}")

    @property
    def n(self) -> int:
        return len(self.matrix)

    def flat(self) -> List[Fraction]:
        return [x for row in self.matrix for x in row]

    def trace(self) -> Fraction:
        return sum((self.matrix[i][i] for i in range(self.n)), Fraction(0))

    def is_zero(self) -> bool:
        return not any(self.flat())

    def operator(self, ctx: WeylContext) -> WeylOperator:
        if ctx.m != self.n:
            raise ValueError("context size does not match the field dimension")
        out = ctx.zero()
        A = self.matrix
        for i, j in product(range(self.n), repeat=2):
            if self.convention == PRIMAL:
                c = A[j][i]  # w_i d_j
            else:
                c = -A[i][j]  # -lambda_i d_j
            if c:
                key = [0] * ctx.size
                key[i] += 1
                key[ctx.m + j] += 1
                out = out + WeylOperator(ctx, {tuple(key): c})
        return out

    def coefficient_forms(self, ring: VarContext) -> List[Polynomial]:
        """Coefficient of d_j as a linear form, j = 0..n-1."""
        gens = ring.gens()
        A = self.matrix
        forms = []
        for j in range(self.n):
            f = ring.zero()
            for i in range(self.n):
                c = A[j][i] if self.convention == PRIMAL else -A[i][j]
                if c:
                    f = f + gens[i].scale(c)
            forms.append(f)
        return forms

    def act(self, p: Polynomial) -> Polynomial:
        """Apply the field to a polynomial in n variables."""
        out = p.ctx.zero()
        for name, form in zip(p.ctx.names, self.coefficient_forms(p.ctx)):
            if not form.is_zero():
                out = out + form * p.differentiate(name)
        return out

    def render(self, names: Sequence[str]) -> str:
        ctx = WeylContext.standard(names)
        return self.operator(ctx).render()


def euler_field(n: int) -> LinearField:
    return LinearField(identity(n))


def _field_from_vector(v: Sequence[Fraction], n: int) -> LinearField:
    return LinearField(tuple(tuple(v[i * n + j] for j in range(n)) for i in range(n)))


def _log_system(h: Polynomial) -> Tuple[List[List[Fraction]], int]:
    """Linear system Z_A(h) - c h = 0 in unknowns (A row-major, c)."""
    n = len(h.ctx)
    columns = []
    for j, i in product(range(n), repeat=2):
        # unknown A[j][i] multiplies w_i * d_j h
        columns.append(h.ctx.var(h.ctx.names[i]) * h.differentiate(h.ctx.names[j]))
    columns.append(-h)
    monos = sorted({e for col in columns for e in col.terms})
    rows = [[col.terms.get(e, Fraction(0)) for col in columns] for e in monos]
    return rows, n * n + 1


def compute_log_algebra(h: Polynomial) -> Tuple[List[Tuple[LinearField, Fraction]], List[LinearField]]:
    """Bases of g_D (with scalars c, Z(h) = c h) and of a_D (c = 0).

    The a_D basis is the RREF kernel basis of Z_A(h) = 0; the complement is
    the Euler field, so g_D = a_D + Q*chi.
    """
    if h.is_zero() or not h.is_homogeneous([1] * len(h.ctx)):
        raise ValueError("compute_log_algebra needs a nonzero homogeneous polynomial")
    n = len(h.ctx)
    deg = h.total_degree()
    rows, _ = _log_system(h)
    full = linalg.kernel(rows)
    annihilating = linalg.kernel([r[:-1] for r in rows])
    aD = [_field_from_vector(v, n) for v in annihilating]
    gD = [(f, Fraction(0)) for f in aD] + [(euler_field(n), Fraction(deg))]
    if len(full) != len(gD):
        raise AssertionError("solution space is not a_D + Q*chi; inconsistent kernel")
    return gD, aD


@dataclass(frozen=True)
class DivisorAnalysis:
    n: int
    h: Polynomial
    aD_basis: Tuple[LinearField, ...]
    saito_matrix: PolyMatrix
    saito_constant: Fraction
    special: bool

    @property
    def euler(self) -> LinearField:
        return euler_field(self.n)

    @property
    def gD_basis(self) -> Tuple[Tuple[LinearField, Fraction], ...]:
        return tuple((f, Fraction(0)) for f in self.aD_basis) + ((self.euler, Fraction(self.n)),)

    @property
    def names(self) -> Tuple[str, ...]:
        return self.h.ctx.names

    def weyl_context(self, centrals: Sequence[str] = ()) -> WeylContext:
        return WeylContext.standard(self.names, centrals)

    def field_operators(self, ctx: Optional[WeylContext] = None) -> List[WeylOperator]:
        """delta_1..delta_(n-1), chi as operators (positions = the w variables)."""
        ctx = ctx or self.weyl_context()
        sub = WeylContext.standard(self.names)
        ops = [f.operator(sub) for f, _ in self.gD_basis]
        if ctx == sub:
            return ops
        return [_embed_operator(op, ctx) for op in ops]


def _embed_operator(op: WeylOperator, target: WeylContext) -> WeylOperator:
    src = op.ctx
    idx = ([target.locate(x) for x in src.positions] + [target.locate(d) for d in src.derivations]
           + [target.locate(c) for c in src.centrals])
    out = {}
    for key, c in op.terms.items():
        nk = [0] * target.size
        for i, k in zip(idx, key):
            nk[i] += k
        out[tuple(nk)] = c
    return WeylOperator(target, out)


def embed_operator(op: WeylOperator, target: WeylContext) -> WeylOperator:
    """Reinterpret op in a context containing all of its generators."""
    return _embed_operator(op, target)


def saito_matrix(fields: Sequence[LinearField], ring: VarContext) -> PolyMatrix:
    """S[j][i] = coefficient of d_j in delta_i."""
    cols = [f.coefficient_forms(ring) for f in fields]
    n = len(fields)
    return PolyMatrix.from_rows([[cols[i][j] for i in range(n)] for j in range(n)])


def saito_criterion(h: Polynomial, fields: Sequence[LinearField]) -> DivisorAnalysis:
    """Check Saito's criterion for linear fields and normalize the basis.

    The returned basis has delta_i(h) = 0 for i < n and delta_n = chi.
    """
    n = len(h.ctx)
    if len(fields) != n:
        raise ValueError(f"need exactly {n} fields, got {len(fields)}")
    if not is_squarefree(h):
        raise NotFreeError("not-reduced", "h is not squarefree (divisor not reduced)")
    scalars = []
    for f in fields:
        c = proportionality_constant(f.act(h), h)
        if c is None:
            raise NotFreeError("not-logarithmic", "a field does not satisfy delta(h) = c*h")
        scalars.append(c)
    S = saito_matrix(fields, h.ctx)
    det = determinant(S)
    c = proportionality_constant(det, h)
    if c is None or c == 0:
        raise NotFreeError("not-free", "det(Saito matrix) is not a nonzero multiple of h")
    # chi must lie in the span of the fields
    vecs = [f.flat() for f in fields]
    cols = [[vecs[k][i] for k in range(n)] for i in range(n * n)]
    if linalg.solve(cols, euler_field(n).flat()) is None:
        raise NotFreeError("no-euler", "the Euler field is not in the span (not linear free)")
    annihilating = [v for v, sc in zip(vecs, scalars) if sc == 0]
    if len(annihilating) == n - 1 and linalg.rank(annihilating) == n - 1:
        # already split as a_D + Q*chi: keep the given fields and their order
        red = annihilating
    else:
        deg = Fraction(h.total_degree())
        shifted = [[x - (sc / deg) * e for x, e in zip(v, euler_field(n).flat())]
                   for v, sc in zip(vecs, scalars)]
        red, _ = linalg.rref(shifted)
    aD = tuple(_field_from_vector(v, n) for v in red)
    if len(aD) != n - 1:
        raise NotFreeError("no-euler", "annihilating part does not have dimension n-1")
    special = all(f.trace() == 0 for f in aD)
    basis = list(aD) + [euler_field(n)]
    S = saito_matrix(basis, h.ctx)
    c = proportionality_constant(determinant(S), h)
    return DivisorAnalysis(n, h, aD, S, c, special)


def analyze(h: Polynomial) -> DivisorAnalysis:
    """compute_log_algebra followed by saito_criterion."""
    gD, _ = compute_log_algebra(h)
    n = len(h.ctx)
    if len(gD) != n:
        raise NotFreeError("not-linear-free",
                           f"dim g_D = {len(gD)} != {n}; h is not a linear free divisor")
    return saito_criterion(h, [f for f, _ in gD])


def is_special(analysis: DivisorAnalysis) -> bool:
    return all(f.trace() == 0 for f in analysis.aD_basis)


@dataclass(frozen=True)
class StructureConstants:
    """[delta_i, delta_j] = sum_k constants[(i, j)][k] delta_k in the g_D basis."""

    dim: int
    constants: Dict[Tuple[int, int], Tuple[Fraction, ...]]

    def bracket(self, i: int, j: int) -> Tuple[Fraction, ...]:
        return self.constants[(i, j)]

    def jacobi_holds(self) -> bool:
        d = self.dim

        def br(u, v):
            out = [Fraction(0)] * d
            for i, a in enumerate(u):
                if not a:
                    continue
                for j, b in enumerate(v):
                    if b:
                        for k, c in enumerate(self.constants[(i, j)]):
                            out[k] += a * b * c
            return out

        basis = [[Fraction(int(i == k)) for k in range(d)] for i in range(d)]
        for x, y, z in product(basis, repeat=3):
            total = [a + b + c for a, b, c in zip(br(x, br(y, z)), br(y, br(z, x)), br(z, br(x, y)))]
            if any(total):
                return False
        return True

    def is_abelian(self) -> bool:
        return not any(any(v) for v in self.constants.values())


class BracketClosureError(ValueError):
    pass


def bracket_in_basis(analysis: DivisorAnalysis) -> StructureConstants:
    """Structure constants of g_D, computed from operator commutators.

    Each commutator is also compared with the matrix identity
    [Z_A, Z_B] = Z_[B,A] of the primal convention.
    """
    fields = [f for f, _ in analysis.gD_basis]
    ctx = analysis.weyl_context()
    ops = [f.operator(ctx) for f in fields]
    d = len(fields)
    n = analysis.n
    cols = [[f.flat()[i] for f in fields] for i in range(n * n)]
    constants = {}
    for i in range(d):
        for j in range(d):
            com = commutator(ops[i], ops[j])
            A, B = fields[i].matrix, fields[j].matrix
            expected = LinearField(mat_sub(mat_mul(B, A), mat_mul(A, B)))
            if expected.operator(ctx) != com:
                raise AssertionError("sign convention for linear-field brackets is inconsistent")
            coeffs = linalg.solve(cols, expected.flat())
            if coeffs is None:
                raise BracketClosureError(f"[delta_{i + 1}, delta_{j + 1}] leaves the span of the basis")
            constants[(i, j)] = tuple(coeffs)
    return StructureConstants(d, constants)


def dual_name(name: str) -> str:
    if name.startswith("w") and name[1:].isdigit():
        return "l" + name[1:]
    return "l" + name


@dataclass(frozen=True)
class DualData:
    h_dual: Polynomial
    dual_fields: Tuple[LinearField, ...]

    @property
    def names(self) -> Tuple[str, ...]:
        return self.h_dual.ctx.names

    def operators(self, ctx: Optional[WeylContext] = None) -> List[WeylOperator]:
        sub = WeylContext.standard(self.names)
        ops = [f.operator(sub) for f in self.dual_fields]
        return ops if ctx is None else [_embed_operator(op, ctx) for op in ops]


def dualize(analysis: DivisorAnalysis) -> DualData:
    """h with w_i -> lambda_i and the dual fields -lambda.A.d of the a_D basis."""
    if not analysis.special:
        raise DualizationError("dualization requires a special (trace-zero) a_D")
    ring = VarContext(tuple(dual_name(x) for x in analysis.names))
    h_dual = Polynomial(ring, analysis.h.terms)
    fields = tuple(LinearField(f.matrix, DUAL) for f in analysis.aD_basis)
    for k, f in enumerate(fields):
        if not f.act(h_dual).is_zero():
            raise DualizationError(
                f"dual field {k + 1} does not annihilate h(lambda); coordinates are not self-dual")
    return DualData(h_dual, fields)

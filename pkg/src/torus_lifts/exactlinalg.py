"""
Exact integer/rational linear algebra: Smith and symplectic normal forms,
Pfaffians, signatures, nilpotent exponentials and matrices over Q[x].

Nothing in this module rounds: integer kernels work on python ints,
everything else on sympy rationals.
"""

from __future__ import annotations

from fractions import Fraction
from math import prod
from typing import TYPE_CHECKING, Any

from sympy import (
    Basic,
    ImmutableMatrix,
    Integer,
    Poly,
    Rational,
    Symbol,
    eye,
    expand,
    zeros,
)
from sympy.matrices import MatrixBase

from ._logging import log
from .dtos import Signature, SNFResult, SymplecticNF
from .exceptions import (
    DimensionMismatch,
    InvalidParameter,
    NonUnitDeterminant,
    NotAlternating,
    NotNilpotent,
    NotSymmetric,
)

if TYPE_CHECKING:
    from .types import IntMat, MatrixLike, PolyMat, RatMat

__all__ = (
    'X',
    'as_rational',
    'int_matrix',
    'integer_kernel',
    'is_alternating',
    'is_symmetric',
    'is_unimodular',
    'nilpotent_exp',
    'pfaffians',
    'poly_degree',
    'poly_mat_inverse',
    'rank',
    'rat_matrix',
    'rational_kernel',
    'same_span',
    'signature',
    'smith_normal_form',
    'symplectic_block',
    'symplectic_normal_form',
)

# The single formal variable of every polynomial matrix
X = Symbol('x')

_IntRows = list[list[int]]


def as_rational(value: Any) -> Rational:
    """Converts int / Fraction / 'p/q' strings / sympy rationals, refusing floats."""
    if isinstance(value, float):
        raise TypeError(f'Floating point value {value!r} is not allowed, use an exact rational')
    if isinstance(value, Fraction):
        return Rational(value.numerator, value.denominator)
    if isinstance(value, Basic):
        if not value.is_Rational:
            raise TypeError(f'{value!r} is not a rational number')
        return value
    return Rational(value)


def int_matrix(data: MatrixLike) -> IntMat:
    matrix = ImmutableMatrix(data)
    if not matrix.shape[0] or not matrix.shape[1]:
        raise DimensionMismatch('Matrix dimensions must be positive')
    if not all(entry.is_Integer for entry in matrix):
        raise TypeError(f'Matrix has non-integral entries: {matrix.tolist()!r}')
    return matrix


def rat_matrix(data: MatrixLike) -> RatMat:
    if isinstance(data, MatrixBase):
        rows = data.tolist()
    else:
        rows = [list(row) for row in data]
    matrix = ImmutableMatrix([[as_rational(entry) for entry in row] for row in rows])
    if not matrix.shape[0] or not matrix.shape[1]:
        raise DimensionMismatch('Matrix dimensions must be positive')
    return matrix


def is_alternating(M: RatMat) -> bool:
    return M.is_square and M.T == -M


def is_symmetric(M: RatMat) -> bool:
    return M.is_square and M.T == M


def _require_integral(M: RatMat) -> None:
    if not all(entry.is_Integer for entry in M):
        raise InvalidParameter(f'Matrix has non-integral entries: {M.tolist()!r}')


def _rows(M: IntMat) -> _IntRows:
    return [[int(entry) for entry in row] for row in M.tolist()]


def _identity(n: int) -> _IntRows:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _min_nonzero(A: _IntRows, start: int, *, upper: bool = False) -> tuple[int, int] | None:
    """Position of a nonzero entry of least absolute value in A[start:, start:]."""
    best: tuple[int, int] | None = None
    best_value = 0
    for i in range(start, len(A)):
        for j in range(i + 1 if upper else start, len(A[i])):
            value = abs(A[i][j])
            if value and (best is None or value < best_value):
                best, best_value = (i, j), value
    return best


class _SmithReducer:
    """Row/column reduction with gcd pivoting, keeping track of U and V."""

    def __init__(self, M: IntMat) -> None:
        self.A = _rows(M)
        self.m, self.n = M.shape
        self.U = _identity(self.m)
        self.V = _identity(self.n)

    def swap_rows(self, i: int, j: int) -> None:
        if i != j:
            for mat in (self.A, self.U):
                mat[i], mat[j] = mat[j], mat[i]

    def swap_cols(self, i: int, j: int) -> None:
        if i != j:
            for mat in (self.A, self.V):
                for row in mat:
                    row[i], row[j] = row[j], row[i]

    def add_row(self, target: int, source: int, k: int) -> None:
        if k:
            for mat in (self.A, self.U):
                mat[target] = [t + k * s for t, s in zip(mat[target], mat[source])]

    def add_col(self, target: int, source: int, k: int) -> None:
        if k:
            for mat in (self.A, self.V):
                for row in mat:
                    row[target] += k * row[source]

    def negate_row(self, i: int) -> None:
        for mat in (self.A, self.U):
            mat[i] = [-v for v in mat[i]]

    def reduce(self) -> None:
        A = self.A
        for k in range(min(self.m, self.n)):
            while True:
                pivot = _min_nonzero(A, k)
                if pivot is None:
                    return
                self.swap_rows(k, pivot[0])
                self.swap_cols(k, pivot[1])
                p = A[k][k]

                dirty = False
                for i in range(k + 1, self.m):
                    self.add_row(i, k, -(A[i][k] // p))
                    dirty = dirty or A[i][k] != 0
                for j in range(k + 1, self.n):
                    self.add_col(j, k, -(A[k][j] // p))
                    dirty = dirty or A[k][j] != 0
                if dirty:
                    continue

                offender = next(
                    (
                        i
                        for i in range(k + 1, self.m)
                        for j in range(k + 1, self.n)
                        if A[i][j] % p
                    ),
                    None,
                )
                if offender is None:
                    break
                self.add_row(k, offender, 1)

            if A[k][k] < 0:
                self.negate_row(k)


def smith_normal_form(M: IntMat) -> SNFResult:
    """
    Smith normal form U·M·V = D.

    The diagonal of D is nonnegative and forms a divisibility chain,
    zeros (if any) at the end.
    """
    log.debug('')

    _require_integral(M)
    reducer = _SmithReducer(M)
    reducer.reduce()
    result = SNFResult(
        U=ImmutableMatrix(reducer.U), D=ImmutableMatrix(reducer.A), V=ImmutableMatrix(reducer.V)
    )
    log.dump('smith D', result.D)
    return result


class _SymplecticReducer:
    """
    Congruence reduction W ↦ Uᵀ·W·U of an alternating integral form.

    Columns of U are the current basis; every basis move acts on both rows
    and columns of W.
    """

    def __init__(self, M: IntMat) -> None:
        self.W = _rows(M)
        self.n = M.shape[0]
        self.U = _identity(self.n)

    def swap(self, i: int, j: int) -> None:
        if i == j:
            return
        W = self.W
        W[i], W[j] = W[j], W[i]
        for row in W:
            row[i], row[j] = row[j], row[i]
        for row in self.U:
            row[i], row[j] = row[j], row[i]

    def negate(self, i: int) -> None:
        W = self.W
        W[i] = [-v for v in W[i]]
        for row in W:
            row[i] = -row[i]
        for row in self.U:
            row[i] = -row[i]

    def add(self, target: int, source: int, k: int) -> None:
        """e_target ← e_target + k·e_source."""
        if not k:
            return
        W = self.W
        W[target] = [t + k * s for t, s in zip(W[target], W[source])]
        for row in W:
            row[target] += k * row[source]
        for row in self.U:
            row[target] += k * row[source]

    def reduce(self) -> list[int]:
        W = self.W
        divisors: list[int] = []
        k = 0
        while k + 1 < self.n:
            pivot = _min_nonzero(W, k, upper=True)
            if pivot is None:
                break
            i, j = pivot
            self.swap(k, i)
            self.swap(k + 1, i if j == k else j)
            if W[k][k + 1] < 0:
                self.negate(k + 1)
            d = W[k][k + 1]

            dirty = False
            for col in range(k + 2, self.n):
                self.add(col, k + 1, -(W[k][col] // d))
                self.add(col, k, W[k + 1][col] // d)
                dirty = dirty or W[k][col] != 0 or W[k + 1][col] != 0
            if dirty:
                continue

            offender = next(
                (
                    row
                    for row in range(k + 2, self.n)
                    for col in range(k + 2, self.n)
                    if W[row][col] % d
                ),
                None,
            )
            if offender is not None:
                self.add(k, offender, 1)
                continue

            divisors.append(d)
            k += 2
        return divisors


def _require_alternating(M: RatMat) -> None:
    if not is_alternating(M):
        raise NotAlternating(f'Matrix is not alternating: {M.tolist()!r}')


def symplectic_normal_form(M: IntMat) -> SymplecticNF:
    """
    Integral symplectic basis of an alternating form.

    Uᵀ·M·U = [[0, D], [-D, 0]] ⊕ 0 where D = diag(d_1, …, d_k), d_i | d_{i+1}.
    """
    log.debug('')

    _require_alternating(M)
    _require_integral(M)
    reducer = _SymplecticReducer(M)
    divisors = reducer.reduce()
    k = len(divisors)
    n = M.shape[0]
    # (e_1, f_1, e_2, f_2, …) → (e_1, …, e_k, f_1, …, f_k, rest)
    order = [*range(0, 2 * k, 2), *range(1, 2 * k, 2), *range(2 * k, n)]
    U = ImmutableMatrix([[row[c] for c in order] for row in reducer.U])
    log.dump('symplectic basis', U)
    return SymplecticNF(U=U, divisors=tuple(divisors), rank=2 * k)


def symplectic_block(divisors: tuple[int, ...], size: int) -> IntMat:
    """The canonical form [[0, D], [-D, 0]] padded with zeros up to size."""
    k = len(divisors)
    block = zeros(size, size)
    for i, d in enumerate(divisors):
        block[i, k + i] = d
        block[k + i, i] = -d
    return ImmutableMatrix(block)


def pfaffians(M: IntMat) -> tuple[int, int]:
    """(Pf, Pfr): det(D) of the normal form (0 when degenerate) and the reduced Pfaffian."""
    nf = symplectic_normal_form(M)
    pfr = prod(nf.divisors)
    pf = pfr if nf.rank == M.shape[0] else 0
    return pf, pfr


def signature(S: RatMat) -> Signature:
    """
    Sylvester signature by Lagrange congruence diagonalization.

    A zero diagonal with a nonzero off-diagonal entry is split off as a
    hyperbolic 2×2 block, which contributes one positive and one negative square.
    """
    log.debug('')

    if not is_symmetric(S):
        raise NotSymmetric(f'Matrix is not symmetric: {S.tolist()!r}')

    A = [[as_rational(entry) for entry in row] for row in S.tolist()]
    active = list(range(S.shape[0]))
    pos = neg = 0

    while active:
        i = next((i for i in active if A[i][i] != 0), None)
        if i is not None:
            p = A[i][i]
            if p > 0:
                pos += 1
            else:
                neg += 1
            active.remove(i)
            for r in active:
                factor = A[r][i] / p
                if factor:
                    for c in active:
                        A[r][c] -= factor * A[i][c]
            continue

        pair = next(((i, j) for i in active for j in active if i < j and A[i][j] != 0), None)
        if pair is None:
            break
        i, j = pair
        a = A[i][j]
        pos += 1
        neg += 1
        active.remove(i)
        active.remove(j)
        for r in active:
            for c in active:
                A[r][c] -= (A[r][i] * A[j][c] + A[r][j] * A[i][c]) / a

    return Signature(pos=pos, neg=neg, null=S.shape[0] - pos - neg)


def nilpotent_exp(N: RatMat) -> RatMat:
    """Exact exp(N) = Σ N^i / i! for nilpotent N."""
    if not N.is_square:
        raise DimensionMismatch('nilpotent_exp needs a square matrix')
    n = N.shape[0]
    result = eye(n)
    term = eye(n)
    for i in range(1, n + 1):
        term = term * N / i
        if term.is_zero_matrix:
            return ImmutableMatrix(result)
        result += term
    raise NotNilpotent(f'N^{n} != 0 for N = {N.tolist()!r}')


def poly_degree(entry: Basic) -> int:
    """Degree in x; -1 for the zero polynomial."""
    poly = Poly(expand(entry), X)
    return -1 if poly.is_zero else poly.degree()


def poly_mat_inverse(P: PolyMat) -> PolyMat:
    """Inverse over Q[x], which exists iff det(P) is a nonzero constant."""
    if not P.is_square:
        raise DimensionMismatch('poly_mat_inverse needs a square matrix')
    det = expand(P.det(method='berkowitz'))
    if poly_degree(det) != 0:
        raise NonUnitDeterminant(f'det = {det} is not a nonzero constant')
    return ImmutableMatrix((P.adjugate() / det).applyfunc(expand))


def rank(M: RatMat) -> int:
    return M.rank()


def rational_kernel(M: RatMat) -> list[RatMat]:
    return [ImmutableMatrix(v) for v in M.nullspace()]


def integer_kernel(M: IntMat) -> IntMat | None:
    """
    Saturated ℤ-basis (as columns) of ker M ∩ ℤ^n, or None if the kernel is 0.

    The basis is read off the Smith transform: columns of V whose divisor vanishes.
    """
    snf = smith_normal_form(M)
    diagonal = snf.diagonal
    cols = [j for j in range(M.shape[1]) if j >= len(diagonal) or diagonal[j] == 0]
    if not cols:
        return None
    return ImmutableMatrix.hstack(*(snf.V[:, j] for j in cols))


def same_span(A: RatMat, B: RatMat) -> bool:
    """Whether the columns of A and B span the same subspace."""
    if A.shape[0] != B.shape[0]:
        raise DimensionMismatch(f'{A.shape} vs {B.shape}')
    r = rank(A)
    return r == rank(B) == rank(A.row_join(B))


def is_unimodular(M: IntMat) -> bool:
    return M.is_square and abs(M.det()) == Integer(1)

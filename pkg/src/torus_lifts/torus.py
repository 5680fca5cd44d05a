from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import TYPE_CHECKING, Any, NamedTuple

from sympy import ImmutableMatrix, Rational, eye, floor
from typing_extensions import Self

from ._logging import log
from .exactlinalg import as_rational, is_alternating, rat_matrix, signature
from .exceptions import DimensionMismatch, InvalidParameter, NotComplexStructure, NotOneOne

if TYPE_CHECKING:
    from collections.abc import Iterable

    from .types import IntMat, MatrixLike, RatMat, RationalVector

__all__ = (
    'ComplexTorus',
    'DualTorusPoint',
    'HermitianForm',
    'TorusPoint',
    'hermitian_form',
    'hodge_diamond',
    'hodge_rank_structure_sheaf',
    'is_one_one',
    'make_dual_point',
    'make_point',
    'make_torus',
    'standard_torus',
)


def frac(value: Any) -> Rational:
    """Representative of value mod 1 in [0, 1)."""
    r = as_rational(value)
    return r - floor(r)


@dataclass(frozen=True)
class ComplexTorus:
    """
    X = ℝ^{2g}/ℤ^{2g} with an exact complex structure J acting on lattice coordinates.

    Use `make_torus` to build a validated instance.
    """

    g: int
    J: RatMat

    @property
    def real_dim(self) -> int:
        return 2 * self.g


class _PointBase:
    __slots__ = ('coords',)

    def __init__(self, coords: Iterable[Any]) -> None:
        self.coords: RationalVector = tuple(frac(c) for c in coords)

    def __eq__(self, other: object) -> bool:
        return type(other) is type(self) and other.coords == self.coords  # type: ignore[attr-defined]

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.coords))

    def __repr__(self) -> str:
        return f'{type(self).__name__}({[str(c) for c in self.coords]})'

    def __add__(self, other: Self) -> Self:
        if len(other.coords) != len(self.coords):
            raise DimensionMismatch(f'{len(self.coords)} vs {len(other.coords)} coordinates')
        return type(self)(a + b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> Self:
        return type(self)(-c for c in self.coords)

    def __sub__(self, other: Self) -> Self:
        return self + (-other)

    @property
    def vector(self) -> RatMat:
        """The representative in [0,1)^{2g} as a column."""
        return ImmutableMatrix(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    @classmethod
    def zero(cls, dim: int) -> Self:
        return cls([0] * dim)


class TorusPoint(_PointBase):
    """A rational point of X, coordinates in the lattice basis taken mod 1."""


class DualTorusPoint(_PointBase):
    """A rational point of the dual torus, in the basis dual to the lattice basis."""


def make_torus(g: int, J: MatrixLike) -> ComplexTorus:
    log.debug('')

    if g < 1:
        raise InvalidParameter(f'Complex dimension must be positive, got {g}')
    J = rat_matrix(J)
    if J.shape != (2 * g, 2 * g):
        raise DimensionMismatch(f'J must be {2 * g}x{2 * g}, got {J.shape}')
    if J * J != -eye(2 * g):
        raise NotComplexStructure(f'J^2 != -I for J = {J.tolist()!r}')
    return ComplexTorus(g=g, J=J)


def standard_torus(g: int) -> ComplexTorus:
    """The square torus: J is block diagonal in copies of [[0, -1], [1, 0]]."""
    J = ImmutableMatrix.diag(*([ImmutableMatrix([[0, -1], [1, 0]])] * g))
    return make_torus(g, J)


def hodge_rank_structure_sheaf(X: ComplexTorus, q: int) -> int:
    """h^q(O_X) = h^{0,q}(X) = binom(g, q)."""
    if not 0 <= q <= X.g:
        raise InvalidParameter(f'q must lie in [0, {X.g}], got {q}')
    return comb(X.g, q)


def hodge_diamond(X: ComplexTorus) -> tuple[tuple[int, ...], ...]:
    """h^{p,q}(X) = binom(g, p)·binom(g, q)."""
    return tuple(tuple(comb(X.g, p) * comb(X.g, q) for q in range(X.g + 1)) for p in range(X.g + 1))


def _check_form(E: IntMat, X: ComplexTorus) -> None:
    if E.shape != (X.real_dim, X.real_dim):
        raise DimensionMismatch(f'E must be {X.real_dim}x{X.real_dim}, got {E.shape}')


def is_one_one(E: IntMat, X: ComplexTorus) -> bool:
    """E(Jv, Jw) = E(v, w), i.e. Jᵀ·E·J = E."""
    _check_form(E, X)
    return X.J.T * E * X.J == E


class HermitianForm(NamedTuple):
    S: RatMat
    r: int
    s: int


def hermitian_form(E: IntMat, X: ComplexTorus) -> HermitianForm:
    """
    Real quadratic form of H(v, w) = E(v, Jw) + i·E(v, w).

    S = Sym(E·J) represents v ↦ H(v, v); its signature is (2r, 2s, 2(g - r - s)).
    """
    log.debug('')

    _check_form(E, X)
    if not is_alternating(E) or not is_one_one(E, X):
        raise NotOneOne(f'E is not an alternating (1,1)-form: {E.tolist()!r}')
    EJ = E * X.J
    S = ImmutableMatrix((EJ + EJ.T) / 2)
    sig = signature(S)
    return HermitianForm(S=S, r=sig.pos // 2, s=sig.neg // 2)


def _coords(X: ComplexTorus, coords: Iterable[Any]) -> list[Rational]:
    values = [as_rational(c) for c in coords]
    if len(values) != X.real_dim:
        raise DimensionMismatch(f'A point of X needs {X.real_dim} coordinates, got {len(values)}')
    return values


def make_point(X: ComplexTorus, coords: Iterable[Any]) -> TorusPoint:
    return TorusPoint(_coords(X, coords))


def make_dual_point(X: ComplexTorus, coords: Iterable[Any]) -> DualTorusPoint:
    return DualTorusPoint(_coords(X, coords))

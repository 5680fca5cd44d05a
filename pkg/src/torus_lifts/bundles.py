"""
Holomorphic line bundles on complex tori in Appel-Humbert form.

A bundle is stored as the integral alternating matrix E = Im H (its first
Chern class) and the values c of its semi-character on the lattice basis,
χ(e_i) = exp(2πi·c_i). The value on an arbitrary lattice vector follows from
the fixed quadratic rule

    a(λ) = λ·c + ½·Σ_{i<j} λ_i λ_j E_ij  (mod 1),

which satisfies the semi-character law a(λ+μ) - a(λ) - a(μ) ≡ E(λ, μ)/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import TYPE_CHECKING, Any

from sympy import ImmutableMatrix, Rational, eye, zeros

from . import settings
from ._logging import log
from .dtos import FiniteAbelianGroup
from .exactlinalg import (
    as_rational,
    int_matrix,
    integer_kernel,
    is_alternating,
    is_unimodular,
    pfaffians,
    smith_normal_form,
)
from .exceptions import (
    DimensionMismatch,
    InvalidParameter,
    NotAlternating,
    NotOneOne,
    TorusMismatch,
)
from .torus import DualTorusPoint, TorusPoint, frac, hermitian_form, is_one_one

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

    from .torus import ComplexTorus
    from .types import IntMat, IntVector, MatrixLike, RationalVector

__all__ = (
    'LineBundle',
    'SemiCharacter',
    'SymSemiChar',
    'character_from_holonomy',
    'degree_phi',
    'euler_characteristic',
    'inverse',
    'is_positive_definite',
    'kernel_group',
    'make_bundle',
    'make_xi',
    'phi_map',
    'pic0_point',
    'restricts_trivially_to_kernel_component',
    'semichar_eval',
    'symmetric_flat_bundle',
    'symmetric_semicharacters',
    'tensor',
    'torsion_points',
    'translate',
    'trivial_bundle',
    'xi_eval',
)


def _quadratic_part(E: IntMat, lam: Sequence[int]) -> int:
    """Σ_{i<j} λ_i λ_j E_ij."""
    n = len(lam)
    return sum(lam[i] * lam[j] * int(E[i, j]) for i in range(n) for j in range(i + 1, n))


def _lattice_vector(lam: Sequence[Any], n: int) -> IntVector:
    if len(lam) != n:
        raise DimensionMismatch(f'Lattice vector needs {n} coordinates, got {len(lam)}')
    return tuple(int(v) for v in lam)


@dataclass(frozen=True)
class SemiCharacter:
    E: IntMat
    c: RationalVector

    def __call__(self, lam: Sequence[int]) -> Rational:
        return semichar_eval(self, lam)


@dataclass(frozen=True)
class LineBundle:
    """L(H, χ); equality is equality of Appel-Humbert data."""

    torus: ComplexTorus
    E: IntMat
    chi: SemiCharacter

    @property
    def c(self) -> RationalVector:
        return self.chi.c

    @property
    def is_flat(self) -> bool:
        return self.E.is_zero_matrix


@dataclass(frozen=True)
class SymSemiChar:
    """ℤ₂-valued ξ with ξ(γ₁+γ₂) - ξ(γ₁) - ξ(γ₂) ≡ E(γ₁, γ₂) mod 2."""

    E: IntMat
    xi: tuple[int, ...]

    def __call__(self, lam: Sequence[int]) -> int:
        return xi_eval(self, lam)


def semichar_eval(chi: SemiCharacter, lam: Sequence[int]) -> Rational:
    """a(λ) in [0, 1) with χ(λ) = exp(2πi·a(λ))."""
    vector = _lattice_vector(lam, len(chi.c))
    linear = sum((v * c for v, c in zip(vector, chi.c)), Rational(0))
    return frac(linear + Rational(_quadratic_part(chi.E, vector), 2))


def _alternating(E: MatrixLike) -> IntMat:
    E = int_matrix(E)
    if not is_alternating(E):
        raise NotAlternating(f'E is not alternating: {E.tolist()!r}')
    return E


def make_bundle(X: ComplexTorus, E: MatrixLike, c: Sequence[Any]) -> LineBundle:
    log.debug('')

    E = _alternating(E)
    if E.shape != (X.real_dim, X.real_dim):
        raise DimensionMismatch(f'E must be {X.real_dim}x{X.real_dim}, got {E.shape}')
    if len(c) != X.real_dim:
        raise DimensionMismatch(f'chi needs {X.real_dim} values, got {len(c)}')
    if not is_one_one(E, X):
        raise NotOneOne(f'E is not of type (1,1): {E.tolist()!r}')
    return LineBundle(torus=X, E=E, chi=SemiCharacter(E=E, c=tuple(frac(v) for v in c)))


def trivial_bundle(X: ComplexTorus) -> LineBundle:
    return make_bundle(X, zeros(X.real_dim, X.real_dim), [0] * X.real_dim)


def _same_torus(L1: LineBundle, L2: LineBundle) -> None:
    if L1.torus != L2.torus:
        raise TorusMismatch('Bundles live on different tori')


def _rebuild(L: LineBundle, E: IntMat, c: Iterator[Any] | Sequence[Any]) -> LineBundle:
    E = ImmutableMatrix(E)
    return LineBundle(torus=L.torus, E=E, chi=SemiCharacter(E=E, c=tuple(frac(v) for v in c)))


def tensor(L1: LineBundle, L2: LineBundle) -> LineBundle:
    """(H1, χ1)·(H2, χ2) = (H1 + H2, χ1·χ2); the quadratic rule is additive in E."""
    _same_torus(L1, L2)
    return _rebuild(L1, L1.E + L2.E, [a + b for a, b in zip(L1.c, L2.c)])


def inverse(L: LineBundle) -> LineBundle:
    return _rebuild(L, -L.E, [-a for a in L.c])


def translate(L: LineBundle, x: TorusPoint) -> LineBundle:
    """t_x^*L: the semi-character is multiplied by exp(2πi·E(v, -))."""
    if len(x.coords) != L.torus.real_dim:
        raise DimensionMismatch('Point and bundle live on tori of different dimension')
    shift = L.E.T * x.vector
    return _rebuild(L, L.E, [c + s for c, s in zip(L.c, shift)])


def phi_map(L: LineBundle) -> IntMat:
    """
    Matrix of φ_L: X → X̂ on lattice coordinates.

    A rational lift v of x is sent to the dual coordinates of t_x^*L ⊗ L^{-1},
    which is Eᵀ·v; it only depends on E.
    """
    return ImmutableMatrix(L.E.T)


def kernel_group(L: LineBundle) -> FiniteAbelianGroup:
    """K(L) = {v : E·v ∈ ℤ^{2g}}/ℤ^{2g} read off the Smith form of E."""
    diagonal = smith_normal_form(L.E).diagonal
    return FiniteAbelianGroup(
        invariant_factors=tuple(d for d in diagonal if d),
        free_rank=sum(1 for d in diagonal if not d),
    )


def degree_phi(L: LineBundle) -> int:
    """deg φ_L = |K(L)|, or 0 when K(L) has positive dimension."""
    group = kernel_group(L)
    return group.order if group.is_finite else 0


def torsion_points(L: LineBundle) -> list[TorusPoint]:
    """Every point of the finite group K(L)."""
    group = kernel_group(L)
    if not group.is_finite:
        raise InvalidParameter('K(L) has positive dimension, it cannot be enumerated')
    if group.order > settings.BRUTE_FORCE_LIMIT:
        raise InvalidParameter(
            f'|K(L)| = {group.order} exceeds BRUTE_FORCE_LIMIT={settings.BRUTE_FORCE_LIMIT}'
        )
    snf = smith_normal_form(L.E)
    diagonal = snf.diagonal
    points = {
        TorusPoint(snf.V * ImmutableMatrix([Rational(k, d) for k, d in zip(ks, diagonal)]))
        for ks in product(*(range(d) for d in diagonal))
    }
    return sorted(points, key=lambda p: p.coords)


def pic0_point(L: LineBundle) -> DualTorusPoint:
    """The point of X̂ ≅ Pic^0(X) of a topologically trivial bundle."""
    if not L.is_flat:
        raise InvalidParameter('Only bundles with E = 0 define a point of the dual torus')
    return DualTorusPoint(L.c)


def make_xi(E: MatrixLike, basis_bits: Sequence[int]) -> SymSemiChar:
    E = _alternating(E)
    if len(basis_bits) != E.shape[0]:
        raise DimensionMismatch(f'xi needs {E.shape[0]} basis bits, got {len(basis_bits)}')
    if any(bit not in (0, 1) for bit in basis_bits):
        raise InvalidParameter(f'xi values must be 0 or 1: {basis_bits!r}')
    return SymSemiChar(E=E, xi=tuple(int(bit) for bit in basis_bits))


def xi_eval(xi: SymSemiChar, lam: Sequence[int]) -> int:
    """ξ(λ) = Σ λ_i ξ_i + Σ_{i<j} λ_i λ_j E_ij mod 2."""
    vector = _lattice_vector(lam, len(xi.xi))
    linear = sum(v * bit for v, bit in zip(vector, xi.xi))
    return (linear + _quadratic_part(xi.E, vector)) % 2


def symmetric_semicharacters(E: MatrixLike) -> list[SymSemiChar]:
    """All 2^{2g} symmetric semi-characters of E (a torsor over H^1(X, ℤ₂))."""
    E = _alternating(E)
    return [make_xi(E, bits) for bits in product((0, 1), repeat=E.shape[0])]


def symmetric_flat_bundle(
    X: ComplexTorus, E: MatrixLike, xi: SymSemiChar | None = None
) -> LineBundle:
    """
    The symmetric E-flat bundle S_E with holonomy (-1)^ξ on the lattice basis.

    The default ξ vanishes on the basis, so S_0 = O_X; any other ξ shifts S_E
    by a 2-torsion point of the dual torus.
    """
    E = _alternating(E)
    bits = xi.xi if xi is not None else (0,) * X.real_dim
    if xi is not None and xi.E != E:
        raise InvalidParameter('xi belongs to a different form E')
    return make_bundle(X, E, [Rational(bit, 2) for bit in bits])


def character_from_holonomy(
    X: ComplexTorus, E: MatrixLike, values: Sequence[Any], loops: MatrixLike | None = None
) -> LineBundle:
    """
    The unique bundle with curvature E and holonomy exp(2πi·values_k) around loop k.

    The loops are the rows of `loops` and must form a ℤ-basis of the lattice,
    the standard basis when omitted. A holonomy value is the semi-character
    value a(λ), so the basis values solve λ·c ≡ a(λ) - ½·Σ_{i<j} λ_i λ_j E_ij.
    """
    E = _alternating(E)
    n = X.real_dim
    if E.shape != (n, n):
        raise DimensionMismatch(f'E must be {n}x{n}, got {E.shape}')
    if len(values) != n:
        raise DimensionMismatch(f'{n} holonomy values needed, got {len(values)}')
    rows = int_matrix(loops) if loops is not None else ImmutableMatrix(eye(n))
    if rows.shape != (n, n):
        raise DimensionMismatch(f'{n} loops of length {n} needed, got {rows.shape}')
    if not is_unimodular(rows):
        raise InvalidParameter(f'Loops do not form a basis of the lattice: {rows.tolist()!r}')

    shifted = [
        as_rational(value) - Rational(_quadratic_part(E, [int(v) for v in rows.row(k)]), 2)
        for k, value in enumerate(values)
    ]
    c = rows.inv() * ImmutableMatrix(shifted)
    return make_bundle(X, E, list(c))


def restricts_trivially_to_kernel_component(L: LineBundle) -> bool:
    """
    Whether L is trivial on the connected component K(L)_0.

    K(L)_0 is covered by the radical V_0 = ker E; the lattice Λ_0 = ℤ^{2g} ∩ V_0
    is saturated through the Smith transform and χ has to vanish on its basis.
    """
    basis = integer_kernel(L.E)
    if basis is None:
        return True
    return all(
        semichar_eval(L.chi, [int(v) for v in basis[:, j]]) == 0 for j in range(basis.shape[1])
    )


def is_positive_definite(L: LineBundle) -> bool:
    return hermitian_form(L.E, L.torus).r == L.torus.g


def euler_characteristic(L: LineBundle) -> int:
    """χ(L) = (-1)^s·Pf(E); zero for degenerate E."""
    pf, _ = pfaffians(L.E)
    if not pf:
        return 0
    return (-1) ** hermitian_form(L.E, L.torus).s * pf

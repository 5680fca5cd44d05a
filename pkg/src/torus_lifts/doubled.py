"""
The doubling torus 𝕏 = X × X̂ and the lifts of branes and structures to it.

Coordinates on 𝕏 are (x, x̂) in ℝ^{2g} ⊕ ℝ^{2g}, lattice ℤ^{4g}. The Poincaré
two-form is σ = [[0, I], [-I, 0]], the canonical neutral metric Fσ = [[0, I], [I, 0]].
Generalized complex structures are constant 4g×4g matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, NamedTuple

from sympy import ImmutableMatrix, eye, zeros

from ._logging import log
from .bundles import semichar_eval, symmetric_flat_bundle, tensor
from .exactlinalg import int_matrix, is_alternating, is_symmetric, rank, rat_matrix, same_span, signature
from .exceptions import (
    DimensionMismatch,
    InvalidParameter,
    NotAlternating,
    NotGCS,
    NotOneOne,
    NotPositiveDefinite,
    SingularOmega,
)
from .torus import DualTorusPoint, TorusPoint, is_one_one

if TYPE_CHECKING:
    from .bundles import LineBundle
    from .torus import ComplexTorus
    from .types import IntMat, MatrixLike, RatMat

__all__ = (
    'DoubledTorus',
    'KahlerLift',
    'Lift',
    'Subspace',
    'b_transform',
    'generalized_metric',
    'generalized_tangent',
    'graph_subspace',
    'is_almost_gcs',
    'is_generalized_kahler',
    'is_isotropic',
    'is_maximal_isotropic',
    'is_stable_under',
    'j_sharp',
    'kahler_lift',
    'lift_bundle',
    'lift_gcs_complex',
    'lift_gcs_symplectic',
    'lift_tangent',
    'make_doubled',
    'translate_lift',
)


def _blocks(top_left: RatMat, top_right: RatMat, bottom_left: RatMat, bottom_right: RatMat) -> RatMat:
    return ImmutableMatrix.vstack(
        top_left.row_join(top_right),
        bottom_left.row_join(bottom_right),
    )


@dataclass(frozen=True)
class DoubledTorus:
    base: ComplexTorus
    sigma: IntMat
    neutral: IntMat

    @property
    def dim(self) -> int:
        return 2 * self.base.real_dim


def make_doubled(X: ComplexTorus) -> DoubledTorus:
    n = X.real_dim
    identity, zero = eye(n), zeros(n, n)
    return DoubledTorus(
        base=X,
        sigma=_blocks(zero, identity, -identity, zero),
        neutral=_blocks(zero, identity, identity, zero),
    )


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of ℚ^N spanned by the columns of `basis`; compares by span."""

    basis: RatMat
    _rank: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        r = rank(self.basis)
        if r != self.basis.shape[1]:
            raise InvalidParameter('Subspace basis vectors must be linearly independent')
        object.__setattr__(self, '_rank', r)

    @property
    def dim(self) -> int:
        return self._rank

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and same_span(self.basis, other.basis)

    __hash__ = None  # type: ignore[assignment]

    def contains(self, vector: RatMat) -> bool:
        return rank(self.basis.row_join(ImmutableMatrix(vector))) == self.dim


@dataclass(frozen=True)
class Lift:
    """
    The Lagrangian subtorus {(x, A·x + b)} of the doubled torus.

    A is the Chern form of the bundle, b the point of the dual torus
    given by the flat bundle L ⊗ S_{-E}.
    """

    A: IntMat
    b: DualTorusPoint

    def contains(self, x: TorusPoint, x_hat: DualTorusPoint) -> bool:
        return DualTorusPoint(self.A * x.vector + self.b.vector) == x_hat

    def fiber_over(self, x: TorusPoint) -> DualTorusPoint:
        return DualTorusPoint(self.A * x.vector + self.b.vector)


def lift_bundle(L: LineBundle) -> Lift:
    """𝕃(L) as the graph of x ↦ S_{-E} ⊗ t_{-x}^*L."""
    log.debug('')

    X = L.torus
    if not is_one_one(L.E, X):
        raise NotOneOne('Only holomorphic bundles lift')
    flat = tensor(L, symmetric_flat_bundle(X, -L.E))
    basis = [[int(i == j) for j in range(X.real_dim)] for i in range(X.real_dim)]
    offset = DualTorusPoint(semichar_eval(flat.chi, e) for e in basis)
    return Lift(A=ImmutableMatrix(L.E), b=offset)


def translate_lift(lift: Lift, shift: DualTorusPoint) -> Lift:
    return Lift(A=lift.A, b=lift.b + shift)


def graph_subspace(A: MatrixLike) -> Subspace:
    """Span of (e_i, A·e_i)."""
    A = rat_matrix(A)
    return Subspace(basis=ImmutableMatrix.vstack(eye(A.shape[1]), A))


def lift_tangent(lift: Lift) -> Subspace:
    return graph_subspace(lift.A)


def generalized_tangent(E: MatrixLike, doubled: DoubledTorus) -> Subspace:
    """
    {(v, v̂) : ι_v̂ σ = ι_v E}, solved directly from σ and E.

    Both sides are covectors on the base: (σ restricted to dual×base)ᵀ·v̂ and Eᵀ·v.
    """
    E = int_matrix(E)
    n = doubled.base.real_dim
    if E.shape != (n, n):
        raise DimensionMismatch(f'E must be {n}x{n}, got {E.shape}')
    constraint = (-E.T).row_join(doubled.sigma[n:, :n].T)
    return Subspace(basis=ImmutableMatrix.hstack(*constraint.nullspace()))


def is_isotropic(sub: Subspace, form: MatrixLike) -> bool:
    form = rat_matrix(form)
    if not (is_symmetric(form) or is_alternating(form)):
        raise InvalidParameter('Isotropy is checked against symmetric or alternating forms only')
    if form.shape[0] != sub.ambient_dim:
        raise DimensionMismatch(f'form is {form.shape}, subspace lives in dimension {sub.ambient_dim}')
    return (sub.basis.T * form * sub.basis).is_zero_matrix


def is_maximal_isotropic(sub: Subspace, form: MatrixLike) -> bool:
    return 2 * sub.dim == sub.ambient_dim and is_isotropic(sub, form)


def is_stable_under(sub: Subspace, M: MatrixLike) -> bool:
    """M maps the span into itself."""
    M = rat_matrix(M)
    return rank(sub.basis.row_join(M * sub.basis)) == sub.dim


def lift_gcs_complex(X: ComplexTorus) -> RatMat:
    """𝒥_J = [[J, 0], [0, -Jᵀ]]."""
    n = X.real_dim
    return _blocks(X.J, zeros(n, n), zeros(n, n), -X.J.T)


def lift_gcs_symplectic(omega: MatrixLike) -> RatMat:
    """𝒥_ω = [[0, -ω⁻¹], [ω, 0]]."""
    omega = rat_matrix(omega)
    if not is_alternating(omega):
        raise NotAlternating('omega must be alternating')
    if omega.det() == 0:
        raise SingularOmega(f'omega is degenerate: {omega.tolist()!r}')
    n = omega.shape[0]
    return _blocks(zeros(n, n), -omega.inv(), omega, zeros(n, n))


def is_almost_gcs(M: MatrixLike, doubled: DoubledTorus) -> bool:
    """𝒥² = -1 and 𝒥 orthogonal for the neutral metric."""
    M = rat_matrix(M)
    if M.shape != (doubled.dim, doubled.dim):
        return False
    return M * M == -eye(doubled.dim) and M.T * doubled.neutral * M == doubled.neutral


def generalized_metric(g_mat: MatrixLike, B: MatrixLike) -> RatMat:
    """G^B = [[-g⁻¹B, g⁻¹], [g - B·g⁻¹·B, B·g⁻¹]]."""
    g_mat, B = rat_matrix(g_mat), rat_matrix(B)
    n = g_mat.shape[0]
    if B.shape != g_mat.shape:
        raise DimensionMismatch(f'g is {g_mat.shape}, B is {B.shape}')
    if not is_symmetric(g_mat) or signature(g_mat).pos != n:
        raise NotPositiveDefinite(f'g is not positive-definite: {g_mat.tolist()!r}')
    if not is_alternating(B):
        raise NotAlternating('B must be alternating')
    g_inv = g_mat.inv()
    return _blocks(-g_inv * B, g_inv, g_mat - B * g_inv * B, B * g_inv)


def b_transform(B: MatrixLike) -> RatMat:
    """e^B = [[I, 0], [B, I]]; conjugation by it turns G into G^B."""
    B = rat_matrix(B)
    if not is_alternating(B):
        raise NotAlternating('B must be alternating')
    n = B.shape[0]
    return _blocks(eye(n), zeros(n, n), B, eye(n))


def j_sharp(Jmat: MatrixLike, doubled: DoubledTorus) -> RatMat:
    """The two-form 𝒥^♯ = ⟨𝒥 -, -⟩, as the matrix 𝒥ᵀ·neutral."""
    Jmat = rat_matrix(Jmat)
    if not is_almost_gcs(Jmat, doubled):
        raise NotGCS('j_sharp needs an almost generalized complex structure')
    return ImmutableMatrix(Jmat.T * doubled.neutral)


class KahlerLift(NamedTuple):
    J_complex: RatMat
    J_symplectic: RatMat
    G: RatMat


def kahler_lift(X: ComplexTorus, g_mat: MatrixLike) -> KahlerLift:
    """Lifts of (g, J, ω = g·J); g has to be J-compatible so that ω is alternating."""
    g_mat = rat_matrix(g_mat)
    omega = g_mat * X.J
    if not is_alternating(omega):
        raise InvalidParameter('g is not compatible with J: g·J is not alternating')
    n = X.real_dim
    return KahlerLift(
        J_complex=lift_gcs_complex(X),
        J_symplectic=lift_gcs_symplectic(omega),
        G=generalized_metric(g_mat, zeros(n, n)),
    )


def is_generalized_kahler(lifted: KahlerLift, doubled: DoubledTorus) -> bool:
    """Commuting almost GC structures whose product gives the generalized metric: G = -𝒥₁𝒥₂."""
    J1, J2, G = lifted
    return (
        is_almost_gcs(J1, doubled)
        and is_almost_gcs(J2, doubled)
        and G * G == eye(doubled.dim)
        and J1 * J2 == J2 * J1
        and G == -J1 * J2
    )

"""
Cohomology of line bundles, B-model Hom spaces and intersections of lifts.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb
from typing import TYPE_CHECKING

from sympy import ImmutableMatrix, Rational

from . import settings
from ._logging import log
from .bundles import inverse, restricts_trivially_to_kernel_component, tensor
from .doubled import Subspace, lift_bundle
from .dtos import ExtReport, FiniteAbelianGroup, GradedDims
from .exactlinalg import pfaffians, smith_normal_form
from .exceptions import DimensionMismatch, InvalidParameter, TorusMismatch, UnequalChernClass
from .torus import TorusPoint, hermitian_form

if TYPE_CHECKING:
    from .bundles import LineBundle
    from .doubled import Lift
    from .types import IntMat

__all__ = (
    'AffineSubgroup',
    'brute_force_intersection',
    'cohomology_dims',
    'floer_dims_J',
    'hom_B',
    'intersect_lifts',
    'verify_ext_intersection',
)


def cohomology_dims(L: LineBundle) -> GradedDims:
    """
    h^q(L) = binom(g - r - s, q - s)·Pfr(E) for s <= q <= g - r,
    provided L is trivial on K(L)_0; zero otherwise.
    """
    log.debug('')

    g = L.torus.g
    form = hermitian_form(L.E, L.torus)
    if not restricts_trivially_to_kernel_component(L):
        return GradedDims((0,) * (g + 1))
    _, pfr = pfaffians(L.E)
    free = g - form.r - form.s
    return GradedDims(
        tuple(
            comb(free, q - form.s) * pfr if form.s <= q <= g - form.r else 0 for q in range(g + 1)
        )
    )


def hom_B(L1: LineBundle, L2: LineBundle) -> GradedDims:
    """⊕_q Ext^q(L1, L2) = ⊕_q H^q(L1⁻¹ ⊗ L2)."""
    if L1.torus != L2.torus:
        raise TorusMismatch('Bundles live on different tori')
    return cohomology_dims(tensor(inverse(L1), L2))


@dataclass(frozen=True)
class AffineSubgroup:
    """
    Solution set {x : D·y ≡ U·r (mod 1), x = V·y} of a congruence on the torus.

    `basis` is the Smith column transform V and `divisors` the diagonal of D;
    a zero divisor is a free circle direction, a positive one a cyclic factor.
    """

    empty: bool
    point: TorusPoint | None
    basis: IntMat
    divisors: tuple[int, ...]

    @property
    def finite(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(
            invariant_factors=tuple(d for d in self.divisors if d),
            free_rank=self.free_rank,
        )

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.divisors if not d)

    @property
    def subtorus(self) -> Subspace | None:
        """Directions of the connected component, None when the group is finite."""
        cols = [j for j, d in enumerate(self.divisors) if not d]
        if not cols:
            return None
        return Subspace(basis=ImmutableMatrix.hstack(*(self.basis[:, j] for j in cols)))

    @property
    def order(self) -> int:
        """Number of points when finite, number of components otherwise; 0 when empty."""
        return 0 if self.empty else self.finite.order

    def contains(self, x: TorusPoint) -> bool:
        if self.empty or self.point is None:
            return False
        y = self.basis.inv() * (x - self.point).vector
        return all(not d or (d * y[i]).is_Integer for i, d in enumerate(self.divisors))

    def points(self) -> list[TorusPoint]:
        """All points of a finite intersection, sorted lexicographically."""
        if self.empty or self.point is None:
            return []
        if self.free_rank:
            raise InvalidParameter('Intersection has positive dimension, it cannot be enumerated')
        if self.order > settings.BRUTE_FORCE_LIMIT:
            raise InvalidParameter(
                f'Intersection order {self.order} exceeds BRUTE_FORCE_LIMIT={settings.BRUTE_FORCE_LIMIT}'
            )
        return sorted(self._coset(self.point), key=lambda p: p.coords)

    def _coset(self, start: TorusPoint) -> set[TorusPoint]:
        steps = [range(d) if d else range(1) for d in self.divisors]
        return {
            start
            + TorusPoint(
                self.basis
                * ImmutableMatrix([Rational(k, d) if d else 0 for k, d in zip(ks, self.divisors)])
            )
            for ks in product(*steps)
        }


def _check_lifts(l1: Lift, l2: Lift) -> None:
    if l1.A.shape != l2.A.shape or len(l1.b.coords) != len(l2.b.coords):
        raise DimensionMismatch('Lifts live on doubled tori of different dimension')


def intersect_lifts(l1: Lift, l2: Lift) -> AffineSubgroup:
    """
    𝕃₁ ∩ 𝕃₂ projected to the base: (A₂ - A₁)·x ≡ b₁ - b₂ (mod ℤ^{2g}).

    With U·Δ·V = D and x = V·y the system splits into d_i·y_i ≡ (U·r)_i.
    The particular point is the lexicographically smallest element of the
    torsion coset whenever that coset is small enough to enumerate.
    """
    log.debug('')

    _check_lifts(l1, l2)
    snf = smith_normal_form(l2.A - l1.A)
    rhs = snf.U * (l1.b - l2.b).vector
    divisors = snf.diagonal

    y = []
    for d, value in zip(divisors, rhs):
        if d:
            y.append(value / d)
        elif not value.is_Integer:
            log.debug('inconsistent zero divisor, lifts do not meet')
            return AffineSubgroup(empty=True, point=None, basis=snf.V, divisors=divisors)
        else:
            y.append(Rational(0))

    point = TorusPoint(snf.V * ImmutableMatrix(y))
    result = AffineSubgroup(empty=False, point=point, basis=snf.V, divisors=divisors)
    if result.finite.order <= settings.BRUTE_FORCE_LIMIT:
        point = min(result._coset(point), key=lambda p: p.coords)
        result = AffineSubgroup(empty=False, point=point, basis=snf.V, divisors=divisors)
    return result


def brute_force_intersection(l1: Lift, l2: Lift, denominator: int) -> list[TorusPoint]:
    """Every point of the (1/denominator)-grid lying on both lifts."""
    _check_lifts(l1, l2)
    if denominator < 1:
        raise InvalidParameter(f'denominator must be positive, got {denominator}')
    n = l1.A.shape[0]
    if denominator**n > settings.BRUTE_FORCE_LIMIT:
        raise InvalidParameter(
            f'Grid of size {denominator}^{n} exceeds BRUTE_FORCE_LIMIT={settings.BRUTE_FORCE_LIMIT}'
        )
    found = []
    for ks in product(range(denominator), repeat=n):
        x = TorusPoint(Rational(k, denominator) for k in ks)
        if l1.fiber_over(x) == l2.fiber_over(x):
            found.append(x)
    return found


def floer_dims_J(L1: LineBundle, L2: LineBundle) -> GradedDims:
    """
    𝒥-holomorphic Floer cohomology of two lifts with the same Chern class.

    The lifts then either coincide, giving H^{0,*} of a g-dimensional torus,
    or are disjoint.
    """
    if L1.torus != L2.torus:
        raise TorusMismatch('Bundles live on different tori')
    if L1.E != L2.E:
        raise UnequalChernClass('Floer dimensions are only graded for equal Chern classes')
    g = L1.torus.g
    if lift_bundle(L1) == lift_bundle(L2):
        return GradedDims(tuple(comb(g, q) for q in range(g + 1)))
    return GradedDims((0,) * (g + 1))


def verify_ext_intersection(L1: LineBundle, L2: LineBundle) -> ExtReport:
    log.debug('')

    hom = hom_B(L1, L2)
    meet = intersect_lifts(lift_bundle(L1), lift_bundle(L2))
    equal_chern = L1.E == L2.E

    agreement = squared = None
    if equal_chern:
        agreement = floer_dims_J(L1, L2) == hom and hom.is_zero() == meet.empty
    elif not meet.free_rank:
        squared = meet.order == hom.total**2

    return ExtReport(
        hom=hom,
        empty=meet.empty,
        intersection_order=meet.order,
        free_rank=meet.free_rank,
        equal_chern=equal_chern,
        agreement=agreement,
        squared_relation=squared,
    )

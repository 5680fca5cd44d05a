from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from .types import IntMat


@dataclass(frozen=True)
class SNFResult:
    """U·M·V = D with U, V unimodular."""

    U: IntMat
    D: IntMat
    V: IntMat

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(int(self.D[i, i]) for i in range(min(self.D.shape)))


@dataclass(frozen=True)
class SymplecticNF:
    U: IntMat
    divisors: tuple[int, ...]
    rank: int


@dataclass(frozen=True)
class Signature:
    pos: int
    neg: int
    null: int

    def as_tuple(self) -> tuple[int, int, int]:
        return self.pos, self.neg, self.null


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """
    (ℝ/ℤ)^free_rank ⊕ ℤ/d_1 ⊕ … ⊕ ℤ/d_k with d_i | d_{i+1}.

    Factors equal to 1 are kept, they record the rank of the lattice part.
    """

    invariant_factors: tuple[int, ...]
    free_rank: int = 0

    def __post_init__(self) -> None:
        factors = self.invariant_factors
        if any(d <= 0 for d in factors):
            raise ValueError(f'Invariant factors must be positive: {factors!r}')
        if any(b % a for a, b in zip(factors, factors[1:])):
            raise ValueError(f'Invariant factors must form a divisibility chain: {factors!r}')

    @property
    def order(self) -> int:
        """Order of the finite part (the whole group when free_rank == 0)."""
        return prod(self.invariant_factors)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0


@dataclass(frozen=True)
class GradedDims:
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(d < 0 for d in self.dims):
            raise ValueError(f'Dimensions must be nonnegative: {self.dims!r}')

    @property
    def total(self) -> int:
        return sum(self.dims)

    @property
    def euler(self) -> int:
        return sum((-1) ** q * d for q, d in enumerate(self.dims))

    def is_zero(self) -> bool:
        return self.total == 0


@dataclass
class Record:
    """One output record per session command; fields keep insertion order."""

    command: str
    fields: dict[str, Any] = field(default_factory=dict)
    ok: bool = True
    text: str = ''


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    cases: int
    elapsed: float
    detail: str = ''


@dataclass(frozen=True)
class ExtReport:
    """
    Side-by-side comparison of Hom_B(L1, L2) with the intersection of the lifts.

    `agreement` is only decided for equal Chern classes and `squared_relation`
    only for a nondegenerate difference of Chern classes; otherwise they are None.
    """

    hom: GradedDims
    empty: bool
    intersection_order: int
    free_rank: int
    equal_chern: bool
    agreement: bool | None = None
    squared_relation: bool | None = None

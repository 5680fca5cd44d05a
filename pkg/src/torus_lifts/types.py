# ruff: noqa: UP007, UP040

from __future__ import annotations

from collections import deque
from collections.abc import Callable, Sequence
from typing import Any, TypeVar, Union

from sympy import ImmutableMatrix, Integer, Rational
from typing_extensions import TypeAlias

from .dtos import Record

# https://mypy.readthedocs.io/en/stable/generics.html#decorator-factories
DecoratedCallable = TypeVar('DecoratedCallable', bound=Callable[..., Any])

# Integer matrices, rational matrices and matrices over Q[x] all live in
# sympy's immutable dense matrix; the alias documents which entries are allowed.
IntMat: TypeAlias = ImmutableMatrix
RatMat: TypeAlias = ImmutableMatrix
PolyMat: TypeAlias = ImmutableMatrix

Scalar: TypeAlias = Union[int, Integer, Rational]

RationalVector: TypeAlias = tuple[Rational, ...]

IntVector: TypeAlias = tuple[int, ...]

MatrixLike: TypeAlias = Union[ImmutableMatrix, Sequence[Sequence[Any]]]

RecordsLog: TypeAlias = deque[Record]

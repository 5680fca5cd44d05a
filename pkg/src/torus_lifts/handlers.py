from __future__ import annotations

import abc
from typing import TYPE_CHECKING, Any

import pygments.formatters
import pygments.lexers
from sympy import Basic, expand
from sympy.matrices import MatrixBase

from .dtos import GradedDims
from .torus import DualTorusPoint, TorusPoint

if TYPE_CHECKING:
    from .types import RecordsLog

__all__ = (
    'ColorizeRecordsHandler',
    'FilterRecordsHandler',
    'FormatRecordsHandler',
    'IHandler',
    'format_value',
)


def format_value(value: Any, *, human: bool = False) -> str:
    """
    Canonical text of an exact value.

    Rationals print as p/q (integers without /1), booleans as true/false,
    sequences and matrices in brackets; the machine form has no spaces.
    """
    sep = ', ' if human else ','
    if value is None:
        return 'none'
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, (TorusPoint, DualTorusPoint)):
        value = list(value.coords)
    elif isinstance(value, GradedDims):
        value = list(value.dims)
    elif isinstance(value, MatrixBase):
        value = value.tolist()
    if isinstance(value, (list, tuple)):
        return '[' + sep.join(format_value(v, human=human) for v in value) + ']'
    if isinstance(value, Basic):
        if value.is_Rational:
            return str(value.p) if value.q == 1 else f'{value.p}/{value.q}'
        text = str(expand(value)).replace('**', '^')
        return text if human else text.replace(' ', '')
    return str(value)


class IHandler(abc.ABC):
    @abc.abstractmethod
    def handle(self, records: RecordsLog) -> RecordsLog:
        raise NotImplementedError


class FilterRecordsHandler(IHandler):
    """Drops undecided fields (value None) from the machine output."""

    EXCLUDE_UNDECIDED = True

    def handle(self, records: RecordsLog) -> RecordsLog:
        if self.EXCLUDE_UNDECIDED:
            for record in records:
                record.fields = {key: v for key, v in record.fields.items() if v is not None}
        return records


class FormatRecordsHandler(IHandler):
    def handle(self, records: RecordsLog) -> RecordsLog:
        for record in records:
            record.fields = {key: format_value(v) for key, v in record.fields.items()}
        return records


class ColorizeRecordsHandler(IHandler):
    def handle(self, records: RecordsLog) -> RecordsLog:
        for record in records:
            record.text = pygments.highlight(
                record.text,
                pygments.lexers.get_lexer_by_name('yaml'),
                pygments.formatters.TerminalFormatter(),
            ).rstrip('\n')
        return records

from __future__ import annotations

import abc
from typing import TYPE_CHECKING, Any

from django.utils.module_loading import import_string

from . import settings
from .exceptions import InvalidParameter
from .handlers import IHandler

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from .dtos import CheckResult, Record
    from .types import RecordsLog

__all__ = ('AbcPrinter', 'PrinterRecords', 'PrinterReport', 'emit_record_line', 'parse_record_line')


def emit_record_line(record: Record) -> str:
    """`cmd=<command> key=value ... ok=<bool>` with single spaces; values are already canonical."""
    pairs = [('cmd', record.command), *record.fields.items(), ('ok', 'true' if record.ok else 'false')]
    return ' '.join(f'{key}={value}' for key, value in pairs)


def parse_record_line(line: str) -> dict[str, str]:
    parsed: dict[str, str] = {}
    for pair in line.strip().split(' '):
        key, sep, value = pair.partition('=')
        if not sep or not key:
            raise InvalidParameter(f'Malformed record pair: {pair!r}')
        parsed[key] = value
    return parsed


class AbcPrinter(abc.ABC):
    assert_msg_template = '{failed} of {total} verification records failed'

    check_template = '{status} {name}  |  Cases: {cases}  |  Execution time: {elapsed:.3f}s{detail}'
    checks_summary_template = (
        'Checks count: {total}  |  Failed: {failed}  |  Total execution time: {elapsed:.3f}s'
    )

    def __init__(self, color: bool = False, log_func: Callable[..., None] = print) -> None:
        self.color = color
        self.log = log_func

    @property
    def handler_paths(self) -> list[str]:
        paths = list(settings.REPORT_HANDLERS)
        if self.color:
            paths.append(settings.COLOR_HANDLER)
        return paths

    def print_records(self, records: RecordsLog) -> str:
        data = self.build_output_string(self._handle(records))
        if data:
            self.log(data)
        return data

    def _handle(self, records: RecordsLog) -> RecordsLog:
        for handler_path in self.handler_paths:
            handler = import_string(handler_path)
            if not issubclass(handler, IHandler):
                raise TypeError('Handler must be subclass: "torus_lifts.handlers.IHandler"')

            records = handler().handle(records)

        return records

    def assert_msg(self, records: Sequence[Record]) -> str:
        return self.assert_msg_template.format(
            failed=sum(1 for record in records if not record.ok), total=len(records)
        )

    def print_checks(self, results: Sequence[CheckResult]) -> str:
        lines = [
            self.check_template.format(
                status='PASS' if result.passed else 'FAIL',
                name=result.name,
                cases=result.cases,
                elapsed=result.elapsed,
                detail=f'  |  {result.detail}' if result.detail else '',
            )
            for result in results
        ]
        lines.append(
            self.checks_summary_template.format(
                total=len(results),
                failed=sum(1 for result in results if not result.passed),
                elapsed=sum(result.elapsed for result in results),
            )
        )
        data = '\n'.join(lines)
        self.log(data)
        return data

    @abc.abstractmethod
    def build_output_string(self, records: RecordsLog) -> str:
        raise NotImplementedError


class PrinterReport(AbcPrinter):
    """Human-readable report, one line per command."""

    def build_output_string(self, records: RecordsLog) -> str:
        return '\n'.join(record.text for record in records)


class PrinterRecords(AbcPrinter):
    """Machine-readable report: one `key=value` line per command."""

    def __init__(self, color: bool = False, log_func: Callable[..., Any] = print) -> None:
        # Colour codes would break parse_record_line
        super().__init__(color=False, log_func=log_func)

    def build_output_string(self, records: RecordsLog) -> str:
        return '\n'.join(emit_record_line(record) for record in records)

from __future__ import annotations

from collections import deque
from typing import TYPE_CHECKING, Any

import pytest
from src.torus_lifts import settings
from src.torus_lifts.dtos import CheckResult, GradedDims, Record
from src.torus_lifts.exactlinalg import X
from src.torus_lifts.exceptions import InvalidParameter
from src.torus_lifts.handlers import IHandler, format_value
from src.torus_lifts.printers import PrinterRecords, PrinterReport, emit_record_line, parse_record_line
from src.torus_lifts.torus import TorusPoint
from sympy import ImmutableMatrix, Rational

from tests.conftest import intercept_output_ctx

if TYPE_CHECKING:
    from collections.abc import Callable

    from src.torus_lifts.types import RecordsLog


class CustomHandler(IHandler):
    def handle(self, records: RecordsLog) -> RecordsLog:
        for record in records:
            record.text = 'Hello World!'
        return records


class NotAHandler:
    def handle(self, records: RecordsLog) -> RecordsLog:
        return records


class TestFormatValue:
    """"""

    @pytest.mark.parametrize(
        ('value', 'machine', 'human'),
        [
            (None, 'none', 'none'),
            (True, 'true', 'true'),
            (Rational(-3, 4), '-3/4', '-3/4'),
            (Rational(4, 2), '2', '2'),
            (7, '7', '7'),
            ((1, Rational(1, 2)), '[1,1/2]', '[1, 1/2]'),
            (GradedDims((2, 0)), '[2,0]', '[2, 0]'),
            (TorusPoint([Rational(1, 2), Rational(5, 4)]), '[1/2,1/4]', '[1/2, 1/4]'),
            (ImmutableMatrix([[0, 1], [-1, 0]]), '[[0,1],[-1,0]]', '[[0, 1], [-1, 0]]'),
            (1 + 2 * X**2, '2*x^2+1', '2*x^2 + 1'),
            (ImmutableMatrix([[0, X], [-X, 0]]), '[[0,x],[-x,0]]', '[[0, x], [-x, 0]]'),
        ],
    )
    def test_canonical_text(self, value: Any, machine: str, human: str) -> None:
        data = (format_value(value), format_value(value, human=True))
        assert data == (machine, human), repr(data)


class TestRecordLines:
    """"""

    def test_emit_and_parse(self) -> None:
        record = Record(command='intersect', fields={'a': 'L', 'b': 'O', 'order': '4'}, ok=False)

        data = emit_record_line(record)
        assert data == 'cmd=intersect a=L b=O order=4 ok=false', data
        parsed = parse_record_line(data)
        expected = {'cmd': 'intersect', 'a': 'L', 'b': 'O', 'order': '4', 'ok': 'false'}
        assert parsed == expected, repr(parsed)

    def test_malformed_pair(self) -> None:
        with pytest.raises(InvalidParameter):
            parse_record_line('cmd=hom broken')


class TestPrinter:
    """"""

    def setup_method(self, method: Callable[..., Any]) -> None:
        self.records: RecordsLog = deque(
            [
                Record(
                    command='cohomology',
                    fields={'name': 'L', 'h': GradedDims((2, 0)), 'euler': 2},
                    text='cohomology L: h = [2, 0]',
                ),
                Record(
                    command='ext-check',
                    fields={'a': 'O', 'b': 'L', 'agreement': None, 'squared': True},
                    ok=False,
                    text='ext-check O L: squared = true',
                ),
            ]
        )
        self.records_output = (
            'cmd=cohomology name=L h=[2,0] euler=2 ok=true\n'
            'cmd=ext-check a=O b=L squared=true ok=false\n'
        )
        self.report_output = 'cohomology L: h = [2, 0]\next-check O L: squared = true\n'
        self.checks = [
            CheckResult(name='structure-sheaf', passed=True, cases=9, elapsed=0.0041),
            CheckResult(name='nilfold', passed=False, cases=0, elapsed=0.25, detail='monodromy broken'),
        ]
        self.checks_output = (
            'PASS structure-sheaf  |  Cases: 9  |  Execution time: 0.004s\n'
            'FAIL nilfold  |  Cases: 0  |  Execution time: 0.250s  |  monodromy broken\n'
            'Checks count: 2  |  Failed: 1  |  Total execution time: 0.254s\n'
        )

    def test_records(self) -> None:
        with intercept_output_ctx() as ctx:
            PrinterRecords().print_records(self.records)
            output = ctx.getvalue()
            assert output == self.records_output, repr(output)

    def test_records_ignore_color(self) -> None:
        obj = PrinterRecords(color=True)
        assert obj.handler_paths == settings.REPORT_HANDLERS, repr(obj.handler_paths)

    def test_report(self) -> None:
        with intercept_output_ctx() as ctx:
            PrinterReport().print_records(self.records)
            output = ctx.getvalue()
            assert output == self.report_output, repr(output)

    def test_colored_report(self) -> None:
        with intercept_output_ctx() as ctx:
            PrinterReport(color=True).print_records(self.records)
            output = ctx.getvalue()
            assert '\x1b[' in output, repr(output)

    def test_empty_report_prints_nothing(self) -> None:
        with intercept_output_ctx() as ctx:
            data = PrinterReport().print_records(deque())
            output = ctx.getvalue()
            assert (data, output) == ('', ''), repr(output)

    def test_log_func(self) -> None:
        lines: list[str] = []
        PrinterReport(log_func=lines.append).print_checks(self.checks)
        assert lines == [self.checks_output.rstrip('\n')], repr(lines)

    def test_assert_msg(self) -> None:
        data = PrinterReport().assert_msg(list(self.records))
        assert data == '1 of 2 verification records failed', data

    def test_custom_handler_impl(self) -> None:
        settings.REPORT_HANDLERS.append('tests.test_printers.CustomHandler')
        try:
            with intercept_output_ctx() as ctx:
                PrinterReport().print_records(self.records)
                output = ctx.getvalue()
                assert output == 'Hello World!\nHello World!\n', repr(output)
        finally:
            settings.REPORT_HANDLERS.remove('tests.test_printers.CustomHandler')

    def test_handler_must_implement_interface(self) -> None:
        settings.REPORT_HANDLERS.append('tests.test_printers.NotAHandler')
        try:
            with pytest.raises(TypeError):
                PrinterReport().print_records(self.records)
        finally:
            settings.REPORT_HANDLERS.remove('tests.test_printers.NotAHandler')

from __future__ import annotations

from typing import TYPE_CHECKING

import pytest
from src.torus_lifts.cli import main, run
from src.torus_lifts.printers import emit_record_line, parse_record_line
from src.torus_lifts.session import parse_session

if TYPE_CHECKING:
    from pathlib import Path

HEADER = (
    'torus g=1 J=[[0,-1],[1,0]]\n'
    'bundle L E=[[0,2],[-2,0]] chi=[0,0]\n'
    'bundle O E=[[0,0],[0,0]] chi=[0,0]\n'
)

COMMANDS = (
    'cohomology L\n'
    'intersect L O\n'
    'tduality n=1 w=0 R=2 a=1\n'
    'ext-check O L\n'
)

RECORDS = (
    'cmd=cohomology name=L h=[2,0] euler=2 ok=true\n'
    'cmd=intersect a=L b=O empty=false order=4 free_rank=0 factors=[2,2] point=[0,0] ok=true\n'
    'cmd=tduality n=1 w=0 R=2 a=1 M2=1/4 dual=[0,1,1/2] invariant=true ok=true\n'
    'cmd=ext-check a=O b=L hom=[2,0] empty=false order=4 free_rank=0 '
    'equal_chern=false squared=true ok=true\n'
)

NILFOLD_T = 'tfold nilfold m=1 polarization=T\n'


class TestRun:
    """"""

    def test_records(self) -> None:
        result = run(parse_session(HEADER + COMMANDS))
        assert (result.exit_code, result.error) == (0, ''), repr(result)

        data = [record.command for record in result.records]
        assert data == ['cohomology', 'intersect', 'tduality', 'ext-check'], repr(data)

        intersect = result.records[1]
        assert intersect.text == 'intersect: order = 4, free rank = 0, factors = [2, 2], point = [0, 0]'
        assert result.records[0].text == 'cohomology L: h = [2, 0]'

    def test_ext_check_on_disjoint_lifts(self) -> None:
        text = HEADER + 'bundle F E=[[0,0],[0,0]] chi=[1/3,0]\next-check F O\n'
        result = run(parse_session(text))
        record = result.records[0]

        data = parse_record_line(emit_record_line(record))
        assert (data['empty'], data['equal_chern'], data['agreement']) == ('true', 'true', 'true'), data
        assert 'order' not in data and 'free_rank' not in data, repr(data)
        assert 'intersection = empty' in record.text, record.text

    def test_failed_verification(self) -> None:
        session = parse_session(HEADER + NILFOLD_T)

        result = run(session)
        assert result.exit_code == 0, repr(result)
        assert result.records[0].ok is False
        assert result.records[0].text == 'polarization T: not globally defined'

        result = run(session, assert_ok=True)
        assert result.exit_code == 1, repr(result)

    def test_library_error_stops_the_run(self) -> None:
        session = parse_session(
            HEADER
            + 'cohomology L\n'
            + 'tfold decompose [[1,0,0,0],[0,1,0,0],[0,0,x,0],[0,0,0,1]]\n'
            + 'cohomology O\n'
        )
        result = run(session)

        data = (result.exit_code, result.error, len(result.records))
        assert data == (2, 'line 5: det = x is not a nonzero constant', 1), repr(data)


class TestMain:
    """"""

    def setup_method(self) -> None:
        self.session_text = HEADER + COMMANDS

    def write(self, tmp_path: Path, text: str) -> str:
        path = tmp_path / 'session.txt'
        path.write_text(text, encoding='utf-8')
        return str(path)

    def test_records_output(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        exit_code = main(['run', self.write(tmp_path, self.session_text), '--records'])
        captured = capsys.readouterr()

        assert exit_code == 0, captured.err
        assert captured.out == RECORDS, repr(captured.out)
        records = run(parse_session(self.session_text)).records
        for line, record in zip(captured.out.splitlines(), records):
            assert parse_record_line(line)['cmd'] == record.command, line

    def test_record_line_is_reproducible(self) -> None:
        first = run(parse_session(self.session_text)).records
        second = run(parse_session(self.session_text)).records
        assert [emit_record_line(r) for r in first] == [emit_record_line(r) for r in second]

    def test_human_output(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        exit_code = main(['run', self.write(tmp_path, HEADER + 'cohomology L\n')])
        captured = capsys.readouterr()

        assert exit_code == 0, captured.err
        assert captured.out == 'cohomology L: h = [2, 0]\n', repr(captured.out)

    def test_assert_flag(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        path = self.write(tmp_path, HEADER + NILFOLD_T)

        assert main(['run', path]) == 0
        capsys.readouterr()

        exit_code = main(['run', path, '--assert', '--records'])
        captured = capsys.readouterr()
        assert exit_code == 1, exit_code
        assert captured.out == (
            'cmd=tfold mode=nilfold m=1 polarization=T defined=false preserves_L=true ok=false\n'
        ), repr(captured.out)
        assert captured.err == 'error: 1 of 1 verification records failed\n', repr(captured.err)

    def test_parse_error(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        exit_code = main(['run', self.write(tmp_path, 'torus g=x J=[[0,-1],[1,0]]\n')])
        captured = capsys.readouterr()

        assert exit_code == 2, exit_code
        assert captured.out == '', repr(captured.out)
        expected = "error: line 1, column 9: expected an integer, got 'x'\n"
        assert captured.err == expected, repr(captured.err)

    def test_zero_denominator(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        exit_code = main(['run', self.write(tmp_path, HEADER + 'tduality n=1 w=1 R=1/0 a=1\n')])
        captured = capsys.readouterr()

        assert exit_code == 2, exit_code
        assert captured.out == '', repr(captured.out)
        expected = "error: line 4, column 20: zero denominator in '1/0'\n"
        assert captured.err == expected, repr(captured.err)

    def test_runtime_error(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        text = HEADER + 'tfold decompose [[1,0,0,0],[0,1,0,0],[0,0,x,0],[0,0,0,1]]\n'
        exit_code = main(['run', self.write(tmp_path, text)])
        captured = capsys.readouterr()

        assert exit_code == 2, exit_code
        assert captured.err == 'error: line 4: det = x is not a nonzero constant\n', repr(captured.err)

    def test_missing_file(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        exit_code = main(['run', str(tmp_path / 'absent.txt')])
        captured = capsys.readouterr()

        assert exit_code == 2, exit_code
        assert captured.err.startswith('error: '), repr(captured.err)

    def test_debug_flag(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        exit_code = main(['run', self.write(tmp_path, HEADER + 'cohomology L\n'), '--trace'])
        captured = capsys.readouterr()

        assert exit_code == 0, captured.err
        assert captured.out == 'cohomology L: h = [2, 0]\n', repr(captured.out)

    def test_selftest_only(self, capsys: pytest.CaptureFixture[str]) -> None:
        exit_code = main(['selftest', '--only', 'structure-sheaf', '--only', 't-duality'])
        lines = capsys.readouterr().out.splitlines()

        assert exit_code == 0, lines
        assert len(lines) == 3, lines
        assert lines[0].startswith('PASS structure-sheaf  |  Cases: '), lines
        assert lines[1].startswith('PASS t-duality  |  Cases: 101  |'), lines
        assert lines[2].startswith('Checks count: 2  |  Failed: 0  |'), lines

    def test_selftest_unknown_check(self, capsys: pytest.CaptureFixture[str]) -> None:
        exit_code = main(['selftest', '--only', 'no-such-check'])
        captured = capsys.readouterr()

        assert exit_code == 2, exit_code
        assert captured.err == "error: unknown check no-such-check\n", repr(captured.err)

    def test_requires_subcommand(self) -> None:
        with pytest.raises(SystemExit):
            main([])

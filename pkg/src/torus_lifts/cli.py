"""
torus-lifts command line.

    torus-lifts run session.txt [--records] [--assert] [--color]
    torus-lifts selftest [--only NAME]

Exit codes: 0 success, 1 failed verification (with --assert) or failed
selftest, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from collections import deque
from functools import partial
from pathlib import Path
from typing import TYPE_CHECKING, Any, NamedTuple

from sympy import eye

from ._logging import log, switch_logger, switch_trace
from .bundles import euler_characteristic, kernel_group
from .doubled import (
    is_almost_gcs,
    is_generalized_kahler,
    kahler_lift,
    lift_bundle,
    lift_gcs_complex,
    make_doubled,
)
from .dtos import Record
from .exactlinalg import pfaffians, symplectic_normal_form
from .exceptions import InvalidParameter, SessionError, TorusLiftsError
from .handlers import format_value
from .homspaces import cohomology_dims, hom_B, intersect_lifts, verify_ext_intersection
from .printers import PrinterRecords, PrinterReport
from .session import parse_session
from .tfold import (
    gen_metric_decompose,
    mass_squared,
    nilfold_doubled,
    nilfold_polarizations,
    onn_metric,
    polarization_well_defined,
    t_dual_params,
)

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from .session import Command, Session
    from .types import RecordsLog

__all__ = ('RunResult', 'main', 'run')

human = partial(format_value, human=True)

_COMMANDS: dict[str, Callable[..., Record]] = {}


def _command(verb: str) -> Callable[[Callable[..., Record]], Callable[..., Record]]:
    def register(func: Callable[..., Record]) -> Callable[..., Record]:
        _COMMANDS[verb] = func
        return func

    return register


@_command('cohomology')
def _cohomology(session: Session, cmd: Command) -> Record:
    (name,) = cmd.names
    L = session.bundles[name]
    dims = cohomology_dims(L)
    return Record(
        command=cmd.verb,
        fields={'name': name, 'h': dims, 'euler': dims.euler},
        text=f'cohomology {name}: h = {human(dims)}',
    )


@_command('hom')
def _hom(session: Session, cmd: Command) -> Record:
    a, b = cmd.names
    dims = hom_B(session.bundles[a], session.bundles[b])
    return Record(
        command=cmd.verb,
        fields={'a': a, 'b': b, 'ext': dims, 'total': dims.total},
        text=f'hom {a} {b}: ext = {human(dims)}',
    )


@_command('lift')
def _lift(session: Session, cmd: Command) -> Record:
    (name,) = cmd.names
    lift = lift_bundle(session.bundles[name])
    return Record(
        command=cmd.verb,
        fields={'name': name, 'A': lift.A, 'b': lift.b},
        text=f'lift {name}: A = {human(lift.A)}, b = {human(lift.b)}',
    )


@_command('intersect')
def _intersect(session: Session, cmd: Command) -> Record:
    a, b = cmd.names
    meet = intersect_lifts(lift_bundle(session.bundles[a]), lift_bundle(session.bundles[b]))
    if meet.empty:
        return Record(command=cmd.verb, fields={'a': a, 'b': b, 'empty': True}, text='intersect: empty')
    factors = meet.finite.invariant_factors
    return Record(
        command=cmd.verb,
        fields={
            'a': a,
            'b': b,
            'empty': False,
            'order': meet.order,
            'free_rank': meet.free_rank,
            'factors': factors,
            'point': meet.point,
        },
        text=(
            f'intersect: order = {meet.order}, free rank = {meet.free_rank}, '
            f'factors = {human(factors)}, point = {human(meet.point)}'
        ),
    )


@_command('ext-check')
def _ext_check(session: Session, cmd: Command) -> Record:
    a, b = cmd.names
    report = verify_ext_intersection(session.bundles[a], session.bundles[b])
    fields: dict[str, Any] = {'a': a, 'b': b, 'hom': report.hom, 'empty': report.empty}
    if report.empty:
        meet = 'intersection = empty'
    else:
        fields.update(order=report.intersection_order, free_rank=report.free_rank)
        meet = f'intersection = {report.intersection_order}, free rank = {report.free_rank}'
    fields.update(
        equal_chern=report.equal_chern,
        agreement=report.agreement,
        squared=report.squared_relation,
    )
    return Record(
        command=cmd.verb,
        fields=fields,
        ok=report.agreement is not False,
        text=(
            f'ext-check {a} {b}: hom = {human(report.hom)}, {meet}, '
            f'agreement = {human(report.agreement)}, squared = {human(report.squared_relation)}'
        ),
    )


@_command('gcs-check')
def _gcs_check(session: Session, cmd: Command) -> Record:
    X = session.torus
    assert X is not None
    doubled = make_doubled(X)
    J_complex = lift_gcs_complex(X)
    checks: dict[str, bool | None] = {
        'J_J': is_almost_gcs(J_complex, doubled),
        'J_omega': None,
        'G2': None,
        'kahler': None,
    }
    try:
        lifted = kahler_lift(X, eye(X.real_dim))
    except InvalidParameter:
        log.debug('identity metric is not compatible with J, Kähler checks skipped')
    else:
        checks['J_omega'] = is_almost_gcs(lifted.J_symplectic, doubled)
        checks['G2'] = lifted.G * lifted.G == eye(doubled.dim)
        checks['kahler'] = is_generalized_kahler(lifted, doubled) and (
            lifted.J_symplectic == lifted.G * J_complex == J_complex * lifted.G
        )
    return Record(
        command=cmd.verb,
        fields=dict(checks),
        ok=all(value is not False for value in checks.values()),
        text=(
            f'gcs-check: J_J = {human(checks["J_J"])}, J_omega = {human(checks["J_omega"])}, '
            f'G^2 = {human(checks["G2"])}, kahler = {human(checks["kahler"])}'
        ),
    )


@_command('tduality')
def _tduality(session: Session, cmd: Command) -> Record:
    n, w, R, a = (cmd.params[key] for key in ('n', 'w', 'R', 'a'))
    m2 = mass_squared(n, w, R, a)
    dual = t_dual_params(n, w, R, a)
    invariant = mass_squared(*dual, a) == m2
    return Record(
        command=cmd.verb,
        fields={'n': n, 'w': w, 'R': R, 'a': a, 'M2': m2, 'dual': dual, 'invariant': invariant},
        ok=invariant,
        text=f'tduality: M^2 = {human(m2)}, dual = {human(dual)}, invariant = {human(invariant)}',
    )


@_command('tfold nilfold')
def _nilfold(session: Session, cmd: Command) -> Record:
    m, name = cmd.params['m'], cmd.params['polarization']
    mon = nilfold_doubled(m)
    L = onn_metric(2)
    defined = polarization_well_defined(nilfold_polarizations()[name], mon)
    verdict = 'globally defined' if defined else 'not globally defined'
    return Record(
        command='tfold',
        fields={
            'mode': 'nilfold',
            'm': m,
            'polarization': name,
            'defined': defined,
            'preserves_L': mon.T * L * mon == L,
        },
        ok=defined,
        text=f'polarization {name}: {verdict}',
    )


@_command('tfold decompose')
def _decompose(session: Session, cmd: Command) -> Record:
    H = cmd.params['H']
    blocks = gen_metric_decompose(H, H.shape[0] // 2)
    return Record(
        command='tfold',
        fields={'mode': 'decompose', 'g': blocks.g, 'B': blocks.B},
        text=f'decompose: g = {human(blocks.g)}, B = {human(blocks.B)}',
    )


@_command('kernel')
def _kernel(session: Session, cmd: Command) -> Record:
    (name,) = cmd.names
    group = kernel_group(session.bundles[name])
    return Record(
        command=cmd.verb,
        fields={
            'name': name,
            'factors': group.invariant_factors,
            'free_rank': group.free_rank,
            'order': group.order,
        },
        text=(
            f'kernel {name}: factors = {human(group.invariant_factors)}, '
            f'free rank = {group.free_rank}'
        ),
    )


@_command('symplectic')
def _symplectic(session: Session, cmd: Command) -> Record:
    (name,) = cmd.names
    L = session.bundles[name]
    nf = symplectic_normal_form(L.E)
    pf, pfr = pfaffians(L.E)
    return Record(
        command=cmd.verb,
        fields={
            'name': name,
            'divisors': nf.divisors,
            'rank': nf.rank,
            'pf': pf,
            'pfr': pfr,
            'chi': euler_characteristic(L),
        },
        text=f'symplectic {name}: divisors = {human(nf.divisors)}, pf = {pf}, pfr = {pfr}',
    )


class RunResult(NamedTuple):
    exit_code: int
    records: RecordsLog
    error: str = ''


def run(session: Session, assert_ok: bool = False) -> RunResult:
    """Executes the commands in order; the first library error stops the run with exit code 2."""
    log.debug('')

    records: RecordsLog = deque()
    for cmd in session.commands:
        try:
            records.append(_COMMANDS[cmd.verb](session, cmd))
        except TorusLiftsError as exc:
            return RunResult(exit_code=2, records=records, error=f'line {cmd.line}: {exc}')

    failed = any(not record.ok for record in records)
    return RunResult(exit_code=1 if assert_ok and failed else 0, records=records)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--debug', action='store_true', help='log kernel calls to stderr')
    common.add_argument('--trace', action='store_true', help='also dump normal-form matrices')

    parser = argparse.ArgumentParser(prog='torus-lifts', description=__doc__.split('\n\n')[0].strip())
    commands = parser.add_subparsers(dest='command', required=True)

    run_parser = commands.add_parser('run', parents=[common], help='execute a session file')
    run_parser.add_argument('file', type=Path)
    run_parser.add_argument('--records', action='store_true', help='machine-readable key=value lines')
    run_parser.add_argument(
        '--assert', dest='assert_ok', action='store_true', help='exit 1 when a verification fails'
    )
    run_parser.add_argument('--color', action='store_true', help='colorize the human-readable report')

    selftest = commands.add_parser('selftest', parents=[common], help='run the acceptance checks')
    selftest.add_argument('--only', action='append', metavar='NAME', help='run only the named check')
    return parser


def _error(message: str) -> None:
    print(f'error: {message}', file=sys.stderr)


def _run_file(args: argparse.Namespace) -> int:
    try:
        text = args.file.read_text(encoding='utf-8')
    except (OSError, UnicodeDecodeError) as exc:
        _error(str(exc))
        return 2
    try:
        session = parse_session(text)
    except SessionError as exc:
        _error(str(exc))
        return 2

    result = run(session, assert_ok=args.assert_ok)
    printer = PrinterRecords() if args.records else PrinterReport(color=args.color)
    printer.print_records(result.records)
    if result.error:
        _error(result.error)
    elif result.exit_code == 1:
        _error(printer.assert_msg(result.records))
    return result.exit_code


def _selftest(args: argparse.Namespace) -> int:
    from .acceptance import run_checks

    try:
        results = run_checks(args.only)
    except KeyError as exc:
        _error(f'unknown check {exc.args[0]}')
        return 2
    PrinterReport().print_checks(results)
    return 0 if all(result.passed for result in results) else 1


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.debug or args.trace:
        switch_logger(True)
    if args.trace:
        switch_trace(True)
    try:
        if args.command == 'run':
            return _run_file(args)
        return _selftest(args)
    finally:
        if args.debug or args.trace:
            switch_logger(False)
            switch_trace(False)


if __name__ == '__main__':
    sys.exit(main())

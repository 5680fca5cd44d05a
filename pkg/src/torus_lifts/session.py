"""
Line-oriented session files.

    torus g=1 J=[[0,-1],[1,0]]
    bundle L E=[[0,2],[-2,0]] chi=[0,0]
    cohomology L

One statement per line, `#` starts a comment. Matrices are bracketed rows
of exact rationals; polynomial entries use `x` and `^`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, NamedTuple

from django.utils.regex_helper import _lazy_re_compile
from sympy import ImmutableMatrix, Poly, Rational, S
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from ._logging import log
from .bundles import make_bundle
from .exactlinalg import X, is_alternating
from .exceptions import SessionSemanticError, SessionSyntaxError, TorusLiftsError
from .torus import make_torus

if TYPE_CHECKING:
    from collections.abc import Callable

    from .bundles import LineBundle
    from .torus import ComplexTorus

__all__ = ('Command', 'Session', 'parse_session')

NAME_PATTERN = _lazy_re_compile(r'[A-Za-z_][A-Za-z0-9_]*\Z')
PARAM_PATTERN = _lazy_re_compile(r'(?P<key>[A-Za-z_]+)=(?P<value>.+)\Z')
INT_PATTERN = _lazy_re_compile(r'[+-]?\d+\Z')
RATIONAL_PATTERN = _lazy_re_compile(r'[+-]?\d+(?:/\d+)?\Z')
# Only digits, x and arithmetic may reach the sympy parser
POLY_PATTERN = _lazy_re_compile(r'[0-9x+\-*/^()]+\Z')
VECTOR_PATTERN = _lazy_re_compile(r'\[(?P<entries>[^\[\]]*)\]\Z')
MATRIX_PATTERN = _lazy_re_compile(r'\[(?P<rows>\[[^\[\]]*\](?:,\[[^\[\]]*\])*)\]\Z')
ROW_PATTERN = _lazy_re_compile(r'\[([^\[\]]*)\]')

_ONE_NAME = ('cohomology', 'lift', 'kernel', 'symplectic')
_TWO_NAMES = ('hom', 'intersect', 'ext-check')
POLARIZATIONS = ('G', 'H', 'T')


class Token(NamedTuple):
    text: str
    column: int


class Command(NamedTuple):
    verb: str
    names: tuple[str, ...]
    params: dict[str, Any]
    line: int


@dataclass
class Session:
    torus: ComplexTorus | None = None
    bundles: dict[str, LineBundle] = field(default_factory=dict)
    commands: list[Command] = field(default_factory=list)


def _tokenize(text: str) -> list[Token]:
    """Whitespace-separated tokens; whitespace inside brackets does not split."""
    tokens: list[Token] = []
    depth, start, chars = 0, 0, ''
    for i, char in enumerate(text):
        if char.isspace() and depth == 0:
            if chars:
                tokens.append(Token(chars, start + 1))
            chars = ''
            continue
        if not chars:
            start = i
        if char == '[':
            depth += 1
        elif char == ']':
            depth -= 1
        if not char.isspace():
            chars += char
    if chars:
        tokens.append(Token(chars, start + 1))
    return tokens


class _LineParser:
    def __init__(self, session: Session, line: int) -> None:
        self.session = session
        self.line = line

    def syntax(self, message: str, token: Token | None = None) -> SessionSyntaxError:
        return SessionSyntaxError(message, self.line, token.column if token else 1)

    def semantic(self, message: str, token: Token | None = None) -> SessionSemanticError:
        return SessionSemanticError(message, self.line, token.column if token else 1)

    def params(self, tokens: list[Token], required: tuple[str, ...]) -> dict[str, Token]:
        found: dict[str, Token] = {}
        for token in tokens:
            match = PARAM_PATTERN.match(token.text)
            if match is None:
                raise self.syntax(f'expected key=value, got {token.text!r}', token)
            key = match.group('key')
            if key not in required:
                raise self.syntax(f'unexpected parameter {key!r}', token)
            if key in found:
                raise self.syntax(f'parameter {key!r} given twice', token)
            found[key] = Token(match.group('value'), token.column + len(key) + 1)
        missing = [key for key in required if key not in found]
        if missing:
            raise self.syntax(f'missing parameter {missing[0]}=', tokens[-1] if tokens else None)
        return found

    def integer(self, token: Token) -> int:
        if not INT_PATTERN.match(token.text):
            raise self.syntax(f'expected an integer, got {token.text!r}', token)
        return int(token.text)

    def rational(self, token: Token) -> Rational:
        if not RATIONAL_PATTERN.match(token.text):
            raise self.syntax(f'expected an exact rational, got {token.text!r}', token)
        _, _, denominator = token.text.partition('/')
        if denominator and int(denominator) == 0:
            raise self.syntax(f'zero denominator in {token.text!r}', token)
        return Rational(token.text)

    def polynomial(self, token: Token) -> Any:
        if not POLY_PATTERN.match(token.text):
            raise self.syntax(f'expected a polynomial in x, got {token.text!r}', token)
        try:
            expr = parse_expr(
                token.text,
                local_dict={'x': X},
                transformations=(*standard_transformations, convert_xor),
            )
        except Exception as exc:  # noqa: BLE001
            raise self.syntax(f'malformed polynomial {token.text!r}', token) from exc
        if expr.has(S.ComplexInfinity, S.NaN):
            raise self.syntax(f'division by zero in {token.text!r}', token)
        if not expr.is_polynomial(X) or not all(c.is_Rational for c in Poly(expr, X).all_coeffs()):
            raise self.syntax(f'{token.text!r} is not a polynomial over Q', token)
        return expr

    def vector(self, token: Token, entry: Callable[[Token], Any]) -> list[Any]:
        match = VECTOR_PATTERN.match(token.text)
        if match is None:
            raise self.syntax(f'expected a bracketed vector, got {token.text!r}', token)
        text = match.group('entries')
        return [entry(Token(part, token.column)) for part in text.split(',')] if text else []

    def matrix(self, token: Token, entry: Callable[[Token], Any]) -> ImmutableMatrix:
        match = MATRIX_PATTERN.match(token.text)
        if match is None:
            raise self.syntax(f'expected a bracketed matrix, got {token.text!r}', token)
        rows = [
            [entry(Token(part, token.column)) for part in row.split(',')]
            for row in ROW_PATTERN.findall(match.group('rows'))
        ]
        if len({len(row) for row in rows}) != 1:
            raise self.syntax('matrix rows have different lengths', token)
        return ImmutableMatrix(rows)

    def require_torus(self, token: Token) -> ComplexTorus:
        if self.session.torus is None:
            raise self.semantic('no torus declared', token)
        return self.session.torus

    def resolve(self, token: Token) -> str:
        if not NAME_PATTERN.match(token.text):
            raise self.syntax(f'invalid name {token.text!r}', token)
        if token.text not in self.session.bundles:
            raise self.semantic(f'unknown name {token.text}', token)
        return token.text

    def parse(self, tokens: list[Token]) -> None:
        head, rest = tokens[0], tokens[1:]
        verb = head.text
        if verb == 'torus':
            self.parse_torus(head, rest)
        elif verb == 'bundle':
            self.parse_bundle(head, rest)
        elif verb in _ONE_NAME or verb in _TWO_NAMES:
            arity = 1 if verb in _ONE_NAME else 2
            if len(rest) != arity:
                raise self.syntax(f'{verb} takes {arity} name(s), got {len(rest)}', head)
            self.require_torus(head)
            self.add(verb, names=tuple(self.resolve(token) for token in rest))
        elif verb == 'gcs-check':
            if rest:
                raise self.syntax('gcs-check takes no arguments', rest[0])
            self.require_torus(head)
            self.add(verb)
        elif verb == 'tduality':
            self.parse_tduality(head, rest)
        elif verb == 'tfold':
            self.parse_tfold(head, rest)
        else:
            raise self.syntax(f'unknown statement {verb!r}', head)

    def add(self, verb: str, names: tuple[str, ...] = (), **params: Any) -> None:
        self.session.commands.append(Command(verb=verb, names=names, params=params, line=self.line))

    def parse_torus(self, head: Token, rest: list[Token]) -> None:
        if self.session.torus is not None:
            raise self.semantic('torus already declared', head)
        values = self.params(rest, ('g', 'J'))
        g = self.integer(values['g'])
        J = self.matrix(values['J'], self.rational)
        try:
            self.session.torus = make_torus(g, J)
        except TorusLiftsError as exc:
            raise self.semantic(str(exc), values['J']) from exc

    def parse_bundle(self, head: Token, rest: list[Token]) -> None:
        if not rest:
            raise self.syntax('bundle needs a name', head)
        name_token, rest = rest[0], rest[1:]
        if not NAME_PATTERN.match(name_token.text):
            raise self.syntax(f'invalid name {name_token.text!r}', name_token)
        if name_token.text in self.session.bundles:
            raise self.semantic(f'duplicate name {name_token.text}', name_token)

        values = self.params(rest, ('E', 'chi'))
        E = self.matrix(values['E'], self.integer)
        chi = self.vector(values['chi'], self.rational)
        if not is_alternating(E):
            raise self.semantic('E not alternating', values['E'])
        torus = self.require_torus(head)
        try:
            bundle = make_bundle(torus, E, chi)
        except TorusLiftsError as exc:
            raise self.semantic(str(exc), values['E']) from exc
        self.session.bundles[name_token.text] = bundle

    def parse_tduality(self, head: Token, rest: list[Token]) -> None:
        values = self.params(rest, ('n', 'w', 'R', 'a'))
        R, alpha_p = self.rational(values['R']), self.rational(values['a'])
        for key, value in (('R', R), ('a', alpha_p)):
            if value <= 0:
                raise self.semantic(f'{key} must be positive', values[key])
        self.add(
            'tduality',
            n=self.integer(values['n']),
            w=self.integer(values['w']),
            R=R,
            a=alpha_p,
        )

    def parse_tfold(self, head: Token, rest: list[Token]) -> None:
        if not rest:
            raise self.syntax('tfold needs nilfold or decompose', head)
        mode, rest = rest[0], rest[1:]
        if mode.text == 'nilfold':
            values = self.params(rest, ('m', 'polarization'))
            polarization = values['polarization']
            if polarization.text not in POLARIZATIONS:
                raise self.syntax(
                    f'polarization must be one of G, H, T; got {polarization.text!r}', polarization
                )
            self.add('tfold nilfold', m=self.integer(values['m']), polarization=polarization.text)
        elif mode.text == 'decompose':
            if len(rest) != 1:
                raise self.syntax('tfold decompose takes one matrix', mode)
            H = self.matrix(rest[0], self.polynomial)
            if not H.is_square or H.shape[0] % 2:
                raise self.semantic(f'generalized metric must be 2n x 2n, got {H.shape}', rest[0])
            self.add('tfold decompose', H=H)
        else:
            raise self.syntax(f'unknown tfold mode {mode.text!r}', mode)


def parse_session(text: str) -> Session:
    """Validated session; the first problem raises SessionSyntaxError or SessionSemanticError."""
    log.debug('')

    session = Session()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(raw.split('#', 1)[0])
        if tokens:
            _LineParser(session, line_no).parse(tokens)
    return session

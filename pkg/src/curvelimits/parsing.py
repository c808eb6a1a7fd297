"""Text input for curves, germs and field headers.

Curves are polynomials in ``x, y, z`` with rational coefficients, ``+ - * /``
(division by constants only), ``^`` or ``**`` with integer exponents and
parentheses.  They may be preceded by header lines adjoining algebraic
generators, one per line or separated by ``;``::

    adjoin r: r^2 + r + 1 = 0
    y^2*(y^2 - (r + 2)*x*z)

Germs are 3x3 matrices of polynomials in ``t``: ``[[1,0,0],[0,t,0],[0,0,t^2]]``,
``diag(1, t, t^2)``, or products of these joined by ``*``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .arith import AlgebraicNumber, Tower, UniPoly, adjoin_root, join, rationals
from .errors import ParseError
from .forms import HomogeneousForm

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()\[\],=:]))")


@dataclass
class Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int


def tokenize(text: str, offset: int = 0) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", offset + bad)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(Token("num", m.group(1), offset + start))
        elif m.group(2):
            tokens.append(Token("name", m.group(2), offset + start))
        else:
            op = m.group(3)
            tokens.append(Token("op", "^" if op == "**" else op, offset + start))
        pos = m.end()
    tokens.append(Token("end", "", offset + len(text)))
    return tokens


class _Parser:
    """Recursive descent over a token list, building sympy ring elements."""

    def __init__(self, tokens, ring, variables: dict, constants: dict, dom):
        self.tokens = tokens
        self.i = 0
        self.ring = ring
        self.variables = variables
        self.constants = constants
        self.dom = dom

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.kind != "op" or self.tok.text != text:
            raise ParseError(f"expected {text!r}, found {self.tok.text or 'end of input'!r}",
                             self.tok.pos)
        return self.advance()

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def expr(self):
        value = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.at("*") or self.at("/"):
            op = self.advance()
            rhs = self.unary()
            if op.text == "*":
                value = value * rhs
            else:
                if not rhs.is_ground or not rhs:
                    raise ParseError("division only by nonzero constants", op.pos)
                value = value * self.ring(self.dom.quo(self.dom.one, rhs.LC))
        return value

    def unary(self):
        if self.at("-"):
            self.advance()
            return -self.unary()
        if self.at("+"):
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.at("^"):
            self.advance()
            if self.tok.kind != "num":
                raise ParseError("exponent must be a non-negative integer", self.tok.pos)
            return base ** int(self.advance().text)
        return base

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return self.ring(self.dom.convert(int(tok.text)))
        if tok.kind == "name":
            self.advance()
            if tok.text in self.variables:
                return self.variables[tok.text]
            if tok.text in self.constants:
                return self.ring(self.constants[tok.text])
            raise ParseError(f"unknown name {tok.text!r}", tok.pos)
        if self.at("("):
            self.advance()
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.pos)


def _split_header(text: str) -> tuple[list[tuple[str, int]], str, int]:
    """Separate ``adjoin`` lines from the body; keep offsets for messages."""
    pieces = []
    pos = 0
    for chunk in re.split(r"(\n|;)", text):
        if chunk not in ("\n", ";"):
            pieces.append((chunk, pos))
        pos += len(chunk)
    header, body, body_pos = [], [], None
    for chunk, start in pieces:
        if chunk.strip().startswith("adjoin") and body_pos is None:
            header.append((chunk, start))
        elif chunk.strip():
            if body_pos is None:
                body_pos = start
            body.append(chunk)
    if len(body) > 1:
        raise ParseError("expected a single polynomial after the header", body_pos)
    return header, (body[0] if body else ""), (body_pos or 0)


def parse_header(lines: list[tuple[str, int]], tower: Tower | None = None) -> Tower:
    """Adjoin the generators named in ``adjoin name: poly = 0`` lines."""
    tower = tower or rationals()
    for line, start in lines:
        m = re.match(r"\s*adjoin\s+([A-Za-z_][A-Za-z_0-9]*)\s*:(.*)$", line)
        if not m:
            raise ParseError("malformed adjoin line", start)
        name, rest = m.group(1), m.group(2)
        rest_pos = start + m.start(2)
        if name in ("x", "y", "z", "t") or name in tower.names:
            raise ParseError(f"generator name {name!r} is reserved or already used", start)
        if rest.count("=") != 1:
            raise ParseError("adjoin line needs 'polynomial = 0'", rest_pos)
        lhs, rhs = rest.split("=")
        if rhs.strip() != "0":
            raise ParseError("adjoin line must end with '= 0'", rest_pos + len(lhs) + 1)
        R = tower.ring("w")
        consts = {n: tower.generator_by_name(n).value for n in tower.names}
        parser = _Parser(tokenize(lhs, rest_pos), R, {name: R.gens[0]}, consts, tower.dom)
        poly = parser.expr()
        if parser.tok.kind != "end":
            raise ParseError("trailing input", parser.tok.pos)
        p = UniPoly(tower, poly)
        if p.degree < 1:
            raise ParseError("adjoined polynomial must have positive degree", rest_pos)
        p = p.monic()
        _, facs = p.factor()
        if len(facs) != 1 or facs[0][1] != 1:
            raise ParseError(f"polynomial for {name!r} is not irreducible over the field so far",
                             rest_pos)
        if p.degree == 1:
            raise ParseError(f"polynomial for {name!r} is linear; use the value directly",
                             rest_pos)
        tower = tower.extend(p.raw_coeffs(), name)
    return tower


def _constants(tower: Tower) -> dict:
    return {n: tower.generator_by_name(n).value for n in tower.names}


def parse_curve(text: str, tower: Tower | None = None) -> HomogeneousForm:
    """Parse a plane curve equation (with optional field header)."""
    header, body, body_pos = _split_header(text)
    tower = parse_header(header, tower)
    if not body.strip():
        raise ParseError("empty polynomial", body_pos)
    R = tower.ring("x,y,z")
    variables = dict(zip(("x", "y", "z"), R.gens))
    parser = _Parser(tokenize(body, body_pos), R, variables, _constants(tower), tower.dom)
    poly = parser.expr()
    if parser.tok.kind != "end":
        raise ParseError(f"unexpected {parser.tok.text!r}", parser.tok.pos)
    if not poly:
        raise ParseError("the zero polynomial does not define a curve", body_pos)
    try:
        form = HomogeneousForm(tower, poly)
    except ValueError as exc:
        raise ParseError(str(exc), body_pos) from None
    if form.degree < 1:
        raise ParseError("a curve needs positive degree", body_pos)
    return form


def parse_polynomial_t(text: str, tower: Tower | None = None) -> UniPoly:
    """Parse a polynomial in ``t`` over ``tower``."""
    tower = tower or rationals()
    R = tower.ring("t")
    parser = _Parser(tokenize(text), R, {"t": R.gens[0]}, _constants(tower), tower.dom)
    poly = parser.expr()
    if parser.tok.kind != "end":
        raise ParseError(f"unexpected {parser.tok.text!r}", parser.tok.pos)
    return UniPoly(tower, poly)


def parse_matrix_entries(text: str, tower: Tower | None = None) -> tuple[Tower, list[list[UniPoly]]]:
    """Parse a germ expression into a 3x3 matrix of polynomials in ``t``."""
    header, body, body_pos = _split_header(text)
    tower = parse_header(header, tower)
    R = tower.ring("t")
    parser = _Parser(tokenize(body, body_pos), R, {"t": R.gens[0]}, _constants(tower), tower.dom)
    mat = _germ_product(parser)
    if parser.tok.kind != "end":
        raise ParseError(f"unexpected {parser.tok.text!r}", parser.tok.pos)
    return tower, [[UniPoly(tower, e) for e in row] for row in mat]


def _germ_product(p: _Parser):
    mat = _germ_factor(p)
    while p.at("*"):
        p.advance()
        rhs = _germ_factor(p)
        mat = [[sum((mat[i][k] * rhs[k][j] for k in range(3)), p.ring.zero) for j in range(3)]
               for i in range(3)]
    return mat


def _germ_factor(p: _Parser):
    tok = p.tok
    if tok.kind == "name" and tok.text == "diag":
        p.advance()
        p.expect("(")
        entries = [p.expr()]
        for _ in range(2):
            p.expect(",")
            entries.append(p.expr())
        p.expect(")")
        z = p.ring.zero
        return [[entries[i] if i == j else z for j in range(3)] for i in range(3)]
    if p.at("("):
        p.advance()
        mat = _germ_product(p)
        p.expect(")")
        return mat
    if p.at("["):
        p.advance()
        rows = [_germ_row(p)]
        for _ in range(2):
            p.expect(",")
            rows.append(_germ_row(p))
        p.expect("]")
        return rows
    raise ParseError(f"expected a matrix, found {tok.text or 'end of input'!r}", tok.pos)


def _germ_row(p: _Parser):
    p.expect("[")
    row = [p.expr()]
    for _ in range(2):
        p.expect(",")
        row.append(p.expr())
    p.expect("]")
    return row


def parse_vector(text: str, tower: Tower | None = None) -> list[AlgebraicNumber]:
    """Parse three constants: ``[a, b, c]``, ``(a:b:c)`` or ``a,b,c``.

    Entries may use generators of ``tower`` (or of a leading ``adjoin`` header).
    """
    header, body, body_pos = _split_header(text)
    tower = parse_header(header, tower)
    R = tower.ring("w")
    parser = _Parser(tokenize(body.replace(":", ","), body_pos), R, {}, _constants(tower),
                     tower.dom)
    close = None
    if parser.at("["):
        close = "]"
    elif parser.at("("):
        close = ")"
    if close:
        parser.advance()
    values = [parser.expr()]
    while parser.at(","):
        parser.advance()
        values.append(parser.expr())
    if close:
        parser.expect(close)
    if parser.tok.kind != "end":
        raise ParseError(f"unexpected {parser.tok.text!r}", parser.tok.pos)
    if len(values) != 3:
        raise ParseError(f"expected 3 coordinates, found {len(values)}", body_pos)
    return [AlgebraicNumber(tower, v.LC if v else tower.dom.zero) for v in values]

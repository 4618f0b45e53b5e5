"""Single-variable arithmetic expressions for problem config files.

Grammar (documented in docs/config.md):

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" unary)?          # right associative
    atom    := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"

Identifiers are the declared variable name, the constants ``pi`` and ``e``,
or one of the functions exp, log, sqrt, sin, cos, sinh, cosh, abs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import ExpressionEvalError, ExpressionSyntaxError

__all__ = ["Expression", "parse"]

_FUNCTIONS = {
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "sin": math.sin,
    "cos": math.cos,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "abs": abs,
}

_CONSTANTS = {"pi": math.pi, "e": math.e}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class _Num:
    value: float

    def eval(self, x: float) -> float:
        return self.value

    def source(self) -> str:
        return repr(self.value)


@dataclass(frozen=True)
class _Var:
    name: str

    def eval(self, x: float) -> float:
        return x

    def source(self) -> str:
        return self.name


@dataclass(frozen=True)
class _Neg:
    operand: object

    def eval(self, x: float) -> float:
        return -self.operand.eval(x)

    def source(self) -> str:
        return f"(-{self.operand.source()})"


@dataclass(frozen=True)
class _BinOp:
    op: str
    left: object
    right: object

    def eval(self, x: float) -> float:
        a = self.left.eval(x)
        b = self.right.eval(x)
        try:
            if self.op == "+":
                return a + b
            if self.op == "-":
                return a - b
            if self.op == "*":
                return a * b
            if self.op == "/":
                if b == 0:
                    raise ExpressionEvalError(f"division by zero at {self.source()}")
                return a / b
            if a < 0 and b != int(b):
                raise ExpressionEvalError(
                    f"fractional power of negative base in {self.source()}"
                )
            return a ** b
        except OverflowError as exc:
            raise ExpressionEvalError(f"overflow in {self.source()}") from exc

    def source(self) -> str:
        return f"({self.left.source()} {self.op} {self.right.source()})"


@dataclass(frozen=True)
class _Call:
    name: str
    arg: object

    def eval(self, x: float) -> float:
        v = self.arg.eval(x)
        if self.name == "log" and v <= 0:
            raise ExpressionEvalError(f"log of nonpositive value {v}")
        if self.name == "sqrt" and v < 0:
            raise ExpressionEvalError(f"sqrt of negative value {v}")
        try:
            return _FUNCTIONS[self.name](v)
        except (ValueError, OverflowError) as exc:
            raise ExpressionEvalError(f"{self.name}({v}) failed: {exc}") from exc

    def source(self) -> str:
        return f"{self.name}({self.arg.source()})"


class Expression:
    """Parsed single-variable expression; immutable and callable."""

    def __init__(self, root, variable: str, text: str):
        self._root = root
        self.variable = variable
        self.text = text

    def __call__(self, x: float) -> float:
        return self._root.eval(float(x))

    def source(self) -> str:
        """Parenthesized form that re-parses to an equivalent expression."""
        return self._root.source()

    def __repr__(self):
        return f"Expression({self.text!r}, variable={self.variable!r})"


class _Parser:
    def __init__(self, source: str, variable: str):
        self.source = source
        self.variable = variable
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(source):
            m = _TOKEN_RE.match(source, pos)
            if m is None:
                stripped = source[pos:].lstrip()
                if stripped == "":
                    break
                bad_at = pos + (len(source) - pos - len(stripped))
                raise ExpressionSyntaxError(
                    f"unexpected character {stripped[0]!r}", bad_at
                )
            if m.group("num") is not None:
                self.tokens.append(("num", m.group(0).strip(), m.start()))
            elif m.group("ident") is not None:
                self.tokens.append(("ident", m.group("ident"), m.start("ident")))
            else:
                self.tokens.append(("op", m.group("op"), m.start("op")))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.source))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.next()
        if kind != "op" or val != op:
            raise ExpressionSyntaxError(f"expected {op!r}", pos)

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind is not None:
            raise ExpressionSyntaxError(f"unexpected token {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                node = _BinOp(val, node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                node = _BinOp(val, node, self.unary())
            else:
                return node

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.next()
            return _Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.next()
            return _BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, val, pos = self.next()
        if kind == "num":
            return _Num(float(val))
        if kind == "ident":
            nkind, nval, _ = self.peek()
            if nkind == "op" and nval == "(":
                if val not in _FUNCTIONS:
                    raise ExpressionSyntaxError(f"unknown function {val!r}", pos)
                self.next()
                arg = self.expr()
                self.expect_op(")")
                return _Call(val, arg)
            if val == self.variable:
                return _Var(val)
            if val in _CONSTANTS:
                return _Num(_CONSTANTS[val])
            raise ExpressionSyntaxError(
                f"unknown identifier {val!r} (variable is {self.variable!r})", pos
            )
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExpressionSyntaxError(
            "unexpected end of input" if kind is None else f"unexpected token {val!r}",
            pos,
        )


def parse(source: str, variable_name: str) -> Expression:
    """Parse ``source`` as an expression in the single variable
    ``variable_name``."""
    if not source or not source.strip():
        raise ExpressionSyntaxError("empty expression", 0)
    root = _Parser(source, variable_name).parse()
    return Expression(root, variable_name, source)

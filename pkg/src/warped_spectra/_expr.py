"""Recursive-descent parser for curvature expressions in one variable ``t``.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := unary ('^' factor)?
    unary  := ('-' | '+') factor | base
    base   := number | 't' | 'pi' | ident '(' expr ')' | '(' expr ')'

``^`` is right-associative and binds tighter than unary minus, so
``-t^2`` is ``-(t^2)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import ProfileSyntaxError

FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "abs": np.abs,
}

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Call]


def _tokenize(text):
    tokens = []
    pos = 0
    raw = text.encode("utf-8")
    # offsets are reported in bytes; keep a char->byte map for non-ascii input
    byte_at = [len(text[:i].encode("utf-8")) for i in range(len(text) + 1)]
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ProfileSyntaxError(
                f"unexpected character {text[start]!r}", text, byte_at[start]
            )
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), byte_at[start]))
        pos = m.end()
    tokens.append(("end", "", len(raw)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise ProfileSyntaxError(message, self.text, tok[2])

    def expect(self, value):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != value:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            self.error(f"expected {value!r}, found {what}")
        return self.advance()

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.advance()
            arg = self.factor()
            return Neg(arg) if tok[1] == "-" else arg
        node = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            node = BinOp("^", node, self.factor())
        return node

    def base(self):
        tok = self.advance()
        kind, value, _ = tok
        if kind == "num":
            return Num(float(value))
        if kind == "ident":
            if value == "t":
                return Var()
            if value == "pi":
                return Num(float(np.pi))
            if value in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(value, arg)
            self.error(f"unknown identifier {value!r}", tok)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect(")")
            return node
        what = "end of input" if kind == "end" else repr(value)
        self.error(f"unexpected {what}", tok)


def parse(text):
    """Parse ``text`` into an expression tree."""
    return _Parser(text).parse()


def evaluate(node, t):
    """Evaluate a tree on a float array. No error checking; callers test finiteness."""
    if isinstance(node, Num):
        return np.full_like(t, node.value)
    if isinstance(node, Var):
        return t
    if isinstance(node, Neg):
        return -evaluate(node.arg, t)
    if isinstance(node, Call):
        return FUNCTIONS[node.name](evaluate(node.arg, t))
    a = evaluate(node.left, t)
    b = evaluate(node.right, t)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return a / b
    return np.power(a, b)


def to_text(node):
    """Fully parenthesised text that parses back to an identical tree."""
    if isinstance(node, Num):
        return repr(node.value) if node.value >= 0 else f"(-{repr(-node.value)})"
    if isinstance(node, Var):
        return "t"
    if isinstance(node, Neg):
        return f"(-{to_text(node.arg)})"
    if isinstance(node, Call):
        return f"{node.name}({to_text(node.arg)})"
    return f"({to_text(node.left)}{node.op}{to_text(node.right)})"


def substitute_scaled(node, s):
    """Tree for ``node`` with ``t`` replaced by ``s*t``."""
    if isinstance(node, Num):
        return node
    if isinstance(node, Var):
        return BinOp("*", Num(float(s)), Var())
    if isinstance(node, Neg):
        return Neg(substitute_scaled(node.arg, s))
    if isinstance(node, Call):
        return Call(node.name, substitute_scaled(node.arg, s))
    return BinOp(node.op, substitute_scaled(node.left, s), substitute_scaled(node.right, s))


def as_rational(node):
    """Return ``(num, den)`` ascending coefficient arrays if ``node`` is a
    rational function of ``t``, else ``None``."""
    if isinstance(node, Num):
        return np.array([node.value]), np.array([1.0])
    if isinstance(node, Var):
        return np.array([0.0, 1.0]), np.array([1.0])
    if isinstance(node, Call):
        return None
    if isinstance(node, Neg):
        r = as_rational(node.arg)
        return None if r is None else (-r[0], r[1])
    left = as_rational(node.left)
    if left is None:
        return None
    if node.op == "^":
        # only constant integer exponents keep the form rational
        exponent = as_rational(node.right)
        if exponent is None or len(exponent[0]) != 1 or len(exponent[1]) != 1:
            return None
        e = exponent[0][0] / exponent[1][0]
        if not np.isfinite(e) or e != int(e) or abs(e) > 64:
            return None
        num, den = left
        if e < 0:
            num, den = den, num
        e = int(abs(e))
        return P.polypow(num, e), P.polypow(den, e)
    right = as_rational(node.right)
    if right is None:
        return None
    (a, b), (c, d) = left, right
    if node.op == "*":
        return P.polymul(a, c), P.polymul(b, d)
    if node.op == "/":
        return P.polymul(a, d), P.polymul(b, c)
    if np.array_equal(b, d):
        # common denominator: keep coefficients exact
        num = P.polyadd(a, c) if node.op == "+" else P.polysub(a, c)
        return num, b
    cross_a, cross_c = P.polymul(a, d), P.polymul(c, b)
    num = P.polyadd(cross_a, cross_c) if node.op == "+" else P.polysub(cross_a, cross_c)
    return num, P.polymul(b, d)

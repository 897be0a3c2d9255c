"""Potential expressions: tokenizer, recursive-descent parser and evaluator.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' integer)? | '-' factor
    atom   := number | 'q' | '(' expr ')' | func '(' expr ')'
    func   := 'exp' | 'cosh' | 'cos'

Unary minus binds looser than ``^`` so ``-q^2`` means ``-(q^2)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import jets
from .errors import ExpressionSyntaxError, NonIntegerExponent, UnknownFunction


@dataclass(frozen=True)
class Num:
    value: float

    def __str__(self) -> str:
        return repr(self.value)


@dataclass(frozen=True)
class Var:
    def __str__(self) -> str:
        return "q"


@dataclass(frozen=True)
class Neg:
    arg: "Node"

    def __str__(self) -> str:
        return f"(-{self.arg})"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"

    def __str__(self) -> str:
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int

    def __str__(self) -> str:
        return f"{self.base}^{self.exponent}"


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Node"

    def __str__(self) -> str:
        return f"{self.name}({self.arg})"


Node = Union[Num, Var, Neg, BinOp, Pow, Call]


_TOKEN = re.compile(
    r"""\s*(?:
        (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
      | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
      | (?P<op>[-+*/^()])
    )""",
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExpressionSyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.take()
        if text != value or kind != "op":
            found = text or "end of input"
            raise ExpressionSyntaxError(f"expected {value!r}, found {found!r}", pos)

    def parse(self) -> Node:
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected {text!r}", pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.take()
            return Neg(self.factor())
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return Pow(base, self.integer())
        return base

    def integer(self) -> int:
        kind, text, pos = self.take()
        sign = 1
        if kind == "op" and text == "-":
            sign = -1
            kind, text, pos = self.take()
        if kind != "number":
            found = text or "end of input"
            raise ExpressionSyntaxError(f"expected integer exponent, found {found!r}", pos)
        value = float(text)
        if not value.is_integer() or not re.fullmatch(r"\d+", text):
            raise NonIntegerExponent(f"exponent {text!r} is not an integer", pos)
        return sign * int(text)

    def atom(self) -> Node:
        kind, text, pos = self.take()
        if kind == "number":
            return Num(float(text))
        if kind == "name":
            if text == "q":
                return Var()
            if text not in jets.FUNCTIONS:
                raise UnknownFunction(f"unknown function {text!r}", pos)
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Call(text, arg)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = text or "end of input"
        raise ExpressionSyntaxError(f"unexpected {found!r}", pos)


def parse_potential(text: str) -> Node:
    """Parse a potential written in ``q`` into an expression tree."""
    if not text or not text.strip():
        raise ExpressionSyntaxError("empty expression", 0)
    return _Parser(text).parse()


def polynomial(coeffs: Sequence[float]) -> Node:
    """Expression tree for ``sum(c_k q^k)``; zero coefficients are dropped."""
    terms = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        if k == 0:
            terms.append(Num(float(c)))
        elif k == 1:
            terms.append(BinOp("*", Num(float(c)), Var()))
        else:
            terms.append(BinOp("*", Num(float(c)), Pow(Var(), k)))
    if not terms:
        return Num(0.0)
    node = terms[0]
    for t in terms[1:]:
        node = BinOp("+", node, t)
    return node


def evaluate(node: Node, q):
    """Evaluate ``node`` at ``q`` (float, ndarray or :class:`~tunnelsplit.jets.Jet`)."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return q
    if isinstance(node, Neg):
        return -evaluate(node.arg, q)
    if isinstance(node, BinOp):
        left = evaluate(node.left, q)
        right = evaluate(node.right, q)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        return left / right
    if isinstance(node, Pow):
        base = evaluate(node.base, q)
        if isinstance(base, jets.Jet):
            return base ** node.exponent
        return np.power(np.asarray(base, dtype=float), float(node.exponent))[()]
    if isinstance(node, Call):
        return jets.FUNCTIONS[node.name](evaluate(node.arg, q))
    raise TypeError(f"not an expression node: {node!r}")

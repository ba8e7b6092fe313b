"""Equational identities over a signature, checked by exhaustive evaluation.

Surface syntax::

    x*(y*z) = (x*y)*z          infix use of a single-symbol operation name
    w(x + y) = w(x) + w(y)     call syntax for unary operations
    mul(x, -y) = -mul(x, y)    call syntax for any named binary operation
    x + 0 = x

``+`` and ``-`` are the group operations, ``0`` the zero. Infix named
operations bind tighter than ``+``/``-``; everything is left-associative.
Variables are identifiers not followed by ``(``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IdentitySyntaxError, UnknownOperationName
from .report import MAX_COUNTEREXAMPLES, ValidationReport

MAX_VARIABLES = 4

_RESERVED = set("+-()=,0123456789_ \t")


def _is_infix_symbol(ch: str) -> bool:
    return not ch.isalnum() and ch not in _RESERVED and not ch.isspace()


# Term nodes are plain tuples:
#   ("var", name) ("zero",) ("neg", t) ("add", t, u) ("bin", op, t, u) ("un", op, t)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message):
        raise IdentitySyntaxError(message, self.text, self.pos + 1)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def ident(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] in "_'"
        ):
            self.pos += 1
        return self.text[start:self.pos]

    def equation(self):
        lhs = self.expr()
        self.expect("=")
        rhs = self.expr()
        if self.peek():
            self.error("trailing input")
        return lhs, rhs

    def expr(self):
        node = self.term()
        while self.peek() in ("+", "-"):
            ch = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            node = ("add", node, rhs if ch == "+" else ("neg", rhs))
        return node

    def term(self):
        node = self.unary()
        while True:
            ch = self.peek()
            if not ch or not _is_infix_symbol(ch):
                return node
            self.pos += 1
            node = ("bin", ch, node, self.unary())

    def unary(self):
        if self.peek() == "-":
            self.pos += 1
            return ("neg", self.unary())
        return self.atom()

    def atom(self):
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            node = self.expr()
            self.expect(")")
            return node
        if ch == "0":
            self.pos += 1
            return ("zero",)
        if ch.isalpha() or ch == "_":
            name = self.ident()
            if self.peek() != "(":
                return ("var", name)
            self.pos += 1
            args = [self.expr()]
            while self.peek() == ",":
                self.pos += 1
                args.append(self.expr())
            self.expect(")")
            if len(args) == 1:
                return ("un", name, args[0])
            if len(args) == 2:
                return ("bin", name, args[0], args[1])
            self.error(f"operation {name!r} applied to {len(args)} arguments")
        self.error("unexpected character" if ch else "unexpected end of input")


def _walk(node, variables, binary, unary):
    kind = node[0]
    if kind == "var":
        if node[1] not in variables:
            variables.append(node[1])
    elif kind == "bin":
        binary.add(node[1])
        _walk(node[2], variables, binary, unary)
        _walk(node[3], variables, binary, unary)
    elif kind == "un":
        unary.add(node[1])
        _walk(node[2], variables, binary, unary)
    else:
        for child in node[1:]:
            _walk(child, variables, binary, unary)


@dataclass(frozen=True)
class Identity:
    text: str
    lhs: tuple
    rhs: tuple
    variables: tuple[str, ...]
    binary_names: frozenset[str]
    unary_names: frozenset[str]


def parse_identity(text: str) -> Identity:
    lhs, rhs = _Parser(text).equation()
    variables: list[str] = []
    binary: set[str] = set()
    unary: set[str] = set()
    _walk(lhs, variables, binary, unary)
    _walk(rhs, variables, binary, unary)
    if len(variables) > MAX_VARIABLES:
        raise IdentitySyntaxError(
            f"{len(variables)} variables; at most {MAX_VARIABLES} allowed", text
        )
    return Identity(text, lhs, rhs, tuple(variables), frozenset(binary), frozenset(unary))


def check_names(identity: Identity, binary_names, unary_names) -> None:
    missing = (identity.binary_names - set(binary_names)) | (
        identity.unary_names - set(unary_names)
    )
    if missing:
        raise UnknownOperationName(
            f"identity {identity.text!r} uses undeclared operation(s) {sorted(missing)}"
        )


def _eval(node, alg, env, shape):
    kind = node[0]
    if kind == "var":
        return env[node[1]]
    if kind == "zero":
        return np.zeros(shape, dtype=np.int64)
    if kind == "neg":
        return alg.neg[_eval(node[1], alg, env, shape)]
    if kind == "add":
        return alg.add[_eval(node[1], alg, env, shape), _eval(node[2], alg, env, shape)]
    if kind == "bin":
        return alg.binary_ops[node[1]][
            _eval(node[2], alg, env, shape), _eval(node[3], alg, env, shape)
        ]
    return alg.unary_ops[node[1]][_eval(node[2], alg, env, shape)]


def identity_failures(alg, identity: Identity, limit: int = MAX_COUNTEREXAMPLES):
    """Assignments (in variable order) on which the two sides differ."""
    check_names(identity, alg.binary_ops, alg.unary_ops)
    k = len(identity.variables)
    shape = (alg.size,) * k
    grids = np.indices(shape, dtype=np.int64) if k else []
    env = dict(zip(identity.variables, grids))
    lhs = np.broadcast_to(_eval(identity.lhs, alg, env, shape), shape)
    rhs = np.broadcast_to(_eval(identity.rhs, alg, env, shape), shape)
    bad = np.argwhere(lhs != rhs)
    return [tuple(int(v) for v in row) for row in bad[:limit]]


def check_identity(alg, identity, check_name: str | None = None) -> ValidationReport:
    """Exhaustively evaluate ``identity`` (text or parsed) on ``alg``.

    An empty report means the equation holds for every assignment; otherwise
    the failures list assignments in lexicographic order, the first one first.
    """
    if isinstance(identity, str):
        identity = parse_identity(identity)
    report = ValidationReport()
    report.record(
        check_name or f"identity[{identity.text}]",
        identity_failures(alg, identity),
        detail=",".join(identity.variables),
    )
    return report

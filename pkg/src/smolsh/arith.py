"""C-style integer arithmetic over 64-bit two's-complement values."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

INT_MIN = -(1 << 63)
INT_MAX = (1 << 63) - 1
_MASK = (1 << 64) - 1


class ArithError(Exception):
    pass


class ArithSyntaxError(ArithError):
    pass


@dataclass(frozen=True, slots=True)
class Const:
    value: int


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Unary:
    op: str
    e: "ArithExpr"


@dataclass(frozen=True, slots=True)
class Binary:
    op: str
    left: "ArithExpr"
    right: "ArithExpr"


@dataclass(frozen=True, slots=True)
class Ternary:
    cond: "ArithExpr"
    then: "ArithExpr"
    other: "ArithExpr"


@dataclass(frozen=True, slots=True)
class Assign:
    name: str
    op: str
    e: "ArithExpr"


@dataclass(frozen=True, slots=True)
class IncDec:
    name: str
    pre: bool
    op: str  # "+" or "-"


ArithExpr = Union[Const, Var, Unary, Binary, Ternary, Assign, IncDec]


def wrap(v: int) -> int:
    v &= _MASK
    return v - (1 << 64) if v >> 63 else v


# ---------------------------------------------------------------------------
# lexing and parsing

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\n\r]+)
  | (?P<num>[0-9][0-9A-Za-z_]*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><<=|>>=|&&|\|\||==|!=|<=|>=|<<|>>|\+\+|--|\+=|-=|\*=|/=|%=|&=|\^=|\|=|[-+*/%<>=!~&^|?:()])
""", re.VERBOSE)

_ASSIGN_OPS = {"=", "*=", "/=", "%=", "+=", "-=", "<<=", ">>=", "&=", "^=", "|="}

_BINARY_LEVELS = [
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("<<", ">>"),
    ("+", "-"),
    ("*", "/", "%"),
]


def parse_number(text: str) -> int:
    """Parse a C integer constant (decimal, 0octal, 0xhex)."""
    t = text
    if re.fullmatch(r"0[xX][0-9a-fA-F]+", t):
        return wrap(int(t[2:], 16))
    if re.fullmatch(r"0[0-7]*", t):
        return wrap(int(t, 8))
    if re.fullmatch(r"[1-9][0-9]*", t):
        return wrap(int(t, 10))
    raise ArithError("Illegal number: " + text)


def _tokenize(src: str) -> list[tuple[str, str]]:
    toks = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ArithSyntaxError("syntax error: unexpected character '%s'" % src[pos])
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        toks.append((kind, m.group()))
    return toks


class _Parser:
    def __init__(self, toks: list[tuple[str, str]]) -> None:
        self.toks = toks
        self.i = 0

    def peek(self, k: int = 0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else ("eof", "")

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, op: str) -> None:
        t = self.take()
        if t != ("op", op):
            raise ArithSyntaxError("expecting '%s'" % op)

    def expr(self):
        kind, val = self.peek()
        if kind == "name" and self.peek(1)[0] == "op" and self.peek(1)[1] in _ASSIGN_OPS:
            op = self.peek(1)[1]
            self.i += 2
            return Assign(val, op, self.expr())
        return self.ternary()

    def ternary(self):
        cond = self.binary(0)
        if self.peek() == ("op", "?"):
            self.take()
            then = self.expr()
            self.expect(":")
            other = self.ternary_or_assign()
            return Ternary(cond, then, other)
        return cond

    def ternary_or_assign(self):
        kind, _ = self.peek()
        if kind == "name" and self.peek(1)[0] == "op" and self.peek(1)[1] in _ASSIGN_OPS:
            return self.expr()
        return self.ternary()

    def binary(self, level: int):
        if level == len(_BINARY_LEVELS):
            return self.unary()
        left = self.binary(level + 1)
        ops = _BINARY_LEVELS[level]
        while self.peek()[0] == "op" and self.peek()[1] in ops:
            op = self.take()[1]
            right = self.binary(level + 1)
            left = Binary(op, left, right)
        return left

    def unary(self):
        kind, val = self.peek()
        if kind == "op" and val in ("++", "--"):
            if self.peek(1)[0] == "name":
                self.i += 2
                return IncDec(self.toks[self.i - 1][1], True, val[0])
            # two unary signs
            self.take()
            return Unary(val[0], Unary(val[0], self.unary()))
        if kind == "op" and val in ("+", "-", "~", "!"):
            self.take()
            return Unary(val, self.unary())
        return self.postfix()

    def postfix(self):
        kind, val = self.take()
        if kind == "num":
            return Const(parse_number(val))
        if kind == "name":
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] in ("++", "--"):
                self.take()
                return IncDec(val, False, nxt[1][0])
            return Var(val)
        if (kind, val) == ("op", "("):
            e = self.expr()
            self.expect(")")
            return e
        if kind == "eof":
            raise ArithSyntaxError("syntax error: expression expected")
        raise ArithSyntaxError("syntax error: unexpected '%s'" % val)


def parse_arithmetic(src: str) -> ArithExpr:
    toks = _tokenize(src)
    if not toks:
        raise ArithSyntaxError("syntax error: empty expression")
    p = _Parser(toks)
    e = p.expr()
    if p.i != len(toks):
        raise ArithSyntaxError("syntax error: unexpected '%s'" % p.peek()[1])
    return e


# ---------------------------------------------------------------------------
# evaluation


def _div(a: int, b: int) -> int:
    if b == 0:
        raise ArithError("division by zero")
    q = abs(a) // abs(b)
    if (a < 0) != (b < 0):
        q = -q
    return wrap(q)


def _mod(a: int, b: int) -> int:
    if b == 0:
        raise ArithError("division by zero")
    q = abs(a) // abs(b)
    if (a < 0) != (b < 0):
        q = -q
    return wrap(a - b * q)


def apply_binary(op: str, a: int, b: int) -> int:
    if op == "+":
        return wrap(a + b)
    if op == "-":
        return wrap(a - b)
    if op == "*":
        return wrap(a * b)
    if op == "/":
        return _div(a, b)
    if op == "%":
        return _mod(a, b)
    if op == "<<":
        return wrap(a << (b & 63))
    if op == ">>":
        return a >> (b & 63)
    if op == "<":
        return int(a < b)
    if op == "<=":
        return int(a <= b)
    if op == ">":
        return int(a > b)
    if op == ">=":
        return int(a >= b)
    if op == "==":
        return int(a == b)
    if op == "!=":
        return int(a != b)
    if op == "&":
        return a & b
    if op == "^":
        return a ^ b
    if op == "|":
        return a | b
    raise ArithError("unknown operator " + op)


def var_value(text) -> int:
    """Interpret a variable's text as an integer (unset or null reads 0)."""
    if text is None:
        return 0
    t = text.strip(" \t\n")
    if t == "":
        return 0
    sign = 1
    if t[0] in "+-":
        sign = -1 if t[0] == "-" else 1
        t = t[1:]
    try:
        return wrap(sign * parse_number(t))
    except ArithError:
        raise ArithError("Illegal number: " + text) from None


class _Evaluator:
    def __init__(self, sh) -> None:
        self.sh = sh

    def read(self, name: str) -> int:
        return var_value(self.sh.lookup(name))

    def write(self, name: str, v: int) -> None:
        from .state import ReadonlyError
        try:
            self.sh.set_global(name, str(v))
        except ReadonlyError:
            raise ArithError(name + ": is read only") from None

    def ev(self, e) -> int:
        t = type(e)
        if t is Const:
            return e.value
        if t is Var:
            return self.read(e.name)
        if t is Unary:
            v = self.ev(e.e)
            if e.op == "-":
                return wrap(-v)
            if e.op == "+":
                return v
            if e.op == "~":
                return ~v
            return int(v == 0)
        if t is Binary:
            if e.op == "&&":
                return int(self.ev(e.left) != 0 and self.ev(e.right) != 0)
            if e.op == "||":
                return int(self.ev(e.left) != 0 or self.ev(e.right) != 0)
            a = self.ev(e.left)
            b = self.ev(e.right)
            return apply_binary(e.op, a, b)
        if t is Ternary:
            return self.ev(e.then) if self.ev(e.cond) != 0 else self.ev(e.other)
        if t is Assign:
            v = self.ev(e.e)
            if e.op != "=":
                v = apply_binary(e.op[:-1], self.read(e.name), v)
            self.write(e.name, v)
            return v
        if t is IncDec:
            old = self.read(e.name)
            new = wrap(old + (1 if e.op == "+" else -1))
            self.write(e.name, new)
            return new if e.pre else old
        raise ArithError("bad expression")


def eval_arith(sh, e: ArithExpr) -> int:
    """Evaluate ``e`` against shell state ``sh`` (which is updated in place)."""
    return _Evaluator(sh).ev(e)


def evaluate_text(sh, src: str) -> int:
    return eval_arith(sh, parse_arithmetic(src))

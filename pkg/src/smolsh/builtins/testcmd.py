"""test and [."""

from __future__ import annotations

from . import BuiltinError

_UNARY = set("bcdefghLnprsStuwxz")
_BINARY = {"=", "!=", "-eq", "-ne", "-gt", "-ge", "-lt", "-le", "-nt", "-ot", "-ef", "<", ">"}


class _Syntax(Exception):
    pass


def _int(s: str) -> int:
    t = s.strip(" \t\n")
    body = t[1:] if t[:1] in "+-" else t
    if not body or not body.isdigit() or not body.isascii():
        raise BuiltinError("%s: bad number" % s, 2)
    return int(t)


def _is_unary(op: str) -> bool:
    return len(op) == 2 and op[0] == "-" and op[1] in _UNARY


def _unary(sh, op: str, arg: str) -> bool:
    c = op[1]
    if c == "n":
        return arg != ""
    if c == "z":
        return arg == ""
    if c == "t":
        try:
            return sh.os.isatty(_int(arg))
        except BuiltinError:
            return False
    st = sh.os.stat(arg, follow=(c != "h" and c != "L"))
    if st is None:
        return False
    if c == "e":
        return True
    if c == "f":
        return st.kind == "reg"
    if c == "d":
        return st.kind == "dir"
    if c in "hL":
        return st.kind == "link"
    if c == "b":
        return st.kind == "blk"
    if c == "c":
        return st.kind == "chr"
    if c == "p":
        return st.kind == "fifo"
    if c == "S":
        return st.kind == "sock"
    if c == "s":
        return st.size > 0
    if c == "u":
        return bool(st.mode & 0o4000)
    if c == "g":
        return bool(st.mode & 0o2000)
    return sh.os.access(arg, {"r": "r", "w": "w", "x": "x"}[c])


def _binary(sh, a: str, op: str, b: str) -> bool:
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    if op == "<":
        return a < b
    if op == ">":
        return a > b
    if op in ("-nt", "-ot"):
        sa, sb = sh.os.stat(a), sh.os.stat(b)
        if op == "-ot":
            sa, sb = sb, sa
        if sa is None:
            return False
        return sb is None or sa.mtime > sb.mtime
    if op == "-ef":
        if sh.os.stat(a) is None or sh.os.stat(b) is None:
            return False
        return sh.os.realpath(a) == sh.os.realpath(b)
    x, y = _int(a), _int(b)
    return {"-eq": x == y, "-ne": x != y, "-gt": x > y, "-ge": x >= y,
            "-lt": x < y, "-le": x <= y}[op]


class _Parser:
    """Recursive descent for five or more arguments."""

    def __init__(self, sh, args: list) -> None:
        self.sh = sh
        self.args = args
        self.i = 0

    def peek(self, k: int = 0):
        j = self.i + k
        return self.args[j] if j < len(self.args) else None

    def take(self) -> str:
        if self.i >= len(self.args):
            raise _Syntax("argument expected")
        a = self.args[self.i]
        self.i += 1
        return a

    def expr(self) -> bool:
        v = self.and_()
        while self.peek() == "-o":
            self.i += 1
            r = self.and_()
            v = v or r
        return v

    def and_(self) -> bool:
        v = self.not_()
        while self.peek() == "-a":
            self.i += 1
            r = self.not_()
            v = v and r
        return v

    def not_(self) -> bool:
        if self.peek() == "!":
            self.i += 1
            return not self.not_()
        return self.primary()

    def primary(self) -> bool:
        a = self.take()
        if a == "(" and self.peek(1) is not None and self.peek() not in _BINARY:
            v = self.expr()
            if self.take() != ")":
                raise _Syntax("closing paren expected")
            return v
        nxt = self.peek()
        if nxt in _BINARY and self.peek(1) is not None:
            self.i += 1
            return _binary(self.sh, a, nxt, self.take())
        if _is_unary(a) and nxt is not None:
            return _unary(self.sh, a, self.take())
        return a != ""


def evaluate(sh, args: list) -> bool:
    n = len(args)
    if n == 0:
        return False
    if n == 1:
        return args[0] != ""
    if n == 2:
        if args[0] == "!":
            return args[1] == ""
        if _is_unary(args[0]):
            return _unary(sh, args[0], args[1])
        raise _Syntax("%s: unexpected operator" % args[0])
    if n == 3:
        if args[1] in _BINARY:
            return _binary(sh, args[0], args[1], args[2])
        if args[1] == "-a":
            return args[0] != "" and args[2] != ""
        if args[1] == "-o":
            return args[0] != "" or args[2] != ""
        if args[0] == "!":
            return not evaluate(sh, args[1:])
        if args[0] == "(" and args[2] == ")":
            return args[1] != ""
        raise _Syntax("%s: unexpected operator" % args[1])
    if n == 4:
        if args[0] == "!":
            return not evaluate(sh, args[1:])
        if args[0] == "(" and args[3] == ")":
            return evaluate(sh, args[1:3])
    p = _Parser(sh, args)
    v = p.expr()
    if p.i != n:
        raise _Syntax("%s: unexpected operator" % args[p.i])
    return v


def _test(sh, args, ctx):
    try:
        return 0 if evaluate(sh, args) else 1
    except _Syntax as e:
        raise BuiltinError(str(e), 2)


def _bracket(sh, args, ctx):
    if not args or args[-1] != "]":
        raise BuiltinError("missing ]", 2)
    return _test(sh, args[:-1], ctx)


TABLE = {"test": _test, "[": _bracket}

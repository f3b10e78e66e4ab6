"""echo and printf."""

from __future__ import annotations

from . import BuiltinError, out


def _echo(sh, args, ctx):
    newline = True
    if args and args[0] == "-n":
        newline = False
        args = args[1:]
    out(sh, " ".join(args) + ("\n" if newline else ""))
    return 0


_SIMPLE_ESCAPES = {"\\": "\\", "a": "\a", "b": "\b", "f": "\f", "n": "\n", "r": "\r",
                   "t": "\t", "v": "\v", '"': '"', "'": "'"}


class _Stop(Exception):
    """Raised by \\c inside a %b argument: stop all output."""


def _escape(s: str, i: int, in_b: bool) -> tuple[str, int]:
    """Decode the escape whose backslash is at ``s[i]``."""
    if i + 1 >= len(s):
        return "\\", i + 1
    c = s[i + 1]
    if c in _SIMPLE_ESCAPES and not (in_b and c in "\"'"):
        return _SIMPLE_ESCAPES[c], i + 2
    if c == "c" and in_b:
        raise _Stop()
    if c in "01234567":
        j = i + 1
        limit = 4 if (in_b and c == "0") else 3
        digits = ""
        while j < len(s) and len(digits) < limit and s[j] in "01234567":
            digits += s[j]
            j += 1
        return chr(int(digits, 8) & 0xFF), j
    return "\\" + c, i + 2


def _unescape(s: str, in_b: bool) -> str:
    outp = []
    i = 0
    while i < len(s):
        if s[i] == "\\":
            text, i = _escape(s, i, in_b)
            outp.append(text)
        else:
            outp.append(s[i])
            i += 1
    return "".join(outp)


class _Printer:
    def __init__(self, sh) -> None:
        self.sh = sh
        self.status = 0

    def number(self, s: str) -> int:
        if s is None or s == "":
            return 0
        if s[0] in "'\"":
            return ord(s[1]) if len(s) > 1 else 0
        t = s.lstrip(" \t\n")
        sign = 1
        body = t
        if body[:1] in "+-":
            sign = -1 if body[0] == "-" else 1
            body = body[1:]
        base = 10
        digits = "0123456789"
        if body[:2].lower() == "0x":
            base, digits, body = 16, "0123456789abcdefABCDEF", body[2:]
        elif body[:1] == "0" and len(body) > 1:
            base, digits = 8, "01234567"
        k = 0
        while k < len(body) and body[k] in digits:
            k += 1
        value = sign * int(body[:k], base) if k else 0
        if k == 0 or k != len(body):
            self.sh.os.write(2, "smolsh: printf: %s: %s\n" % (
                s, "expected numeric value" if k == 0 else "not completely converted"))
            self.status = 1
        return value

    def convert(self, conv: str, flags: str, width, prec, arg) -> str:
        spec = "%" + flags + ("" if width is None else str(width)) + (
            "" if prec is None else "." + str(prec))
        if conv == "s":
            return (spec + "s") % (arg or "")
        if conv == "b":
            return (spec + "s") % _unescape(arg or "", True)
        if conv == "c":
            return (spec.split(".")[0] + "s") % ((arg or "")[:1])
        n = self.number(arg)
        if conv in "di":
            return (spec + "d") % n
        if n < 0:
            n += 1 << 64
        if conv == "u":
            return (spec + "d") % n
        if conv == "o" and "#" in flags:
            return (spec.replace("#", "") + "s") % ("0%o" % n if n else "0")
        return (spec + conv) % n

    def run(self, fmt: str, args: list) -> str:
        outp: list[str] = []
        ai = 0
        try:
            while True:
                used = False
                i = 0
                while i < len(fmt):
                    ch = fmt[i]
                    if ch == "\\":
                        text, i = _escape(fmt, i, False)
                        outp.append(text)
                        continue
                    if ch != "%":
                        outp.append(ch)
                        i += 1
                        continue
                    if fmt[i + 1:i + 2] == "%":
                        outp.append("%")
                        i += 2
                        continue
                    j = i + 1
                    flags = ""
                    while j < len(fmt) and fmt[j] in "-+ #0":
                        flags += fmt[j]
                        j += 1
                    width = prec = None
                    if fmt[j:j + 1] == "*":
                        a = args[ai] if ai < len(args) else None
                        ai += 1
                        used = True
                        width = self.number(a)
                        if width < 0:
                            flags += "-"
                            width = -width
                        j += 1
                    else:
                        k = j
                        while j < len(fmt) and fmt[j].isdigit():
                            j += 1
                        if j > k:
                            width = int(fmt[k:j])
                    if fmt[j:j + 1] == ".":
                        j += 1
                        if fmt[j:j + 1] == "*":
                            a = args[ai] if ai < len(args) else None
                            ai += 1
                            used = True
                            prec = max(self.number(a), 0)
                            j += 1
                        else:
                            k = j
                            while j < len(fmt) and fmt[j].isdigit():
                                j += 1
                            prec = int(fmt[k:j] or "0")
                    conv = fmt[j:j + 1]
                    if not conv or conv not in "diouxXcsb":
                        raise BuiltinError("%%%s: invalid directive" % fmt[i + 1:j + 1], 1)
                    arg = args[ai] if ai < len(args) else None
                    if ai < len(args):
                        used = True
                    ai += 1
                    outp.append(self.convert(conv, flags, width, prec, arg))
                    i = j + 1
                if ai >= len(args) or not used:
                    break
        except _Stop:
            pass
        return "".join(outp)


def _printf(sh, args, ctx):
    if args and args[0] == "--":
        args = args[1:]
    if not args:
        raise BuiltinError("usage: printf format [arg ...]", 2)
    p = _Printer(sh)
    text = p.run(args[0], args[1:])
    out(sh, text)
    return p.status


TABLE = {"echo": _echo, "printf": _printf}

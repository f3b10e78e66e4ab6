"""Incremental lexer and recursive-descent parser for POSIX shell syntax.

Input is pulled a line at a time, so the parser never consumes text past
the newline that ends the current complete command.  This keeps aliases
defined on one line effective on the next, and leaves unread script text
available to commands that share the shell's input.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, is_dataclass
from typing import Callable, Optional

from .arith import ArithExpr, parse_arithmetic as _parse_arith
from .ast import (
    EMPTY, NORMAL, SEP, And, Arith, Background, Case, CaseBranch, CmdSubst, FAlt,
    FAssign, FDefault, FError, FLength, FnDef, For, FSub, If, Lit, Not, Or, Param,
    Pipeline, Quoted, RDup, Redirected, RFile, RHere, Seq, Simple, Subshell, Tilde,
    While,
)

__all__ = [
    "ParseSession", "Complete", "Blank", "Eof", "SyntaxErr", "parse_next",
    "parse_program", "parse_arithmetic", "is_name",
]


@dataclass(frozen=True)
class Complete:
    cmd: object


@dataclass(frozen=True)
class Blank:
    pass


@dataclass(frozen=True)
class Eof:
    pass


@dataclass(frozen=True)
class SyntaxErr:
    message: str
    lineno: int = 0


class ParseError(Exception):
    def __init__(self, message: str, lineno: int = 0) -> None:
        super().__init__(message)
        self.message = message
        self.lineno = lineno


class _NotArith(Exception):
    pass


RESERVED = {"if", "then", "else", "elif", "fi", "do", "done", "case", "esac",
            "while", "until", "for", "{", "}", "!", "in"}

_META = " \t\n;&|<>()"
_OPERATORS = ["<<-", "&&", "||", ";;", "<<", ">>", "<&", ">&", "<>", ">|",
              ";", "&", "|", "(", ")", "<", ">"]
_SPECIAL_PARAMS = "@*#?-$!"


def is_name(s: str) -> bool:
    if not s or not (s[0].isascii() and (s[0].isalpha() or s[0] == "_")):
        return False
    return all(c.isascii() and (c.isalnum() or c == "_") for c in s)


def _name_char(c: str, first: bool) -> bool:
    if not c or not c.isascii():
        return False
    return c.isalpha() or c == "_" or (not first and c.isdigit())


@dataclass
class _Tok:
    kind: str  # word, op, newline, eof, io
    value: str
    parts: tuple = ()
    start: int = 0
    end: int = 0
    literal: bool = False
    lineno: int = 0


class _PendingHere:
    """A heredoc whose body has not been read yet."""

    def __init__(self, fd: int, kind: str, strip: bool, delim: str) -> None:
        self.fd = fd
        self.kind = kind
        self.strip = strip
        self.delim = delim
        self.body: Optional[tuple] = None

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)


class ParseSession:
    """Mutable parse context: input source, buffer, heredoc queue, aliases."""

    def __init__(self, reader: Optional[Callable[[], Optional[str]]] = None,
                 text: Optional[str] = None, interactive: bool = False,
                 expand_aliases: bool = True, prompt: Optional[Callable[[str], None]] = None,
                 lineno: int = 1) -> None:
        self.reader = reader
        self.buf = text if text is not None else ""
        self.pos = 0
        self.eof = reader is None
        self.interactive = interactive
        self.expand_aliases = expand_aliases
        self.prompt = prompt
        self.lineno = lineno
        self.heredocs: list[_PendingHere] = []
        self.active_aliases: list[list] = []
        self.ps1 = ""
        self.ps2 = ""
        self.fresh = True
        self.last_text = ""

    @classmethod
    def from_string(cls, text: str, lineno: int = 1, expand_aliases: bool = True) -> "ParseSession":
        return cls(text=text, lineno=lineno, expand_aliases=expand_aliases)

    def more(self) -> bool:
        """Pull another line of input; False at end of input."""
        if self.eof:
            return False
        if self.interactive and self.prompt is not None:
            self.prompt(self.ps1 if self.fresh else self.ps2)
        self.fresh = False
        line = self.reader()  # type: ignore[misc]
        if not line:
            self.eof = True
            return False
        self.buf += line
        return True

    def at_eof(self) -> bool:
        return self.pos >= len(self.buf) and (self.eof or not self.more())

    def __repr__(self) -> str:
        return "<ParseSession>"


class _Parser:
    def __init__(self, s: ParseSession, aliases: Optional[dict] = None) -> None:
        self.s = s
        self.aliases = aliases or {}
        self.look: list[_Tok] = []
        self.used_here = False

    # ------------------------------------------------------------------
    # character level

    def ch(self, k: int = 0) -> str:
        s = self.s
        while s.pos + k >= len(s.buf):
            if not s.more():
                return ""
        return s.buf[s.pos + k]

    def adv(self, n: int = 1) -> None:
        s = self.s
        for i in range(n):
            if s.buf[s.pos + i] == "\n":
                s.lineno += 1
        s.pos += n

    def error(self, msg: str):
        raise ParseError(msg, self.s.lineno)

    # ------------------------------------------------------------------
    # tokens

    def peek(self, k: int = 0) -> _Tok:
        while len(self.look) <= k:
            self.look.append(self._lex())
        return self.look[k]

    def take(self) -> _Tok:
        t = self.peek()
        self.look.pop(0)
        return t

    def _skip_blank(self) -> None:
        while True:
            c = self.ch()
            if c in (" ", "\t"):
                self.adv()
            elif c == "\\" and self.ch(1) == "\n":
                self.adv(2)
            elif c == "#":
                while self.ch() not in ("", "\n"):
                    self.adv()
            else:
                return

    def _lex(self) -> _Tok:
        self._skip_blank()
        s = self.s
        # drop aliases whose text has been fully consumed
        s.active_aliases = [a for a in s.active_aliases if a[1] > s.pos]
        start = s.pos
        line = s.lineno
        c = self.ch()
        if c == "":
            return _Tok("eof", "", start=start, end=start, lineno=line)
        if c == "\n":
            self.adv()
            self._read_heredocs()
            return _Tok("newline", "\n", start=start, end=s.pos, lineno=line)
        for op in _OPERATORS:
            if all(self.ch(i) == op[i] for i in range(len(op))):
                self.adv(len(op))
                return _Tok("op", op, start=start, end=s.pos, lineno=line)
        parts, literal = self._word()
        raw = s.buf[start:s.pos]
        if literal and raw.isdigit() and self.ch() in ("<", ">"):
            return _Tok("io", raw, start=start, end=s.pos, lineno=line)
        return _Tok("word", raw, parts, start, s.pos, literal, line)

    # ------------------------------------------------------------------
    # words

    def _word(self) -> tuple[tuple, bool]:
        parts: list = []
        lit: list[str] = []
        literal = True

        def flush():
            if lit:
                parts.append(Lit("".join(lit)))
                lit.clear()

        while True:
            c = self.ch()
            if c == "" or c in _META:
                break
            if c == "\\":
                n = self.ch(1)
                if n == "\n":
                    self.adv(2)
                    continue
                literal = False
                if n == "":
                    lit.append("\\")
                    self.adv()
                    continue
                flush()
                parts.append(Quoted((Lit(n),)))
                self.adv(2)
                continue
            if c == "'":
                literal = False
                flush()
                parts.append(self._single())
                continue
            if c == '"':
                literal = False
                flush()
                parts.append(self._double())
                continue
            if c == "$":
                p = self._dollar(False)
                if p is None:
                    lit.append("$")
                    continue
                literal = False
                flush()
                parts.append(p)
                continue
            if c == "`":
                literal = False
                flush()
                parts.append(self._backquote(False))
                continue
            lit.append(c)
            self.adv()
        flush()
        return tuple(parts), literal

    def _single(self) -> Quoted:
        self.adv()
        buf = []
        while True:
            c = self.ch()
            if c == "":
                self.error("unterminated quoted string")
            self.adv()
            if c == "'":
                break
            buf.append(c)
        return Quoted((Lit("".join(buf)),) if buf else ())

    def _double(self) -> Quoted:
        self.adv()
        parts: list = []
        lit: list[str] = []

        def flush():
            if lit:
                parts.append(Lit("".join(lit)))
                lit.clear()

        while True:
            c = self.ch()
            if c == "":
                self.error("unterminated quoted string")
            if c == '"':
                self.adv()
                break
            if c == "\\":
                n = self.ch(1)
                if n == "\n":
                    self.adv(2)
                    continue
                if n in ('$', '`', '"', '\\'):
                    lit.append(n)
                    self.adv(2)
                    continue
                lit.append("\\")
                self.adv()
                continue
            if c == "$":
                p = self._dollar(True)
                if p is None:
                    lit.append("$")
                    continue
                flush()
                parts.append(p)
                continue
            if c == "`":
                flush()
                parts.append(self._backquote(True))
                continue
            lit.append(c)
            self.adv()
        flush()
        return Quoted(tuple(parts))

    def _dollar(self, dq: bool):
        """Parse an expansion at ``$``; None (nothing consumed) if literal."""
        n = self.ch(1)
        if n == "{":
            self.adv(2)
            return self._brace(dq)
        if n == "(":
            if self.ch(2) == "(":
                s = self.s
                saved = (s.pos, s.lineno)
                self.adv(3)
                try:
                    return Arith(self._arith_body())
                except _NotArith:
                    s.pos, s.lineno = saved
            self.adv(2)
            return CmdSubst(self._subcommand())
        if _name_char(n, True):
            self.adv()
            name = []
            while _name_char(self.ch(), False):
                name.append(self.ch())
                self.adv()
            return Param("".join(name), NORMAL)
        if n.isdigit() and n.isascii():
            self.adv(2)
            return Param(n, NORMAL)
        if n and n in _SPECIAL_PARAMS:
            self.adv(2)
            return Param(n, NORMAL)
        self.adv()
        return None

    def _subcommand(self):
        """Parse the command list of ``$( ... )`` up to its closing paren."""
        saved_look = self.look
        self.look = []
        cmd = self.compound_list({")"}, allow_empty=True)
        t = self.take()
        if t.kind != "op" or t.value != ")":
            self.error("expecting ')'")
        self.look = saved_look
        return cmd

    def _arith_body(self) -> tuple:
        parts: list = []
        lit: list[str] = []
        depth = 0

        def flush():
            if lit:
                parts.append(Lit("".join(lit)))
                lit.clear()

        while True:
            c = self.ch()
            if c == "":
                self.error("unterminated arithmetic expansion")
            if c == "(":
                depth += 1
            elif c == ")":
                if depth == 0:
                    if self.ch(1) == ")":
                        self.adv(2)
                        break
                    raise _NotArith()
                depth -= 1
            elif c == "$":
                p = self._dollar(True)
                if p is None:
                    lit.append("$")
                else:
                    flush()
                    parts.append(p)
                continue
            elif c == "`":
                flush()
                parts.append(self._backquote(True))
                continue
            elif c == "\\":
                n = self.ch(1)
                if n == "\n":
                    self.adv(2)
                    continue
                if n in ('$', '`', '\\', '"'):
                    lit.append(n)
                    self.adv(2)
                    continue
            elif c == "'":
                flush()
                parts.append(self._single())
                continue
            elif c == '"':
                flush()
                parts.append(self._double())
                continue
            lit.append(c)
            self.adv()
        flush()
        return tuple(parts)

    def _brace(self, dq: bool) -> Param:
        # position is just after "${"
        c = self.ch()
        if c == "#":
            n = self.ch(1)
            if n == "}":
                self.adv(2)
                return Param("#", NORMAL)
            j = 1
            if _name_char(n, True):
                while _name_char(self.ch(j), False):
                    j += 1
            elif n.isdigit() and n.isascii():
                while self.ch(j).isdigit() and self.ch(j).isascii():
                    j += 1
            elif n and n in _SPECIAL_PARAMS:
                j = 2
            if j > 1 and self.ch(j) == "}":
                name = "".join(self.ch(i) for i in range(1, j))
                self.adv(j + 1)
                return Param(name, FLength())
        name = self._param_name()
        c = self.ch()
        if c == "}":
            self.adv()
            return Param(name, NORMAL)
        null = False
        if c == ":":
            null = True
            self.adv()
            c = self.ch()
            if c not in ("-", "=", "?", "+"):
                self.error("bad substitution")
        if c in ("-", "=", "?", "+"):
            self.adv()
            word = self._fmt_word(dq)
            cls = {"-": FDefault, "=": FAssign, "?": FError, "+": FAlt}[c]
            return Param(name, cls(word, null))
        if c in ("#", "%"):
            self.adv()
            mode = "shortest"
            if self.ch() == c:
                self.adv()
                mode = "longest"
            word = self._fmt_word(dq)
            return Param(name, FSub("prefix" if c == "#" else "suffix", mode, word))
        self.error("bad substitution")
        raise AssertionError

    def _param_name(self) -> str:
        c = self.ch()
        if _name_char(c, True):
            name = []
            while _name_char(self.ch(), False):
                name.append(self.ch())
                self.adv()
            return "".join(name)
        if c.isdigit() and c.isascii():
            name = []
            while self.ch().isdigit() and self.ch().isascii():
                name.append(self.ch())
                self.adv()
            return "".join(name)
        if c and c in _SPECIAL_PARAMS:
            self.adv()
            return c
        self.error("bad substitution")
        raise AssertionError

    def _fmt_word(self, dq: bool) -> tuple:
        """Parse the word of a ``${name op word}`` up to the closing brace."""
        parts: list = []
        lit: list[str] = []

        def flush():
            if lit:
                parts.append(Lit("".join(lit)))
                lit.clear()

        while True:
            c = self.ch()
            if c == "":
                self.error("missing '}'")
            if c == "}":
                self.adv()
                break
            if c == "\\":
                n = self.ch(1)
                if n == "\n":
                    self.adv(2)
                    continue
                if n == "":
                    lit.append("\\")
                    self.adv()
                    continue
                if dq and n not in '$`"\\}*?[]':
                    lit.append("\\")
                    self.adv()
                    continue
                flush()
                parts.append(Quoted((Lit(n),)))
                self.adv(2)
                continue
            if c == "'" and not dq:
                flush()
                parts.append(self._single())
                continue
            if c == '"':
                flush()
                parts.append(self._double())
                continue
            if c == "$":
                p = self._dollar(dq)
                if p is None:
                    lit.append("$")
                else:
                    flush()
                    parts.append(p)
                continue
            if c == "`":
                flush()
                parts.append(self._backquote(dq))
                continue
            lit.append(c)
            self.adv()
        flush()
        return _tildes(tuple(parts), False) if not dq else tuple(parts)

    def _backquote(self, dq: bool) -> CmdSubst:
        self.adv()
        buf = []
        while True:
            c = self.ch()
            if c == "":
                self.error("unterminated backquote")
            if c == "`":
                self.adv()
                break
            if c == "\\":
                n = self.ch(1)
                if n in ("$", "`", "\\") or (dq and n == '"'):
                    buf.append(n)
                    self.adv(2)
                    continue
                if n == "\n":
                    self.adv(2)
                    continue
            buf.append(c)
            self.adv()
        text = "".join(buf)
        sub = ParseSession.from_string(text, self.s.lineno)
        p = _Parser(sub, self.aliases)
        cmd = p.program()
        return CmdSubst(cmd if cmd is not None else EMPTY)

    # ------------------------------------------------------------------
    # heredocs

    def _read_heredocs(self) -> None:
        s = self.s
        while s.heredocs:
            h = s.heredocs.pop(0)
            lines = []
            while True:
                start = s.pos
                while True:
                    c = self.ch()
                    if c in ("", "\n"):
                        break
                    s.pos += 1
                line = s.buf[start:s.pos]
                at_end = c == ""
                if not at_end:
                    self.adv()
                if h.strip:
                    line = line.lstrip("\t")
                if line == h.delim:
                    break
                if at_end:
                    if line:
                        lines.append(line + "\n")
                    self.error("here-document delimited by end-of-file (wanted '%s')" % h.delim)
                lines.append(line + "\n")
            text = "".join(lines)
            if h.kind == "noexpand":
                h.body = (Lit(text),) if text else ()
            else:
                h.body = _here_body(text, s.lineno, self.aliases)
            self.used_here = True

    # ------------------------------------------------------------------
    # grammar

    def is_reserved(self, t: _Tok, words) -> bool:
        return t.kind == "word" and t.literal and t.value in words

    def linebreak(self) -> None:
        while self.peek().kind == "newline":
            self.take()

    def program(self):
        """Parse an entire (string) input as one command; None if empty."""
        cmds = []
        while True:
            self.linebreak()
            if self.peek().kind == "eof":
                break
            cmds.append(self.line_list())
            t = self.peek()
            if t.kind == "newline":
                self.take()
            elif t.kind != "eof":
                self.error("unexpected '%s'" % t.value)
        self._fill_heredocs_check()
        if not cmds:
            return None
        return _resolve(_seq(cmds)) if self.used_here else _seq(cmds)

    def _fill_heredocs_check(self) -> None:
        if self.s.heredocs:
            self.error("here-document not terminated")

    def line_list(self):
        """A top-level list, terminated by newline or end of input."""
        cmds = []
        while True:
            c = self.and_or()
            t = self.peek()
            if t.kind == "op" and t.value in (";", "&"):
                self.take()
                if t.value == "&":
                    c = _background(c)
                cmds.append(c)
                nt = self.peek()
                if nt.kind in ("newline", "eof"):
                    break
                continue
            cmds.append(c)
            break
        return _seq(cmds)

    def compound_list(self, terms: set, allow_empty: bool = False):
        self.linebreak()
        cmds = []
        while True:
            t = self.peek()
            if t.kind == "eof" or self.is_reserved(t, terms) or (
                    t.kind == "op" and (t.value in terms or t.value == ";;")):
                break
            c = self.and_or()
            t = self.peek()
            if t.kind == "op" and t.value in (";", "&"):
                self.take()
                if t.value == "&":
                    c = _background(c)
                cmds.append(c)
                self.linebreak()
                continue
            if t.kind == "newline":
                cmds.append(c)
                self.linebreak()
                continue
            cmds.append(c)
            break
        if not cmds:
            if allow_empty:
                return EMPTY
            t = self.peek()
            self.error("unexpected %s" % ("end of file" if t.kind == "eof" else "'" + t.value + "'"))
        return _seq(cmds)

    def and_or(self):
        left = self.pipeline()
        while True:
            t = self.peek()
            if t.kind == "op" and t.value in ("&&", "||"):
                self.take()
                self.linebreak()
                right = self.pipeline()
                left = And(left, right) if t.value == "&&" else Or(left, right)
            else:
                return left

    def pipeline(self):
        t = self.peek()
        if self.is_reserved(t, {"!"}):
            self.take()
            if self.is_reserved(self.peek(), {"!"}):
                self.error('"!" unexpected')
            return Not(self.pipe_sequence())
        return self.pipe_sequence()

    def pipe_sequence(self):
        cmds = [self.command()]
        while True:
            t = self.peek()
            if t.kind == "op" and t.value == "|":
                self.take()
                self.linebreak()
                cmds.append(self.command())
            else:
                break
        if len(cmds) == 1:
            return cmds[0]
        return Pipeline(tuple(cmds))

    def _alias_check(self) -> None:
        s = self.s
        seen = 0
        while s.expand_aliases and self.aliases and seen < 100:
            t = self.peek()
            if not (t.kind == "word" and t.literal and t.value in self.aliases):
                return
            if t.value in RESERVED:
                return
            if any(a[0] == t.value for a in s.active_aliases):
                return
            if len(self.look) > 1:
                return
            value = self.aliases[t.value]
            self.look = []
            s.buf = s.buf[:t.start] + value + s.buf[t.end:]
            s.pos = t.start
            delta = len(value) - (t.end - t.start)
            for a in s.active_aliases:
                if a[1] >= t.start:
                    a[1] += delta
            s.active_aliases.append([t.value, t.start + len(value)])
            seen += 1

    def command(self):
        self._alias_check()
        t = self.peek()
        if t.kind == "word" and t.literal:
            v = t.value
            if v == "{":
                self.take()
                body = self.compound_list({"}"})
                self.expect_reserved("}")
                return self.redirect_list(body)
            if v == "if":
                return self.redirect_list(self.if_clause())
            if v in ("while", "until"):
                self.take()
                cond = self.compound_list({"do"})
                body = self.do_group()
                if v == "until":
                    cond = Not(cond)
                return self.redirect_list(While(cond, body))
            if v == "for":
                return self.redirect_list(self.for_clause())
            if v == "case":
                return self.redirect_list(self.case_clause())
            if v in ("then", "else", "elif", "fi", "do", "done", "esac", "}", "in"):
                self.error("unexpected '%s'" % v)
            if is_name(v):
                n = self.peek(1)
                if n.kind == "op" and n.value == "(":
                    return self.function_def()
        if t.kind == "op" and t.value == "(":
            self.take()
            body = self.compound_list({")"})
            t2 = self.take()
            if t2.kind != "op" or t2.value != ")":
                self.error("expecting ')'")
            return self.redirect_list(Subshell(body))
        return self.simple_command()

    def expect_reserved(self, word: str) -> None:
        t = self.take()
        if not self.is_reserved(t, {word}):
            what = "end of file" if t.kind == "eof" else "'" + t.value.strip() + "'"
            self.error("unexpected %s (expecting '%s')" % (what or "newline", word))

    def function_def(self):
        name = self.take().value
        self.take()
        t = self.take()
        if t.kind != "op" or t.value != ")":
            self.error("expecting ')'")
        self.linebreak()
        t = self.peek()
        compound = (t.kind == "op" and t.value == "(") or self.is_reserved(
            t, {"{", "if", "while", "until", "for", "case"})
        if not compound:
            self.error("bad function body")
        body = self.command()
        return FnDef(name, body)

    def redirect_list(self, cmd):
        rs = []
        while True:
            t = self.peek()
            if t.kind == "io" or (t.kind == "op" and t.value in ("<", ">", ">|", ">>", "<>",
                                                                  "<&", ">&", "<<", "<<-")):
                rs.append(self.redirect())
            else:
                break
        if rs:
            return Redirected(cmd, tuple(rs))
        return cmd

    def do_group(self):
        self.linebreak()
        self.expect_reserved("do")
        body = self.compound_list({"done"})
        self.expect_reserved("done")
        return body

    def if_clause(self):
        self.take()
        cond = self.compound_list({"then"})
        self.expect_reserved("then")
        then = self.compound_list({"elif", "else", "fi"})
        t = self.peek()
        if self.is_reserved(t, {"elif"}):
            other = self.if_clause()
            return If(cond, then, other)
        other = EMPTY
        if self.is_reserved(t, {"else"}):
            self.take()
            other = self.compound_list({"fi"})
        self.expect_reserved("fi")
        return If(cond, then, other)

    def for_clause(self):
        self.take()
        t = self.take()
        if t.kind != "word" or not t.literal or not is_name(t.value):
            self.error("bad for loop variable")
        var = t.value
        self.linebreak()
        t = self.peek()
        if self.is_reserved(t, {"in"}):
            self.take()
            words = []
            while True:
                t = self.peek()
                if t.kind == "word":
                    self.take()
                    words.append(t.parts)
                else:
                    break
            t = self.peek()
            if t.kind == "op" and t.value == ";":
                self.take()
            elif t.kind == "newline":
                pass
            else:
                self.error("unexpected '%s'" % t.value)
            w = _join_words(words)
        else:
            if t.kind == "op" and t.value == ";":
                self.take()
            w = (Quoted((Param("@", NORMAL),)),)
        body = self.do_group()
        return For(var, w, body)

    def case_clause(self):
        self.take()
        t = self.take()
        if t.kind != "word":
            self.error("expecting word after case")
        word = t.parts
        self.linebreak()
        self.expect_reserved("in")
        self.linebreak()
        branches = []
        while True:
            t = self.peek()
            if self.is_reserved(t, {"esac"}):
                self.take()
                break
            if t.kind == "op" and t.value == "(":
                self.take()
            pats = []
            while True:
                t = self.take()
                if t.kind != "word":
                    self.error("expecting pattern")
                pats.append(t.parts)
                t = self.take()
                if t.kind == "op" and t.value == "|":
                    continue
                if t.kind == "op" and t.value == ")":
                    break
                self.error("expecting ')' in case pattern")
            body = self.compound_list({"esac"}, allow_empty=True)
            branches.append(CaseBranch(tuple(pats), body))
            t = self.peek()
            if t.kind == "op" and t.value == ";;":
                self.take()
                self.linebreak()
                continue
            if self.is_reserved(t, {"esac"}):
                self.take()
                break
            self.error("unexpected %s in case" % ("end of file" if t.kind == "eof" else "'" + t.value + "'"))
        return Case(word, tuple(branches))

    def simple_command(self):
        assigns = []
        words = []
        redirs = []
        lineno = self.peek().lineno
        while True:
            t = self.peek()
            if t.kind == "io" or (t.kind == "op" and t.value in ("<", ">", ">|", ">>", "<>",
                                                                  "<&", ">&", "<<", "<<-")):
                redirs.append(self.redirect())
                continue
            if t.kind == "word":
                self.take()
                if not words:
                    a = _assignment(t.parts)
                    if a is not None:
                        assigns.append(a)
                        continue
                parts = _tildes(t.parts, False)
                words.append(parts)
                continue
            break
        if not assigns and not words and not redirs:
            t = self.peek()
            what = "end of file" if t.kind == "eof" else ("newline" if t.kind == "newline" else "'" + t.value + "'")
            self.error("unexpected " + what)
        return Simple(tuple(assigns), _join_words(words), tuple(redirs), lineno)

    def redirect(self):
        t = self.take()
        fd = None
        if t.kind == "io":
            fd = int(t.value)
            t = self.take()
        op = t.value
        target = self.take()
        if target.kind != "word":
            self.error("expecting word after '%s'" % op)
        if op in ("<<", "<<-"):
            raw = target.value
            quoted = any(c in raw for c in "'\"\\")
            delim = "".join(_strip_quotes(target.parts))
            h = _PendingHere(0 if fd is None else fd, "noexpand" if quoted else "default",
                             op == "<<-", delim)
            self.s.heredocs.append(h)
            self.used_here = True
            return h
        if op in ("<&", ">&"):
            default = 0 if op == "<&" else 1
            return RDup(default if fd is None else fd, op, target.parts)
        default = 0 if op in ("<", "<>") else 1
        return RFile(default if fd is None else fd, op, _tildes(target.parts, False))


# ---------------------------------------------------------------------------
# helpers


def _seq(cmds: list):
    c = cmds[-1]
    for prev in reversed(cmds[:-1]):
        c = Seq(prev, c)
    return c


def _background(c):
    if isinstance(c, Pipeline):
        return Pipeline(c.cmds, True)
    return Background(c)


def _join_words(words: list) -> tuple:
    out: list = []
    for i, w in enumerate(words):
        if i:
            out.append(SEP)
        out.extend(w)
    return tuple(out)


def _strip_quotes(parts: tuple) -> list[str]:
    out = []
    for p in parts:
        if isinstance(p, Lit):
            out.append(p.text)
        elif isinstance(p, Quoted):
            out.extend(_strip_quotes(p.body))
        elif isinstance(p, Param):
            out.append("$" + p.name)
    return out


def _assignment(parts: tuple):
    if not parts or not isinstance(parts[0], Lit):
        return None
    text = parts[0].text
    eq = text.find("=")
    if eq <= 0 or not is_name(text[:eq]):
        return None
    rest = text[eq + 1:]
    value = ((Lit(rest),) if rest else ()) + tuple(parts[1:])
    return (text[:eq], _tildes(value, True))


def _tilde_split(text: str, assignment: bool, at_start: bool) -> list:
    """Split one unquoted literal into Lit/Tilde parts."""
    out: list = []
    segs = text.split(":") if assignment else [text]
    for idx, seg in enumerate(segs):
        if idx:
            out.append(":")
        if seg.startswith("~") and (idx > 0 or at_start):
            slash = seg.find("/")
            if slash < 0:
                out.append(("tilde?", seg[1:]))
            else:
                out.append(Tilde(seg[1:slash] or None))
                out.append(seg[slash:])
        else:
            out.append(seg)
    return out


def _tildes(parts: tuple, assignment: bool) -> tuple:
    """Recognize tilde prefixes at word start (and after ``:`` in assignments)."""
    if not parts:
        return parts
    if not assignment:
        first = parts[0]
        if not (isinstance(first, Lit) and first.text.startswith("~")):
            return parts
    out: list = []
    for i, p in enumerate(parts):
        if not isinstance(p, Lit) or (not assignment and i > 0):
            out.append(p)
            continue
        pieces = _tilde_split(p.text, assignment, i == 0 or (
            bool(out) and isinstance(out[-1], Lit) and out[-1].text.endswith(":")))
        last = len(pieces) - 1
        for j, piece in enumerate(pieces):
            if isinstance(piece, tuple):
                # tilde prefix running to the end of this literal; only valid if
                # the word ends here or continues with an unquoted ":" boundary
                ends_word = i == len(parts) - 1 and j == last
                ends_seg = assignment and j < last
                if ends_word or ends_seg:
                    out.append(Tilde(piece[1] or None))
                else:
                    out.append(Lit("~" + piece[1]))
            elif isinstance(piece, Tilde):
                out.append(piece)
            elif piece:
                out.append(Lit(piece))
    # merge adjacent literals
    merged: list = []
    for p in out:
        if isinstance(p, Lit) and merged and isinstance(merged[-1], Lit):
            merged[-1] = Lit(merged[-1].text + p.text)
        else:
            merged.append(p)
    return tuple(merged)


def _here_body(text: str, lineno: int, aliases: dict) -> tuple:
    """Parse an expanding heredoc body into word parts."""
    sub = ParseSession.from_string(text, lineno)
    p = _Parser(sub, aliases)
    parts: list = []
    lit: list[str] = []

    def flush():
        if lit:
            parts.append(Lit("".join(lit)))
            lit.clear()

    while True:
        c = p.ch()
        if c == "":
            break
        if c == "\\":
            n = p.ch(1)
            if n == "\n":
                p.adv(2)
                continue
            if n in ("$", "`", "\\"):
                lit.append(n)
                p.adv(2)
                continue
            lit.append("\\")
            p.adv()
            continue
        if c == "$":
            x = p._dollar(True)
            if x is None:
                lit.append("$")
            else:
                flush()
                parts.append(x)
            continue
        if c == "`":
            flush()
            parts.append(p._backquote(True))
            continue
        lit.append(c)
        p.adv()
    flush()
    return tuple(parts)


def _resolve(node):
    """Replace pending heredoc placeholders with finished RHere nodes."""
    if isinstance(node, _PendingHere):
        if node.body is None:
            raise ParseError("here-document not terminated")
        return RHere(node.fd, node.kind, node.body)
    if isinstance(node, tuple):
        new = tuple(_resolve(x) for x in node)
        return node if all(a is b for a, b in zip(new, node)) else new
    if is_dataclass(node) and not isinstance(node, type):
        changed = {}
        for f in fields(node):
            v = getattr(node, f.name)
            if isinstance(v, (tuple, _PendingHere)) or is_dataclass(v):
                nv = _resolve(v)
                if nv is not v:
                    changed[f.name] = nv
        if changed:
            vals = {f.name: changed.get(f.name, getattr(node, f.name)) for f in fields(node)}
            return type(node)(**vals)
    return node


# ---------------------------------------------------------------------------
# entry points


def parse_next(session: ParseSession, aliases: Optional[dict] = None,
               ps1: str = "", ps2: str = ""):
    """Parse the next complete command from ``session``."""
    session.ps1 = ps1
    session.ps2 = ps2
    session.fresh = True
    # discard consumed text
    if session.pos and not session.active_aliases:
        session.buf = session.buf[session.pos:]
        session.pos = 0
    start = session.pos
    p = _Parser(session, aliases)
    try:
        t = p.peek()
        if t.kind == "eof":
            return Eof()
        if t.kind == "newline":
            p.take()
            session.last_text = session.buf[start:session.pos]
            return Blank()
        cmd = p.line_list()
        t = p.peek()
        if t.kind == "newline":
            p.take()
        elif t.kind != "eof":
            p.error("unexpected '%s'" % t.value)
        if session.heredocs:
            p.error("here-document not terminated")
        if p.used_here:
            cmd = _resolve(cmd)
        session.last_text = session.buf[start:session.pos]
        return Complete(cmd)
    except ParseError as e:
        session.heredocs.clear()
        session.active_aliases.clear()
        # skip the rest of the offending line
        while session.pos < len(session.buf) and session.buf[session.pos] != "\n":
            session.pos += 1
        if session.pos < len(session.buf):
            session.pos += 1
            session.lineno += 1
        session.last_text = session.buf[start:session.pos]
        return SyntaxErr(e.message, e.lineno)


def parse_program(text: str, aliases: Optional[dict] = None):
    """Parse a whole string; returns a Command (EMPTY if blank).

    Raises ParseError on malformed input.
    """
    s = ParseSession.from_string(text)
    cmd = _Parser(s, aliases).program()
    return EMPTY if cmd is None else cmd


def parse_all(text: str, aliases: Optional[dict] = None) -> list:
    """Parse a string into its successive complete commands."""
    s = ParseSession.from_string(text)
    out = []
    while True:
        r = parse_next(s, aliases)
        if isinstance(r, Eof):
            return out
        if isinstance(r, SyntaxErr):
            raise ParseError(r.message, r.lineno)
        if isinstance(r, Complete):
            out.append(r.cmd)


def parse_arithmetic(src: str) -> ArithExpr:
    return _parse_arith(src)

"""Source syntax and runtime forms for commands, words and expansion states.

All strings are Python ``str`` values holding one byte per character
(latin-1), so every byte value 0..255 round-trips through the evaluator.
Nodes are frozen dataclasses; sequences are tuples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional, Union

# ---------------------------------------------------------------------------
# words


@dataclass(frozen=True, slots=True)
class Lit:
    text: str


@dataclass(frozen=True, slots=True)
class Sep:
    pass


SEP = Sep()


@dataclass(frozen=True, slots=True)
class Tilde:
    user: Optional[str]


@dataclass(frozen=True, slots=True)
class Param:
    name: str
    fmt: "Format"


@dataclass(frozen=True, slots=True)
class CmdSubst:
    cmd: "Command"


@dataclass(frozen=True, slots=True)
class Arith:
    body: tuple


@dataclass(frozen=True, slots=True)
class Quoted:
    body: tuple


# parameter formats.  ``null`` is True for the colon variants, which treat
# a null value like an unset one.


@dataclass(frozen=True, slots=True)
class FNormal:
    pass


@dataclass(frozen=True, slots=True)
class FLength:
    pass


@dataclass(frozen=True, slots=True)
class FDefault:
    word: tuple
    null: bool


@dataclass(frozen=True, slots=True)
class FAssign:
    word: tuple
    null: bool


@dataclass(frozen=True, slots=True)
class FError:
    word: tuple
    null: bool


@dataclass(frozen=True, slots=True)
class FAlt:
    word: tuple
    null: bool


@dataclass(frozen=True, slots=True)
class FSub:
    side: str  # "prefix" | "suffix"
    mode: str  # "shortest" | "longest"
    word: tuple


Format = Union[FNormal, FLength, FDefault, FAssign, FError, FAlt, FSub]
NORMAL = FNormal()
LENGTH = FLength()

# runtime control codes.  Each nested expansion carries its own progress
# (already expanded items ``e`` and remaining word ``w``) so that command
# substitutions buried inside quotes or formats are still small-stepped.


@dataclass(frozen=True, slots=True)
class QuoteRun:
    e: tuple
    w: tuple


@dataclass(frozen=True, slots=True)
class GenRun:
    e: tuple
    w: tuple


@dataclass(frozen=True, slots=True)
class AssignRun:
    name: str
    e: tuple
    w: tuple


@dataclass(frozen=True, slots=True)
class ErrorRun:
    name: str
    null: bool
    e: tuple
    w: tuple


@dataclass(frozen=True, slots=True)
class MatchRun:
    value: str
    side: str
    mode: str
    e: tuple
    w: tuple


@dataclass(frozen=True, slots=True)
class ArithRun:
    e: tuple
    w: tuple


@dataclass(frozen=True, slots=True)
class CmdSubstRunning:
    cmd: "Command"
    pid: int
    fd: int


@dataclass(frozen=True, slots=True)
class CmdWait:
    cmd: "Command"
    pid: int
    captured: str


WordPart = Union[Lit, Sep, Tilde, Param, CmdSubst, Arith, Quoted, QuoteRun, GenRun,
                 AssignRun, ErrorRun, MatchRun, ArithRun, CmdSubstRunning, CmdWait]
Word = tuple

# ---------------------------------------------------------------------------
# expanded words (e) and intermediate fields (i)


@dataclass(frozen=True, slots=True)
class ESep:
    """A statically parsed separator carried through expansion."""


ESEP = ESep()


@dataclass(frozen=True, slots=True)
class Src:
    text: str


@dataclass(frozen=True, slots=True)
class Exp:
    text: str


@dataclass(frozen=True, slots=True)
class At:
    fields: tuple
    quoted: bool = True


@dataclass(frozen=True, slots=True)
class QStr:
    text: str


@dataclass(frozen=True, slots=True)
class FieldSep:
    """A field boundary introduced by IFS splitting."""


FIELDSEP = FieldSep()


@dataclass(frozen=True, slots=True)
class Str:
    text: str


# ---------------------------------------------------------------------------
# expansion states


@dataclass(frozen=True, slots=True)
class ExpOpts:
    split: bool = True
    glob: bool = True
    pattern: bool = False


@dataclass(frozen=True, slots=True)
class WordOpts:
    split: bool = True
    dq: bool = False
    gen: bool = False


@dataclass(frozen=True, slots=True)
class ExpStart:
    opts: ExpOpts
    w: tuple


@dataclass(frozen=True, slots=True)
class ExpExpand:
    opts: ExpOpts
    e: tuple
    w: tuple


@dataclass(frozen=True, slots=True)
class ExpSplit:
    opts: ExpOpts
    e: tuple


@dataclass(frozen=True, slots=True)
class ExpPath:
    opts: ExpOpts
    i: tuple


@dataclass(frozen=True, slots=True)
class ExpQuote:
    opts: ExpOpts
    i: tuple


@dataclass(frozen=True, slots=True)
class ExpDone:
    fields: tuple


@dataclass(frozen=True, slots=True)
class ExpPatternDone:
    """Pattern-mode result: ``(text, quoted)`` segments, quoting intact."""
    segments: tuple


@dataclass(frozen=True, slots=True)
class ExpError:
    fields: tuple
    exit: bool = True


ExpansionState = Union[ExpStart, ExpExpand, ExpSplit, ExpPath, ExpQuote, ExpDone,
                       ExpPatternDone, ExpError]

# ---------------------------------------------------------------------------
# redirections


@dataclass(frozen=True, slots=True)
class RFile:
    fd: int
    mode: str  # > >| < <> >>
    target: tuple


@dataclass(frozen=True, slots=True)
class RDup:
    fd: int
    mode: str  # >& <&
    target: tuple


@dataclass(frozen=True, slots=True)
class RHere:
    fd: int
    kind: str  # "default" | "noexpand"
    body: tuple


Redir = Union[RFile, RDup, RHere]


@dataclass(frozen=True, slots=True)
class EFile:
    mode: str
    fd: int
    path: str


@dataclass(frozen=True, slots=True)
class EDup:
    mode: str
    fd: int
    target: Optional[int]  # None closes


@dataclass(frozen=True, slots=True)
class EHere:
    fd: int
    body: str


@dataclass(frozen=True, slots=True)
class RedirState:
    done: tuple
    cur: Optional[tuple]  # (Redir, ExpansionState)
    todo: tuple


# ---------------------------------------------------------------------------
# source commands


@dataclass(frozen=True, slots=True)
class Simple:
    assigns: tuple = ()
    words: tuple = ()
    redirs: tuple = ()
    lineno: int = field(default=0, compare=False)


@dataclass(frozen=True, slots=True)
class Pipeline:
    cmds: tuple
    bg: bool = False


@dataclass(frozen=True, slots=True)
class Redirected:
    cmd: "Command"
    redirs: tuple


@dataclass(frozen=True, slots=True)
class Background:
    cmd: "Command"


@dataclass(frozen=True, slots=True)
class Subshell:
    cmd: "Command"


@dataclass(frozen=True, slots=True)
class Seq:
    c1: "Command"
    c2: "Command"


@dataclass(frozen=True, slots=True)
class And:
    c1: "Command"
    c2: "Command"


@dataclass(frozen=True, slots=True)
class Or:
    c1: "Command"
    c2: "Command"


@dataclass(frozen=True, slots=True)
class Not:
    cmd: "Command"


@dataclass(frozen=True, slots=True)
class While:
    cond: "Command"
    body: "Command"


@dataclass(frozen=True, slots=True)
class For:
    var: str
    words: tuple
    body: "Command"


@dataclass(frozen=True, slots=True)
class If:
    c1: "Command"
    c2: "Command"
    c3: "Command"


@dataclass(frozen=True, slots=True)
class CaseBranch:
    patterns: tuple
    body: "Command"


@dataclass(frozen=True, slots=True)
class Case:
    word: tuple
    branches: tuple


@dataclass(frozen=True, slots=True)
class FnDef:
    name: str
    body: "Command"


EMPTY = Simple()

# ---------------------------------------------------------------------------
# runtime commands


@dataclass(frozen=True, slots=True)
class CmdOpts:
    subst: bool = False
    fork: bool = True
    simple: bool = False


@dataclass(frozen=True, slots=True)
class CmdArgs:
    assigns: tuple
    es: ExpansionState
    redirs: tuple
    co: CmdOpts


@dataclass(frozen=True, slots=True)
class CmdRedirs:
    assigns: tuple
    fields: tuple
    rs: RedirState
    co: CmdOpts


@dataclass(frozen=True, slots=True)
class CmdAssigns:
    pending: tuple  # ((name, ExpansionState), ...)
    fields: tuple
    sfds: tuple
    co: CmdOpts


@dataclass(frozen=True, slots=True)
class CmdReady:
    env: tuple  # ((name, value), ...)
    name: str
    args: tuple
    sfds: tuple
    co: CmdOpts


@dataclass(frozen=True, slots=True)
class Run:
    env: tuple
    name: str
    args: tuple
    sfds: tuple
    co: CmdOpts


@dataclass(frozen=True, slots=True)
class WhileCond:
    cond: "Command"
    cur: "Command"
    body: "Command"
    last: int = 0  # status of the most recent body run


@dataclass(frozen=True, slots=True)
class WhileBody:
    cond: "Command"
    body: "Command"
    cur: "Command"


@dataclass(frozen=True, slots=True)
class ForArgs:
    var: str
    es: ExpansionState
    body: "Command"


@dataclass(frozen=True, slots=True)
class ForStart:
    var: str
    fields: tuple
    body: "Command"


@dataclass(frozen=True, slots=True)
class ForRunning:
    var: str
    fields: tuple
    body: "Command"
    cur: "Command"


@dataclass(frozen=True, slots=True)
class CaseArg:
    es: ExpansionState
    branches: tuple


@dataclass(frozen=True, slots=True)
class CaseMatch:
    value: str
    branches: tuple


@dataclass(frozen=True, slots=True)
class CaseCheck:
    value: str
    es: ExpansionState
    body: "Command"
    rest: tuple  # remaining pattern words of this branch
    branches: tuple  # later branches


@dataclass(frozen=True, slots=True)
class Call:
    loop_depth: int
    saved_positional: tuple
    name: str
    orig: "Command"
    cur: "Command"


@dataclass(frozen=True, slots=True)
class Break:
    n: int = 1


@dataclass(frozen=True, slots=True)
class Continue:
    n: int = 1


@dataclass(frozen=True, slots=True)
class Return:
    pass


@dataclass(frozen=True, slots=True)
class Exit:
    pass


@dataclass(frozen=True, slots=True)
class Done:
    pass


DONE = Done()
EXIT = Exit()
RETURN = Return()


@dataclass(frozen=True, slots=True)
class Redirs:
    cmd: "Command"
    sfds: tuple


@dataclass(frozen=True, slots=True)
class RedirExp:
    """A compound command whose redirections are still being expanded."""
    cmd: "Command"
    rs: RedirState


@dataclass(frozen=True, slots=True)
class EvalLoop:
    lineno: int
    session: Any
    source: str
    interactive: bool
    toplevel: bool


@dataclass(frozen=True, slots=True)
class EvalLoopCmd:
    lineno: int
    session: Any
    source: str
    interactive: bool
    toplevel: bool
    cmd: "Command"


@dataclass(frozen=True, slots=True)
class Exec:
    path: str
    name: str
    args: tuple
    env: tuple
    as_script: bool = True


@dataclass(frozen=True, slots=True)
class Wait:
    pid: int
    checked: bool
    record: bool = True


@dataclass(frozen=True, slots=True)
class Trapped:
    signal: str
    status: int
    handler: "Command"
    cont: "Command"


Command = Any

CONTROL = (Break, Continue, Return, Exit)
TERMINAL = (Done, Break, Continue, Return, Exit)


def is_terminal(c) -> bool:
    return isinstance(c, TERMINAL)


# ---------------------------------------------------------------------------
# rendering


def shell_quote(s: str) -> str:
    """Quote ``s`` with single quotes when it is not a plain word."""
    if s and all(ch.isalnum() or ch in "@%+=:,./-_" for ch in s):
        return s
    return "'" + s.replace("'", "'\\''") + "'"


class _Renderer:
    def __init__(self) -> None:
        self.heredocs: list[tuple[str, str]] = []

    # words --------------------------------------------------------------
    def word(self, w: tuple, ctx: str = "plain") -> str:
        return "".join(self.part(p, ctx) for p in w)

    def part(self, p, ctx: str) -> str:
        if ctx == "here":
            if isinstance(p, Lit):
                return _here_escape(p.text)
            ctx = "dq"
        if isinstance(p, Lit):
            if ctx == "dq":
                return _dq_escape(p.text)
            if ctx == "dqfmt":
                return _dq_escape(p.text).replace("}", "\\}")
            return p.text
        if isinstance(p, Sep):
            return " "
        if isinstance(p, Tilde):
            return "~" + (p.user or "")
        if isinstance(p, Param):
            return self.param(p, ctx)
        if isinstance(p, CmdSubst):
            inner = render(p.cmd)
            if inner.startswith("("):
                inner = " " + inner
            return "$(" + inner + ")"
        if isinstance(p, Arith):
            return "$((" + self.word(p.body, "arith") + "))"
        if isinstance(p, Quoted):
            if ctx in ("plain", "fmt") and all(isinstance(x, Lit) for x in p.body):
                text = "".join(x.text for x in p.body)
                if "'" not in text:
                    return "'" + text + "'"
            return '"' + self.word(p.body, "dq") + '"'
        return render_runtime(p)

    def param(self, p: Param, ctx: str) -> str:
        f = p.fmt
        inner = "dqfmt" if ctx in ("dq", "dqfmt") else "fmt"
        if isinstance(f, FNormal):
            return "${" + p.name + "}"
        if isinstance(f, FLength):
            return "${#" + p.name + "}"
        if isinstance(f, FSub):
            op = ("#" if f.side == "prefix" else "%") * (2 if f.mode == "longest" else 1)
            return "${" + p.name + op + self.word(f.word, inner) + "}"
        op = {FDefault: "-", FAssign: "=", FError: "?", FAlt: "+"}[type(f)]
        return "${" + p.name + (":" if f.null else "") + op + self.word(f.word, inner) + "}"

    # redirections -------------------------------------------------------
    def redir(self, r) -> str:
        if isinstance(r, RFile):
            default = 0 if r.mode in ("<", "<>") else 1
            fd = "" if r.fd == default else str(r.fd)
            return fd + r.mode + self.word(r.target)
        if isinstance(r, RDup):
            default = 0 if r.mode == "<&" else 1
            fd = "" if r.fd == default else str(r.fd)
            return fd + r.mode + self.word(r.target)
        if isinstance(r, RHere):
            fd = "" if r.fd == 0 else str(r.fd)
            if r.kind == "noexpand":
                body = "".join(p.text for p in r.body if isinstance(p, Lit))
            else:
                body = self.word(r.body, "here")
            lines = body.split("\n")
            delim = "EOF"
            n = 0
            while delim in lines:
                n += 1
                delim = "EOF%d" % n
            self.heredocs.append((body, delim))
            return fd + "<<" + (delim if r.kind == "default" else "'" + delim + "'")
        return render_runtime(r)

    # commands -----------------------------------------------------------
    def cmd(self, c, level: int = 0) -> str:
        """Render ``c`` so that it parses at precedence ``level``.

        Levels: 0 list, 1 and-or, 2 pipeline, 3 pipe member.
        """
        own = _level(c)
        if own < level:
            return "{ " + self._terminated(c) + " }"
        return self._cmd(c)

    def _terminated(self, c) -> str:
        s = self.cmd(c, 0)
        if s.endswith("&"):
            return s
        return s + ";"

    def _body(self, c) -> str:
        return self._terminated(c)

    def _cmd(self, c) -> str:
        if isinstance(c, Simple):
            parts = [n + "=" + self.word(w) for n, w in c.assigns]
            if c.words:
                parts.append(self.word(c.words))
            parts.extend(self.redir(r) for r in c.redirs)
            return " ".join(parts)
        if isinstance(c, Pipeline):
            s = " | ".join(self.cmd(x, 3) for x in c.cmds)
            return s + " &" if c.bg else s
        if isinstance(c, Background):
            return self.cmd(c.cmd, 1) + " &"
        if isinstance(c, Seq):
            a = self.cmd(c.c1, 0)
            b = self.cmd(c.c2, 0)
            return a + (" " if a.endswith("&") else "; ") + b
        if isinstance(c, And):
            return self.cmd(c.c1, 1) + " && " + self.cmd(c.c2, 2)
        if isinstance(c, Or):
            return self.cmd(c.c1, 1) + " || " + self.cmd(c.c2, 2)
        if isinstance(c, Not):
            return "! " + self.cmd(c.cmd, 3)
        if isinstance(c, Subshell):
            inner = self.cmd(c.cmd, 0)
            return "( " + inner + " )"
        if isinstance(c, Redirected):
            inner = c.cmd
            rs = " ".join(self.redir(r) for r in c.redirs)
            if isinstance(inner, (Subshell, If, While, For, Case)):
                return self._cmd(inner) + " " + rs
            return "{ " + self._terminated(inner) + " } " + rs
        if isinstance(c, If):
            s = "if " + self._body(c.c1) + " then " + self._body(c.c2)
            if c.c3 != EMPTY:
                s += " else " + self._body(c.c3)
            return s + " fi"
        if isinstance(c, While):
            return "while " + self._body(c.cond) + " do " + self._body(c.body) + " done"
        if isinstance(c, For):
            return ("for " + c.var + " in " + self.word(c.words) + "; do "
                    + self._body(c.body) + " done")
        if isinstance(c, Case):
            s = "case " + self.word(c.word) + " in"
            for b in c.branches:
                pats = "|".join(self.word(p) for p in b.patterns)
                body = "" if b.body == EMPTY else " " + self.cmd(b.body, 0)
                s += " (" + pats + ")" + body + " ;;"
            return s + " esac"
        if isinstance(c, FnDef):
            body = c.body
            if isinstance(body, (Subshell, If, While, For, Case, Redirected)):
                return c.name + "() " + self._cmd(body)
            return c.name + "() { " + self._terminated(body) + " }"
        return render_runtime(c)


def _level(c) -> int:
    if isinstance(c, (Seq, Background)):
        return 0
    if isinstance(c, Pipeline) and c.bg:
        return 0
    if isinstance(c, (And, Or)):
        return 1
    if isinstance(c, Not):
        return 2
    if isinstance(c, Pipeline) and len(c.cmds) > 1:
        return 2
    return 3


def _dq_escape(s: str) -> str:
    out = []
    for ch in s:
        if ch in '\\"$`':
            out.append("\\")
        out.append(ch)
    return "".join(out)


def _here_escape(s: str) -> str:
    out = []
    for ch in s:
        if ch in "\\$`":
            out.append("\\")
        out.append(ch)
    return "".join(out)


def render_word(w: tuple) -> str:
    return _Renderer().word(w)


def render(c) -> str:
    """Render a command to concrete syntax (runtime forms as diagnostics)."""
    r = _Renderer()
    s = r.cmd(c, 0)
    if r.heredocs:
        s += "\n" + "".join(b + ("" if b.endswith("\n") or not b else "\n") + d + "\n"
                            for b, d in r.heredocs)
    return s


def render_runtime(x) -> str:
    """Bracketed diagnostic notation for runtime-only forms."""
    name = type(x).__name__
    if isinstance(x, (Done, Return, Exit)):
        return "⟨" + name + "⟩"
    if isinstance(x, (Break, Continue)):
        return "⟨%s %d⟩" % (name, x.n)
    if isinstance(x, (tuple, list)):
        return "[" + ", ".join(render_any(y) for y in x) + "]"
    vals = []
    for f in x.__dataclass_fields__:  # type: ignore[attr-defined]
        v = getattr(x, f)
        if f in ("session", "co"):
            continue
        vals.append(render_any(v))
    return "⟨" + name + (" " + " ".join(vals) if vals else "") + "⟩"


_COMMAND_TYPES = (Simple, Pipeline, Redirected, Background, Subshell, Seq, And, Or,
                  Not, While, For, If, Case, FnDef)


def render_any(v) -> str:
    if isinstance(v, str):
        return json.dumps(v, ensure_ascii=False)
    if isinstance(v, bool):
        return "⊤" if v else "⊥"
    if isinstance(v, int):
        return str(v)
    if v is None:
        return "•"
    if isinstance(v, _COMMAND_TYPES):
        return "{" + render(v) + "}"
    if isinstance(v, (Lit, Tilde, Param, CmdSubst, Arith, Quoted)):
        return "`" + _Renderer().part(v, "plain") + "`"
    if isinstance(v, Sep):
        return "␣"
    if isinstance(v, (Src, Exp, QStr, Str)):
        return type(v).__name__ + " " + json.dumps(v.text, ensure_ascii=False)
    if isinstance(v, (ESep,)):
        return "␣"
    if isinstance(v, FieldSep):
        return "WS"
    if isinstance(v, At):
        return "At" + render_any(v.fields)
    if isinstance(v, (RFile, RDup, RHere)):
        return _Renderer().redir(v)
    if isinstance(v, (tuple, list)):
        return "[" + ", ".join(render_any(y) for y in v) + "]"
    if hasattr(v, "__dataclass_fields__"):
        return render_runtime(v)
    return repr(v)


def render_expansion(es) -> str:
    return render_any(es)


# ---------------------------------------------------------------------------
# trace records


def to_trace_json(step_no: int, phase: str, rule: str, env_delta: dict,
                  term: str, stdout: str = "", stderr: str = "") -> str:
    """Serialize one trace step with a fixed key order."""
    rec: dict[str, Any] = {"n": step_no, "phase": phase, "rule": rule, "term": term}
    if env_delta:
        rec["env_delta"] = {k: env_delta[k] for k in sorted(env_delta)}
    rec["stdout"] = stdout
    rec["stderr"] = stderr
    return json.dumps(rec)


def trace_record(step_no: int, phase: str, rule: str, env_delta: dict,
                 term: str, stdout: str = "", stderr: str = "") -> dict:
    return json.loads(to_trace_json(step_no, phase, rule, env_delta, term, stdout, stderr))

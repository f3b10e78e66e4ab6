"""The small-step word-expansion machine.

A word moves through Start -> Expand -> (Split) -> Path -> Quote -> Done,
or stops in Error.  Each call to ``step_expansion`` fires one rule; the
nested runtime control codes let a command substitution buried inside
quotes or a parameter format still advance one step at a time.
"""

from __future__ import annotations

from typing import Optional

from . import pattern as pat
from .arith import ArithError, eval_arith, parse_arithmetic
from .ast import (
    ESEP, FIELDSEP, Arith, ArithRun, AssignRun, At, CmdSubst, CmdSubstRunning, CmdWait,
    ErrorRun, ESep, Exp, ExpDone, ExpError, ExpExpand, ExpPath, ExpPatternDone, ExpQuote,
    ExpSplit, ExpStart, FAlt, FAssign, FDefault, FError, FieldSep, FLength, FNormal,
    FSub, GenRun, Lit, MatchRun, Param, QStr, Quoted, QuoteRun, Sep, Src, Str, Tilde,
    WordOpts,
)
from .os_interface import Blocked, OsError
from .state import ReadonlyError

DEFAULT_IFS = " \t\n"
_WS = " \t\n"

__all__ = [
    "ExpansionFailure", "step_expansion", "step_words", "expand_control", "apply_format",
    "field_split", "skip_splitting", "to_fields", "pathname_expand", "unescape",
    "remove_quotes", "combine_fields", "trim_rnl", "expand_word_now",
]


class ExpansionFailure(Exception):
    def __init__(self, message: str, exit: bool = True) -> None:
        super().__init__(message)
        self.message = message
        self.exit = exit


def _rule(sh, name: str) -> None:
    if sh.tracer is not None:
        sh.tracer.fire("expand", name)


def _ifs(sh) -> str:
    v = sh.lookup("IFS")
    return DEFAULT_IFS if v is None else v


def _join_char(sh) -> str:
    v = sh.lookup("IFS")
    return " " if v is None else v[:1]


# ---------------------------------------------------------------------------
# the top-level machine


def step_expansion(sh, es) -> tuple:
    """Fire one expansion rule; returns ``(es', did_cmd_subst)``."""
    t = type(es)
    opts = es.opts if hasattr(es, "opts") else None
    if t is ExpStart:
        _rule(sh, "ExpStart")
        return ExpExpand(opts, (), es.w), False
    if t is ExpExpand:
        if not es.w:
            if opts.pattern:
                _rule(sh, "ExpExpandPattern")
                return ExpPatternDone(pattern_segments(sh, es.e)), False
            if opts.split:
                _rule(sh, "ExpExpandSplit")
                return ExpSplit(opts, es.e), False
            _rule(sh, "ExpExpandNoSplit")
            return ExpPath(opts, skip_splitting(sh, es.e)), False
        try:
            e, w, did = step_words(sh, WordOpts(split=opts.split), es.e, es.w)
        except ExpansionFailure as err:
            _rule(sh, "ExpExpandErr")
            sh.os.write(2, "smolsh: %s\n" % err.message)
            return ExpError(tuple(to_fields(sh, es.e)), err.exit), False
        return ExpExpand(opts, e, w), did
    if t is ExpSplit:
        _rule(sh, "ExpSplit")
        return ExpPath(opts, field_split(sh, es.e)), False
    if t is ExpPath:
        if opts.glob and "noglob" not in sh.options:
            _rule(sh, "ExpPath")
            return ExpQuote(opts, pathname_expand(sh, es.i)), False
        _rule(sh, "ExpPathNoGlob")
        return ExpQuote(opts, unescape(es.i)), False
    if t is ExpQuote:
        _rule(sh, "ExpQuote")
        return ExpDone(tuple(combine_fields(remove_quotes(es.i)))), False
    raise ValueError("expansion already finished: %r" % (es,))


def step_words(sh, wo: WordOpts, e: tuple, w: tuple) -> tuple:
    """Consume (or advance) the first element of ``w``.

    Returns ``(e', w', did_cmd_subst)``; raises ExpansionFailure on error.
    """
    head = w[0]
    t = type(head)
    if t is Sep:
        _rule(sh, "EWSep")
        return e + (ESEP,), w[1:], False
    if t is Lit:
        _rule(sh, "EWLit")
        if wo.dq:
            item = QStr(head.text)
        elif wo.gen:
            item = Exp(head.text)
        else:
            item = Src(head.text)
        return e + (item,), w[1:], False
    kind, val, did = expand_control(sh, wo, head)
    _rule(sh, "EWCtrl")
    if kind == "done":
        return e + tuple(val), w[1:], did
    return e, (val,) + w[1:], did


def _finish_or_step(sh, wo: WordOpts, e: tuple, w: tuple, make):
    e2, w2, did = step_words(sh, wo, e, w)
    return "step", make(e2, w2), did


def expand_control(sh, wo: WordOpts, k) -> tuple:
    """Expand or advance one control code.

    Returns ``("done", items, did)`` when finished, or ``("step", k', did)``
    with a runtime code carrying the remaining work.
    """
    t = type(k)
    if t is Tilde:
        _rule(sh, "Tilde")
        return "done", [_tilde(sh, k.user)], False
    if t is Param:
        return _param(sh, wo, k)
    if t is Quoted:
        _rule(sh, "Quote")
        if not k.body:
            return "done", [QStr("")], False
        return "step", QuoteRun((), k.body), False
    if t is QuoteRun:
        if not k.w:
            return "done", list(k.e) if k.e else [QStr("")], False
        return _finish_or_step(sh, WordOpts(split=False, dq=True), k.e, k.w, QuoteRun)
    if t is GenRun:
        if not k.w:
            return "done", list(k.e), False
        return _finish_or_step(sh, WordOpts(split=wo.split, dq=False, gen=True), k.e, k.w, GenRun)
    if t is AssignRun:
        if not k.w:
            value = _flat_text(sh, k.e)
            _rule(sh, "AssignFmt")
            try:
                sh.set_global(k.name, value)
            except ReadonlyError:
                raise ExpansionFailure(k.name + ": is read only")
            return "done", [_value_item(wo, value)], False
        return _finish_or_step(sh, WordOpts(split=False), k.e, k.w,
                               lambda e, w: AssignRun(k.name, e, w))
    if t is ErrorRun:
        if not k.w:
            msg = _flat_text(sh, k.e)
            _rule(sh, "ErrorFmt")
            if not msg:
                msg = "parameter null or not set" if k.null else "parameter not set"
            raise ExpansionFailure(k.name + ": " + msg)
        return _finish_or_step(sh, WordOpts(split=False), k.e, k.w,
                               lambda e, w: ErrorRun(k.name, k.null, e, w))
    if t is MatchRun:
        if not k.w:
            _rule(sh, "MatchFmt")
            p = pat.compile(pattern_segments(sh, k.e))
            res = pat.remove_affix(k.side, k.mode, p, k.value)
            return "done", [_value_item(wo, res)], False
        return _finish_or_step(sh, WordOpts(split=False), k.e, k.w,
                               lambda e, w: MatchRun(k.value, k.side, k.mode, e, w))
    if t is Arith:
        _rule(sh, "Arith")
        return "step", ArithRun((), k.body), False
    if t is ArithRun:
        if not k.w:
            text = _flat_text(sh, k.e)
            _rule(sh, "ArithEval")
            try:
                n = eval_arith(sh, parse_arithmetic(text))
            except ArithError as err:
                raise ExpansionFailure("arithmetic expression: %s: \"%s\"" % (err, text))
            return "done", [_value_item(wo, str(n))], False
        return _finish_or_step(sh, WordOpts(split=False, dq=True), k.e, k.w, ArithRun)
    if t is CmdSubst:
        _rule(sh, "CmdSubst")
        r = sh.os.pipe()
        if isinstance(r, OsError):
            raise ExpansionFailure("cannot create pipe: " + r.message)
        rfd, wfd = r
        pid = sh.os.fork_shell(sh, k.cmd, [("dup2", wfd, 1), ("close", wfd), ("close", rfd)], False)
        sh.os.close(wfd)
        if isinstance(pid, OsError):
            sh.os.close(rfd)
            raise ExpansionFailure("cannot fork: " + pid.message)
        return "step", CmdSubstRunning(k.cmd, pid, rfd), True
    if t is CmdSubstRunning:
        data = sh.os.read_all(k.fd)
        if isinstance(data, Blocked):
            _rule(sh, "CmdSubstBlocked")
            return "step", k, True
        if isinstance(data, OsError):
            _rule(sh, "CmdSubstReadErr")
            sh.os.close(k.fd)
            raise ExpansionFailure("command substitution: " + data.message)
        _rule(sh, "CmdSubstRead")
        sh.os.close(k.fd)
        return "step", CmdWait(k.cmd, k.pid, data), True
    if t is CmdWait:
        st = sh.os.wait(k.pid)
        if isinstance(st, Blocked):
            _rule(sh, "CmdSubstBlocked")
            return "step", k, True
        _rule(sh, "CmdSubstWait")
        sh.set_status(st)
        out = trim_rnl(k.captured)
        return "done", [_value_item(wo, out)], True
    raise ValueError("unknown control code %r" % (k,))


def _value_item(wo: WordOpts, text: str):
    return QStr(text) if wo.dq else Exp(text)


def _tilde(sh, user: Optional[str]):
    if user is None:
        home = sh.lookup("HOME")
        if home is None:
            return QStr("~")
        return QStr(home)
    home = sh.os.home_dir(user)
    if home is None:
        return QStr("~" + user)
    return QStr(home)


# ---------------------------------------------------------------------------
# parameters


def _positional_items(sh, name: str, wo: WordOpts) -> list:
    if wo.dq:
        if name == "@":
            return [At(tuple(sh.positional), True)]
        return [QStr(_join_char(sh).join(sh.positional))]
    return [At(tuple(sh.positional), False)]


def apply_format(sh, name: str, fmt, value: Optional[str]) -> tuple:
    """Decide what a parameter format produces for a looked-up value.

    Returns one of ``("value", text)``, ``("length", text)``,
    ``("words", word)``, ``("assign", name, word)``, ``("error", word)``,
    ``("match", text, side, mode, word)`` or ``("nothing",)``.
    """
    t = type(fmt)
    if t is FNormal:
        return ("value", value or "")
    if t is FLength:
        if name in ("@", "*"):
            return ("length", str(len(sh.positional)))
        return ("length", str(len(value or "")))
    if t is FSub:
        return ("match", value or "", fmt.side, fmt.mode, fmt.word)
    unset = value is None or (fmt.null and value == "")
    if t is FDefault:
        return ("words", fmt.word) if unset else ("value", value)
    if t is FAssign:
        return ("assign", name, fmt.word) if unset else ("value", value)
    if t is FError:
        return ("error", fmt.word) if unset else ("value", value)
    if t is FAlt:
        return ("nothing",) if unset else ("words", fmt.word)
    raise ValueError("bad format %r" % (fmt,))


def _param(sh, wo: WordOpts, k: Param) -> tuple:
    name = k.name
    fmt = k.fmt
    _rule(sh, "Param")
    positional = name in ("@", "*")
    if positional:
        value = sh.special_param(name) if sh.positional else None
    else:
        value = sh.lookup(name)
    if value is None and not positional and "nounset" in sh.options and isinstance(
            fmt, (FNormal, FLength, FSub)):
        raise ExpansionFailure(name + ": parameter not set")
    res = apply_format(sh, name, fmt, value)
    kind = res[0]
    if kind == "value":
        if positional:
            return "done", _positional_items(sh, name, wo), False
        return "done", [_value_item(wo, res[1])], False
    if kind == "length":
        return "done", [_value_item(wo, res[1])], False
    if kind == "nothing":
        return "done", [], False
    if kind == "words":
        word = res[1]
        if not word:
            return "done", ([QStr("")] if wo.dq else []), False
        if wo.dq:
            return "step", QuoteRun((), word), False
        return "step", GenRun((), word), False
    if kind == "assign":
        if not _assignable(name):
            raise ExpansionFailure("%s: cannot assign in this way" % name)
        return "step", AssignRun(name, (), res[2]), False
    if kind == "error":
        return "step", ErrorRun(name, getattr(fmt, "null", False), (), res[1]), False
    if kind == "match":
        return "step", MatchRun(res[1], res[2], res[3], (), res[4]), False
    raise AssertionError(kind)


def _assignable(name: str) -> bool:
    from .parser import is_name
    return is_name(name)


# ---------------------------------------------------------------------------
# text views of expanded words


def _flat_text(sh, e: tuple) -> str:
    out = []
    for item in e:
        t = type(item)
        if t in (Src, Exp, QStr):
            out.append(item.text)
        elif t is At:
            out.append(_join_char(sh).join(item.fields) if item.quoted else " ".join(item.fields))
        elif t is ESep:
            out.append(" ")
    return "".join(out)


def pattern_segments(sh, e: tuple) -> tuple:
    """Turn expanded words into ``(text, quoted)`` pattern segments."""
    segs = []
    for item in e:
        t = type(item)
        if t in (Src, Exp):
            segs.append((item.text, False))
        elif t is QStr:
            segs.append((item.text, True))
        elif t is At:
            segs.append((_join_char(sh).join(item.fields), item.quoted))
        elif t is ESep:
            segs.append((" ", False))
    return tuple(segs)


# ---------------------------------------------------------------------------
# field splitting


def skip_splitting(sh, e: tuple) -> tuple:
    """Convert expanded words to intermediate fields without IFS splitting."""
    out: list = []
    for item in e:
        t = type(item)
        if t in (Src, Exp):
            out.append(Str(item.text))
        elif t is QStr:
            out.append(item)
        elif t is ESep:
            out.append(ESEP)
        elif t is At:
            sep = _join_char(sh) if sh is not None else " "
            text = sep.join(item.fields)
            if item.quoted:
                if item.fields:
                    out.append(QStr(text))
            else:
                out.append(Str(text))
    return tuple(out)


def field_split(sh, e: tuple) -> tuple:
    """Split the Exp parts of expanded words on IFS."""
    return split_with_ifs(_ifs(sh), e)


def split_with_ifs(ifs: str, e: tuple) -> tuple:
    out: list = []
    # "text": the field under construction holds text yet.  "ws": the
    # previous expansion ended inside a whitespace-only delimiter, which
    # may still absorb one non-whitespace IFS character from the next.
    state = {"text": False, "ws": False}

    def region(text: str) -> None:
        if not ifs:
            if text:
                out.append(Str(text))
                state["text"] = True
            return
        buf: list[str] = []
        i = 0
        n = len(text)
        if state["ws"]:
            while i < n and text[i] in ifs and text[i] in _WS:
                i += 1
            if i < n and text[i] in ifs:
                i += 1
                state["ws"] = False
                while i < n and text[i] in ifs and text[i] in _WS:
                    i += 1
            if i < n:
                state["ws"] = False
        while i < n:
            ch = text[i]
            if ch not in ifs:
                buf.append(ch)
                i += 1
                continue
            spc = ch in _WS
            if spc and not buf and not state["text"]:
                i += 1
                continue
            if buf:
                out.append(Str("".join(buf)))
                buf = []
            out.append(FIELDSEP)
            state["text"] = False
            i += 1
            while i < n:
                c2 = text[i]
                if c2 not in ifs:
                    break
                if c2 not in _WS:
                    if spc:
                        spc = False
                        i += 1
                    else:
                        break
                else:
                    i += 1
            state["ws"] = spc and i == n
        if buf:
            out.append(Str("".join(buf)))
            state["text"] = True

    for item in e:
        t = type(item)
        if t is ESep or t is At or (t is not Exp and item.text):
            state["ws"] = False
        if t is ESep:
            out.append(ESEP)
            state["text"] = False
        elif t is Src:
            out.append(Str(item.text))
            if item.text:
                state["text"] = True
        elif t is QStr:
            out.append(item)
            if item.text:
                state["text"] = True
        elif t is Exp:
            region(item.text)
        elif t is At:
            for j, f in enumerate(item.fields):
                if item.quoted:
                    if j:
                        out.append(FIELDSEP)
                        state["text"] = False
                    out.append(QStr(f))
                    if f:
                        state["text"] = True
                else:
                    if j:
                        out.append(ESEP)
                        state["text"] = False
                        state["ws"] = False
                    region(f)
    return tuple(out)


def _runs(i: tuple) -> list:
    """Group intermediate fields into (pieces, terminator) runs."""
    runs = []
    cur: list = []
    for item in i:
        if isinstance(item, (FieldSep, ESep)):
            runs.append((cur, item))
            cur = []
        else:
            cur.append(item)
    runs.append((cur, None))
    return runs


def _unruns(runs: list) -> tuple:
    out: list = []
    for pieces, term in runs:
        out.extend(pieces)
        if term is not None:
            out.append(term)
    return tuple(out)


def unescape(i: tuple) -> tuple:
    """Drop glob escapes.  Escapes are resolved structurally by the parser,
    so there is nothing left to remove."""
    return i


def remove_quotes(i: tuple) -> tuple:
    """Erase quoting, keeping an empty quoted string as a field marker."""
    return tuple(Str(x.text) if isinstance(x, QStr) and x.text else x for x in i)


def combine_fields(i: tuple) -> list:
    fields = []
    for pieces, term in _runs(i):
        text = "".join(p.text for p in pieces)
        keep = bool(text) or any(isinstance(p, QStr) for p in pieces) or isinstance(term, FieldSep)
        if keep:
            fields.append(text)
    return fields


def to_fields(sh, e: tuple) -> list:
    return combine_fields(remove_quotes(skip_splitting(sh, e)))


def trim_rnl(s: str) -> str:
    return s.rstrip("\n")


# ---------------------------------------------------------------------------
# pathname expansion


def pathname_expand(sh, i: tuple) -> tuple:
    runs = _runs(i)
    out_runs = []
    for pieces, term in runs:
        if not any(isinstance(p, Str) for p in pieces):
            out_runs.append((pieces, term))
            continue
        segs = [(p.text, isinstance(p, QStr)) for p in pieces]
        if not pat.is_magic(pat.compile(segs)):
            out_runs.append((pieces, term))
            continue
        matches = glob_segments(sh.os, segs)
        if not matches:
            out_runs.append((pieces, term))
            continue
        for m in matches[:-1]:
            out_runs.append(([Str(m)], FIELDSEP))
        out_runs.append(([Str(matches[-1])], term if term is not None else FIELDSEP))
    return _unruns(out_runs)


def _join(prefix: str, name: str) -> str:
    if not prefix:
        return name
    if prefix.endswith("/"):
        return prefix + name
    return prefix + "/" + name


def glob_segments(os_handle, segs) -> list:
    """All paths matching the pattern, sorted bytewise."""
    chars = pat._flatten(segs)
    comps: list[list] = [[]]
    for ch, lit in chars:
        if ch == "/":
            comps.append([])
        else:
            comps[-1].append((ch, lit))
    prefixes = [""]
    if not comps[0]:
        prefixes = ["/"]
        comps = comps[1:]
    any_magic = False
    literal_after_magic = False
    for idx, comp in enumerate(comps):
        last = idx == len(comps) - 1
        if not comp:
            # doubled or trailing slash
            if last:
                prefixes = [p + "/" for p in prefixes if os_handle.is_dir(p or ".")]
            else:
                prefixes = [p + "/" for p in prefixes]
            continue
        toks = pat.compile_pairs(comp)
        if not pat.is_magic(toks):
            name = pat.literal_text(toks)
            prefixes = [_join(p, name) for p in prefixes]
            if any_magic:
                literal_after_magic = True
            continue
        any_magic = True
        new = []
        for p in prefixes:
            names = os_handle.listdir(p or ".")
            if names is None:
                continue
            if toks[0] == (pat.LIT, "."):
                names = list(names) + [".", ".."]
            for nm in names:
                if pat.match_filename(toks, nm):
                    new.append(_join(p, nm))
        prefixes = new
        if not prefixes:
            return []
    if not any_magic:
        return []
    if literal_after_magic:
        prefixes = [p for p in prefixes if os_handle.stat(p, follow=False) is not None]
    return sorted(set(prefixes))


# ---------------------------------------------------------------------------
# conveniences


def expand_word_now(sh, es, limit: int = 1_000_000):
    """Drive an expansion state to completion (used by tests and builtins)."""
    n = 0
    while not isinstance(es, (ExpDone, ExpError, ExpPatternDone)):
        es, _ = step_expansion(sh, es)
        n += 1
        if n > limit:
            raise RuntimeError("expansion did not terminate")
    return es

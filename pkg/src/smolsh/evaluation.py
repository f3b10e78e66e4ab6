"""The command small-step machine.

``step_eval(sh, checking, c)`` fires exactly one rule and returns the next
command; the shell state ``sh`` is updated in place.  ``checking`` is true
while evaluating a command whose status is being tested (conditions,
negations, non-final and-or members), which suppresses errexit.
"""

from __future__ import annotations

from typing import Optional

from . import builtins as bi
from .ast import (
    DONE, EMPTY, EXIT, RETURN, And, Background, Break, Call, Case, CaseArg, CaseCheck,
    CaseMatch, CmdArgs, CmdAssigns, CmdOpts, CmdReady, CmdRedirs, Continue, Done, EDup,
    EFile, EHere, EvalLoop, EvalLoopCmd, Exec, Exit, ExpDone, ExpError, ExpOpts,
    ExpPatternDone, ExpStart, FnDef, For, ForArgs, ForRunning, ForStart, If, Not, Or,
    Pipeline, Quoted, RDup, RedirExp, Redirected, RedirState, Redirs, Return, RFile, RHere,
    Run, Seq, Simple, Subshell, Trapped, Wait, While, WhileBody, WhileCond, is_terminal,
    render_any,
)
from . import pattern as pat
from .expansion import step_expansion
from .os_interface import SIGNALS, Blocked, OsError
from .parser import Blank, Complete, Eof, ParseError, ParseSession, SyntaxErr, parse_next
from .state import JobInfo, ReadonlyError

_NOSPLIT = ExpOpts(split=False, glob=False)
_FULL = ExpOpts()
_PATTERN = ExpOpts(split=False, glob=False, pattern=True)


class RedirError(Exception):
    pass


class Tracer:
    """Records the first (innermost) rule fired during each root step."""

    def __init__(self) -> None:
        self.current: Optional[tuple] = None

    def fire(self, phase: str, rule: str) -> None:
        if self.current is None:
            self.current = (phase, rule)

    def take(self) -> tuple:
        r = self.current or ("eval", "Step")
        self.current = None
        return r


def _rule(sh, name: str) -> None:
    if sh.tracer is not None:
        sh.tracer.fire("eval", name)


def _err(sh, msg: str) -> None:
    sh.os.write(2, "smolsh: " + msg + "\n")


def _errexit(sh, checking: bool) -> bool:
    return "errexit" in sh.options and not checking and sh.last_status != 0


def _done_checked(sh, checking: bool):
    """Finish a command: exit under errexit, else look for pending traps."""
    if _errexit(sh, checking):
        _rule(sh, "ErrExit")
        return EXIT
    return check_traps(sh, DONE)


# ---------------------------------------------------------------------------
# traps


def check_traps(sh, c):
    sig = sh.os.pending_signal()
    if sig is None:
        return c
    handler = sh.traps.get(sig)
    if handler is None:
        if sig in ("CHLD", "CONT", "URG", "WINCH"):
            return c
        _rule(sh, "SignalDefault")
        sh.set_status(128 + SIGNALS.get(sig, 0))
        return EXIT
    if handler == "":
        return c
    try:
        loop = eval_loop_for(handler, "trap")
    except ParseError as e:
        _err(sh, "trap: " + e.message)
        return c
    _rule(sh, "TrapLoad")
    return Trapped(sig, sh.last_status, loop, c)


def eval_loop_for(text: str, kind: str, source: str = "", aliases=None):
    """An EvalLoop over ``text``; the whole text is checked for syntax first."""
    from .parser import parse_all
    parse_all(text, aliases)
    session = ParseSession.from_string(text)
    session.kind = kind
    return EvalLoop(1, session, source or kind, False, False)


# ---------------------------------------------------------------------------
# redirections


def _redir_start(r):
    if isinstance(r, RHere):
        if r.kind == "noexpand":
            return None
        return ExpStart(_NOSPLIT, (Quoted(r.body),))
    return ExpStart(_NOSPLIT, r.target)


def _redir_finish(r, fields) -> object:
    text = " ".join(fields)
    if isinstance(r, RFile):
        return EFile(r.mode, r.fd, text)
    if isinstance(r, RDup):
        if text == "-":
            return EDup(r.mode, r.fd, None)
        if text.isdigit() and text.isascii():
            return EDup(r.mode, r.fd, int(text))
        raise RedirError(text + ": Bad fd number")
    return EHere(r.fd, text)


def step_redir_state(sh, rs: RedirState):
    """Advance redirection expansion.

    Returns ``("ready", done)``, ``("step", rs', did)``, ``("experr", None)``
    or ``("error", message)``.
    """
    if rs.cur is None:
        if not rs.todo:
            return "ready", rs.done
        r = rs.todo[0]
        es = _redir_start(r)
        _rule(sh, "RedirStart")
        if es is None:
            body = "".join(p.text for p in r.body)
            return "step", RedirState(rs.done + (EHere(r.fd, body),), None, rs.todo[1:]), False
        return "step", RedirState(rs.done, (r, es), rs.todo[1:]), False
    r, es = rs.cur
    if isinstance(es, ExpDone):
        try:
            er = _redir_finish(r, es.fields)
        except RedirError as e:
            return "error", str(e)
        _rule(sh, "RedirExpanded")
        return "step", RedirState(rs.done + (er,), None, rs.todo), False
    if isinstance(es, ExpError):
        return "experr", None
    es2, did = step_expansion(sh, es)
    _rule(sh, "RedirExp")
    return "step", RedirState(rs.done, (r, es2), rs.todo), did


def apply_redirs(sh, ers) -> tuple:
    """Perform expanded redirections; returns the saved-fd table.

    Raises RedirError (after undoing partial work) on failure.
    """
    os_ = sh.os
    saved: list = []
    seen: set = set()

    def save(fd: int) -> None:
        if fd in seen:
            return
        r = os_.close_and_save(fd)
        if isinstance(r, OsError):
            raise RedirError("%d: %s" % (fd, r.message))
        saved.append((fd, r))
        seen.add(fd)

    try:
        for er in ers:
            if isinstance(er, EFile):
                noclobber = "noclobber" in sh.options and er.mode == ">"
                fd = os_.file_redir(er.mode, er.path, noclobber)
                if isinstance(fd, OsError):
                    verb = "open" if er.mode == "<" else "create"
                    raise RedirError("cannot %s %s: %s" % (verb, er.path, fd.message))
                if fd == er.fd:
                    # the target fd was closed, so the file landed on it directly
                    if er.fd not in seen:
                        saved.append((er.fd, None))
                        seen.add(er.fd)
                    continue
                save(er.fd)
                err = os_.renumber(True, fd, er.fd)
                if err is not None:
                    raise RedirError("%d: %s" % (er.fd, err.message))
            elif isinstance(er, EDup):
                if er.target is None:
                    save(er.fd)
                    continue
                if not os_.fd_open(er.target):
                    raise RedirError("%d: Bad file descriptor" % er.target)
                if er.target == er.fd:
                    continue
                save(er.fd)
                err = os_.renumber(False, er.target, er.fd)
                if err is not None:
                    raise RedirError("%d: %s" % (er.fd, err.message))
            elif isinstance(er, EHere):
                save(er.fd)
                fd = os_.heredoc(er.body)
                if isinstance(fd, OsError):
                    raise RedirError("heredoc: " + fd.message)
                if fd != er.fd:
                    err = os_.renumber(True, fd, er.fd)
                    if err is not None:
                        raise RedirError("%d: %s" % (er.fd, err.message))
    except RedirError:
        restore_redirs(sh, tuple(saved))
        raise
    return tuple(saved)


def restore_redirs(sh, sfds: tuple) -> None:
    for fd, s in reversed(sfds):
        if s is None:
            sh.os.close(fd)
        else:
            sh.os.renumber(True, s, fd)


def discard_saved(sh, sfds: tuple) -> None:
    """Make redirections permanent (the exec case)."""
    for _, s in sfds:
        if s is not None:
            sh.os.close(s)


# ---------------------------------------------------------------------------
# command resolution


def resolve_path(sh, name: str) -> Optional[str]:
    if "/" in name:
        return name
    path = sh.lookup("PATH") or ""
    for d in path.split(":"):
        cand = (d.rstrip("/") + "/" + name) if d else name
        if sh.os.is_executable(cand):
            return cand
    return None


def _find_any(sh, name: str) -> Optional[str]:
    """First PATH entry that exists at all (to distinguish 126 from 127)."""
    path = sh.lookup("PATH") or ""
    for d in path.split(":"):
        cand = (d.rstrip("/") + "/" + name) if d else name
        st = sh.os.stat(cand)
        if st is not None and st.kind != "dir":
            return cand
    return None


class RunError(Exception):
    def __init__(self, message: str, status: int, special: bool = False) -> None:
        super().__init__(message)
        self.message = message
        self.status = status
        self.special = special


def run_cmd(sh, checking: bool, env: tuple, name: str, args: tuple, co: CmdOpts):
    """Resolve and start a command.

    Returns ``(continuation, restore)``, or ``bi.BLOCKED``; raises RunError.
    """
    kind, fn = bi.dispatch(name)
    if kind == "special":
        _rule(sh, "RunSpecial")
        for n, v in env:
            try:
                sh.set_global(n, v)
            except ReadonlyError:
                raise RunError(n + ": is read only", 2, True)
        return _call_builtin(sh, fn, name, args, checking, co, env, True)
    if not co.simple and name in sh.functions:
        _rule(sh, "RunFunction")
        body = sh.functions[name]
        sh.push_scope(dict(env), exported=True)
        saved_pos = tuple(sh.positional)
        sh.positional = list(args)
        saved_loop = sh.loop_depth
        if "nonlexicalctrl" not in sh.options:
            sh.loop_depth = 0
        sh.func_depth += 1
        return Call(saved_loop, saved_pos, name, body, body), True
    if kind in ("regular", "extra"):
        _rule(sh, "RunBuiltin")
        sh.push_scope(dict(env), exported=True)
        try:
            return _call_builtin(sh, fn, name, args, checking, co, env, False)
        finally:
            sh.pop_scope()
    if kind == "unsupported":
        raise RunError(name + ": not supported", 127)
    path = resolve_path(sh, name)
    if path is None:
        if _find_any(sh, name) is not None:
            raise RunError(name + ": Permission denied", 126)
        raise RunError(name + ": not found", 127)
    _rule(sh, "RunExternal")
    envmap = sh.export_env(env)
    pid = sh.os.fork_shell(sh, Exec(path, name, args, tuple(sorted(envmap.items())), True),
                           [], checking)
    if isinstance(pid, OsError):
        raise RunError("cannot fork: " + pid.message, 2)
    return Wait(pid, checking, True), True


def _call_builtin(sh, fn, name, args, checking, co, env, special):
    ctx = bi.Ctx(name=name, checking=checking, co=co, env=env, special=special)
    try:
        res = fn(sh, list(args), ctx)
    except bi.BuiltinError as e:
        raise RunError(e.message if e.bare else name + ": " + e.message, e.status, special)
    if res is bi.BLOCKED:
        return bi.BLOCKED
    if isinstance(res, bi.NoRestore):
        return res.cont, False
    if isinstance(res, int):
        sh.set_status(res)
        return DONE, True
    return res, True


def xtrace_emit(sh, assigns, fields) -> None:
    if "xtrace" not in sh.options:
        return
    ps4 = sh.lookup("PS4")
    if ps4 is None:
        ps4 = "+ "
    parts = [n + "=" + v for n, v in assigns] + list(fields)
    sh.os.write(2, ps4 + " ".join(parts) + "\n")


# ---------------------------------------------------------------------------
# stepping


def _exp_error(sh, checking: bool):
    """An expansion error: status 2, and a non-interactive shell exits."""
    sh.set_status(2)
    if not sh.interactive:
        return EXIT
    return DONE


def step_eval(sh, checking: bool, c):
    fn = _STEP.get(type(c))
    if fn is None:
        raise ValueError("no rule for %r" % (c,))
    return fn(sh, checking, c)


def _simple(sh, checking, c: Simple):
    _rule(sh, "CmdStart")
    sh.lineno = c.lineno
    return CmdArgs(c.assigns, ExpStart(_FULL, c.words), c.redirs, CmdOpts())


def _with_subst(co: CmdOpts, did: bool) -> CmdOpts:
    if did and not co.subst:
        return CmdOpts(True, co.fork, co.simple)
    return co


def _cmd_args(sh, checking, c: CmdArgs):
    es = c.es
    if isinstance(es, ExpDone):
        _rule(sh, "CmdArgsDone")
        return CmdRedirs(c.assigns, es.fields, RedirState((), None, c.redirs), c.co)
    if isinstance(es, ExpError):
        _rule(sh, "CmdArgExpErr")
        return _exp_error(sh, checking)
    es2, did = step_expansion(sh, es)
    _rule(sh, "CmdArgExp")
    return CmdArgs(c.assigns, es2, c.redirs, _with_subst(c.co, did))


def _is_special(fields) -> bool:
    return bool(fields) and bi.dispatch(fields[0])[0] == "special"


def _cmd_redirs(sh, checking, c: CmdRedirs):
    kind, val, *rest = step_redir_state(sh, c.rs)
    if kind == "step":
        return CmdRedirs(c.assigns, c.fields, val, _with_subst(c.co, rest[0]))
    if kind == "experr":
        _rule(sh, "CmdRedirExpErr")
        return _exp_error(sh, checking)
    if kind == "error":
        _err(sh, val)
        return _redir_failed(sh, checking, c.fields, c.co)
    try:
        sfds = apply_redirs(sh, val)
    except RedirError as e:
        _err(sh, str(e))
        return _redir_failed(sh, checking, c.fields, c.co)
    _rule(sh, "CmdRedirDone")
    sh.push_scope()
    pending = tuple((n, ExpStart(_NOSPLIT, w)) for n, w in c.assigns)
    return CmdAssigns(pending, c.fields, sfds, c.co)


def _redir_failed(sh, checking, fields, co):
    _rule(sh, "CmdRedirDoneErr")
    sh.set_status(2)
    special = _is_special(fields) and not co.simple
    if (special and not sh.interactive) or _errexit(sh, checking):
        return EXIT
    return DONE


def _cmd_assigns(sh, checking, c: CmdAssigns):
    if c.pending:
        name, es = c.pending[0]
        if isinstance(es, ExpDone):
            value = " ".join(es.fields)
            try:
                sh.set_local(name, value)
            except ReadonlyError:
                _rule(sh, "CmdAssignErr")
                _err(sh, name + ": is read only")
                sh.pop_scope()
                restore_redirs(sh, c.sfds)
                sh.set_status(2)
                return EXIT if not sh.interactive else DONE
            _rule(sh, "CmdAssign")
            return CmdAssigns(c.pending[1:], c.fields, c.sfds, c.co)
        if isinstance(es, ExpError):
            _rule(sh, "CmdAssignExpErr")
            sh.pop_scope()
            restore_redirs(sh, c.sfds)
            return _exp_error(sh, checking)
        es2, did = step_expansion(sh, es)
        _rule(sh, "CmdAssignExp")
        return CmdAssigns(((name, es2),) + c.pending[1:], c.fields, c.sfds,
                          _with_subst(c.co, did))
    scope = sh.pop_scope()
    bindings = [(n, v.value) for n, v in scope.items()]
    if not c.fields:
        _rule(sh, "CmdAssignDoneNoCmd")
        xtrace_emit(sh, bindings, ())
        for n, v in bindings:
            sh.set_global(n, v)
        if not c.co.subst:
            sh.set_status(0)
        restore_redirs(sh, c.sfds)
        return _done_checked(sh, checking)
    _rule(sh, "CmdAssignDoneCmd")
    xtrace_emit(sh, bindings, c.fields)
    return CmdReady(tuple(bindings), c.fields[0], tuple(c.fields[1:]), c.sfds, c.co)


def _cmd_ready(sh, checking, c: CmdReady):
    if "noexec" in sh.options and not sh.interactive:
        _rule(sh, "CmdRunNoexec")
        restore_redirs(sh, c.sfds)
        return DONE
    _rule(sh, "CmdReady")
    return Run(c.env, c.name, c.args, c.sfds, c.co)


def _run(sh, checking, c: Run):
    try:
        res = run_cmd(sh, checking, c.env, c.name, c.args, c.co)
    except RunError as e:
        _rule(sh, "RunFail")
        _err(sh, e.message)
        sh.set_status(e.status)
        restore_redirs(sh, c.sfds)
        if (e.special and not c.co.simple and not sh.interactive) or _errexit(sh, checking):
            return EXIT
        return check_traps(sh, DONE)
    if res is bi.BLOCKED:
        _rule(sh, "RunBlocked")
        return c
    cont, restore = res
    if not restore:
        discard_saved(sh, c.sfds)
        return cont
    if isinstance(cont, Done):
        restore_redirs(sh, c.sfds)
        return _done_checked(sh, checking)
    if not c.sfds:
        return cont
    return Redirs(cont, c.sfds)


def _redirs(sh, checking, c: Redirs):
    if is_terminal(c.cmd):
        _rule(sh, "RedirRestore")
        restore_redirs(sh, c.sfds)
        return c.cmd
    return Redirs(step_eval(sh, checking, c.cmd), c.sfds)


def _redirected(sh, checking, c: Redirected):
    _rule(sh, "RedirCompound")
    return RedirExp(c.cmd, RedirState((), None, c.redirs))


def _redir_exp(sh, checking, c: RedirExp):
    kind, val, *rest = step_redir_state(sh, c.rs)
    if kind == "step":
        return RedirExp(c.cmd, val)
    if kind == "experr":
        _rule(sh, "RedirExpErr")
        return _exp_error(sh, checking)
    if kind == "error":
        _err(sh, val)
        sh.set_status(2)
        return EXIT if _errexit(sh, checking) else DONE
    try:
        sfds = apply_redirs(sh, val)
    except RedirError as e:
        _rule(sh, "RedirApplyErr")
        _err(sh, str(e))
        sh.set_status(2)
        return EXIT if _errexit(sh, checking) else DONE
    _rule(sh, "RedirApply")
    return Redirs(c.cmd, sfds)


def _seq(sh, checking, c: Seq):
    if isinstance(c.c1, Done):
        _rule(sh, "SeqNext")
        return c.c2
    if is_terminal(c.c1):
        _rule(sh, "SeqCtrl")
        return c.c1
    return Seq(step_eval(sh, checking, c.c1), c.c2)


def _and(sh, checking, c: And):
    if isinstance(c.c1, Done):
        if sh.last_status == 0:
            _rule(sh, "AndNext")
            return c.c2
        _rule(sh, "AndShort")
        return DONE
    if is_terminal(c.c1):
        _rule(sh, "AndCtrl")
        return c.c1
    return And(step_eval(sh, True, c.c1), c.c2)


def _or(sh, checking, c: Or):
    if isinstance(c.c1, Done):
        if sh.last_status != 0:
            _rule(sh, "OrNext")
            return c.c2
        _rule(sh, "OrShort")
        return DONE
    if is_terminal(c.c1):
        _rule(sh, "OrCtrl")
        return c.c1
    return Or(step_eval(sh, True, c.c1), c.c2)


def _not(sh, checking, c: Not):
    inner = c.cmd
    if isinstance(inner, Done):
        if sh.last_status == 0:
            _rule(sh, "NotSuccess")
            sh.set_status(1)
        else:
            _rule(sh, "NotFail")
            sh.set_status(0)
        return DONE
    if is_terminal(inner):
        _rule(sh, "NotCtrl")
        return inner
    return Not(step_eval(sh, True, inner))


def _if(sh, checking, c: If):
    if isinstance(c.c1, Done):
        if sh.last_status == 0:
            _rule(sh, "IfTrue")
            return c.c2
        _rule(sh, "IfFalse")
        return c.c3
    if is_terminal(c.c1):
        _rule(sh, "IfCtrl")
        return c.c1
    return If(step_eval(sh, True, c.c1), c.c2, c.c3)


def _loop_ctrl(sh, cur, restart):
    """Handle Break/Continue/Return/Exit reaching a loop frame."""
    if isinstance(cur, Break):
        sh.loop_depth -= 1
        if cur.n <= 1:
            _rule(sh, "LoopBreak")
            sh.set_status(0)
            return DONE
        _rule(sh, "LoopBreakOuter")
        return Break(cur.n - 1)
    if isinstance(cur, Continue):
        if cur.n <= 1:
            _rule(sh, "LoopContinue")
            sh.set_status(0)
            return restart()
        sh.loop_depth -= 1
        _rule(sh, "LoopContinueOuter")
        return Continue(cur.n - 1)
    sh.loop_depth -= 1
    _rule(sh, "LoopCtrl")
    return cur


def _while(sh, checking, c: While):
    _rule(sh, "WhileStart")
    sh.loop_depth += 1
    return WhileCond(c.cond, c.cond, c.body, 0)


def _while_cond(sh, checking, c: WhileCond):
    cur = c.cur
    if isinstance(cur, Done):
        if sh.last_status == 0:
            _rule(sh, "WhileCondTrue")
            return WhileBody(c.cond, c.body, c.body)
        _rule(sh, "WhileCondFalse")
        sh.loop_depth -= 1
        sh.set_status(c.last)
        return DONE
    if is_terminal(cur):
        return _loop_ctrl(sh, cur, lambda: WhileCond(c.cond, c.cond, c.body, 0))
    return WhileCond(c.cond, step_eval(sh, True, cur), c.body, c.last)


def _while_body(sh, checking, c: WhileBody):
    cur = c.cur
    if isinstance(cur, Done):
        _rule(sh, "WhileBodyDone")
        return check_traps(sh, WhileCond(c.cond, c.cond, c.body, sh.last_status))
    if is_terminal(cur):
        return _loop_ctrl(sh, cur, lambda: WhileCond(c.cond, c.cond, c.body, 0))
    return WhileBody(c.cond, c.body, step_eval(sh, checking, cur))


def _for(sh, checking, c: For):
    _rule(sh, "ForExpStart")
    return ForArgs(c.var, ExpStart(_FULL, c.words), c.body)


def _for_args(sh, checking, c: ForArgs):
    es = c.es
    if isinstance(es, ExpDone):
        _rule(sh, "ForArgsDone")
        return ForStart(c.var, es.fields, c.body)
    if isinstance(es, ExpError):
        _rule(sh, "ForExpErr")
        return _exp_error(sh, checking)
    es2, _ = step_expansion(sh, es)
    _rule(sh, "ForArgExp")
    return ForArgs(c.var, es2, c.body)


def _for_bind(sh, var: str, value: str) -> bool:
    try:
        sh.set_global(var, value)
        return True
    except ReadonlyError:
        _err(sh, var + ": is read only")
        sh.set_status(2)
        return False


def _for_start(sh, checking, c: ForStart):
    if not c.fields:
        _rule(sh, "ForEmpty")
        sh.set_status(0)
        return DONE
    _rule(sh, "ForStart")
    if not _for_bind(sh, c.var, c.fields[0]):
        return EXIT if not sh.interactive else DONE
    sh.loop_depth += 1
    return ForRunning(c.var, c.fields[1:], c.body, c.body)


def _for_next(sh, c: ForRunning):
    if not c.fields:
        _rule(sh, "ForDone")
        sh.loop_depth -= 1
        return DONE
    _rule(sh, "ForNext")
    if not _for_bind(sh, c.var, c.fields[0]):
        sh.loop_depth -= 1
        return EXIT if not sh.interactive else DONE
    return check_traps(sh, ForRunning(c.var, c.fields[1:], c.body, c.body))


def _for_running(sh, checking, c: ForRunning):
    cur = c.cur
    if isinstance(cur, Done):
        return _for_next(sh, c)
    if is_terminal(cur):
        return _loop_ctrl(sh, cur, lambda: _for_next(sh, c))
    return ForRunning(c.var, c.fields, c.body, step_eval(sh, checking, cur))


def _case(sh, checking, c: Case):
    _rule(sh, "CaseStart")
    return CaseArg(ExpStart(_NOSPLIT, c.word), c.branches)


def _case_arg(sh, checking, c: CaseArg):
    es = c.es
    if isinstance(es, ExpDone):
        _rule(sh, "CaseArgDone")
        return CaseMatch(" ".join(es.fields), c.branches)
    if isinstance(es, ExpError):
        _rule(sh, "CaseExpErr")
        return _exp_error(sh, checking)
    es2, _ = step_expansion(sh, es)
    _rule(sh, "CaseArgExp")
    return CaseArg(es2, c.branches)


def _case_match(sh, checking, c: CaseMatch):
    if not c.branches:
        _rule(sh, "CaseNoMatch")
        sh.set_status(0)
        return DONE
    b = c.branches[0]
    _rule(sh, "CaseBranch")
    return CaseCheck(c.value, ExpStart(_PATTERN, b.patterns[0]), b.body, b.patterns[1:],
                     c.branches[1:])


def _case_check(sh, checking, c: CaseCheck):
    es = c.es
    if isinstance(es, ExpPatternDone):
        if pat.match(pat.compile(es.segments), c.value):
            _rule(sh, "CaseMatch")
            if c.body == EMPTY:
                sh.set_status(0)
                return DONE
            return c.body
        if c.rest:
            _rule(sh, "CaseNextPattern")
            return CaseCheck(c.value, ExpStart(_PATTERN, c.rest[0]), c.body, c.rest[1:],
                             c.branches)
        _rule(sh, "CaseNextBranch")
        return CaseMatch(c.value, c.branches)
    if isinstance(es, ExpError):
        _rule(sh, "CaseExpErr")
        return _exp_error(sh, checking)
    es2, _ = step_expansion(sh, es)
    _rule(sh, "CasePatExp")
    return CaseCheck(c.value, es2, c.body, c.rest, c.branches)


def _fork_error(sh, pid) -> bool:
    if isinstance(pid, OsError):
        _err(sh, "cannot fork: " + pid.message)
        sh.set_status(2)
        return True
    return False


def _pipeline(sh, checking, c: Pipeline):
    n = len(c.cmds)
    pids = []
    prev_r = None
    for i, cmd in enumerate(c.cmds):
        setup = []
        if prev_r is not None:
            setup += [("dup2", prev_r, 0), ("close", prev_r)]
        elif c.bg and not sh.interactive:
            setup.append(("devnull", 0))
        r = w = None
        if i < n - 1:
            p = sh.os.pipe()
            if isinstance(p, OsError):
                _err(sh, "cannot create pipe: " + p.message)
                sh.set_status(2)
                return DONE
            r, w = p
            setup += [("dup2", w, 1), ("close", w), ("close", r)]
        pid = sh.os.fork_shell(sh, cmd, setup, checking if i == n - 1 else False)
        if prev_r is not None:
            sh.os.close(prev_r)
        if w is not None:
            sh.os.close(w)
        if _fork_error(sh, pid):
            if r is not None:
                sh.os.close(r)
            return DONE
        pids.append(pid)
        prev_r = r
    if c.bg:
        _rule(sh, "PipelineBg")
        _register_job(sh, pids, c)
        sh.set_status(0)
        return DONE
    _rule(sh, "Pipeline")
    # the last member first: its status is the pipeline's, and waiting on an
    # earlier writer first could starve the reader that makes it terminate
    cont = Wait(pids[-1], checking, True)
    for pid in pids[:-1]:
        cont = Seq(cont, Wait(pid, True, False))
    return cont


def _register_job(sh, pids: list, cmd) -> None:
    sh.last_bg_pid = pids[-1]
    jid = max(sh.jobs, default=0) + 1
    sh.jobs[jid] = JobInfo(jid, list(pids), pids[0], cmd)


def _background(sh, checking, c: Background):
    setup = [] if sh.interactive else [("devnull", 0)]
    pid = sh.os.fork_shell(sh, c.cmd, setup, False)
    if _fork_error(sh, pid):
        return DONE
    _rule(sh, "Background")
    _register_job(sh, [pid], c.cmd)
    sh.set_status(0)
    return DONE


def _subshell(sh, checking, c: Subshell):
    pid = sh.os.fork_shell(sh, c.cmd, [], checking)
    if _fork_error(sh, pid):
        return DONE
    _rule(sh, "Subshell")
    return Wait(pid, checking, True)


def _wait(sh, checking, c: Wait):
    st = sh.os.wait(c.pid)
    if isinstance(st, Blocked):
        _rule(sh, "WaitBlocked")
        return c
    for job in sh.jobs.values():
        if c.pid in job.pids and job.pids[-1] == c.pid:
            job.status = st
    if not c.record:
        _rule(sh, "WaitReap")
        return DONE
    _rule(sh, "Wait")
    sh.set_status(st)
    return _done_checked(sh, checking or c.checked)


def _fndef(sh, checking, c: FnDef):
    _rule(sh, "FnDef")
    sh.functions[c.name] = c.body
    sh.set_status(0)
    return DONE


def _call_finish(sh, c: Call) -> None:
    sh.pop_scope()
    sh.positional = list(c.saved_positional)
    sh.loop_depth = c.loop_depth
    sh.func_depth -= 1


def _call(sh, checking, c: Call):
    cur = c.cur
    if isinstance(cur, (Done, Return)):
        _rule(sh, "CallReturn" if isinstance(cur, Return) else "CallDone")
        _call_finish(sh, c)
        return _done_checked(sh, checking)
    if isinstance(cur, Exit):
        _rule(sh, "CallExit")
        _call_finish(sh, c)
        return EXIT
    if isinstance(cur, (Break, Continue)):
        _rule(sh, "CallCtrl")
        _call_finish(sh, c)
        return cur
    return Call(c.loop_depth, c.saved_positional, c.name, c.orig, step_eval(sh, checking, cur))


def _eval_loop(sh, checking, c: EvalLoop):
    session = c.session
    if c.toplevel:
        t = check_traps(sh, c)
        if t is not c:
            return t
    ps1 = ps2 = ""
    if c.interactive:
        ps1 = sh.lookup("PS1")
        ps1 = "$ " if ps1 is None else ps1
        ps2 = sh.lookup("PS2")
        ps2 = "> " if ps2 is None else ps2
    r = parse_next(session, sh.aliases, ps1, ps2)
    if isinstance(r, Eof):
        _rule(sh, "EvalLoopEof")
        if c.toplevel:
            return EXIT
        return DONE
    if isinstance(r, Blank):
        _rule(sh, "EvalLoopBlank")
        return c
    if isinstance(r, SyntaxErr):
        _rule(sh, "EvalLoopSyntaxErr")
        src = c.source if c.source else "smolsh"
        sh.os.write(2, "smolsh: %s: line %d: syntax error: %s\n" % (src, r.lineno, r.message))
        sh.set_status(2)
        if c.interactive:
            return c
        return EXIT
    if "verbose" in sh.options:
        sh.os.write(2, session.last_text)
    _rule(sh, "EvalLoopParse")
    return EvalLoopCmd(c.lineno, session, c.source, c.interactive, c.toplevel, r.cmd)


def _eval_loop_cmd(sh, checking, c: EvalLoopCmd):
    cur = c.cmd
    back = EvalLoop(c.lineno, c.session, c.source, c.interactive, c.toplevel)
    kind = getattr(c.session, "kind", "main")
    if isinstance(cur, Done):
        _rule(sh, "EvalLoopNext")
        return check_traps(sh, back)
    if isinstance(cur, Exit):
        _rule(sh, "EvalLoopExit")
        return EXIT
    if isinstance(cur, Return):
        if kind == "dot":
            _rule(sh, "EvalLoopReturn")
            return DONE
        if c.toplevel:
            _rule(sh, "EvalLoopExit")
            return EXIT
        _rule(sh, "EvalLoopCtrl")
        return cur
    if isinstance(cur, (Break, Continue)):
        if c.toplevel:
            _rule(sh, "EvalLoopNext")
            return back
        _rule(sh, "EvalLoopCtrl")
        return cur
    return EvalLoopCmd(c.lineno, c.session, c.source, c.interactive, c.toplevel,
                       step_eval(sh, checking if not c.toplevel else False, cur))


def _exec(sh, checking, c: Exec):
    res = sh.os.exec_image(c.path, [c.name] + list(c.args), dict(c.env))
    if isinstance(res, Blocked):
        _rule(sh, "ExecBlocked")
        return c
    _rule(sh, "Exec")
    if isinstance(res, int):
        sh.set_status(res)
        return EXIT
    import errno as _errno
    if res.errno == _errno.ENOEXEC and c.as_script:
        text = _read_file(sh, c.path)
        if text is not None:
            session = ParseSession.from_string(text)
            session.kind = "main"
            sh.arg0 = c.name
            sh.positional = list(c.args)
            sh.functions = {}
            return EvalLoop(1, session, c.path, False, True)
    if res.errno in (_errno.ENOENT, _errno.ENOTDIR):
        _err(sh, c.name + ": not found")
        sh.set_status(127)
    else:
        _err(sh, "%s: %s" % (c.name, res.message))
        sh.set_status(126)
    return EXIT


def _read_file(sh, path: str) -> Optional[str]:
    fd = sh.os.file_redir("<", path, False)
    if isinstance(fd, OsError):
        return None
    data = sh.os.read_all(fd)
    sh.os.close(fd)
    if isinstance(data, OsError) or isinstance(data, Blocked):
        return None
    return data


def _trapped(sh, checking, c: Trapped):
    h = c.handler
    if isinstance(h, Exit):
        _rule(sh, "TrapExit")
        return EXIT
    if is_terminal(h):
        _rule(sh, "TrapDone")
        sh.set_status(c.status)
        return c.cont
    return Trapped(c.signal, c.status, step_eval(sh, False, h), c.cont)


_STEP = {
    Simple: _simple, CmdArgs: _cmd_args, CmdRedirs: _cmd_redirs, CmdAssigns: _cmd_assigns,
    CmdReady: _cmd_ready, Run: _run, Redirs: _redirs, Redirected: _redirected,
    RedirExp: _redir_exp, Seq: _seq, And: _and, Or: _or, Not: _not, If: _if,
    While: _while, WhileCond: _while_cond, WhileBody: _while_body, For: _for,
    ForArgs: _for_args, ForStart: _for_start, ForRunning: _for_running, Case: _case,
    CaseArg: _case_arg, CaseMatch: _case_match, CaseCheck: _case_check,
    Pipeline: _pipeline, Background: _background, Subshell: _subshell, Wait: _wait,
    FnDef: _fndef, Call: _call, EvalLoop: _eval_loop, EvalLoopCmd: _eval_loop_cmd,
    Exec: _exec, Trapped: _trapped,
}


# ---------------------------------------------------------------------------
# drivers


def run_exit_trap(sh) -> None:
    handler = sh.traps.get("EXIT")
    if not handler:
        return
    sh.traps.pop("EXIT", None)
    status = sh.last_status
    try:
        c = eval_loop_for(handler, "trap")
    except ParseError as e:
        _err(sh, "trap: " + e.message)
        return
    c = Trapped("EXIT", status, c, EXIT)
    while not is_terminal(c):
        c = step_eval(sh, False, c)


def run(sh, c, checking: bool = False, step_hook=None) -> int:
    """Step ``c`` to a terminal form, run the EXIT trap, return the status."""
    while not is_terminal(c):
        c = step_eval(sh, checking, c)
        if step_hook is not None:
            step_hook(sh, c)
    run_exit_trap(sh)
    return sh.last_status


def term_text(c) -> str:
    return render_any(c)

"""Special builtins."""

from __future__ import annotations

from ..ast import DONE, EXIT, RETURN, Break, Continue, EvalLoop, Exec
from ..os_interface import SIGNALS, UNCATCHABLE, OsError, signal_name
from ..parser import ParseError, ParseSession, is_name, parse_all
from ..state import LONG_OPTIONS, OPTION_LETTERS, ReadonlyError
from . import BuiltinError, NoRestore, out, parse_int, single_quote


def _colon(sh, args, ctx):
    return 0


def _count(args, default: int = 1) -> int:
    if not args:
        return default
    n = parse_int("", args[0])
    if n < 0:
        raise BuiltinError("Illegal number: " + args[0], 2)
    return n


def _break(sh, args, ctx, kind=Break):
    n = _count(args)
    if n == 0:
        raise BuiltinError("Illegal number: " + args[0], 2)
    sh.set_status(0)
    if sh.loop_depth <= 0:
        return 0
    return kind(min(n, sh.loop_depth))


def _continue(sh, args, ctx):
    return _break(sh, args, ctx, Continue)


def _exit(sh, args, ctx):
    n = _count(args, sh.last_status)
    sh.set_status(n)
    return EXIT


def _return(sh, args, ctx):
    n = _count(args, sh.last_status)
    sh.set_status(n)
    return RETURN


def _shift(sh, args, ctx):
    n = _count(args)
    if n > len(sh.positional):
        raise BuiltinError("can't shift that many", 2)
    sh.positional = sh.positional[n:]
    return 0


def _loop(sh, text: str, kind: str, source: str):
    try:
        parse_all(text, sh.aliases)
    except ParseError as e:
        raise BuiltinError("line %d: syntax error: %s" % (e.lineno, e.message), 2)
    session = ParseSession.from_string(text)
    session.kind = kind
    sh.set_status(0)
    return EvalLoop(1, session, source, False, False)


def _eval(sh, args, ctx):
    text = " ".join(args)
    if not text.strip():
        return 0
    return _loop(sh, text, "eval", "eval")


def find_dot_file(sh, name: str):
    if "/" in name:
        return name
    path = sh.lookup("PATH") or ""
    for d in path.split(":"):
        cand = (d.rstrip("/") + "/" + name) if d else name
        st = sh.os.stat(cand)
        if st is not None and st.kind != "dir":
            return cand
    return None


def _dot(sh, args, ctx):
    if not args:
        raise BuiltinError("filename argument required", 2)
    path = find_dot_file(sh, args[0])
    if path is None:
        raise BuiltinError("%s: not found" % args[0], 2)
    fd = sh.os.file_redir("<", path, False)
    if isinstance(fd, OsError):
        raise BuiltinError("cannot open %s: %s" % (args[0], fd.message), 2)
    text = sh.os.read_all(fd)
    sh.os.close(fd)
    if not isinstance(text, str):
        raise BuiltinError("cannot read %s" % args[0], 2)
    if not text.strip():
        return 0
    return _loop(sh, text, "dot", path)


def _exec(sh, args, ctx):
    if not args:
        sh.set_status(0)
        return NoRestore(DONE)
    from ..evaluation import resolve_path
    name = args[0]
    path = resolve_path(sh, name)
    if path is None:
        raise BuiltinError("%s: not found" % name, 127)
    env = tuple(sorted(sh.export_env(ctx.env).items()))
    return NoRestore(Exec(path, name, tuple(args[1:]), env, True))


def _assign_names(sh, args, ctx, mark):
    for a in args:
        name, eq, value = a.partition("=")
        if not is_name(name):
            raise BuiltinError("%s: bad variable name" % name, 2)
        try:
            if eq:
                sh.set_global(name, value)
            mark(name)
        except ReadonlyError:
            raise BuiltinError("%s: is read only" % name, 2)


def _listing(sh, word: str, names) -> str:
    lines = []
    for n in sorted(names):
        v = sh.lookup(n)
        if v is None:
            lines.append("%s %s\n" % (word, n))
        else:
            lines.append("%s %s=%s\n" % (word, n, single_quote(v)))
    return "".join(lines)


def _all_names(sh) -> set:
    names = set(sh.globals) | sh.exported | sh.readonly
    for scope in sh.locals:
        names |= set(scope)
    return names


def _export(sh, args, ctx):
    if args and args[0] == "-p":
        args = args[1:]
        if not args:
            out(sh, _listing(sh, "export", [n for n in _all_names(sh) if sh.is_exported(n)]))
            return 0
    if not args:
        out(sh, _listing(sh, "export", [n for n in _all_names(sh) if sh.is_exported(n)]))
        return 0
    _assign_names(sh, args, ctx, sh.export)
    return 0


def _readonly(sh, args, ctx):
    if args and args[0] == "-p":
        args = args[1:]
    if not args:
        out(sh, _listing(sh, "readonly", [n for n in _all_names(sh) if sh.is_readonly(n)]))
        return 0
    _assign_names(sh, args, ctx, sh.set_readonly)
    return 0


def _unset(sh, args, ctx):
    funcs = False
    while args and args[0].startswith("-") and len(args[0]) > 1:
        flag = args.pop(0)
        if flag == "--":
            break
        for ch in flag[1:]:
            if ch == "f":
                funcs = True
            elif ch == "v":
                funcs = False
            else:
                raise BuiltinError("Illegal option -" + ch, 2)
    for name in args:
        if funcs:
            sh.functions.pop(name, None)
            continue
        try:
            sh.unset(name)
        except ReadonlyError:
            raise BuiltinError("%s: is read only" % name, 2)
    return 0


def _local(sh, args, ctx):
    if sh.func_depth <= 0 or not sh.locals:
        raise BuiltinError("not in a function", 2)
    if args and args[0] == "-p":
        scope = sh.locals[-1]
        lines = []
        for n in sorted(scope):
            v = scope[n].value
            lines.append("local %s\n" % n if v is None else "local %s=%s\n" % (n, single_quote(v)))
        out(sh, "".join(lines))
        return 0
    for a in args:
        name, eq, value = a.partition("=")
        if not is_name(name):
            raise BuiltinError("%s: bad variable name" % name, 2)
        try:
            sh.set_local(name, value if eq else None)
        except ReadonlyError:
            raise BuiltinError("%s: is read only" % name, 2)
    return 0


_OPTION_ORDER = ["errexit", "noglob", "ignoreeof", "monitor", "noexec", "xtrace", "verbose",
                 "noclobber", "allexport", "nounset", "nonlexicalctrl"]


def _set_option(sh, name: str, on: bool) -> None:
    if name not in LONG_OPTIONS:
        raise BuiltinError("Illegal option -o " + name, 2)
    if on:
        sh.options.add(name)
    else:
        sh.options.discard(name)


def _set(sh, args, ctx):
    if not args:
        names = sorted(sh.visible_vars())
        out(sh, "".join("%s=%s\n" % (n, single_quote(sh.lookup(n) or "")) for n in names))
        return 0
    i = 0
    positional = None
    while i < len(args):
        a = args[i]
        if a == "--":
            positional = args[i + 1:]
            break
        if a == "-":
            sh.options.discard("xtrace")
            sh.options.discard("verbose")
            positional = args[i + 1:] if i + 1 < len(args) else None
            break
        if len(a) < 2 or a[0] not in "-+":
            positional = args[i:]
            break
        on = a[0] == "-"
        for ch in a[1:]:
            if ch == "o":
                i += 1
                if i >= len(args):
                    _print_options(sh, on)
                    continue
                _set_option(sh, args[i], on)
            elif ch in OPTION_LETTERS:
                _set_option(sh, OPTION_LETTERS[ch], on)
            else:
                raise BuiltinError("Illegal option %s%s" % (a[0], ch), 2)
        i += 1
    if positional is not None:
        sh.positional = list(positional)
    return 0


def _print_options(sh, on: bool) -> None:
    if on:
        text = "Current option settings\n" + "".join(
            "%-16s%s\n" % (o, "on" if o in sh.options else "off") for o in _OPTION_ORDER)
    else:
        text = "".join("set %so %s\n" % ("-" if o in sh.options else "+", o) for o in _OPTION_ORDER)
    out(sh, text)


def _sig_order(name: str) -> int:
    return 0 if name == "EXIT" else SIGNALS.get(name, 999)


def _trap(sh, args, ctx):
    if args and args[0] == "--":
        args = args[1:]
    if not args:
        table = sh.traps
        if not sh.traps_modified and sh.supershell_traps is not None:
            table = sh.supershell_traps
        lines = ["trap -- %s %s\n" % (single_quote(h), s)
                 for s, h in sorted(table.items(), key=lambda kv: _sig_order(kv[0]))]
        out(sh, "".join(lines))
        return 0
    if len(args) == 1 or args[0].isdigit():
        action = None
        sigs = args
    else:
        action = None if args[0] == "-" else args[0]
        sigs = args[1:]
    status = 0
    for s in sigs:
        name = signal_name(s)
        if name is None or name in UNCATCHABLE:
            sh.os.write(2, "smolsh: trap: %s: bad trap\n" % s)
            status = 1
            continue
        sh.traps_modified = True
        if action is None:
            sh.traps.pop(name, None)
            if name != "EXIT":
                sh.os.set_signal(name, "default")
        else:
            sh.traps[name] = action
            if name != "EXIT":
                sh.os.set_signal(name, "ignore" if action == "" else "catch")
    return status


def _fmt_time(t: float) -> str:
    m = int(t // 60)
    return "%dm%.6fs" % (m, t - 60 * m)


def _times(sh, args, ctx):
    u, s, cu, cs = sh.os.times()
    out(sh, "%s %s\n%s %s\n" % (_fmt_time(u), _fmt_time(s), _fmt_time(cu), _fmt_time(cs)))
    return 0


TABLE = {
    ":": _colon, "break": _break, "continue": _continue, ".": _dot, "eval": _eval,
    "exec": _exec, "exit": _exit, "export": _export, "readonly": _readonly,
    "return": _return, "set": _set, "shift": _shift, "times": _times, "trap": _trap,
    "unset": _unset, "local": _local,
}

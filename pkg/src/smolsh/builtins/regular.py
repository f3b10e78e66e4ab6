"""Mandatory (non-special) builtins."""

from __future__ import annotations

from ..ast import Run, Seq, Wait, CmdOpts
from ..os_interface import SIGNAL_NAMES, SIGNALS, EOF, Blocked, Line, OsError, signal_name
from ..parser import RESERVED, is_name
from ..state import ReadonlyError
from . import BLOCKED, BuiltinError, dispatch, out, parse_int, single_quote, warn


def _true(sh, args, ctx):
    return 0


def _false(sh, args, ctx):
    return 1


# ---------------------------------------------------------------------------
# aliases


def _alias(sh, args, ctx):
    if not args:
        out(sh, "".join("%s=%s\n" % (k, single_quote(v)) for k, v in sorted(sh.aliases.items())))
        return 0
    status = 0
    for a in args:
        name, eq, value = a.partition("=")
        if eq:
            sh.aliases[name] = value
        elif name in sh.aliases:
            out(sh, "%s=%s\n" % (name, single_quote(sh.aliases[name])))
        else:
            warn(sh, "alias", name + " not found")
            status = 1
    return status


def _unalias(sh, args, ctx):
    if args and args[0] == "-a":
        sh.aliases.clear()
        return 0
    status = 0
    for name in args:
        if sh.aliases.pop(name, None) is None:
            warn(sh, "unalias", name + " not found")
            status = 1
    return status


# ---------------------------------------------------------------------------
# directories


def normalize_path(path: str) -> str:
    """Lexically resolve "." and ".." in an absolute path."""
    parts: list[str] = []
    for comp in path.split("/"):
        if comp in ("", "."):
            continue
        if comp == "..":
            if parts:
                parts.pop()
            continue
        parts.append(comp)
    return "/" + "/".join(parts)


def _current_dir(sh) -> str:
    pwd = sh.lookup("PWD")
    if pwd and pwd.startswith("/"):
        return pwd
    return sh.os.getcwd()


def _cd(sh, args, ctx):
    physical = False
    while args and args[0] in ("-L", "-P"):
        physical = args.pop(0) == "-P"
    if args and args[0] == "--":
        args = args[1:]
    announce = False
    if not args:
        target = sh.lookup("HOME")
        if not target:
            raise BuiltinError("HOME not set", 2)
    else:
        target = args[0]
        if target == "-":
            target = sh.lookup("OLDPWD")
            if not target:
                raise BuiltinError("OLDPWD not set", 2)
            announce = True
    candidates = [target]
    first = target.split("/", 1)[0]
    if not target.startswith("/") and first not in (".", ".."):
        cdpath = sh.lookup("CDPATH")
        if cdpath:
            candidates = []
            for d in cdpath.split(":"):
                if d:
                    candidates.append((d.rstrip("/") + "/" + target, True))
                else:
                    candidates.append((target, False))
    for cand in candidates:
        shown = False
        if isinstance(cand, tuple):
            cand, shown = cand
        if cand.startswith("/"):
            logical = normalize_path(cand)
        else:
            logical = normalize_path(_current_dir(sh) + "/" + cand)
        dest = cand if physical else logical
        if sh.os.chdir(dest) is not None:
            continue
        old = _current_dir(sh)
        new = sh.os.realpath(sh.os.getcwd()) if physical else logical
        try:
            sh.set_global("OLDPWD", old)
            sh.set_global("PWD", new)
        except ReadonlyError as e:
            raise BuiltinError("%s: is read only" % e.name, 2)
        if announce or shown:
            out(sh, new + "\n")
        return 0
    raise BuiltinError("can't cd to " + target, 2)


def _pwd(sh, args, ctx):
    physical = False
    for a in args:
        if a == "-P":
            physical = True
        elif a == "-L":
            physical = False
        else:
            raise BuiltinError("Illegal option " + a, 2)
    if physical:
        out(sh, sh.os.realpath(sh.os.getcwd()) + "\n")
    else:
        out(sh, _current_dir(sh) + "\n")
    return 0


_WHO = {"u": 0o700, "g": 0o070, "o": 0o007}
_PERM = {"r": 0o444, "w": 0o222, "x": 0o111}


def _symbolic_mask(old: int, spec: str) -> int:
    allowed = 0o777 & ~old
    for clause in spec.split(","):
        i = 0
        who = 0
        while i < len(clause) and clause[i] in "ugoa":
            who |= 0o777 if clause[i] == "a" else _WHO[clause[i]]
            i += 1
        if who == 0:
            who = 0o777
        if i >= len(clause) or clause[i] not in "+-=":
            raise BuiltinError("Illegal mode: " + spec, 1)
        while i < len(clause) and clause[i] in "+-=":
            op = clause[i]
            i += 1
            perm = 0
            while i < len(clause) and clause[i] in "rwx":
                perm |= _PERM[clause[i]]
                i += 1
            bits = perm & who
            if op == "+":
                allowed |= bits
            elif op == "-":
                allowed &= ~bits
            else:
                allowed = (allowed & ~who) | bits
        if i != len(clause):
            raise BuiltinError("Illegal mode: " + spec, 1)
    return 0o777 & ~allowed


def _umask(sh, args, ctx):
    symbolic = False
    if args and args[0] == "-S":
        symbolic = True
        args = args[1:]
    cur = sh.os.umask(None)
    if not args:
        if symbolic:
            allowed = 0o777 & ~cur
            parts = []
            for who, shift in (("u", 6), ("g", 3), ("o", 0)):
                bits = (allowed >> shift) & 7
                parts.append(who + "=" + "".join(c for c, b in (("r", 4), ("w", 2), ("x", 1))
                                                 if bits & b))
            out(sh, ",".join(parts) + "\n")
        else:
            out(sh, "%04o\n" % cur)
        return 0
    spec = args[0]
    if spec and all(c in "01234567" for c in spec):
        new = int(spec, 8) & 0o777
    elif spec and spec[0].isdigit():
        raise BuiltinError("Illegal number: " + spec, 1)
    else:
        new = _symbolic_mask(cur, spec)
    sh.os.umask(new)
    return 0


# ---------------------------------------------------------------------------
# processes


def _kill(sh, args, ctx):
    if not args:
        raise BuiltinError("usage: kill [-s sigspec | -signum | -sigspec] [pid | job]... or kill -l [exitstatus]", 2)
    sig = "TERM"
    if args[0] == "-l":
        if len(args) == 1:
            out(sh, "0\n" + "".join(SIGNAL_NAMES[n] + "\n" for n in sorted(SIGNAL_NAMES)))
            return 0
        for a in args[1:]:
            n = parse_int("kill", a)
            if n > 128:
                n -= 128
            if n in SIGNAL_NAMES:
                out(sh, SIGNAL_NAMES[n] + "\n")
            elif n == 0:
                out(sh, "0\n")
            else:
                raise BuiltinError("invalid signal number or exit status: " + a, 2)
        return 0
    if args[0] == "-s":
        if len(args) < 2:
            raise BuiltinError("-s requires an argument", 2)
        sig = args[1]
        args = args[2:]
    elif args[0].startswith("-") and len(args[0]) > 1 and args[0] != "--":
        sig = args[0][1:]
        args = args[1:]
    if args and args[0] == "--":
        args = args[1:]
    if sig == "0":
        name = "0"
    else:
        name = signal_name(sig)
        if name is None or name == "EXIT":
            raise BuiltinError("invalid signal number or name: " + sig, 2)
    if not args:
        raise BuiltinError("usage: kill [-s sigspec | -signum | -sigspec] [pid | job]...", 2)
    status = 0
    for a in args:
        if a.startswith("%"):
            pid = _job_pid(sh, a)
            if pid is None:
                warn(sh, "kill", "%s: No such job" % a)
                status = 1
                continue
        else:
            try:
                pid = parse_int("kill", a)
            except BuiltinError:
                warn(sh, "kill", "Illegal number: " + a)
                status = 1
                continue
        err = sh.os.kill(pid, name)
        if err is not None:
            warn(sh, "kill", "%d: %s" % (pid, err.message))
            status = 1
    return status


def _job_pid(sh, spec: str):
    body = spec[1:]
    if body in ("", "%", "+"):
        if not sh.jobs:
            return None
        return sh.jobs[max(sh.jobs)].pids[-1]
    if body.isdigit():
        job = sh.jobs.get(int(body))
        return None if job is None else job.pids[-1]
    return None


def _wait(sh, args, ctx):
    if not args:
        pids = [job.pids[-1] for _, job in sorted(sh.jobs.items()) if job.status is None]
        sh.set_status(0)
        cont = None
        for pid in reversed(pids):
            w = Wait(pid, True, False)
            cont = w if cont is None else Seq(w, cont)
        sh.jobs.clear()
        return 0 if cont is None else cont
    waits = []
    for a in args:
        if a.startswith("%"):
            pid = _job_pid(sh, a)
            if pid is None:
                raise BuiltinError("%s: No such job" % a, 127)
        else:
            pid = parse_int("wait", a)
        waits.append(pid)
    for jid in [j for j, job in sh.jobs.items() if job.pids[-1] in waits]:
        del sh.jobs[jid]
    cont = Wait(waits[-1], ctx.checking, True)
    for pid in reversed(waits[:-1]):
        cont = Seq(Wait(pid, True, False), cont)
    return cont


# ---------------------------------------------------------------------------
# lookup


def describe(sh, name: str, verbose: bool) -> tuple[int, str]:
    """What ``name`` resolves to, in ``type`` (verbose) or ``command -v`` form."""
    from ..evaluation import resolve_path
    if name in sh.aliases:
        v = sh.aliases[name]
        return 0, ("%s is an alias for %s" % (name, v) if verbose
                   else "alias %s=%s" % (name, single_quote(v)))
    if name in RESERVED:
        return 0, ("%s is a shell keyword" % name if verbose else name)
    if name in sh.functions:
        return 0, ("%s is a shell function" % name if verbose else name)
    kind, _ = dispatch(name)
    if kind == "special":
        return 0, ("%s is a special shell builtin" % name if verbose else name)
    if kind in ("regular", "extra"):
        return 0, ("%s is a shell builtin" % name if verbose else name)
    path = resolve_path(sh, name)
    if path is not None and ("/" not in name or sh.os.exists(path)):
        return 0, ("%s is %s" % (name, path) if verbose else path)
    return 127, ("%s: not found" % name if verbose else "")


def _type(sh, args, ctx):
    status = 0
    for name in args:
        st, text = describe(sh, name, True)
        if st:
            status = st
        out(sh, text + "\n")
    return status


def _hash(sh, args, ctx):
    from ..evaluation import resolve_path
    if not args:
        out(sh, "".join(p + "\n" for _, p in sorted(sh.hashed.items())))
        return 0
    if args[0] == "-r":
        sh.hashed.clear()
        return 0
    status = 0
    for name in args:
        if dispatch(name)[0] is not None or name in sh.functions:
            continue
        p = resolve_path(sh, name)
        if p is None:
            warn(sh, "hash", name + ": not found")
            status = 1
        else:
            sh.hashed[name] = p
    return status


def _command(sh, args, ctx):
    mode = None
    while args and args[0].startswith("-") and len(args[0]) > 1:
        a = args.pop(0)
        if a == "--":
            break
        for ch in a[1:]:
            if ch in "vV":
                mode = ch
            elif ch != "p":
                raise BuiltinError("Illegal option -" + ch, 2)
    if not args:
        return 0
    if mode is not None:
        st, text = describe(sh, args[0], mode == "V")
        if text:
            out(sh, text + "\n")
        return st
    return Run(ctx.env, args[0], tuple(args[1:]), (), CmdOpts(simple=True))


# ---------------------------------------------------------------------------
# getopts


def _getopts(sh, args, ctx):
    if len(args) < 2:
        raise BuiltinError("usage: getopts optstring var [arg...]", 2)
    optstr, var = args[0], args[1]
    argv = args[2:] if len(args) > 2 else list(sh.positional)
    raw = sh.lookup("OPTIND")
    try:
        ind = int(raw) if raw is not None else 1
    except ValueError:
        ind = 1
    off = -1
    if sh.getopts_offset is not None and sh.getopts_offset[0] == ind:
        off = sh.getopts_offset[1]
    optnext = ind - 1
    # p is (argument index, position) or None
    p = None
    if ind > 1 and off >= 0 and optnext - 1 < len(argv) and len(argv[optnext - 1]) >= off:
        p = (optnext - 1, off)
    done = False
    optarg = None  # None unsets OPTARG
    c = "?"
    if p is None or p[1] >= len(argv[p[0]]):
        if optnext >= len(argv) or not argv[optnext].startswith("-") or argv[optnext] == "-":
            p, done = None, True
        else:
            p = (optnext, 1)
            optnext += 1
            if argv[p[0]] == "--":
                p, done = None, True
    if not done:
        arg = argv[p[0]]
        c = arg[p[1]]
        p = (p[0], p[1] + 1)
        spec = optstr.find(c) if c != ":" else -1
        if spec < 0:
            if optstr.startswith(":"):
                optarg = c
            else:
                sh.os.write(2, "Illegal option -%s\n" % c)
            c = "?"
        elif spec + 1 < len(optstr) and optstr[spec + 1] == ":":
            if p[1] >= len(arg):
                if optnext >= len(argv):
                    if optstr.startswith(":"):
                        optarg = c
                        c = ":"
                    else:
                        sh.os.write(2, "No arg for -%s option\n" % c)
                        c = "?"
                    p = None
                else:
                    optarg = argv[optnext]
                    optnext += 1
                    p = None
            else:
                optarg = arg[p[1]:]
                p = None
        else:
            optarg = ""
    ind = optnext + 1
    try:
        sh.set_global("OPTIND", str(ind))
        sh.set_global(var, c)
        if optarg is None:
            sh.unset("OPTARG")
        else:
            sh.set_global("OPTARG", optarg)
    except ReadonlyError as e:
        raise BuiltinError("%s: is read only" % e.name, 2)
    sh.getopts_offset = (ind, p[1] if p is not None else -1)
    return 1 if done else 0


# ---------------------------------------------------------------------------
# read


def _read_assign(chars: list, names: list, ifs: str) -> list:
    """Split (char, escaped) pairs across ``names`` by IFS rules."""
    ws = [c for c in ifs if c in " \t\n"]

    def is_ifs(k):
        return not chars[k][1] and chars[k][0] in ifs

    def is_ws(k):
        return not chars[k][1] and chars[k][0] in ws

    def delimiter_end(k):
        # a run of IFS whitespace with at most one other IFS character
        seen_other = False
        while k < n and is_ifs(k):
            if not is_ws(k):
                if seen_other:
                    break
                seen_other = True
            k += 1
        return k

    n = len(chars)
    i = 0
    while i < n and is_ws(i):
        i += 1
    values = []
    for vi, _ in enumerate(names):
        if vi < len(names) - 1:
            start = i
            while i < n and not is_ifs(i):
                i += 1
            values.append("".join(ch for ch, _ in chars[start:i]))
            i = delimiter_end(i)
            continue
        end = n
        while end > i and is_ws(end - 1):
            end -= 1
        rest = chars[i:end]
        j = 0
        while j < len(rest) and not (not rest[j][1] and rest[j][0] in ifs):
            j += 1
        if j < len(rest):
            saved = chars, n
            chars, n = rest, len(rest)
            k = delimiter_end(j)
            chars, n = saved
            if k == len(rest):
                rest = rest[:j]
        values.append("".join(ch for ch, _ in rest))
    return values


def _read(sh, args, ctx):
    raw = False
    while args and args[0].startswith("-") and len(args[0]) > 1:
        a = args.pop(0)
        if a == "--":
            break
        for ch in a[1:]:
            if ch == "r":
                raw = True
            else:
                raise BuiltinError("Illegal option -" + ch, 2)
    if not args:
        raise BuiltinError("arg count", 2)
    for name in args:
        if not is_name(name):
            raise BuiltinError("%s: bad variable name" % name, 2)
    chars = sh.read_buffer if sh.read_buffer is not None else []
    eof = False
    while True:
        r = sh.os.read_line(0)
        if isinstance(r, Blocked):
            sh.read_buffer = chars
            return BLOCKED
        if isinstance(r, OsError):
            sh.read_buffer = None
            raise BuiltinError(r.message, 2)
        if r is EOF:
            eof = True
            break
        text = r.text
        i = 0
        cont = False
        while i < len(text):
            ch = text[i]
            if ch == "\\" and not raw:
                if i + 1 < len(text):
                    chars.append((text[i + 1], True))
                    i += 2
                    continue
                cont = r.newline
                i += 1
                continue
            chars.append((ch, False))
            i += 1
        if not r.newline:
            eof = True
            break
        if not cont:
            break
    sh.read_buffer = None
    ifs = sh.lookup("IFS")
    if ifs is None:
        ifs = " \t\n"
    values = _read_assign(chars, args, ifs)
    try:
        for name, v in zip(args, values):
            sh.set_global(name, v)
    except ReadonlyError as e:
        raise BuiltinError("%s: is read only" % e.name, 2)
    return 1 if eof else 0


TABLE = {
    "alias": _alias, "cd": _cd, "command": _command, "false": _false, "getopts": _getopts,
    "kill": _kill, "pwd": _pwd, "read": _read, "true": _true, "umask": _umask,
    "unalias": _unalias, "wait": _wait, "type": _type, "hash": _hash,
}

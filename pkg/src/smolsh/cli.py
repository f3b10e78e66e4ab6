"""Entry points: the shell, the stepper and the test harness."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from .ast import EvalLoop
from .parser import ParseSession
from .state import LONG_OPTIONS, OPTION_LETTERS, ShellState

USAGE = "usage: smolsh [-aCefmnuvxi] [-o option] [-c command_string [name [arg...]] | -s [arg...] | file [arg...]]\n"


class UsageError(Exception):
    pass


def parse_shell_args(argv: list) -> dict:
    """Split sh-style arguments into mode, options and operands."""
    opts: dict = {"c": False, "s": False, "i": False, "on": set(), "off": set()}
    i = 0
    while i < len(argv):
        a = argv[i]
        if a == "--":
            i += 1
            break
        if a == "-" or len(a) < 2 or a[0] not in "-+":
            break
        on = a[0] == "-"
        for ch in a[1:]:
            if ch == "o":
                i += 1
                if i >= len(argv) or argv[i] not in LONG_OPTIONS:
                    raise UsageError("bad -o option")
                (opts["on"] if on else opts["off"]).add(argv[i])
            elif ch in "csi" and on:
                opts[ch] = True
            elif ch in OPTION_LETTERS:
                (opts["on"] if on else opts["off"]).add(OPTION_LETTERS[ch])
            else:
                raise UsageError("illegal option %s%s" % (a[0], ch))
        i += 1
    opts["operands"] = argv[i:]
    return opts


def _init_state(osh, env: dict, pid: int) -> ShellState:
    sh = ShellState(osh, env=env, root_pid=pid)
    sh.globals.setdefault("OPTIND", "1")
    cwd = osh.getcwd()
    pwd = env.get("PWD")
    if not (pwd and pwd.startswith("/") and osh.realpath(pwd) == osh.realpath(cwd)):
        sh.globals["PWD"] = cwd
    return sh


def _attach_trace(sh, osh) -> Optional[object]:
    """With SMOLSH_TRACE=1 and fd 9 open, stream JSON step records to fd 9."""
    if sh.lookup("SMOLSH_TRACE") != "1" or not osh.fd_open(9):
        return None
    from .evaluation import Tracer
    from .ast import render_any, to_trace_json
    sh.tracer = Tracer()
    counter = [0]

    def hook(state, c) -> None:
        counter[0] += 1
        phase, rule = state.tracer.take()
        osh.write(9, to_trace_json(counter[0], phase, rule, {}, render_any(c)) + "\n")
    return hook


def shell_main(argv: Optional[list] = None, env: Optional[dict] = None) -> int:
    from .evaluation import run
    from .os_system import SystemOS, reset_host_signals, stdin_reader

    if argv is None:
        argv = [os.fsencode(a).decode("latin-1") for a in sys.argv[1:]]
    if env is None:
        env = {k.decode("latin-1"): v.decode("latin-1") for k, v in os.environb.items()}
    reset_host_signals()
    osh = SystemOS()
    try:
        opts = parse_shell_args(argv)
    except UsageError as e:
        os.write(2, ("smolsh: %s\n" % e).encode("latin-1") + USAGE.encode())
        return 2
    sh = _init_state(osh, env, os.getpid())
    sh.options |= opts["on"]
    sh.options -= opts["off"]
    operands = list(opts["operands"])
    if opts["c"]:
        if not operands:
            os.write(2, b"smolsh: -c requires an argument\n")
            return 2
        text = operands.pop(0)
        if operands:
            sh.arg0 = operands.pop(0)
        sh.positional = operands
        session = ParseSession.from_string(text)
        source = sh.arg0
    elif operands and not opts["s"]:
        path = operands.pop(0)
        sh.arg0 = path
        sh.positional = operands
        try:
            with open(path.encode("latin-1"), "rb") as f:
                text = f.read().decode("latin-1")
        except OSError as e:
            os.write(2, ("smolsh: cannot open %s: %s\n" % (path, e.strerror)).encode("latin-1"))
            return 127
        session = ParseSession.from_string(text)
        source = path
    else:
        sh.positional = operands
        session = ParseSession(reader=stdin_reader())
        source = sh.arg0
    interactive = opts["i"] or (not opts["c"] and session.reader is not None
                                and osh.isatty(0) and osh.isatty(2))
    sh.interactive = interactive
    if interactive:
        session.interactive = True
        session.prompt = lambda text: osh.write(2, text)
        for sig in ("TERM", "QUIT"):
            osh.set_signal(sig, "ignore")
    session.kind = "main"
    hook = _attach_trace(sh, osh)
    return run(sh, EvalLoop(1, session, source, interactive, True), step_hook=hook)


def main() -> None:
    sys.exit(shell_main())


# ---------------------------------------------------------------------------
# stepper


def _load_json_arg(value: Optional[str]):
    """Inline JSON (starting with "{") or a path to a JSON file."""
    if value is None:
        return None
    if value.lstrip().startswith("{"):
        return json.loads(value)
    with open(value, encoding="latin-1") as f:
        return json.load(f)


def error_envelope(source: str, message: str) -> dict:
    from .ast import trace_record
    text = "smolsh: syntax error: %s\n" % message
    return {"version": 1, "source": source,
            "steps": [trace_record(1, "eval", "ParseError", {}, message, "", text)],
            "final": {"status": 2, "stdout": "", "stderr": text}}


def stepper_main(argv: Optional[list] = None, out=None) -> int:
    from .os_symbolic import DEFAULT_FUEL, run_symbolic, trace_json
    from .parser import ParseError, parse_all

    ap = argparse.ArgumentParser(prog="smolsh-step",
                                 description="Trace a shell program in a simulated system.")
    ap.add_argument("script", nargs="?", help="script file (or use --cmd)")
    ap.add_argument("--cmd", help="program text")
    ap.add_argument("--env", action="append", default=[], metavar="NAME=VALUE")
    ap.add_argument("--fs", help="filesystem tree as JSON text or a JSON file")
    ap.add_argument("--passwd", help="user to home-directory map as JSON text or file")
    ap.add_argument("--cwd", default="/")
    ap.add_argument("--stdin", default="", help="bytes available on standard input")
    ap.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    args = ap.parse_args(argv)
    out = out or sys.stdout
    if (args.cmd is None) == (args.script is None):
        ap.error("give exactly one of --cmd or a script file")
    if args.cmd is not None:
        text, source = args.cmd, "smolsh"
    else:
        with open(args.script, "rb") as f:
            text = f.read().decode("latin-1")
        source = args.script
    env = {}
    for item in args.env:
        name, eq, value = item.partition("=")
        if not eq:
            ap.error("--env expects NAME=VALUE, got %r" % item)
        env[name] = value
    if args.fuel < 1:
        ap.error("--fuel must be positive")
    try:
        parse_all(text)
    except ParseError as e:
        out.write(json.dumps(error_envelope(text, e.message), ensure_ascii=False) + "\n")
        return 2
    trace = run_symbolic(text, env=env, fs_spec=_load_json_arg(args.fs),
                         fuel=args.fuel, passwd=_load_json_arg(args.passwd),
                         cwd=args.cwd, stdin=args.stdin, source=source)
    out.write(trace_json(trace) + "\n")
    return 0


def stepper_entry() -> None:
    sys.exit(stepper_main())


def harness_entry() -> None:
    from .harness import harness_main
    sys.exit(harness_main())


if __name__ == "__main__":  # pragma: no cover
    main()

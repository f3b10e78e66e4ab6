"""Builtin commands.

A builtin is ``fn(sh, args, ctx)`` returning an int status, a continuation
command (run with the caller's redirections restored afterwards), a
``NoRestore`` wrapper (redirections become permanent), or ``BLOCKED`` when
it needs input that is not available yet.  Errors are raised as
``BuiltinError``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional


class BuiltinError(Exception):
    def __init__(self, message: str, status: int = 1, bare: bool = False) -> None:
        super().__init__(message)
        self.message = message
        self.status = status
        self.bare = bare  # message already carries its own prefix


@dataclass(frozen=True)
class NoRestore:
    cont: Any


class _Blocked:
    def __repr__(self) -> str:
        return "BLOCKED"


BLOCKED = _Blocked()


@dataclass(frozen=True)
class Ctx:
    name: str
    checking: bool = False
    co: Any = None
    env: tuple = ()
    special: bool = False


def out(sh, text: str) -> None:
    """Write to stdout, turning a write failure into a builtin error."""
    if not text:
        return
    err = sh.os.write(1, text)
    if err is not None:
        raise BuiltinError("I/O error", 1)


def warn(sh, name: str, msg: str) -> None:
    sh.os.write(2, "smolsh: %s: %s\n" % (name, msg))


def single_quote(s: str) -> str:
    return "'" + s.replace("'", "'\"'\"'") + "'"


def parse_int(name: str, s: str) -> int:
    t = s
    if t.startswith("-") or t.startswith("+"):
        t = t[1:]
    if not t or not t.isdigit() or not t.isascii():
        raise BuiltinError("Illegal number: " + s, 2)
    return int(s)


SPECIAL: dict[str, Callable] = {}
REGULAR: dict[str, Callable] = {}
EXTRA: dict[str, Callable] = {}
UNSUPPORTED = frozenset(["bg", "fg", "jobs", "fc", "newgrp"])


def dispatch(name: str) -> tuple[Optional[str], Optional[Callable]]:
    """Classify ``name``: ("special"|"regular"|"extra"|"unsupported"|None, fn)."""
    fn = SPECIAL.get(name)
    if fn is not None:
        return "special", fn
    fn = REGULAR.get(name)
    if fn is not None:
        return "regular", fn
    fn = EXTRA.get(name)
    if fn is not None:
        return "extra", fn
    if name in UNSUPPORTED:
        return "unsupported", None
    return None, None


from . import control, regular, printf, testcmd  # noqa: E402,F401

SPECIAL.update(control.TABLE)
REGULAR.update(regular.TABLE)
EXTRA.update(printf.TABLE)
EXTRA.update(testcmd.TABLE)

"""The shell state: variables, scopes, options, traps, jobs and registers.

The state object is mutated in place by the evaluator; ``copy`` produces an
independent snapshot (used for subshells and for trace diffs).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

OPTION_LETTERS = {
    "a": "allexport",
    "C": "noclobber",
    "e": "errexit",
    "f": "noglob",
    "m": "monitor",
    "n": "noexec",
    "u": "nounset",
    "v": "verbose",
    "x": "xtrace",
}
LETTER_OF = {v: k for k, v in OPTION_LETTERS.items()}
LONG_OPTIONS = sorted(list(OPTION_LETTERS.values()) + ["ignoreeof", "nonlexicalctrl"])

SPECIAL_PARAMS = frozenset("?$!#-0*@")


class ReadonlyError(Exception):
    def __init__(self, name: str) -> None:
        super().__init__(name + ": is read only")
        self.name = name


class LocalVar:
    __slots__ = ("value", "readonly", "exported")

    def __init__(self, value: Optional[str], readonly: bool = False, exported: bool = False):
        self.value = value
        self.readonly = readonly
        self.exported = exported

    def copy(self) -> "LocalVar":
        return LocalVar(self.value, self.readonly, self.exported)

    def __repr__(self) -> str:
        return "LocalVar(%r, ro=%s, ex=%s)" % (self.value, self.readonly, self.exported)


@dataclass
class JobInfo:
    id: int
    pids: list
    leader: int
    command: Any
    status: Optional[int] = None  # None while running


def clamp_status(n: int) -> int:
    return n & 0xFF


class ShellState:
    def __init__(self, os_handle=None, env: Optional[dict] = None, root_pid: int = 0) -> None:
        self.os = os_handle
        self.root_pid = root_pid
        self.outermost = True
        self.interactive = False
        self.options: set[str] = set()
        self.jobs: dict[int, JobInfo] = {}
        self.traps: dict[str, str] = {}
        self.supershell_traps: Optional[dict[str, str]] = None
        self.traps_modified = False
        self.globals: dict[str, str] = {}
        self.readonly: set[str] = set()
        self.exported: set[str] = set()
        self.positional: list[str] = []
        self.arg0 = "smolsh"
        self.locals: list[dict[str, LocalVar]] = []
        self.functions: dict[str, Any] = {}
        self.aliases: dict[str, str] = {}
        self.hashed: dict[str, str] = {}
        self.last_bg_pid: Optional[int] = None
        self.last_status = 0
        self.loop_depth = 0
        self.func_depth = 0
        self.getopts_offset: Optional[tuple] = None  # (OPTIND, offset in argument)
        self.read_buffer: Optional[list] = None  # partial line kept while read is blocked
        self.lineno = 0
        self.tracer = None
        if env:
            for k, v in env.items():
                self.globals[k] = v
                self.exported.add(k)
        # an inherited IFS is never trusted
        self.globals["IFS"] = " \t\n"
        for k, v in (("PS1", "$ "), ("PS2", "> "), ("PS4", "+ ")):
            self.globals.setdefault(k, v)

    @property
    def cwd(self) -> str:
        return self.os.getcwd() if self.os is not None else "/"

    # ------------------------------------------------------------------
    # copies

    def copy(self) -> "ShellState":
        new = ShellState.__new__(ShellState)
        new.__dict__.update(self.__dict__)
        new.options = set(self.options)
        new.jobs = dict(self.jobs)
        new.traps = dict(self.traps)
        new.supershell_traps = None if self.supershell_traps is None else dict(self.supershell_traps)
        new.globals = dict(self.globals)
        new.readonly = set(self.readonly)
        new.exported = set(self.exported)
        new.positional = list(self.positional)
        new.locals = [{k: v.copy() for k, v in scope.items()} for scope in self.locals]
        new.functions = dict(self.functions)
        new.aliases = dict(self.aliases)
        new.hashed = dict(self.hashed)
        return new

    def fork_child(self, os_handle=None) -> "ShellState":
        """State for a subshell: not outermost, traps reset, parent traps kept."""
        child = self.copy()
        if os_handle is not None:
            child.os = os_handle
        child.outermost = False
        child.supershell_traps = dict(self.traps)
        child.traps = {k: v for k, v in self.traps.items() if v == "" and k != "EXIT"}
        child.traps_modified = False
        child.jobs = {}
        child.tracer = None
        return child

    # ------------------------------------------------------------------
    # lookup

    def special_param(self, name: str) -> Optional[str]:
        if name == "?":
            return str(self.last_status)
        if name == "$":
            return str(self.root_pid)
        if name == "!":
            return None if self.last_bg_pid is None else str(self.last_bg_pid)
        if name == "#":
            return str(len(self.positional))
        if name == "-":
            return self.option_letters()
        if name == "0":
            return self.arg0
        if name in ("*", "@"):
            ifs = self.lookup("IFS")
            sep = " " if ifs is None else ifs[:1]
            return sep.join(self.positional)
        raise KeyError(name)

    def option_letters(self) -> str:
        letters = [LETTER_OF[o] for o in self.options if o in LETTER_OF]
        if self.interactive:
            letters.append("i")
        return "".join(sorted(letters))

    def lookup(self, name: str) -> Optional[str]:
        if name in SPECIAL_PARAMS:
            return self.special_param(name)
        if name.isdigit():
            i = int(name)
            if i == 0:
                return self.arg0
            return self.positional[i - 1] if i <= len(self.positional) else None
        for scope in reversed(self.locals):
            v = scope.get(name)
            if v is not None:
                return v.value
        return self.globals.get(name)

    def is_set(self, name: str) -> bool:
        return self.lookup(name) is not None

    def find_local(self, name: str) -> Optional[LocalVar]:
        for scope in reversed(self.locals):
            v = scope.get(name)
            if v is not None:
                return v
        return None

    def is_readonly(self, name: str) -> bool:
        v = self.find_local(name)
        if v is not None:
            return v.readonly
        return name in self.readonly

    # ------------------------------------------------------------------
    # assignment

    def set_global(self, name: str, value: Optional[str]) -> None:
        v = self.find_local(name)
        if v is not None:
            if v.readonly:
                raise ReadonlyError(name)
            v.value = value
            if "allexport" in self.options:
                v.exported = True
            return
        if name in self.readonly:
            raise ReadonlyError(name)
        if value is None:
            self.globals.pop(name, None)
        else:
            self.globals[name] = value
        if "allexport" in self.options:
            self.exported.add(name)

    def set_local(self, name: str, value: Optional[str], exported: bool = False) -> None:
        if not self.locals:
            raise RuntimeError("set_local with no scope")
        if self.is_readonly(name) or any(name in s and s[name].readonly for s in self.locals):
            raise ReadonlyError(name)
        scope = self.locals[-1]
        old = scope.get(name)
        if old is not None:
            old.value = value
            old.exported = old.exported or exported or "allexport" in self.options
        else:
            scope[name] = LocalVar(value, False, exported or "allexport" in self.options)

    def unset(self, name: str) -> None:
        v = self.find_local(name)
        if v is not None:
            if v.readonly:
                raise ReadonlyError(name)
            v.value = None
            return
        if name in self.readonly:
            raise ReadonlyError(name)
        self.globals.pop(name, None)
        self.exported.discard(name)

    def set_readonly(self, name: str) -> None:
        v = self.find_local(name)
        if v is not None:
            v.readonly = True
        else:
            self.readonly.add(name)

    def export(self, name: str) -> None:
        v = self.find_local(name)
        if v is not None:
            v.exported = True
        else:
            self.exported.add(name)

    def is_exported(self, name: str) -> bool:
        v = self.find_local(name)
        if v is not None:
            return v.exported
        return name in self.exported

    def push_scope(self, bindings: Optional[dict] = None, exported: bool = False) -> None:
        scope: dict[str, LocalVar] = {}
        for k, val in (bindings or {}).items():
            scope[k] = LocalVar(val, False, exported)
        self.locals.append(scope)

    def pop_scope(self) -> dict[str, LocalVar]:
        if not self.locals:
            raise RuntimeError("pop_scope on empty scope stack")
        return self.locals.pop()

    # ------------------------------------------------------------------
    # views

    def visible_vars(self) -> dict[str, str]:
        out = dict(self.globals)
        for scope in self.locals:
            for k, v in scope.items():
                if v.value is None:
                    out.pop(k, None)
                else:
                    out[k] = v.value
        return out

    def export_env(self, extra: tuple = ()) -> dict[str, str]:
        env = {k: v for k, v in self.globals.items() if k in self.exported}
        for scope in self.locals:
            for k, v in scope.items():
                if v.exported and v.value is not None:
                    env[k] = v.value
                elif k in env and v.value is None:
                    del env[k]
        for k, v in extra:
            env[k] = v
        return env

    def set_status(self, n: int) -> None:
        self.last_status = clamp_status(n)

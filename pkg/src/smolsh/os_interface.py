"""The abstract catalog of system effects used by the evaluator.

Every effect the semantics performs goes through one of these calls.  Two
instances exist: ``os_system.SystemOS`` (real syscalls) and
``os_symbolic.ProcOS`` (a simulated process inside ``SymbolicSystem``).
Failures are returned as ``OsError`` values rather than raised.
"""

from __future__ import annotations

import signal as _signal
from dataclasses import dataclass
from typing import Optional, Union

SIGNALS = {
    "HUP": 1, "INT": 2, "QUIT": 3, "ILL": 4, "TRAP": 5, "ABRT": 6, "BUS": 7,
    "FPE": 8, "KILL": 9, "USR1": 10, "SEGV": 11, "USR2": 12, "PIPE": 13,
    "ALRM": 14, "TERM": 15, "CHLD": 17, "CONT": 18, "STOP": 19, "TSTP": 20,
    "TTIN": 21, "TTOU": 22,
}
# prefer the host's numbering where it differs
for _name in list(SIGNALS):
    _num = getattr(_signal, "SIG" + _name, None)
    if _num is not None:
        SIGNALS[_name] = int(_num)
SIGNAL_NAMES = {v: k for k, v in SIGNALS.items()}
UNCATCHABLE = {"KILL", "STOP"}


def signal_name(spec: str) -> Optional[str]:
    """Normalize a signal given by name, SIG-name or number; "EXIT" for 0."""
    s = spec.upper()
    if s.startswith("SIG"):
        s = s[3:]
    if s in ("0", "EXIT"):
        return "EXIT"
    if s.isdigit():
        return SIGNAL_NAMES.get(int(s))
    return s if s in SIGNALS else None


@dataclass(frozen=True)
class OsError:
    message: str
    errno: int = 0


@dataclass(frozen=True)
class Line:
    text: str
    newline: bool = True  # False when the line was ended by EOF


@dataclass(frozen=True)
class EofResult:
    pass


EOF = EofResult()


@dataclass(frozen=True)
class Blocked:
    writer: int


@dataclass(frozen=True)
class StatInfo:
    kind: str  # reg dir link chr blk fifo sock
    size: int = 0
    mode: int = 0
    mtime: float = 0.0
    uid: int = 0
    gid: int = 0


ReadLineResult = Union[Line, EofResult, Blocked, OsError]

# setup actions applied in a freshly forked child before it runs
#   ("dup2", src, dst)   ("close", fd)   ("devnull", fd)


class OsInterface:
    """Abstract base.  Methods are grouped as process, fd, fs and prompt calls."""

    symbolic = False

    # process calls ------------------------------------------------------
    def fork_shell(self, sh, cmd, setup: list, checking: bool) -> Union[int, OsError]:
        raise NotImplementedError

    def exec_image(self, path: str, argv: list, env: dict) -> OsError:
        raise NotImplementedError

    def wait(self, pid: int) -> Union[int, Blocked]:
        raise NotImplementedError

    def getpid(self) -> int:
        raise NotImplementedError

    def kill(self, pid: int, sig: str) -> Optional[OsError]:
        raise NotImplementedError

    def pending_signal(self) -> Optional[str]:
        raise NotImplementedError

    def set_signal(self, sig: str, action: str) -> None:
        """action: "default" | "ignore" | "catch"."""
        raise NotImplementedError

    def times(self) -> tuple:
        raise NotImplementedError

    # fd calls -----------------------------------------------------------
    def pipe(self) -> Union[tuple, OsError]:
        raise NotImplementedError

    def close(self, fd: int) -> Optional[OsError]:
        raise NotImplementedError

    def fd_open(self, fd: int) -> bool:
        raise NotImplementedError

    def read_chunk(self, fd: int, n: int = 4096):
        raise NotImplementedError

    def read_all(self, fd: int) -> Union[str, OsError]:
        raise NotImplementedError

    def read_line(self, fd: int) -> ReadLineResult:
        raise NotImplementedError

    def write(self, fd: int, data: str) -> Optional[OsError]:
        raise NotImplementedError

    def file_redir(self, mode: str, path: str, noclobber: bool) -> Union[int, OsError]:
        raise NotImplementedError

    def close_and_save(self, fd: int) -> Union[Optional[int], OsError]:
        """Move ``fd`` to a fresh fd >= 10; None if ``fd`` was not open."""
        raise NotImplementedError

    def renumber(self, close_orig: bool, orig: int, wanted: int) -> Optional[OsError]:
        raise NotImplementedError

    def heredoc(self, body: str) -> Union[int, OsError]:
        raise NotImplementedError

    def isatty(self, fd: int) -> bool:
        return False

    # fs calls -----------------------------------------------------------
    def exists(self, path: str) -> bool:
        raise NotImplementedError

    def is_executable(self, path: str) -> bool:
        raise NotImplementedError

    def is_dir(self, path: str) -> bool:
        st = self.stat(path)
        return st is not None and st.kind == "dir"

    def listdir(self, path: str) -> Optional[list]:
        raise NotImplementedError

    def stat(self, path: str, follow: bool = True) -> Optional[StatInfo]:
        raise NotImplementedError

    def access(self, path: str, mode: str) -> bool:
        """mode is one of "r", "w", "x"."""
        raise NotImplementedError

    def getcwd(self) -> str:
        raise NotImplementedError

    def chdir(self, path: str) -> Optional[OsError]:
        raise NotImplementedError

    def umask(self, mask: Optional[int] = None) -> int:
        raise NotImplementedError

    def home_dir(self, user: str) -> Optional[str]:
        raise NotImplementedError

    def realpath(self, path: str) -> str:
        return path

    # prompt calls -------------------------------------------------------
    def set_ps1(self, text: str) -> None:
        self.write(2, text)

    def set_ps2(self, text: str) -> None:
        self.write(2, text)

"""The OS interface backed by real system calls."""

from __future__ import annotations

import errno
import fcntl
import os
import pwd
import signal
import stat as _stat
import traceback
from collections import deque
from typing import Optional, Union

from .os_interface import (
    EOF, SIGNALS, UNCATCHABLE, Line, OsError, OsInterface, StatInfo,
)

PIPE_CAPACITY = 65536


def _b(s: str) -> bytes:
    return s.encode("latin-1")


def _s(b: bytes) -> str:
    return b.decode("latin-1")


def _err(e: OSError) -> OsError:
    return OsError(e.strerror or str(e), e.errno or 0)


def decode_status(st: int) -> int:
    if os.WIFEXITED(st):
        return os.WEXITSTATUS(st)
    if os.WIFSIGNALED(st):
        return 128 + os.WTERMSIG(st)
    return 128 + os.WSTOPSIG(st)


_KINDS = [(_stat.S_ISREG, "reg"), (_stat.S_ISDIR, "dir"), (_stat.S_ISLNK, "link"),
          (_stat.S_ISCHR, "chr"), (_stat.S_ISBLK, "blk"), (_stat.S_ISFIFO, "fifo"),
          (_stat.S_ISSOCK, "sock")]


class SystemOS(OsInterface):
    def __init__(self) -> None:
        self.pending: deque = deque()
        self.dispositions: dict[str, str] = {}
        self.reaped: dict[int, int] = {}
        self.helpers: list[int] = []  # heredoc writer processes

    # process calls ------------------------------------------------------

    def fork_shell(self, sh, cmd, setup: list, checking: bool) -> Union[int, OsError]:
        try:
            pid = os.fork()
        except OSError as e:
            return _err(e)
        if pid:
            return pid
        # child
        code = 2
        try:
            self.pending.clear()
            self.reaped = {}
            for name, action in list(self.dispositions.items()):
                if action == "catch":
                    self.set_signal(name, "default")
            self.apply_setup(setup)
            child = sh.fork_child()
            from .evaluation import run
            code = run(child, cmd, checking)
        except BaseException:
            try:
                os.write(2, _b("smolsh: internal error in subshell\n"
                               + traceback.format_exc()))
            except OSError:
                pass
        finally:
            os._exit(code & 0xFF)

    def apply_setup(self, setup: list) -> None:
        for action in setup:
            if action[0] == "dup2":
                os.dup2(action[1], action[2])
            elif action[0] == "close":
                try:
                    os.close(action[1])
                except OSError:
                    pass
            elif action[0] == "devnull":
                fd = os.open("/dev/null", os.O_RDONLY)
                if fd != action[1]:
                    os.dup2(fd, action[1])
                    os.close(fd)
                else:
                    os.set_inheritable(fd, True)

    def exec_image(self, path: str, argv: list, env: dict) -> OsError:
        try:
            os.execve(_b(path), [_b(a) for a in argv], {_b(k): _b(v) for k, v in env.items()})
        except OSError as e:
            return _err(e)
        return OsError("exec returned", 0)  # pragma: no cover

    def wait(self, pid: int) -> int:
        if pid in self.reaped:
            return self.reaped.pop(pid)
        while True:
            try:
                _, st = os.waitpid(pid, 0)
                return decode_status(st)
            except ChildProcessError:
                return 127
            except InterruptedError:  # pragma: no cover
                continue

    def getpid(self) -> int:
        return os.getpid()

    def kill(self, pid: int, sig: str) -> Optional[OsError]:
        num = 0 if sig == "0" else SIGNALS[sig]
        try:
            os.kill(pid, num)
        except OSError as e:
            return _err(e)
        return None

    def pending_signal(self) -> Optional[str]:
        if self.pending:
            return self.pending.popleft()
        return None

    def _catch(self, num, frame) -> None:
        name = signal.Signals(num).name[3:]
        self.pending.append(name)

    def set_signal(self, sig: str, action: str) -> None:
        if sig in UNCATCHABLE or sig not in SIGNALS:
            return
        num = SIGNALS[sig]
        handler = {"default": signal.SIG_DFL, "ignore": signal.SIG_IGN}.get(action, self._catch)
        try:
            signal.signal(num, handler)
        except (OSError, ValueError):
            return
        if action == "default":
            self.dispositions.pop(sig, None)
        else:
            self.dispositions[sig] = action

    def times(self) -> tuple:
        t = os.times()
        return (t.user, t.system, t.children_user, t.children_system)

    # fd calls -----------------------------------------------------------

    def pipe(self) -> Union[tuple, OsError]:
        try:
            return os.pipe()
        except OSError as e:
            return _err(e)

    def close(self, fd: int) -> Optional[OsError]:
        try:
            os.close(fd)
        except OSError as e:
            return _err(e)
        return None

    def fd_open(self, fd: int) -> bool:
        try:
            fcntl.fcntl(fd, fcntl.F_GETFD)
            return True
        except OSError:
            return False

    def read_chunk(self, fd: int, n: int = 4096):
        try:
            return _s(os.read(fd, n))
        except OSError as e:
            return _err(e)

    def read_all(self, fd: int) -> Union[str, OsError]:
        chunks = []
        try:
            while True:
                b = os.read(fd, 65536)
                if not b:
                    break
                chunks.append(b)
        except OSError as e:
            return _err(e)
        return _s(b"".join(chunks))

    def read_line(self, fd: int):
        buf = bytearray()
        try:
            while True:
                b = os.read(fd, 1)
                if not b:
                    if not buf:
                        return EOF
                    return Line(_s(bytes(buf)), False)
                if b == b"\n":
                    return Line(_s(bytes(buf)), True)
                buf += b
        except OSError as e:
            return _err(e)

    def write(self, fd: int, data: str) -> Optional[OsError]:
        view = memoryview(_b(data))
        try:
            while view:
                n = os.write(fd, view)
                view = view[n:]
        except OSError as e:
            return _err(e)
        return None

    def file_redir(self, mode: str, path: str, noclobber: bool) -> Union[int, OsError]:
        flags = {
            "<": os.O_RDONLY,
            ">": os.O_WRONLY | os.O_CREAT | os.O_TRUNC,
            ">|": os.O_WRONLY | os.O_CREAT | os.O_TRUNC,
            ">>": os.O_WRONLY | os.O_CREAT | os.O_APPEND,
            "<>": os.O_RDWR | os.O_CREAT,
        }[mode]
        p = _b(path)
        try:
            if noclobber:
                try:
                    st = os.stat(p)
                    if _stat.S_ISREG(st.st_mode):
                        return OsError("File exists", errno.EEXIST)
                    flags &= ~os.O_TRUNC
                except FileNotFoundError:
                    flags |= os.O_EXCL
            fd = os.open(p, flags, 0o666)
        except OSError as e:
            return _err(e)
        os.set_inheritable(fd, True)
        return fd

    def close_and_save(self, fd: int) -> Union[Optional[int], OsError]:
        try:
            saved = fcntl.fcntl(fd, fcntl.F_DUPFD_CLOEXEC, 10)
        except OSError as e:
            if e.errno == errno.EBADF:
                return None
            return _err(e)
        os.close(fd)
        return saved

    def renumber(self, close_orig: bool, orig: int, wanted: int) -> Optional[OsError]:
        if orig == wanted:
            return None
        try:
            os.dup2(orig, wanted)
            if close_orig:
                os.close(orig)
        except OSError as e:
            return _err(e)
        return None

    def heredoc(self, body: str) -> Union[int, OsError]:
        data = _b(body)
        try:
            r, w = os.pipe()
        except OSError as e:
            return _err(e)
        if len(data) <= PIPE_CAPACITY:
            try:
                os.write(w, data)
            finally:
                os.close(w)
        else:
            pid = os.fork()
            if pid == 0:
                code = 0
                try:
                    os.close(r)
                    view = memoryview(data)
                    while view:
                        view = view[os.write(w, view):]
                except BaseException:
                    code = 1
                finally:
                    os._exit(code)
            os.close(w)
            self.helpers.append(pid)
        self._reap_helpers()
        os.set_inheritable(r, True)
        return r

    def _reap_helpers(self) -> None:
        left = []
        for pid in self.helpers:
            try:
                done, _ = os.waitpid(pid, os.WNOHANG)
            except ChildProcessError:
                continue
            if not done:
                left.append(pid)
        self.helpers = left

    def isatty(self, fd: int) -> bool:
        try:
            return os.isatty(fd)
        except OSError:
            return False

    # fs calls -----------------------------------------------------------

    def exists(self, path: str) -> bool:
        return os.path.exists(_b(path))

    def is_executable(self, path: str) -> bool:
        p = _b(path)
        return os.path.isfile(p) and os.access(p, os.X_OK)

    def listdir(self, path: str) -> Optional[list]:
        try:
            return [_s(n) for n in os.listdir(_b(path))]
        except OSError:
            return None

    def stat(self, path: str, follow: bool = True) -> Optional[StatInfo]:
        try:
            st = os.stat(_b(path)) if follow else os.lstat(_b(path))
        except (OSError, ValueError):
            return None
        kind = "reg"
        for test, name in _KINDS:
            if test(st.st_mode):
                kind = name
                break
        return StatInfo(kind, st.st_size, _stat.S_IMODE(st.st_mode), st.st_mtime,
                        st.st_uid, st.st_gid)

    def access(self, path: str, mode: str) -> bool:
        return os.access(_b(path), {"r": os.R_OK, "w": os.W_OK, "x": os.X_OK}[mode])

    def getcwd(self) -> str:
        try:
            return _s(os.getcwdb())
        except OSError:
            return "."

    def chdir(self, path: str) -> Optional[OsError]:
        try:
            os.chdir(_b(path))
        except OSError as e:
            return _err(e)
        return None

    def umask(self, mask: Optional[int] = None) -> int:
        if mask is None:
            old = os.umask(0)
            os.umask(old)
            return old
        return os.umask(mask)

    def home_dir(self, user: str) -> Optional[str]:
        try:
            return pwd.getpwnam(user).pw_dir
        except (KeyError, UnicodeError):
            return None

    def realpath(self, path: str) -> str:
        return _s(os.path.realpath(_b(path)))


def reset_host_signals() -> None:
    """Undo the interpreter's own signal setup so children see defaults."""
    for name in ("PIPE", "INT", "XFSZ"):
        num = getattr(signal, "SIG" + name, None)
        if num is not None:
            try:
                signal.signal(num, signal.SIG_DFL)
            except (OSError, ValueError):
                pass


def stdin_reader():
    """Read one line from fd 0 a byte at a time (leaving the rest for children)."""
    def read() -> Optional[str]:
        buf = bytearray()
        while True:
            try:
                b = os.read(0, 1)
            except OSError:
                b = b""
            if not b:
                return _s(bytes(buf)) if buf else None
            buf += b
            if b == b"\n":
                return _s(bytes(buf))
    return read


__all__ = ["SystemOS", "decode_status", "reset_host_signals", "stdin_reader"]

"""A simulated OS: symbolic processes, FIFO pipes, a synthetic filesystem and
a deterministic demand-driven scheduler bounded by fuel.

``SymbolicSystem`` owns every simulated process.  Each process sees the
system through its own ``ProcOS`` handle.  When a step would block (waiting
on a pid, reading a pipe whose writers are still alive) the handle returns
``Blocked`` and records the demand; the scheduler then steps the process
that can make progress.
"""

from __future__ import annotations

import errno
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Optional, Union

from .os_interface import (
    EOF, SIGNALS, UNCATCHABLE, Blocked, Line, OsError, OsInterface, StatInfo,
)

DEFAULT_FUEL = 5000
READ_BATCH = 10
DEFAULT_PATH = "/usr/local/bin:/usr/bin:/bin"
# signals whose default action does nothing
_DEFAULT_IGNORED = {"CHLD", "CONT", "URG", "WINCH"}
# job-control signals are accepted but have no effect here
_NO_EFFECT = {"STOP", "TSTP", "TTIN", "TTOU", "CONT"}
_UTILITY_DIRS = ("/bin", "/usr/bin")


# ---------------------------------------------------------------------------
# filesystem


class Node:
    pass


@dataclass(eq=False)
class File(Node):
    content: str = ""
    mode: int = 0o644


@dataclass(eq=False)
class Dir(Node):
    entries: dict = field(default_factory=dict)
    mode: int = 0o755


@dataclass(eq=False)
class Link(Node):
    target: str = ""
    mode: int = 0o777


def build_fs(spec) -> Dir:
    """Build a tree from ``{"dir": {...}}`` / ``{"file": text}`` / ``{"link": target}``.

    A file node may carry ``"mode"`` as an octal string (e.g. "755").
    """
    if spec is None:
        spec = {"dir": {}}
    node = _build_node(spec)
    if not isinstance(node, Dir):
        raise ValueError("filesystem root must be a directory")
    return node


def _build_node(spec) -> Node:
    if not isinstance(spec, dict) or len([k for k in spec if k != "mode"]) != 1:
        raise ValueError("bad filesystem node: %r" % (spec,))
    mode = spec.get("mode")
    mode = int(mode, 8) if isinstance(mode, str) else mode
    if "dir" in spec:
        d = Dir({name: _build_node(sub) for name, sub in spec["dir"].items()})
        if mode is not None:
            d.mode = mode
        return d
    if "file" in spec:
        return File(spec["file"], 0o644 if mode is None else mode)
    if "link" in spec:
        return Link(spec["link"])
    raise ValueError("bad filesystem node: %r" % (spec,))


def _join(cwd: str, path: str) -> str:
    if path.startswith("/"):
        return path
    return cwd.rstrip("/") + "/" + path


# ---------------------------------------------------------------------------
# open files


@dataclass(eq=False)
class Pipe:
    pid: int  # pipe id
    buf: str = ""
    written: int = 0
    read: int = 0


@dataclass(eq=False)
class PipeEnd:
    pipe: Pipe
    writing: bool


@dataclass(eq=False)
class OpenFile:
    node: File
    readable: bool
    writable: bool
    append: bool
    offset: int = 0


@dataclass(eq=False)
class Console:
    name: str  # "stdout" | "stderr"


@dataclass(eq=False)
class NullDev:
    pass


FdEntry = Union[PipeEnd, OpenFile, Console, NullDev]


class _Killed(BaseException):
    """Unwinds the running step of a process that was just killed."""


@dataclass(eq=False)
class Proc:
    pid: int
    parent: int
    sh: Any
    cmd: Any
    checking: bool
    fds: dict
    cwd: str
    umask: int
    dispositions: dict = field(default_factory=dict)
    signals: deque = field(default_factory=deque)
    state: str = "running"  # running | stopped | zombie
    status: int = 0
    reaped: bool = False
    demand: Optional[tuple] = None
    exit_trap_done: bool = False

    @property
    def live(self) -> bool:
        return self.state != "zombie"


# ---------------------------------------------------------------------------
# per-process handle


class ProcOS(OsInterface):
    symbolic = True

    def __init__(self, system: "SymbolicSystem", pid: int) -> None:
        self.system = system
        self.pid = pid

    @property
    def proc(self) -> Proc:
        return self.system.procs[self.pid]

    # process calls ------------------------------------------------------

    def fork_shell(self, sh, cmd, setup: list, checking: bool) -> Union[int, OsError]:
        return self.system.spawn(self.proc, sh, cmd, setup, checking)

    def exec_image(self, path: str, argv: list, env: dict):
        return self.system.exec_image(self.proc, path, argv, env)

    def wait(self, pid: int):
        sysm = self.system
        target = sysm.procs.get(pid)
        if target is None or target.reaped:
            return 127
        if target.live:
            self.proc.demand = ("wait", pid, None)
            return Blocked(pid)
        target.reaped = True
        return target.status

    def getpid(self) -> int:
        return self.pid

    def kill(self, pid: int, sig: str) -> Optional[OsError]:
        target = self.system.procs.get(pid)
        if target is None or not target.live:
            return OsError("No such process", errno.ESRCH)
        if sig != "0":
            self.system.deliver(target, sig, self.pid)
        return None

    def pending_signal(self) -> Optional[str]:
        q = self.proc.signals
        return q.popleft() if q else None

    def set_signal(self, sig: str, action: str) -> None:
        if sig in UNCATCHABLE or sig not in SIGNALS:
            return
        if action == "default":
            self.proc.dispositions.pop(sig, None)
        else:
            self.proc.dispositions[sig] = action

    def times(self) -> tuple:
        return (0.0, 0.0, 0.0, 0.0)

    # fd calls -----------------------------------------------------------

    def _entry(self, fd: int) -> Optional[FdEntry]:
        return self.proc.fds.get(fd)

    def _alloc(self, entry: FdEntry, lowest: int = 0) -> int:
        fds = self.proc.fds
        fd = lowest
        while fd in fds:
            fd += 1
        fds[fd] = entry
        return fd

    def pipe(self) -> Union[tuple, OsError]:
        p = self.system.new_pipe()
        r = self._alloc(PipeEnd(p, False))
        w = self._alloc(PipeEnd(p, True))
        return (r, w)

    def close(self, fd: int) -> Optional[OsError]:
        if self.proc.fds.pop(fd, None) is None:
            return OsError("Bad file descriptor", errno.EBADF)
        return None

    def fd_open(self, fd: int) -> bool:
        return fd in self.proc.fds

    def _readable(self, fd: int):
        e = self._entry(fd)
        if e is None or isinstance(e, Console) or (isinstance(e, PipeEnd) and e.writing) \
                or (isinstance(e, OpenFile) and not e.readable):
            return OsError("Bad file descriptor", errno.EBADF)
        return e

    def _pipe_blocked(self, e: PipeEnd, need_line: bool):
        """Blocked(writer) if the read must wait for a live writer, else None."""
        if need_line and "\n" in e.pipe.buf:
            return None
        writers = self.system.writers(e.pipe)
        if not writers:
            return None
        others = [w for w in writers if w != self.pid]
        writer = others[0] if others else writers[0]
        self.proc.demand = ("read", writer, e.pipe)
        return Blocked(writer)

    def read_chunk(self, fd: int, n: int = 4096):
        e = self._readable(fd)
        if isinstance(e, OsError):
            return e
        if isinstance(e, NullDev):
            return ""
        if isinstance(e, PipeEnd):
            if not e.pipe.buf:
                b = self._pipe_blocked(e, False)
                if b is not None:
                    return b
            data, e.pipe.buf = e.pipe.buf[:n], e.pipe.buf[n:]
            e.pipe.read += len(data)
            return data
        data = e.node.content[e.offset:e.offset + n]
        e.offset += len(data)
        return data

    def read_all(self, fd: int):
        e = self._readable(fd)
        if isinstance(e, OsError):
            return e
        if isinstance(e, NullDev):
            return ""
        if isinstance(e, PipeEnd):
            b = self._pipe_blocked(e, False)
            if b is not None:
                return b
            data, e.pipe.buf = e.pipe.buf, ""
            e.pipe.read += len(data)
            return data
        data = e.node.content[e.offset:]
        e.offset += len(data)
        return data

    def read_line(self, fd: int):
        e = self._readable(fd)
        if isinstance(e, OsError):
            return e
        if isinstance(e, NullDev):
            return EOF
        if isinstance(e, PipeEnd):
            b = self._pipe_blocked(e, True)
            if b is not None:
                return b
            buf = e.pipe.buf
            if not buf:
                return EOF
            i = buf.find("\n")
            if i < 0:
                e.pipe.buf = ""
                e.pipe.read += len(buf)
                return Line(buf, False)
            e.pipe.buf = buf[i + 1:]
            e.pipe.read += i + 1
            return Line(buf[:i], True)
        content = e.node.content
        if e.offset >= len(content):
            return EOF
        i = content.find("\n", e.offset)
        if i < 0:
            text = content[e.offset:]
            e.offset = len(content)
            return Line(text, False)
        text = content[e.offset:i]
        e.offset = i + 1
        return Line(text, True)

    def write(self, fd: int, data: str) -> Optional[OsError]:
        e = self._entry(fd)
        if e is None or (isinstance(e, PipeEnd) and not e.writing) \
                or (isinstance(e, OpenFile) and not e.writable):
            return OsError("Bad file descriptor", errno.EBADF)
        if isinstance(e, NullDev):
            return None
        if isinstance(e, Console):
            self.system.console_write(e.name, data, self.pid)
            return None
        if isinstance(e, PipeEnd):
            if not self.system.readers(e.pipe):
                self.system.deliver(self.proc, "PIPE", self.pid)
                return OsError("Broken pipe", errno.EPIPE)
            e.pipe.buf += data
            e.pipe.written += len(data)
            return None
        node = e.node
        off = len(node.content) if e.append else e.offset
        if off > len(node.content):
            node.content += "\0" * (off - len(node.content))
        node.content = node.content[:off] + data + node.content[off + len(data):]
        e.offset = off + len(data)
        return None

    def file_redir(self, mode: str, path: str, noclobber: bool) -> Union[int, OsError]:
        if not path:
            return OsError("No such file or directory", errno.ENOENT)
        full = _join(self.proc.cwd, path)
        if full == "/dev/null":
            return self._alloc(NullDev())
        sysm = self.system
        node = sysm.lookup(full)
        if mode == "<":
            if node is None:
                return OsError("No such file or directory", errno.ENOENT)
            if isinstance(node, Dir):
                return self._alloc(OpenFile(File(""), True, False, False))
            return self._alloc(OpenFile(node, True, False, False))
        if isinstance(node, Dir):
            return OsError("Is a directory", errno.EISDIR)
        if node is None:
            parent, name = sysm.parent_of(full)
            if parent is None:
                return OsError("No such file or directory", errno.ENOENT)
            node = File("", 0o666 & ~self.proc.umask)
            parent.entries[name] = node
        elif mode == ">" and noclobber:
            return OsError("File exists", errno.EEXIST)
        if mode in (">", ">|"):
            node.content = ""
        return self._alloc(OpenFile(node, mode == "<>", True, mode == ">>"))

    def close_and_save(self, fd: int) -> Union[Optional[int], OsError]:
        fds = self.proc.fds
        if fd not in fds:
            return None
        entry = fds.pop(fd)
        return self._alloc(entry, 10)

    def renumber(self, close_orig: bool, orig: int, wanted: int) -> Optional[OsError]:
        if orig == wanted:
            return None
        fds = self.proc.fds
        if orig not in fds:
            return OsError("Bad file descriptor", errno.EBADF)
        fds[wanted] = fds[orig]
        if close_orig:
            del fds[orig]
        return None

    def heredoc(self, body: str) -> Union[int, OsError]:
        p = self.system.new_pipe()
        p.buf = body
        p.written = len(body)
        return self._alloc(PipeEnd(p, False))

    # fs calls -----------------------------------------------------------

    def exists(self, path: str) -> bool:
        full = _join(self.proc.cwd, path)
        return full == "/dev/null" or self.system.lookup(full) is not None \
            or self.system.virtual_utility(full) is not None

    def is_executable(self, path: str) -> bool:
        full = _join(self.proc.cwd, path)
        node = self.system.lookup(full)
        if isinstance(node, File):
            return bool(node.mode & 0o111)
        return node is None and self.system.virtual_utility(full) is not None

    def listdir(self, path: str) -> Optional[list]:
        node = self.system.lookup(_join(self.proc.cwd, path))
        if not isinstance(node, Dir):
            return None
        return sorted(node.entries)

    def stat(self, path: str, follow: bool = True) -> Optional[StatInfo]:
        full = _join(self.proc.cwd, path)
        if full == "/dev/null":
            return StatInfo("chr", 0, 0o666)
        node = self.system.lookup(full, follow)
        if node is None:
            if self.system.virtual_utility(full) is not None:
                return StatInfo("reg", 0, 0o755)
            return None
        if isinstance(node, Dir):
            return StatInfo("dir", len(node.entries), node.mode)
        if isinstance(node, Link):
            return StatInfo("link", len(node.target), node.mode)
        return StatInfo("reg", len(node.content), node.mode)

    def access(self, path: str, mode: str) -> bool:
        st = self.stat(path)
        if st is None:
            return False
        bit = {"r": 0o400, "w": 0o200, "x": 0o100}[mode]
        return bool(st.mode & bit)

    def getcwd(self) -> str:
        return self.proc.cwd

    def chdir(self, path: str) -> Optional[OsError]:
        full = _join(self.proc.cwd, path)
        node = self.system.lookup(full)
        if node is None:
            return OsError("No such file or directory", errno.ENOENT)
        if not isinstance(node, Dir):
            return OsError("Not a directory", errno.ENOTDIR)
        self.proc.cwd = self.system.canonical(full)
        return None

    def umask(self, mask: Optional[int] = None) -> int:
        old = self.proc.umask
        if mask is not None:
            self.proc.umask = mask & 0o777
        return old

    def home_dir(self, user: str) -> Optional[str]:
        return self.system.passwd.get(user)

    def realpath(self, path: str) -> str:
        return self.system.canonical(_join(self.proc.cwd, path))


# ---------------------------------------------------------------------------
# the system


class SymbolicSystem:
    def __init__(self, fs_spec=None, passwd: Optional[dict] = None,
                 fuel: int = DEFAULT_FUEL) -> None:
        self.root = build_fs(fs_spec)
        self.passwd = {"root": "/root"} if passwd is None else dict(passwd)
        self.fuel = fuel
        self.procs: dict[int, Proc] = {}
        self.next_pid = 1
        self.next_pipe = 1
        self.stdout = ""
        self.stderr = ""
        self.events: list = []
        self.root_pid: Optional[int] = None
        self.steps_taken = 0
        self.step_hook = None  # called after each step of the root process

    # -- filesystem -------------------------------------------------------

    def _walk(self, path: str, follow_last: bool, depth: int = 0):
        """Return (node, canonical path) or (None, None)."""
        if depth > 40:
            return None, None
        parts = [p for p in path.split("/") if p and p != "."]
        node: Node = self.root
        stack: list = []  # (name, node) pairs from the root
        i = 0
        while i < len(parts):
            name = parts[i]
            if name == "..":
                if stack:
                    stack.pop()
                node = stack[-1][1] if stack else self.root
                i += 1
                continue
            if not isinstance(node, Dir) or name not in node.entries:
                return None, None
            child = node.entries[name]
            last = i == len(parts) - 1
            if isinstance(child, Link) and (follow_last or not last):
                base = "/" + "/".join(n for n, _ in stack)
                rest = "/".join(parts[i + 1:])
                target = child.target if child.target.startswith("/") \
                    else base.rstrip("/") + "/" + child.target
                return self._walk(target + ("/" + rest if rest else ""), follow_last, depth + 1)
            stack.append((name, child))
            node = child
            i += 1
        return node, "/" + "/".join(n for n, _ in stack)

    def lookup(self, path: str, follow: bool = True) -> Optional[Node]:
        return self._walk(path, follow)[0]

    def canonical(self, path: str) -> str:
        node, canon = self._walk(path, True)
        return canon if node is not None else path

    def parent_of(self, path: str):
        head, _, name = path.rstrip("/").rpartition("/")
        parent = self.lookup(head or "/")
        if not isinstance(parent, Dir) or not name:
            return None, None
        return parent, name

    def virtual_utility(self, path: str) -> Optional[str]:
        head, _, name = path.rpartition("/")
        if head in _UTILITY_DIRS and name in UTILITIES:
            return name
        return None

    # -- pipes ------------------------------------------------------------

    def new_pipe(self) -> Pipe:
        p = Pipe(self.next_pipe)
        self.next_pipe += 1
        return p

    def _holders(self, pipe: Pipe, writing: bool) -> list:
        out = []
        for pid, p in self.procs.items():
            if not p.live:
                continue
            for e in p.fds.values():
                if isinstance(e, PipeEnd) and e.pipe is pipe and e.writing == writing:
                    out.append(pid)
                    break
        return out

    def writers(self, pipe: Pipe) -> list:
        return self._holders(pipe, True)

    def readers(self, pipe: Pipe) -> list:
        return self._holders(pipe, False)

    def console_write(self, name: str, data: str, pid: int) -> None:
        if name == "stdout":
            self.stdout += data
        else:
            self.stderr += data

    # -- processes --------------------------------------------------------

    def start(self, sh_factory, cmd, env: dict, cwd: str = "/", stdin: str = "",
              umask: int = 0o022) -> Proc:
        """Create the root shell process running ``cmd``."""
        pid = self._new_pid()
        fds: dict = {1: Console("stdout"), 2: Console("stderr")}
        if stdin:
            p = self.new_pipe()
            p.buf = stdin
            p.written = len(stdin)
            fds[0] = PipeEnd(p, False)
        else:
            fds[0] = NullDev()
        proc = Proc(pid, 0, None, cmd, False, fds, cwd, umask)
        self.procs[pid] = proc
        proc.sh = sh_factory(ProcOS(self, pid), env, pid)
        self.root_pid = pid
        return proc

    def _new_pid(self) -> int:
        pid = self.next_pid
        self.next_pid += 1
        return pid

    def spawn(self, parent: Proc, sh, cmd, setup: list, checking: bool):
        pid = self._new_pid()
        fds = dict(parent.fds)
        for action in setup:
            if action[0] == "dup2":
                if action[1] in fds:
                    fds[action[2]] = fds[action[1]]
            elif action[0] == "close":
                fds.pop(action[1], None)
            elif action[0] == "devnull":
                fds[action[1]] = NullDev()
        disp = {k: v for k, v in parent.dispositions.items() if v == "ignore"}
        child = Proc(pid, parent.pid, None, cmd, checking, fds, parent.cwd, parent.umask, disp)
        self.procs[pid] = child
        child.sh = sh.fork_child(ProcOS(self, pid))
        return pid

    def deliver(self, target: Proc, sig: str, sender: int) -> None:
        if not target.live:
            return
        disp = target.dispositions.get(sig, "default")
        if sig == "KILL":
            self.terminate(target, 128 + SIGNALS[sig], sender)
            return
        if sig in _NO_EFFECT or disp == "ignore":
            return
        if disp == "default":
            if sig in _DEFAULT_IGNORED:
                return
            self.terminate(target, 128 + SIGNALS[sig], sender)
            return
        target.signals.append(sig)

    def terminate(self, proc: Proc, status: int, current: Optional[int] = None) -> None:
        self._zombie(proc, status)
        if current == proc.pid:
            raise _Killed()

    def _zombie(self, proc: Proc, status: int) -> None:
        proc.state = "zombie"
        proc.status = status & 0xFF
        proc.fds = {}
        proc.demand = None

    def exec_image(self, proc: Proc, path: str, argv: list, env: dict):
        full = _join(proc.cwd, path)
        node = self.lookup(full)
        if node is None:
            name = self.virtual_utility(full)
            if name is None:
                return OsError("No such file or directory", errno.ENOENT)
            return UTILITIES[name](self, proc, argv[1:])
        if isinstance(node, Dir) or not node.mode & 0o111:
            return OsError("Permission denied", errno.EACCES)
        if node.content.startswith("#!"):
            self.events.append({"pid": proc.pid, "event": "external exec: " + argv[0]})
            return 0
        # anything else is handed back to the shell to run as a script
        return OsError("Exec format error", errno.ENOEXEC)

    # -- stepping ---------------------------------------------------------

    def step(self, proc: Proc) -> None:
        """Take one step of ``proc``, spending one unit of fuel."""
        from .ast import is_terminal
        from .evaluation import step_eval

        if self.fuel <= 0 or not proc.live:
            return
        self.fuel -= 1
        self.steps_taken += 1
        proc.demand = None
        try:
            proc.cmd = step_eval(proc.sh, proc.checking, proc.cmd)
            if is_terminal(proc.cmd):
                self._finish(proc)
        except _Killed:
            pass
        except Exception as e:  # an interpreter bug must not wedge the system
            self.events.append({"pid": proc.pid, "event": "internal error: %s" % e})
            if proc.live:
                self._zombie(proc, 2)
        if proc.pid == self.root_pid and self.step_hook is not None:
            self.step_hook(proc)

    def _finish(self, proc: Proc) -> None:
        from .ast import EXIT, Trapped
        from .evaluation import eval_loop_for
        from .parser import ParseError

        sh = proc.sh
        handler = sh.traps.pop("EXIT", None)
        if handler:
            try:
                proc.cmd = Trapped("EXIT", sh.last_status, eval_loop_for(handler, "trap"), EXIT)
                return
            except ParseError as e:
                sh.os.write(2, "smolsh: trap: %s\n" % e.message)
        self._zombie(proc, sh.last_status)

    def _satisfy(self, proc: Proc, active: set) -> None:
        """Step whatever ``proc`` is blocked on."""
        demand, proc.demand = proc.demand, None
        if demand is None:
            return
        kind, target_pid, pipe = demand
        target = self.procs.get(target_pid)
        if target is None or target_pid in active or target_pid == proc.pid:
            return
        active = active | {proc.pid}
        if kind == "wait":
            while target.live and self.fuel > 0:
                self.step(target)
                if target.demand is not None:
                    if target.demand[1] in active:
                        target.demand = None
                        return
                    self._satisfy(target, active)
            return
        for _ in range(READ_BATCH):
            if not target.live or self.fuel <= 0:
                return
            self.step(target)
            if target.demand is not None:
                self._satisfy(target, active)
            if "\n" in pipe.buf or not self.writers(pipe):
                return

    def schedule_round(self) -> None:
        for pid in sorted(self.procs):
            if self.fuel <= 0:
                return
            proc = self.procs[pid]
            if not proc.live or proc.state == "stopped":
                continue
            self.step(proc)
            if proc.demand is not None:
                self._satisfy(proc, set())

    def run(self) -> None:
        root = self.procs[self.root_pid]
        while root.live and self.fuel > 0:
            self.schedule_round()

    @property
    def exhausted(self) -> bool:
        return self.fuel <= 0 and self.procs[self.root_pid].live


# ---------------------------------------------------------------------------
# simulated utilities


def _out(proc: Proc, fd: int, text: str) -> None:
    proc.sh.os.write(fd, text)


def _ls(system: SymbolicSystem, proc: Proc, args: list) -> int:
    show_all = False
    operands = []
    for a in args:
        if a.startswith("-") and len(a) > 1 and not operands:
            show_all = show_all or "a" in a or "A" in a
        else:
            operands.append(a)
    status = 0
    files, dirs = [], []
    for a in operands or ["."]:
        node = system.lookup(_join(proc.cwd, a))
        if node is None:
            _out(proc, 2, "ls: %s: No such file or directory\n" % a)
            status = 1
        elif isinstance(node, Dir):
            dirs.append((a, node))
        else:
            files.append(a)
    text = "".join(f + "\n" for f in sorted(files))
    for a, node in sorted(dirs, key=lambda d: d[0]):
        names = sorted(n for n in node.entries if show_all or not n.startswith("."))
        if show_all:
            names = sorted([".", ".."] + names)
        if len(operands) > 1 or (files and dirs):
            text += ("\n" if text else "") + a + ":\n"
        text += "".join(n + "\n" for n in names)
    _out(proc, 1, text)
    return status


def _cat(system: SymbolicSystem, proc: Proc, args: list):
    pieces = []
    status = 0
    errors = []
    for a in args or ["-"]:
        if a == "-":
            data = proc.sh.os.read_all(0)
            if isinstance(data, Blocked):
                return data
            if isinstance(data, OsError):
                errors.append("cat: -: %s\n" % data.message)
                status = 1
                continue
            pieces.append(data)
            continue
        node = system.lookup(_join(proc.cwd, a))
        if node is None:
            errors.append("cat: %s: No such file or directory\n" % a)
            status = 1
        elif isinstance(node, Dir):
            errors.append("cat: %s: Is a directory\n" % a)
            status = 1
        else:
            pieces.append(node.content)
    _out(proc, 1, "".join(pieces))
    for e in errors:
        _out(proc, 2, e)
    return status


def _echo(system: SymbolicSystem, proc: Proc, args: list) -> int:
    newline = True
    if args and args[0] == "-n":
        newline = False
        args = args[1:]
    _out(proc, 1, " ".join(args) + ("\n" if newline else ""))
    return 0


def _mkdir(system: SymbolicSystem, proc: Proc, args: list) -> int:
    parents = False
    status = 0
    for a in args:
        if a == "-p":
            parents = True
            continue
        full = _join(proc.cwd, a)
        if parents:
            steps = [p for p in full.split("/") if p]
            prefix = ""
            for p in steps:
                prefix += "/" + p
                node = system.lookup(prefix)
                if node is None:
                    parent, name = system.parent_of(prefix)
                    parent.entries[name] = Dir()
                elif not isinstance(node, Dir):
                    _out(proc, 2, "mkdir: cannot create directory '%s': Not a directory\n" % a)
                    status = 1
                    break
            continue
        parent, name = system.parent_of(full)
        if parent is None:
            _out(proc, 2, "mkdir: cannot create directory '%s': No such file or directory\n" % a)
            status = 1
        elif name in parent.entries:
            _out(proc, 2, "mkdir: cannot create directory '%s': File exists\n" % a)
            status = 1
        else:
            parent.entries[name] = Dir()
    return status


UTILITIES = {
    "mkdir": _mkdir,
    "ls": _ls,
    "cat": _cat,
    "echo": _echo,
    "true": lambda system, proc, args: 0,
    "false": lambda system, proc, args: 1,
}


# ---------------------------------------------------------------------------
# driver


def _visible_vars(sh) -> dict:
    snap = dict(sh.globals)
    for scope in sh.locals:
        for k, v in scope.items():
            snap[k] = v.value
    snap["?"] = str(sh.last_status)
    return snap


def _delta(before: dict, after: dict) -> dict:
    d = {}
    for k, v in after.items():
        if before.get(k, None) != v or (k not in before):
            d[k] = v
    for k in before:
        if k not in after:
            d[k] = None
    return d


def run_symbolic(program, env: Optional[dict] = None, fs_spec=None,
                 fuel: int = DEFAULT_FUEL, passwd: Optional[dict] = None,
                 cwd: str = "/", stdin: str = "", source: str = "smolsh") -> dict:
    """Run ``program`` (source text or a parsed command) and return its trace."""
    from .ast import EvalLoop, render_any, trace_record
    from .evaluation import Tracer
    from .parser import ParseSession
    from .state import ShellState

    env = dict(env or {})
    env.setdefault("PATH", DEFAULT_PATH)
    env.setdefault("PWD", cwd)
    system = SymbolicSystem(fs_spec, passwd, fuel)
    if isinstance(program, str):
        text = program
        session = ParseSession.from_string(text)
        session.kind = "main"
        cmd = EvalLoop(1, session, source, False, True)
    else:
        text = render_any(program)
        cmd = program

    def make_state(handle, env_, pid):
        sh = ShellState(handle, env=env_, root_pid=pid)
        sh.globals.setdefault("OPTIND", "1")
        sh.arg0 = source
        return sh

    root = system.start(make_state, cmd, env, cwd, stdin)
    sh = root.sh
    sh.tracer = Tracer()
    steps: list = []
    mark = {"vars": _visible_vars(sh), "out": 0, "err": 0}

    def hook(proc: Proc) -> None:
        phase, rule = sh.tracer.take()
        now = _visible_vars(sh)
        term = "Zombie(%d)" % proc.status if not proc.live else render_any(proc.cmd)
        steps.append(trace_record(len(steps) + 1, phase, rule, _delta(mark["vars"], now), term,
                                  system.stdout[mark["out"]:], system.stderr[mark["err"]:]))
        mark["vars"] = now
        mark["out"] = len(system.stdout)
        mark["err"] = len(system.stderr)

    system.step_hook = hook
    system.run()
    final = {"status": root.status if not root.live else sh.last_status,
             "stdout": system.stdout, "stderr": system.stderr}
    if system.exhausted:
        final["fuel_exhausted"] = True
    result = {"version": 1, "source": text, "steps": steps, "final": final}
    if system.events:
        result["events"] = system.events
    return result


def trace_json(trace: dict) -> str:
    return json.dumps(trace, ensure_ascii=False)


def trace_schema() -> dict:
    """The JSON schema that every trace envelope satisfies."""
    from importlib.resources import files
    return json.loads(files("smolsh").joinpath("trace_schema.json").read_text(encoding="utf-8"))


__all__ = [
    "DEFAULT_FUEL", "ProcOS", "SymbolicSystem", "build_fs", "run_symbolic", "trace_json", "trace_schema",
]

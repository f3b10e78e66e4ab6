"""Fixture-based conformance harness.

A test is ``<name>.test`` (a script), ``<name>.test.out`` (expected stdout)
and optionally ``<name>.test.ec`` (expected exit status, default 0).  The
category is the name's prefix up to the first dot.  Each test runs in a
fresh temporary directory with stdin from /dev/null.

Modes:
  default      run the shell under test and compare against the fixtures
  --diff REF   run the shell under test and REF and compare them directly
  --symbolic   run each test marked ``# symbolic`` through the simulated OS
"""

from __future__ import annotations

import argparse
import difflib
import os
import shlex
import subprocess
import sys
import tempfile
import time
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

CATEGORIES = ("builtin", "semantics", "parse", "sh", "speed")
SYMBOLIC_MARK = "# symbolic"
DEFAULT_TIMEOUT = 10.0


@dataclass
class Outcome:
    stdout: bytes
    status: Optional[int]  # None on timeout
    note: str = ""  # set when the run could not be judged


@dataclass
class Result:
    name: str
    verdict: str  # PASS FAIL BROKEN DIFF SAME
    reason: str = ""
    detail: str = ""
    seconds: float = 0.0

    @property
    def category(self) -> str:
        return self.name.split(".", 1)[0]


def discover(tests_dir: str) -> list:
    return sorted(f[:-5] for f in os.listdir(tests_dir) if f.endswith(".test"))


def is_symbolic(script: bytes) -> bool:
    return any(line.strip() == SYMBOLIC_MARK.encode() for line in script.splitlines())


def read_divergences(tests_dir: str) -> dict:
    """``DIVERGENCES`` lines: ``name: justification``."""
    path = os.path.join(tests_dir, "DIVERGENCES")
    out: dict = {}
    if not os.path.exists(path):
        return out
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith("#"):
                name, _, why = line.partition(":")
                out[name.strip()] = why.strip()
    return out


def hermetic_env(home: str, shell: list) -> dict:
    """Environment for one test; TEST_SHELL lets scripts re-invoke the shell under test."""
    return {"PATH": os.environ.get("PATH", "/usr/bin:/bin"), "HOME": home,
            "LC_ALL": "C", "TERM": "dumb", "TEST_SHELL": shlex.join(shell)}


def run_script(shell: list, script_path: str, timeout: float) -> Outcome:
    with tempfile.TemporaryDirectory(prefix="smolsh-test-") as tmp:
        try:
            p = subprocess.run(shell + [os.path.abspath(script_path)], cwd=tmp, env=hermetic_env(tmp, shell),
                               stdin=subprocess.DEVNULL, stdout=subprocess.PIPE,
                               stderr=subprocess.DEVNULL, timeout=timeout)
        except subprocess.TimeoutExpired:
            return Outcome(b"", None)
        return Outcome(p.stdout, p.returncode)


def run_symbolic_script(script: bytes, fuel: int) -> Outcome:
    from .os_symbolic import run_symbolic
    home = "/home/test"
    fs = {"dir": {"home": {"dir": {"test": {"dir": {}}}}, "tmp": {"dir": {}}}}
    trace = run_symbolic(script.decode("latin-1"), env={"HOME": home, "LC_ALL": "C"},
                         fs_spec=fs, fuel=fuel, cwd=home)
    stdout = trace["final"]["stdout"].encode("latin-1")
    if trace["final"].get("fuel_exhausted"):
        return Outcome(stdout, None, "fuel exhausted")
    execs = [e["event"] for e in trace.get("events", []) if e["event"].startswith("external exec")]
    if execs:
        return Outcome(stdout, trace["final"]["status"], execs[0])
    return Outcome(stdout, trace["final"]["status"])


def _diff(want: bytes, got: bytes, a: str, b: str) -> str:
    lines = difflib.unified_diff(want.decode("latin-1").splitlines(True),
                                 got.decode("latin-1").splitlines(True), a, b)
    return "".join(lines)


def check_fixture(tests_dir: str, name: str, runner, timeout: float) -> Result:
    base = os.path.join(tests_dir, name + ".test")
    try:
        with open(base + ".out", "rb") as f:
            want = f.read()
    except OSError:
        return Result(name, "BROKEN", "missing .test.out")
    want_ec = 0
    if os.path.exists(base + ".ec"):
        try:
            with open(base + ".ec") as f:
                want_ec = int(f.read().strip())
        except (OSError, ValueError):
            return Result(name, "BROKEN", "unreadable .test.ec")
    start = time.monotonic()
    got = runner(base)
    secs = time.monotonic() - start
    if got.note:
        return Result(name, "FAIL", got.note, seconds=secs)
    if got.status is None:
        return Result(name, "FAIL", "timeout", seconds=secs)
    if got.stdout != want:
        return Result(name, "FAIL", "stdout", _diff(want, got.stdout, "expected", "actual"), secs)
    if got.status != want_ec:
        return Result(name, "FAIL", "status", "expected %d, got %d" % (want_ec, got.status), secs)
    return Result(name, "PASS", seconds=secs)


def check_diff(tests_dir: str, name: str, shell: list, ref: list, timeout: float) -> Result:
    base = os.path.join(tests_dir, name + ".test")
    start = time.monotonic()
    a = run_script(shell, base, timeout)
    b = run_script(ref, base, timeout)
    secs = time.monotonic() - start
    if a.stdout == b.stdout and a.status == b.status:
        return Result(name, "SAME", seconds=secs)
    reasons = []
    if a.stdout != b.stdout:
        reasons.append("stdout")
    if a.status != b.status:
        reasons.append("status %s vs %s" % (a.status, b.status))
    return Result(name, "DIFF", ", ".join(reasons),
                  _diff(b.stdout, a.stdout, "reference", "under-test"), secs)


def run_suite(tests_dir: str, shell: list, ref: Optional[list] = None,
              symbolic: bool = False, timeout: float = DEFAULT_TIMEOUT,
              jobs: int = 0, only: Optional[list] = None, fuel: int = 5000) -> list:
    names = discover(tests_dir)
    if only:
        names = [n for n in names if any(n == o or n.startswith(o) for o in only)]
    if symbolic:
        picked = []
        for n in names:
            with open(os.path.join(tests_dir, n + ".test"), "rb") as f:
                if is_symbolic(f.read()):
                    picked.append(n)
        names = picked

    def one(name: str) -> Result:
        if ref is not None:
            return check_diff(tests_dir, name, shell, ref, timeout)
        if symbolic:
            def runner(base):
                with open(base, "rb") as f:
                    return run_symbolic_script(f.read(), fuel)
            return check_fixture(tests_dir, name, runner, timeout)
        return check_fixture(tests_dir, name,
                             lambda base: run_script(shell, base, timeout), timeout)

    if symbolic:
        return [one(n) for n in names]
    workers = jobs or min(8, (os.cpu_count() or 2))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, names))


def report(results: list, divergences: dict, out=sys.stdout) -> bool:
    """Print per-test lines and per-category totals; True if the run is clean."""
    ok = True
    for r in results:
        if r.verdict == "PASS" or r.verdict == "SAME":
            out.write("%s %s\n" % (r.verdict, r.name))
        elif r.verdict == "BROKEN":
            out.write("BROKEN %s (%s)\n" % (r.name, r.reason))
        elif r.verdict == "DIFF":
            why = divergences.get(r.name)
            if why is None:
                ok = False
                out.write("DIFF %s (%s) undocumented\n" % (r.name, r.reason))
                out.write(r.detail)
            else:
                out.write("DIFF %s (%s) documented: %s\n" % (r.name, r.reason, why))
        else:
            ok = False
            out.write("FAIL %s (%s)\n" % (r.name, r.reason))
            if r.detail:
                out.write(r.detail if r.detail.endswith("\n") else r.detail + "\n")
    cats: OrderedDict = OrderedDict()
    for r in results:
        c = cats.setdefault(r.category, [0, 0])
        c[1] += 1
        if r.verdict in ("PASS", "SAME"):
            c[0] += 1
    for cat, (good, total) in cats.items():
        out.write("category %s: %d/%d\n" % (cat, good, total))
    diffs = sum(1 for r in results if r.verdict == "DIFF")
    fails = sum(1 for r in results if r.verdict == "FAIL")
    broken = sum(1 for r in results if r.verdict == "BROKEN")
    out.write("total %d, failed %d, broken %d, divergent %d\n"
              % (len(results), fails, broken, diffs))
    return ok


def default_shell() -> list:
    return [sys.executable, "-m", "smolsh"]


def harness_main(argv: Optional[list] = None, out=None) -> int:
    ap = argparse.ArgumentParser(prog="smolsh-harness",
                                 description="Run the shell test corpus.")
    ap.add_argument("tests_dir")
    ap.add_argument("--shell", help="shell under test (command line, default: this smolsh)")
    ap.add_argument("--diff", metavar="REF", help="compare against a reference shell instead of fixtures")
    ap.add_argument("--symbolic", action="store_true", help="run marked tests in the simulated OS")
    ap.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT)
    ap.add_argument("--jobs", type=int, default=0)
    ap.add_argument("--fuel", type=int, default=5000)
    ap.add_argument("--only", action="append", help="test name or prefix (repeatable)")
    args = ap.parse_args(argv)
    out = out or sys.stdout
    shell = shlex.split(args.shell) if args.shell else default_shell()
    ref = shlex.split(args.diff) if args.diff else None
    results = run_suite(args.tests_dir, shell, ref, args.symbolic, args.timeout,
                        args.jobs, args.only, args.fuel)
    ok = report(results, read_divergences(args.tests_dir), out)
    return 0 if ok else 1


__all__ = ["harness_main", "hermetic_env", "run_suite", "report", "discover", "read_divergences"]

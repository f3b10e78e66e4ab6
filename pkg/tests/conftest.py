import os
import subprocess
import sys

import pytest

HERE = os.path.dirname(os.path.abspath(__file__))
CORPUS = os.path.join(HERE, "corpus")
DASH = "/usr/bin/dash"

# filled in by test_acceptance.py: criterion number -> (ok, title, detail)
ACCEPTANCE: dict = {}


def smolsh(script: str, cwd=None, stdin: str = "", env=None, args=()) -> subprocess.CompletedProcess:
    """Run the real-syscall shell on a -c script."""
    run_env = {"PATH": os.environ.get("PATH", "/usr/bin:/bin"), "LC_ALL": "C",
               "HOME": cwd or "/tmp"}
    if env:
        run_env.update(env)
    return subprocess.run([sys.executable, "-m", "smolsh", "-c", script] + list(args),
                          cwd=cwd, input=stdin.encode("latin-1"), env=run_env,
                          capture_output=True, timeout=30)


def out(script: str, **kw) -> str:
    return smolsh(script, **kw).stdout.decode("latin-1")


@pytest.fixture
def sh_out(tmp_path):
    def run(script: str, **kw) -> str:
        kw.setdefault("cwd", str(tmp_path))
        return out(script, **kw)
    return run


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[n]
        line = "%s criterion %d: %s" % ("PASS" if ok else "FAIL", n, title)
        if detail:
            line += " (%s)" % detail
        terminalreporter.write_line(line)


def sym(script: str, **kw) -> tuple:
    """Run a script on the symbolic OS: (status, stdout, stderr)."""
    from smolsh.os_symbolic import run_symbolic
    final = run_symbolic(script, **kw)["final"]
    return final["status"], final["stdout"], final["stderr"]

import json

from hypothesis import given
from hypothesis import strategies as st

from smolsh.os_interface import Blocked, OsError
from smolsh.os_symbolic import SymbolicSystem, run_symbolic
from smolsh.parser import parse_program
from smolsh.state import ShellState

FS = {"dir": {"a": {"file": "A\n"}, "d": {"dir": {}}, "run": {"file": "echo ran\n", "mode": "755"},
              "ext": {"file": "#!/bin/foo\n", "mode": "755"}, "noexec": {"file": "", "mode": "644"}}}


def root_system(fs=None):
    system = SymbolicSystem(fs)
    root = system.start(lambda h, e, p: ShellState(h, e, p), None, {}, "/")
    return system, root


def test_runs_are_deterministic():
    script = "echo a | cat; (echo b &); wait; x=$(echo c); echo $x"
    assert json.dumps(run_symbolic(script)) == json.dumps(run_symbolic(script))


def test_read_blocks_on_live_writer():
    system, root = root_system()
    r, w = root.sh.os.pipe()
    child = system.spawn(root, root.sh, parse_program("true"), [], False)
    root.sh.os.close(w)
    assert root.sh.os.read_all(r) == Blocked(child)
    assert root.demand == ("read", child, root.fds[r].pipe)
    system.procs[child].sh.os.write(w, "hi")
    system.procs[child].sh.os.close(w)
    assert root.sh.os.read_all(r) == "hi"


def test_wait_on_zombie_reaps_once():
    system, root = root_system()
    child = system.spawn(root, root.sh, parse_program("exit 5"), [], False)
    assert isinstance(root.sh.os.wait(child), Blocked)
    proc = system.procs[child]
    while proc.live:
        system.step(proc)
    assert root.sh.os.wait(child) == 5
    assert root.sh.os.wait(child) == 127


def test_write_without_readers_is_broken_pipe():
    system, root = root_system()
    r, w = root.sh.os.pipe()
    root.sh.os.close(r)
    root.sh.os.set_signal("PIPE", "ignore")
    assert isinstance(root.sh.os.write(w, "x"), OsError)


@given(st.lists(st.one_of(st.text(alphabet="ab\n", max_size=4), st.integers(1, 5)), max_size=12))
def test_pipe_conserves_bytes(ops):
    system, root = root_system()
    os_ = root.sh.os
    r, w = os_.pipe()
    sent, got = "", ""
    for op in ops:
        if isinstance(op, str):
            os_.write(w, op)
            sent += op
        else:
            data = os_.read_chunk(r, op) if root.fds[r].pipe.buf else ""
            got += data
        pipe = root.fds[r].pipe
        assert pipe.written == pipe.read + len(pipe.buf)
        assert sent == got + pipe.buf


def test_missing_command_exec_is_cheap():
    assert len(run_symbolic("exec missing-cmd", fuel=5)["steps"]) <= 5
    final = run_symbolic("exec missing-cmd")["final"]
    assert final["status"] == 127 and "not found" in final["stderr"]


def test_exec_forms():
    assert run_symbolic("./noexec; echo $?", fs_spec=FS)["final"]["stdout"] == "126\n"
    assert run_symbolic("./run", fs_spec=FS)["final"]["stdout"] == "ran\n"
    trace = run_symbolic("./ext", fs_spec=FS)
    assert trace["final"]["status"] == 0
    assert any("external exec" in e["event"] for e in trace["events"])


def test_utilities():
    final = run_symbolic("ls; cat a; mkdir d; mkdir -p d/e/f; ls d", fs_spec=FS)["final"]
    assert final["stdout"] == "a\nd\next\nnoexec\nrun\nA\ne\n"
    assert "File exists" in final["stderr"]


def test_files_persist_between_commands():
    assert run_symbolic("echo x > f; echo y >> f; cat f")["final"]["stdout"] == "x\ny\n"


def test_background_job_and_wait():
    assert run_symbolic("(echo bg) & wait $!; echo $?")["final"]["stdout"] == "bg\n0\n"


def test_kill_default_terminates():
    final = run_symbolic("sleep_loop() { while :; do :; done; }; sleep_loop & kill $!; wait $!; echo $?")
    assert final["final"]["stdout"] == "143\n"


def test_trapped_signal_runs_handler():
    final = run_symbolic("trap 'echo got' USR1; kill -USR1 $$; echo after")["final"]
    assert final["stdout"] == "got\nafter\n"


def test_fuel_bounds_steps():
    trace = run_symbolic("while :; do :; done", fuel=30)
    assert trace["final"]["fuel_exhausted"] and len(trace["steps"]) <= 30

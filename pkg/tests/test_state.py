import pytest
from hypothesis import given
from hypothesis import strategies as st

from smolsh.state import ReadonlyError, ShellState, clamp_status

NAMES = st.sampled_from(["x", "y", "PATH", "_v", "a1"])
VALUES = st.text(alphabet="ab 1\n\xff", max_size=5)


def test_status_readout():
    sh = ShellState()
    sh.set_status(47)
    assert sh.lookup("?") == "47"


def test_local_shadows_global():
    sh = ShellState()
    sh.set_global("x", "0")
    sh.push_scope()
    sh.set_local("x", "1")
    assert sh.lookup("x") == "1"
    sh.pop_scope()
    assert sh.lookup("x") == "0"


def test_unset_name_is_none():
    assert ShellState().lookup("nope") is None


def test_set_global_on_empty_state():
    sh = ShellState()
    sh.set_global("x", "5")
    assert sh.globals["x"] == "5"


def test_readonly_global_rejects_set():
    sh = ShellState()
    sh.set_global("r", "1")
    sh.set_readonly("r")
    with pytest.raises(ReadonlyError):
        sh.set_global("r", "2")
    assert sh.lookup("r") == "1"


def test_set_global_writes_through_local():
    sh = ShellState()
    sh.set_global("x", "outer")
    sh.push_scope()
    sh.set_local("x", "1")
    sh.set_global("x", "2")
    assert sh.lookup("x") == "2"
    sh.pop_scope()
    assert sh.lookup("x") == "outer"


def test_set_local_is_scoped():
    sh = ShellState()
    sh.push_scope()
    sh.set_local("y", "1")
    assert sh.lookup("y") == "1"
    sh.pop_scope()
    assert sh.lookup("y") is None


def test_local_over_readonly_is_error():
    sh = ShellState()
    sh.set_global("g", "1")
    sh.set_readonly("g")
    sh.push_scope()
    with pytest.raises(ReadonlyError):
        sh.set_local("g", "2")


def test_local_without_value_is_unset_and_shadows():
    sh = ShellState()
    sh.set_global("x", "outer")
    sh.push_scope()
    sh.set_local("x", None)
    assert sh.lookup("x") is None
    sh.pop_scope()
    assert sh.lookup("x") == "outer"


def test_nested_scopes_pop_lifo():
    sh = ShellState()
    sh.push_scope()
    sh.set_local("v", "1")
    sh.push_scope()
    sh.set_local("v", "2")
    assert sh.lookup("v") == "2"
    sh.pop_scope()
    assert sh.lookup("v") == "1"
    sh.pop_scope()
    assert sh.lookup("v") is None


def test_pop_on_empty_stack_aborts():
    with pytest.raises(RuntimeError):
        ShellState().pop_scope()


def test_special_params():
    sh = ShellState(root_pid=99)
    sh.positional = ["a", "b"]
    assert sh.lookup("#") == "2"
    assert sh.lookup("!") is None
    assert sh.lookup("$") == "99"
    assert sh.lookup("1") == "a" and sh.lookup("3") is None
    sh.options |= {"errexit", "xtrace"}
    assert "ex" in sh.lookup("-")


def test_subshell_keeps_root_pid_and_snapshots_traps():
    sh = ShellState(root_pid=7)
    sh.traps = {"TERM": "echo T", "INT": ""}
    child = sh.fork_child()
    assert child.lookup("$") == "7"
    assert not child.outermost
    assert child.supershell_traps == {"TERM": "echo T", "INT": ""}
    assert child.traps == {"INT": ""}


def test_environment_import_marks_exported():
    sh = ShellState(env={"FOO": "1"})
    assert sh.is_exported("FOO")
    assert sh.export_env()["FOO"] == "1"


def test_allexport_marks_new_names():
    sh = ShellState()
    sh.options.add("allexport")
    sh.set_global("n", "v")
    assert sh.export_env()["n"] == "v"


def test_clamp_status():
    assert clamp_status(256) == 0 and clamp_status(300) == 44 and clamp_status(-1) == 255


@given(NAMES, VALUES)
def test_set_then_lookup(name, value):
    sh = ShellState()
    sh.set_global(name, value)
    assert sh.lookup(name) == value


@given(NAMES, VALUES, VALUES)
def test_set_global_reads_back_through_local(name, outer, inner):
    sh = ShellState()
    sh.set_global(name, outer)
    sh.push_scope()
    sh.set_local(name, "l")
    sh.set_global(name, inner)
    assert sh.lookup(name) == inner
    sh.pop_scope()
    assert sh.lookup(name) == outer


@given(st.dictionaries(NAMES, VALUES))
def test_push_pop_is_identity(binds):
    sh = ShellState()
    for k, v in binds.items():
        sh.set_global(k, v)
    before = sh.visible_vars()
    sh.push_scope()
    sh.pop_scope()
    assert sh.visible_vars() == before

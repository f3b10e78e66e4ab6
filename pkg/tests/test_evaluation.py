import pytest

from conftest import sym

# (script, status, stdout) with outputs recorded from dash
DASH_CASES = [
    ("f() { return 3; }; f; echo $?", 0, "3\n"),
    ('f() { echo "$#:$1"; }; f a b; echo "$#"', 0, "2:a\n0\n"),
    ("for i in 1 2 3; do if [ $i = 2 ]; then continue; fi; echo $i; done", 0, "1\n3\n"),
    ("for i in 1 2; do for j in a b; do break 2; done; echo no; done; echo end", 0, "end\n"),
    ("x=0; while [ $x -lt 3 ]; do x=$((x+1)); done; echo $x", 0, "3\n"),
    ("case abc in a*) echo A;; *) echo B;; esac", 0, "A\n"),
    ("case x in y) echo y;; esac; echo $?", 0, "0\n"),
    ("false && echo no || echo yes", 0, "yes\n"),
    ("! true; echo $?", 0, "1\n"),
    ("true | false; echo $?", 0, "1\n"),
    ("(exit 4); echo $?", 0, "4\n"),
    ("x=1; (x=2); echo $x", 0, "1\n"),
    ("set -e; false || true; echo ok; false; echo no", 1, "ok\n"),
    ("trap 'echo bye' EXIT; echo hi", 0, "hi\nbye\n"),
    ("x=outer; f() { local x=in; echo $x; }; f; echo $x", 0, "in\nouter\n"),
    ("echo a > f1; cat f1; echo b >> f1; cat f1", 0, "a\na\nb\n"),
    ("exec 3>f2; echo z >&3; exec 3>&-; cat f2", 0, "z\n"),
    ("nosuchcmd; echo $?", 0, "127\n"),
    ("x=5; echo ${x:-d} ${u:-d} ${u:+a} ${x:+a} ${#x}", 0, "5 d a 1\n"),
    ("unset x; echo ${x-unset}", 0, "unset\n"),
    ("f() { echo in; }; unset -f f; f; echo $?", 0, "127\n"),
    ("echo $(( $(echo 3) * 2 ))", 0, "6\n"),
    ("x=$(false); echo $?", 0, "1\n"),
    ("readonly r=1; r=2; echo after", 2, ""),
    ("set -u; echo $nope; echo after", 2, ""),
    ('x=1; f() { x=2; }; f; echo $x; g() { shift; echo "$1"; }; g a b; echo "${1-none}"', 0,
     "2\nb\nnone\n"),
    ("while true; do break; done; echo $?", 0, "0\n"),
    ("echo $(( 1 + )) ; echo after", 2, ""),
    ("read a b <<E\none two three\nE\necho \"$a|$b\"", 0, "one|two three\n"),
    ("IFS=: read a b <<E\np:q:r\nE\necho \"$a|$b\"", 0, "p|q:r\n"),
]


@pytest.mark.parametrize("script,status,stdout", DASH_CASES)
def test_matches_dash(script, status, stdout):
    got = sym(script)
    assert got[:2] == (status, stdout)


def test_not_found_message():
    assert sym("nosuchcmd")[2] == "smolsh: nosuchcmd: not found\n"


def test_exit_trap_runs_once_on_exit():
    assert sym("trap 'echo T' EXIT; exit 3") == (3, "T\n", "")


def test_pipeline_status_is_last():
    assert sym("false | true; echo $?")[1] == "0\n"


def test_function_sees_positional_and_restores():
    assert sym('set -- x; f() { echo "$1"; }; f y; echo "$1"')[1] == "y\nx\n"


def test_errexit_ignored_in_condition():
    assert sym("set -e; if false; then :; fi; echo ok")[1] == "ok\n"


def test_fuel_exhaustion_is_reported():
    from smolsh.os_symbolic import run_symbolic
    trace = run_symbolic("while true; do :; done", fuel=50)
    assert trace["final"].get("fuel_exhausted") is True
    assert len(trace["steps"]) <= 50

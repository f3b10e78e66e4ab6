import pytest

from conftest import sym

# (script, stdout) recorded from dash
DASH_CASES = [
    ("shift 2>/dev/null; echo $?", ""),
    ('set -- a b c; shift; echo "$@"', "b c\n"),
    ("eval 'echo $((1+1))'", "2\n"),
    ("printf '%s-%d\\n' a 5", "a-5\n"),
    ('printf "%5s|%-3s|%x|%o|%c\\n" ab c 255 8 zed', "   ab|c  |ff|10|z\n"),
    ("cd /; pwd", "/\n"),
    ("test 3 -gt 2 && echo gt", "gt\n"),
    ('[ -z "" ] && echo z', "z\n"),
    ("type true", "true is a shell builtin\n"),
    ("command -v echo", "echo\n"),
    ("getopts ab: o -b x; echo $o $OPTARG", "b x\n"),
    ("alias e=echo\ne hi", "hi\n"),
    ("echo -n x; echo", "x\n"),
    ('set -- a "b c"; echo $#; set --; echo $#', "2\n0\n"),
    ("umask 022; umask", "0022\n"),
    ('trap "echo T" INT; trap', "trap -- 'echo T' INT\n"),
    ("wait; echo $?", "0\n"),
]


@pytest.mark.parametrize("script,stdout", DASH_CASES)
def test_matches_dash(script, stdout):
    assert sym(script)[1] == stdout


def test_shift_past_end_fails():
    assert sym("shift")[0] == 2


def test_echo_keeps_backslashes():
    assert sym(r"echo 'a\tb'")[1] == "a\\tb\n"


def test_read_without_input_fails():
    assert sym("read x; echo $?")[1] == "1\n"


def test_export_and_readonly_listings(sh_out):
    assert "export v='1'" in sh_out("v=1; export v; export -p")
    assert "readonly x='3'" in sh_out("x=3; readonly x; readonly -p")


def test_exported_variable_reaches_child(sh_out):
    assert sh_out("export V=1; env | grep '^V='") == "V=1\n"


def test_local_outside_function_is_error():
    assert sym("local x=1")[0] != 0


def test_exit_status_clamped():
    assert sym("exit 300")[0] == 44

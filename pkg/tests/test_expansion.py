import pytest
from hypothesis import given
from hypothesis import strategies as st

from smolsh.ast import (
    ESEP, FIELDSEP, ExpDone, ExpError, ExpOpts, ExpStart, Exp, FError, FLength,
    FDefault, FNormal, Lit, Param, QStr, Sep, Src, Str, WordOpts,
)
from smolsh.expansion import (
    apply_format, combine_fields, expand_word_now, field_split, remove_quotes,
    skip_splitting, step_expansion, step_words, to_fields, trim_rnl, unescape, ExpansionFailure,
)
from smolsh.os_symbolic import SymbolicSystem, run_symbolic
from smolsh.parser import parse_program
from smolsh.state import ShellState

AP = {"dir": {n: {"file": ""} for n in ["ap", "app", "appall", "apparition", "appendix", "applejack"]}}


def make_shell(fs=None, env=None, cwd="/"):
    system = SymbolicSystem(fs)
    proc = system.start(lambda h, e, p: ShellState(h, e, p), None, dict(env or {}), cwd)
    return proc.sh


def word(text: str) -> tuple:
    """The words of ``echo <text>`` minus the command name."""
    c = parse_program("echo " + text)
    return c.words[2:]


def expand(sh, text: str, split=True, glob=True):
    return expand_word_now(sh, ExpStart(ExpOpts(split, glob), word(text)))


def test_glob_question_mark():
    sh = make_shell(AP)
    assert expand(sh, "ap?") == ExpDone(("app",))


def test_quotes_inhibit_glob():
    sh = make_shell(AP)
    assert expand(sh, '"a*"') == ExpDone(("a*",))


def test_empty_word_gives_no_fields():
    assert expand_word_now(make_shell(), ExpStart(ExpOpts(), ())) == ExpDone(())


def test_glob_prefix_and_no_match():
    sh = make_shell(AP)
    assert expand(sh, "appa*") == ExpDone(("appall", "apparition"))
    assert expand(sh, "z*") == ExpDone(("z*",))


def test_noglob_option():
    sh = make_shell(AP)
    sh.options.add("noglob")
    assert expand(sh, "ap?") == ExpDone(("ap?",))


def test_state_machine_shape():
    sh = make_shell()
    sh.set_global("x", "a b")
    es = ExpStart(ExpOpts(True, True), word("$x"))
    names = [type(es).__name__]
    while not isinstance(es, ExpDone):
        es, _ = step_expansion(sh, es)
        names.append(type(es).__name__)
    assert names[0] == "ExpStart" and names[-1] == "ExpDone"
    assert "ExpSplit" in names and names.index("ExpSplit") < names.index("ExpPath")
    assert es == ExpDone(("a", "b"))


def test_split_skipped_without_split_option():
    sh = make_shell()
    sh.set_global("x", "a b")
    es = ExpStart(ExpOpts(False, False), word("$x"))
    seen = []
    while not isinstance(es, ExpDone):
        es, _ = step_expansion(sh, es)
        seen.append(type(es).__name__)
    assert "ExpSplit" not in seen and "ExpPath" in seen
    assert es == ExpDone(("a b",))


def test_step_words_literal_classes():
    sh = make_shell()
    e, w, did = step_words(sh, WordOpts(dq=True), (), (Lit("x"),))
    assert e == (QStr("x"),) and w == () and not did
    e, _, _ = step_words(sh, WordOpts(gen=True), (), (Lit("x"),))
    assert e == (Exp("x"),)
    e, _, _ = step_words(sh, WordOpts(), (), (Lit("x"),))
    assert e == (Src("x"),)
    e, _, _ = step_words(sh, WordOpts(), (), (Sep(),))
    assert e == (ESEP,)


def test_error_format_raises_with_message():
    sh = make_shell()
    e, w = (), (Param("y", FError((Lit("custom msg"),), False)),)
    with pytest.raises(ExpansionFailure) as info:
        for _ in range(20):
            e, w, _ = step_words(sh, WordOpts(), e, w)
    assert "custom msg" in info.value.message


def test_error_format_ends_in_error_state():
    sh = make_shell()
    es = expand(sh, "${y?gone}")
    assert isinstance(es, ExpError)


def test_arith_updates_state():
    sh = make_shell(env={"y": "42", "x": "5"})
    assert expand(sh, "$((y += $x))") == ExpDone(("47",))
    assert sh.lookup("y") == "47"


def test_parameter_formats():
    sh = make_shell()
    sh.set_global("x", "a b c")
    assert apply_format(sh, "x", FLength(), "a b c") == ("length", "5")
    assert expand(sh, "${x#*[ab]}", split=False) == ExpDone((" b c",))
    assert expand(sh, "${x##*[ab]}", split=False) == ExpDone((" c",))
    assert apply_format(sh, "y", FDefault((Lit("w"),), False), None) == ("words", (Lit("w"),))
    assert apply_format(sh, "y", FNormal(), None) == ("value", "")


def test_null_mode():
    sh = make_shell()
    assert apply_format(sh, "v", FDefault((Lit("w"),), True), "") == ("words", (Lit("w"),))
    assert apply_format(sh, "v", FDefault((Lit("w"),), False), "") == ("value", "")


def test_tilde_forms():
    sh = make_shell(env={"HOME": "/home/me"})
    assert expand(sh, "~") == ExpDone(("/home/me",))
    assert expand(sh, "~root") == ExpDone(("/root",))
    assert expand(sh, "~nosuchuser") == ExpDone(("~nosuchuser",))
    sh.set_global("usr", "root")
    assert expand(sh, "~$usr") == ExpDone(("~root",))


def test_nounset():
    sh = make_shell()
    sh.options.add("nounset")
    assert isinstance(expand(sh, "$nope"), ExpError)


def test_quoted_at_gives_one_field_per_param():
    sh = make_shell()
    sh.positional = ["a b", "", "c"]
    assert expand(sh, '"$@"') == ExpDone(("a b", "", "c"))
    assert expand(sh, "$*") == ExpDone(("a", "b", "c"))
    sh.positional = []
    assert expand(sh, '"$@"') == ExpDone(())


def test_field_split_examples():
    sh = make_shell()
    assert combine_fields(field_split(sh, (Exp("a b"),))) == ["a", "b"]
    assert combine_fields(field_split(sh, (QStr("a b"),))) == ["a b"]
    sh.set_global("IFS", ",")
    assert combine_fields(field_split(sh, (Exp("a,,b"),))) == ["a", "", "b"]


def test_unset_ifs_uses_default():
    sh = make_shell()
    sh.unset("IFS")
    assert combine_fields(field_split(sh, (Exp(" a\tb\nc "),))) == ["a", "b", "c"]


def test_only_ifs_whitespace_gives_no_fields():
    sh = make_shell()
    assert combine_fields(field_split(sh, (Exp("  \t "),))) == []


def test_skip_splitting_and_to_fields():
    sh = make_shell()
    assert combine_fields(skip_splitting(sh, (Exp("a b"),))) == ["a b"]
    assert skip_splitting(sh, ()) == ()
    assert to_fields(sh, (Src("x"), QStr("y"))) == ["xy"]


def test_combine_fields():
    assert combine_fields(remove_quotes((QStr(""),))) == [""]
    assert combine_fields((Str("a"), FIELDSEP, Str("b"))) == ["a", "b"]
    assert unescape((Str("*"),)) == (Str("*"),)


def test_trim_rnl():
    assert trim_rnl("abc\n\n") == "abc"
    assert trim_rnl("\n") == ""
    assert trim_rnl("a\nb") == "a\nb"


def test_hidden_files_need_leading_dot():
    sh = make_shell({"dir": {".profile": {"file": ""}, "p": {"file": ""}}})
    assert expand(sh, "*") == ExpDone(("p",))
    # dash lists the . and .. entries too
    assert expand(sh, ".*") == ExpDone((".", "..", ".profile"))


def test_command_substitution_trace():
    fs = {"dir": {n: {"file": ""} for n in "abc"}}
    trace = run_symbolic("x=$(ls)", fs_spec=fs)
    rules = [s["rule"] for s in trace["steps"]]
    i = rules.index("CmdSubst")
    j = rules.index("CmdSubstRead", i)
    k = rules.index("CmdSubstWait", j)
    assert i < j < k
    deltas = [s["env_delta"]["x"] for s in trace["steps"] if "x" in s.get("env_delta", {})]
    assert deltas == ["a\nb\nc"]


def test_cmdsubst_trims_and_sets_status():
    trace = run_symbolic("x=$(echo hi; exit 3); echo \"[$x] $?\"")
    assert trace["final"]["stdout"] == "[hi] 3\n"


TEXT = st.text(alphabet="ab *?[]\"'", max_size=6)


@given(TEXT)
def test_quoted_content_is_bit_identical(s):
    sh = make_shell(AP)
    sh.set_global("v", s)
    assert expand(sh, '"$v"') == ExpDone((s,))


@given(st.lists(st.text(alphabet="ab ", max_size=3), max_size=4))
def test_quoted_at_count(params):
    sh = make_shell()
    sh.positional = list(params)
    assert len(expand(sh, '"$@"').fields) == len(params)

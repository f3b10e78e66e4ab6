import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smolsh.arith import ArithSyntaxError, Assign, Binary, Const
from smolsh.ast import (
    SEP, Arith, CmdSubst, For, If, Lit, Not, Param, Pipeline, Quoted, RHere, Simple, Tilde, While,
)
from smolsh.parser import (
    Blank, Complete, Eof, ParseError, ParseSession, SyntaxErr, parse_all, parse_arithmetic,
    parse_next, parse_program,
)


def words(*ws):
    out = []
    for i, w in enumerate(ws):
        if i:
            out.append(SEP)
        out.append(Lit(w))
    return tuple(out)


def test_glob_stays_literal():
    assert parse_program("echo a*") == Simple(words=words("echo", "a*"))


def test_until_desugars_to_while_not():
    assert parse_program("until false; do break; done") == \
        While(Not(Simple(words=words("false"))), Simple(words=words("break")))


def test_assignment_with_command_substitution():
    assert parse_program("x=$(ls)") == Simple(assigns=(("x", (CmdSubst(Simple(words=words("ls"))),)),))


def test_backquotes_parse_like_dollar_paren():
    assert parse_program("x=`ls`") == parse_program("x=$(ls)")


def test_escaped_metachar_becomes_literal():
    c = parse_program(r"echo \*")
    assert c.words[-1] == Quoted((Lit("*"),))


def test_tab_stripping_heredoc():
    c = parse_program("cat <<-EOF\n\tx\n\t\ty\n\tEOF\n")
    assert c.redirs == (RHere(0, "default", (Lit("x\ny\n"),)),)


def test_quoted_delimiter_marks_noexpand():
    c = parse_program("cat <<'E'\n$x\nE\n")
    assert c.redirs == (RHere(0, "noexpand", (Lit("$x\n"),)),)


def test_heredocs_drain_in_order():
    c = parse_program("cat <<A <<B\na\nA\nb\nB\n")
    assert [r.body for r in c.redirs] == [(Lit("a\n"),), (Lit("b\n"),)]


def test_tilde_and_param_codes():
    c = parse_program("echo ~root $x ${#x} $((1+2))")
    kinds = [type(w).__name__ for w in c.words if w is not SEP]
    assert kinds == ["Lit", "Tilde", "Param", "Param", "Arith"]
    assert Tilde("root") in c.words


def test_pipeline_and_negation():
    c = parse_program("! a | b")
    assert isinstance(c, Not) and isinstance(c.cmd, Pipeline) and len(c.cmd.cmds) == 2


def test_double_bang_is_error():
    with pytest.raises(ParseError):
        parse_program("! ! true")


def test_for_and_if_shapes():
    assert isinstance(parse_program("for i in a b; do :; done"), For)
    assert isinstance(parse_program("if a; then b; elif c; then d; fi"), If)


def test_high_bytes_pass_through():
    assert parse_program("echo \xe9\xff").words[-1] == Lit("\xe9\xff")


def test_blank_and_eof():
    s = ParseSession.from_string("\n")
    assert isinstance(parse_next(s), Blank)
    assert isinstance(parse_next(s), Eof)


@pytest.mark.parametrize("text,msg", [
    ('echo "abc\n', "unterminated"),
    ("cat <<E\nabc\n", "here-document"),
    ("if true; then\n", ""),
])
def test_unterminated_input_is_syntax_error(text, msg):
    r = parse_next(ParseSession.from_string(text))
    assert isinstance(r, SyntaxErr) and msg in r.message


def test_syntax_error_carries_line_and_parsing_resumes():
    s = ParseSession.from_string("true\nfi\necho ok\n")
    assert isinstance(parse_next(s), Complete)
    err = parse_next(s)
    assert isinstance(err, SyntaxErr) and err.lineno == 2
    nxt = parse_next(s)
    assert nxt.cmd == Simple(words=words("echo", "ok")) and nxt.cmd.lineno == 3


def test_interactive_prompts():
    lines = iter(["echo a \\\n", "b\n"])
    prompts = []
    s = ParseSession(reader=lambda: next(lines, None), interactive=True, prompt=prompts.append)
    r = parse_next(s, {}, "P1 ", "P2 ")
    assert r.cmd == Simple(words=words("echo", "a", "b"))
    assert prompts == ["P1 ", "P2 "]


def test_alias_in_command_position_only():
    aliases = {"ll": "ls -l"}
    r = parse_next(ParseSession.from_string("ll ll\n"), aliases)
    assert r.cmd == Simple(words=words("ls", "-l", "ll"))


def test_recursive_alias_is_cut_off():
    r = parse_next(ParseSession.from_string("a\n"), {"a": "a b"})
    assert r.cmd == Simple(words=words("a", "b"))


def test_function_definition_needs_compound_body():
    assert type(parse_program("f() { :; }")).__name__ == "FnDef"


def test_parse_arithmetic():
    assert parse_arithmetic("y += 5") == Assign("y", "+=", Const(5))
    assert parse_arithmetic("2+3*4") == Binary("+", Const(2), Binary("*", Const(3), Const(4)))
    with pytest.raises(ArithSyntaxError):
        parse_arithmetic("")
    with pytest.raises(ArithSyntaxError):
        parse_arithmetic("1 +")


SIMPLE_LINES = st.lists(st.sampled_from([
    "echo hi", "x=1", "a | b", "if a; then b; fi", "f() { :; }", "for i in 1 2; do :; done",
    "case $x in a) ;; esac", "echo \"$y\" 'q'", "cat <<E\nbody\nE", "(sub)", "! neg",
]), min_size=1, max_size=6)


@settings(max_examples=100, deadline=None)
@given(SIMPLE_LINES)
def test_parsing_is_deterministic(lines):
    text = "\n".join(lines) + "\n"
    assert parse_all(text) == parse_all(text)
    assert len(parse_all(text)) == len(lines)


def test_arith_body_kept_as_word():
    c = parse_program("echo $((y += $x))")
    arith = c.words[-1]
    assert isinstance(arith, Arith)
    assert Param("x", arith.body[-1].fmt) in arith.body

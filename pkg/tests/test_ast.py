import json
import os

import jsonschema
import pytest

from conftest import CORPUS
from smolsh.ast import (
    SEP, CmdSubst, Lit, Not, RFile, Simple, render, render_any, to_trace_json, trace_record,
)
from smolsh.os_symbolic import run_symbolic, trace_schema
from smolsh.parser import ParseError, parse_all, parse_program


def lit_words(*ws):
    out = []
    for i, w in enumerate(ws):
        if i:
            out.append(SEP)
        out.append(Lit(w))
    return tuple(out)


def test_render_not():
    assert render(Not(Simple(words=lit_words("true")))) == "! true"


def test_render_simple_with_assign_and_redir():
    c = Simple(assigns=(("x", (Lit("5"),)),), words=lit_words("echo", "hi"),
               redirs=(RFile(1, ">", (Lit("f"),)),))
    assert render(c) == "x=5 echo hi >f"


def test_render_quotes_unsafe_literals():
    c = parse_program("echo 'a b' \"it's\"")
    assert parse_program(render(c)) == c


def test_runtime_forms_render_bracketed():
    from smolsh.ast import Break
    assert render_any(Break(2)).startswith("⟨Break")


def corpus_scripts():
    for f in sorted(os.listdir(CORPUS)):
        if f.endswith(".test"):
            with open(os.path.join(CORPUS, f), encoding="latin-1") as fh:
                yield f[:-5], fh.read()


@pytest.mark.parametrize("name,text", list(corpus_scripts()))
def test_render_roundtrip_over_corpus(name, text):
    try:
        cmds = parse_all(text)
    except ParseError:
        assert name.startswith("parse.")
        return
    for c in cmds:
        assert parse_all(render(c)) == [c]


def test_trace_record_phase_and_rule():
    rec = json.loads(to_trace_json(1, "expand", "ExpStart", {"x": "1"}, "term"))
    assert rec["phase"] == "expand" and rec["rule"] == "ExpStart"
    assert list(rec) == ["n", "phase", "rule", "term", "env_delta", "stdout", "stderr"]


def test_trace_record_omits_empty_delta():
    assert "env_delta" not in trace_record(3, "eval", "Done", {}, "t")


def test_trace_record_sorts_delta_keys():
    text = to_trace_json(1, "eval", "R", {"b": "1", "a": None}, "t")
    assert text.index('"a"') < text.index('"b"')


def test_echo_hi_trace_validates():
    trace = json.loads(json.dumps(run_symbolic("echo hi")))
    jsonschema.validate(trace, trace_schema())
    for step in trace["steps"]:
        jsonschema.validate(step, {"$ref": "#/$defs/step", "$defs": trace_schema()["$defs"]})


def test_parser_never_emits_runtime_forms():
    from smolsh import ast
    runtime = (ast.CmdArgs, ast.CmdRedirs, ast.CmdAssigns, ast.CmdReady, ast.Run, ast.WhileCond,
               ast.WhileBody, ast.ForArgs, ast.ForStart, ast.ForRunning, ast.CaseArg, ast.CaseMatch,
               ast.CaseCheck, ast.Call, ast.Break, ast.Continue, ast.Return, ast.Exit, ast.Done,
               ast.Redirs, ast.EvalLoop, ast.EvalLoopCmd, ast.Exec, ast.Wait, ast.Trapped,
               ast.CmdSubstRunning, ast.CmdWait, ast.AssignRun, ast.ErrorRun, ast.MatchRun)

    def walk(v):
        assert not isinstance(v, runtime), v
        if isinstance(v, tuple):
            for x in v:
                walk(x)
        elif hasattr(v, "__dataclass_fields__"):
            for k in v.__dataclass_fields__:
                walk(getattr(v, k))

    for name, text in corpus_scripts():
        try:
            for c in parse_all(text):
                walk(c)
        except ParseError:
            pass


def test_cmdsubst_in_assignment_shape():
    c = parse_program("x=$(ls)")
    assert c == Simple(assigns=(("x", (CmdSubst(Simple(words=(Lit("ls"),))),)),))

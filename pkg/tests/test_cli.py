import io
import json
import os
import subprocess
import sys

import jsonschema
import pytest

from conftest import CORPUS, DASH, smolsh
from smolsh.cli import stepper_main
from smolsh.harness import harness_main
from smolsh.os_symbolic import trace_schema


def test_exit_status(tmp_path):
    assert smolsh("exit 7", cwd=str(tmp_path)).returncode == 7


def test_c_name_and_args(sh_out):
    assert sh_out('echo "$0|$1|$#"', args=["name", "a1", "a2"]) == "name|a1|2\n"


def test_script_operand(tmp_path):
    (tmp_path / "s.sh").write_text('echo "$0 $1"\n')
    p = subprocess.run([sys.executable, "-m", "smolsh", "s.sh", "x"], cwd=tmp_path,
                       capture_output=True)
    assert p.stdout == b"s.sh x\n" and p.returncode == 0


def test_missing_script_is_127(tmp_path):
    p = subprocess.run([sys.executable, "-m", "smolsh", "nope.sh"], cwd=tmp_path,
                       capture_output=True)
    assert p.returncode == 127 and b"nope.sh" in p.stderr


def test_script_from_stdin(tmp_path):
    assert smolsh("", cwd=str(tmp_path)).returncode == 0
    p = subprocess.run([sys.executable, "-m", "smolsh", "-s", "q"], cwd=tmp_path,
                       input=b'echo "$1"\n', capture_output=True)
    assert p.stdout == b"q\n"


def test_trace_stream_on_fd9(tmp_path):
    trace = tmp_path / "t.jsonl"
    subprocess.run([DASH, "-c", 'exec "$@" 9>"$T"', "x", sys.executable, "-m", "smolsh",
                    "-c", "echo hi"],
                   env={"PATH": os.environ["PATH"], "T": str(trace), "SMOLSH_TRACE": "1"},
                   cwd=tmp_path, capture_output=True, check=True)
    recs = [json.loads(line) for line in trace.read_text().splitlines()]
    assert recs and [r["n"] for r in recs] == list(range(1, len(recs) + 1))
    assert {"phase", "rule", "term"} <= set(recs[0])


def step(*argv):
    buf = io.StringIO()
    code = stepper_main(list(argv), out=buf)
    return code, json.loads(buf.getvalue())


def test_stepper_cmd():
    code, env = step("--cmd", "echo hi")
    assert code == 0 and env["version"] == 1 and env["final"]["stdout"] == "hi\n"
    jsonschema.validate(env, trace_schema())


def test_stepper_fuel_one():
    _, env = step("--cmd", "echo a; echo b", "--fuel", "1")
    assert len(env["steps"]) == 1 and env["final"]["fuel_exhausted"]


def test_stepper_env_and_fs(tmp_path):
    fs = tmp_path / "fs.json"
    fs.write_text(json.dumps({"dir": {"f": {"file": "x"}}}))
    _, env = step("--cmd", "echo $V; ls", "--env", "V=1", "--fs", str(fs))
    assert env["final"]["stdout"] == "1\nf\n"


def test_stepper_parse_error():
    code, env = step("--cmd", "if then")
    assert code == 2 and env["final"]["status"] == 2
    assert env["steps"][0]["rule"] == "ParseError"
    jsonschema.validate(env, trace_schema())


def test_stepper_needs_one_source():
    with pytest.raises(SystemExit):
        stepper_main([], out=io.StringIO())


def corpus_tests():
    return sorted(f for f in os.listdir(CORPUS) if f.endswith(".test"))


def test_every_corpus_trace_validates():
    schema = trace_schema()
    for name in corpus_tests():
        _, env = step(os.path.join(CORPUS, name), "--fuel", "2000")
        jsonschema.validate(env, schema)


@pytest.fixture
def mini_corpus(tmp_path):
    files = {
        "sh.ok.test": "echo ok\n", "sh.ok.test.out": "ok\n",
        "sh.bad.test": "echo bad\n", "sh.bad.test.out": "good\n",
        "sh.status.test": "exit 3\n", "sh.status.test.out": "",
        "sh.slow.test": "while :; do :; done\n", "sh.slow.test.out": "",
        "sh.nofixture.test": "echo\n",
        "sh.echo.test": "echo 'a\\tb'\n", "sh.echo.test.out": "a\\tb\n",
        "DIVERGENCES": "sh.echo: backslashes\n",
    }
    for name, text in files.items():
        (tmp_path / name).write_text(text)
    return tmp_path


def test_harness_verdicts(mini_corpus):
    buf = io.StringIO()
    code = harness_main([str(mini_corpus), "--shell", DASH, "--timeout", "1", "--jobs", "1"], out=buf)
    text = buf.getvalue()
    assert code == 1
    assert "PASS sh.ok\n" in text
    assert "FAIL sh.bad (stdout)" in text
    assert "FAIL sh.status (status)" in text
    assert "FAIL sh.slow (timeout)" in text
    assert "BROKEN sh.nofixture (missing .test.out)" in text
    assert "category sh: 1/6" in text


def test_harness_diff_mode(mini_corpus):
    buf = io.StringIO()
    code = harness_main([str(mini_corpus), "--only", "sh.echo", "--only", "sh.ok",
                         "--diff", DASH], out=buf)
    text = buf.getvalue()
    assert "SAME sh.ok" in text
    assert "DIFF sh.echo (stdout) documented: backslashes" in text
    assert code == 0

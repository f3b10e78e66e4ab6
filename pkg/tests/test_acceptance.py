"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line that conftest prints in the terminal
summary.  Running this file directly prints the same lines.
"""

import functools
import itertools
import os
import random
import subprocess
import sys
import time

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

import oracles
from conftest import ACCEPTANCE, CORPUS, DASH, out
from smolsh import harness
from smolsh import pattern as pat
from smolsh.arith import ArithError, evaluate_text
from smolsh.ast import Exp, Src
from smolsh.expansion import combine_fields, remove_quotes, split_with_ifs
from smolsh.os_symbolic import run_symbolic, trace_json
from smolsh.state import ShellState


def criterion(n: int, title: str):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*a, **kw):
            try:
                detail = fn(*a, **kw)
            except BaseException as e:
                if not isinstance(e, pytest.skip.Exception):
                    ACCEPTANCE[n] = (False, title, str(e).splitlines()[0] if str(e) else type(e).__name__)
                raise
            ACCEPTANCE[n] = (True, title, detail or "")
        return wrapper
    return deco


def sym(script: str, **kw) -> dict:
    return run_symbolic(script, **kw)["final"]


# ---------------------------------------------------------------------------
# 1. expansion examples

ABC = {"dir": {n: {"file": ""} for n in "abc"}}
AP_FILES = ["ap", "app", "appall", "apparition", "appendix", "applejack"]
AP = {"dir": {n: {"file": ""} for n in AP_FILES}}


@criterion(1, "expansion example transcripts")
def test_expansion_examples(tmp_path):
    start = time.monotonic()
    tilde = sym("echo ~root\nusr=root\necho ~$usr", passwd={"root": "/var/root"})
    assert tilde["stdout"] == "/var/root\n~root\n"

    params = sym("x=$(ls)\necho $x,${#x},${x#*[ab]},${x##*[ab]}.", fs_spec=ABC)
    assert params["stdout"] == "a b c,5, b c, c.\n"

    arith = sym("y=42 x=5\necho $((y += $x))\necho $((y)) $y")
    assert arith["stdout"] == "47\n47 47\n"

    # ls receives two names unquoted and one name quoted
    split = sym('x="a b"\nls $x', fs_spec=ABC)
    assert (split["stdout"], split["stderr"], split["status"]) == ("a\nb\n", "", 0)
    quoted = sym('x="a b"\nls "$x"', fs_spec=ABC)
    assert quoted["stdout"] == ""
    assert quoted["stderr"] == "ls: a b: No such file or directory\n"
    assert quoted["status"] != 0

    globs = sym('echo a*\necho ap?\necho appa*\necho "a*"', fs_spec=AP)
    assert globs["stdout"] == ("ap app appall apparition appendix applejack\n"
                               "app\nappall apparition\na*\n")
    elapsed = time.monotonic() - start
    assert elapsed < 1.0, "symbolic transcripts took %.2fs" % elapsed

    # the same transcripts through real system calls
    for n in "abc":
        (tmp_path / n).write_text("")
    got = out('x=$(ls); echo $x,${#x},${x#*[ab]},${x##*[ab]}.\n'
              'y=42 x=5; echo $((y += $x)); echo $((y)) $y', cwd=str(tmp_path))
    assert got == "a b c,5, b c, c.\n47\n47 47\n"
    r = subprocess.run([sys.executable, "-m", "smolsh", "-c", 'x="a b"; ls $x; echo $?; ls "$x"; echo $?'],
                       cwd=str(tmp_path), capture_output=True)
    lines = r.stdout.decode().splitlines()
    assert lines[:3] == ["a", "b", "0"] and lines[3] != "0"
    assert b"a b" in r.stderr
    for n in AP_FILES:
        (tmp_path / n).write_text("")
    got = out('echo ap?; echo appa*; echo "a*"', cwd=str(tmp_path))
    assert got == "app\nappall apparition\na*\n"
    return "%.2fs symbolic" % elapsed


# ---------------------------------------------------------------------------
# 2. negation

ATOMS = st.sampled_from(["true", "false", ":", "(exit 2)", "(exit 7)", "(exit 255)",
                         "[ a = b ]", "test 1 -lt 2", "{ ! true; }", "{ ! false; }"])


def _compound(children):
    pair = st.tuples(children, children)
    return st.one_of(
        pair.map(lambda p: "{ %s && %s; }" % p),
        pair.map(lambda p: "{ %s || %s; }" % p),
        pair.map(lambda p: "{ %s; %s; }" % p),
        pair.map(lambda p: "%s | %s" % p),
        children.map(lambda s: "( %s )" % s),
        children.map(lambda s: "{ ! %s; }" % s),
        st.tuples(children, children, children).map(
            lambda t: "if %s; then %s; else %s; fi" % t),
        children.map(lambda s: "case k in k) %s;; esac" % s),
        children.map(lambda s: "for i in 1; do %s; done" % s),
        children.map(lambda s: "g() { %s; }; g" % s).map(lambda s: "{ %s; }" % s),
    )


SCRIPTS = st.recursive(ATOMS, _compound, max_leaves=6)


@criterion(2, "negation flips status over 200 random scripts")
def test_negation_property():
    start = time.monotonic()
    seen = []

    @settings(max_examples=200, deadline=None, derandomize=True,
              suppress_health_check=list(HealthCheck))
    @given(SCRIPTS)
    def prop(s):
        base = sym(s)["status"]
        neg = sym("! " + s)["status"]
        assert neg == (1 if base == 0 else 0), (s, base, neg)
        seen.append((s, base))

    prop()
    assert len(seen) >= 200
    # replay a sample through the real-syscall shell in one process
    sample = seen[:: max(1, len(seen) // 50)]
    script = "".join("( %s ) >/dev/null 2>&1; echo $?; ( ! %s ) >/dev/null 2>&1; echo $?\n" % (s, s)
                     for s, _ in sample)
    got = out(script).split()
    want = []
    for _, base in sample:
        want += [str(base), "1" if base == 0 else "0"]
    assert got == want
    elapsed = time.monotonic() - start
    assert elapsed < 10.0, "took %.1fs" % elapsed
    return "%d scripts, %.1fs" % (len(seen), elapsed)


# ---------------------------------------------------------------------------
# 3. assignment-only command substitution status

@criterion(3, "assignment-only command status")
def test_assignment_status():
    assert out("x=$(exit 5); echo $?") == "5\n"
    assert out("x=hi; echo $?") == "0\n"
    assert out("false; x=hi; echo $?") == "0\n"
    trace = run_symbolic("x=$(exit 5); echo $?")
    assert trace["final"]["stdout"] == "5\n"
    assert "CmdAssignDoneNoCmd" in [s["rule"] for s in trace["steps"]]
    assert sym("x=hi; echo $?")["stdout"] == "0\n"


# ---------------------------------------------------------------------------
# 4. lexical break

BREAK_SCRIPT = "f() { break; echo hi; }; while true; do f; break; done"


@criterion(4, "break is lexical unless nonlexicalctrl")
def test_lexical_break():
    assert out(BREAK_SCRIPT + " 2>/dev/null") == "hi\n"
    assert out("set -o nonlexicalctrl; " + BREAK_SCRIPT) == ""
    assert sym(BREAK_SCRIPT)["stdout"] == "hi\n"
    assert sym("set -o nonlexicalctrl; " + BREAK_SCRIPT)["stdout"] == ""


# ---------------------------------------------------------------------------
# 5. getopts

GETOPTS = ("for k in 1 2 3 4; do getopts 'ab:c:' opt -ab hi -c hello; "
           "echo \"$? $opt ${OPTARG-} $OPTIND\"; done")


@criterion(5, "getopts call sequence")
def test_getopts_sequence():
    want = "0 a  2\n0 b hi 3\n0 c hello 5\n1 ?  5\n"
    assert out(GETOPTS) == want
    assert sym(GETOPTS)["stdout"] == want


# ---------------------------------------------------------------------------
# 6. demand-driven scheduler

@criterion(6, "symbolic pipelines terminate")
def test_symbolic_pipelines():
    start = time.monotonic()
    first = sym("while true; do echo 5; done | true", fuel=5000)
    t1 = time.monotonic() - start
    assert not first.get("fuel_exhausted")
    assert first["status"] == 0
    start = time.monotonic()
    second = sym("while true; do echo 5; done | { read x; echo $((x+42)); }", fuel=5000)
    t2 = time.monotonic() - start
    assert not second.get("fuel_exhausted")
    assert second["stdout"] == "47\n"
    assert t1 < 1.0 and t2 < 1.0, (t1, t2)
    return "%.2fs, %.2fs" % (t1, t2)


# ---------------------------------------------------------------------------
# 7 and 8 share one system-mode run of the corpus

@pytest.fixture(scope="module")
def system_run():
    shell = harness.default_shell()
    names = harness.discover(CORPUS)
    start = time.monotonic()
    outcomes = {}
    for name in names:
        outcomes[name] = harness.run_script(shell, os.path.join(CORPUS, name + ".test"),
                                            harness.DEFAULT_TIMEOUT)
    return outcomes, time.monotonic() - start


@criterion(7, "corpus passes; diff mode shows only documented divergences")
def test_corpus(system_run):
    outcomes, elapsed = system_run
    names = sorted(outcomes)
    assert len(names) >= 150
    assert {n.split(".")[0] for n in names} == set(harness.CATEGORIES)
    results = [harness.check_fixture(CORPUS, n, lambda base, n=n: outcomes[n], 10.0) for n in names]
    failed = [r.name for r in results if r.verdict != "PASS"]
    assert not failed, "fixture failures: %s" % failed
    assert elapsed < 60.0, "system run took %.1fs" % elapsed

    if not os.path.exists(DASH):
        pytest.skip("no reference shell at " + DASH)
    documented = harness.read_divergences(CORPUS)
    diffs = []
    for n in names:
        ref = harness.run_script([DASH], os.path.join(CORPUS, n + ".test"), 10.0)
        if (ref.stdout, ref.status) != (outcomes[n].stdout, outcomes[n].status):
            diffs.append(n)
    assert len(diffs) <= 5, diffs
    undocumented = [n for n in diffs if not documented.get(n)]
    assert not undocumented, undocumented
    return "%d tests in %.1fs, %d documented divergences" % (len(names), elapsed, len(diffs))


@criterion(8, "symbolic and system outcomes agree")
def test_symbolic_equivalence(system_run):
    outcomes, _ = system_run
    checked = 0
    mismatches = []
    for name in sorted(outcomes):
        with open(os.path.join(CORPUS, name + ".test"), "rb") as f:
            script = f.read()
        if not harness.is_symbolic(script):
            continue
        got = harness.run_symbolic_script(script, 5000)
        checked += 1
        want = outcomes[name]
        if got.note or (got.stdout, got.status) != (want.stdout, want.status):
            mismatches.append(name)
    assert checked >= 60
    assert not mismatches, mismatches
    return "%d scripts" % checked


# ---------------------------------------------------------------------------
# 9. oracle suites

def _arith_oracle(count: int, seed: int) -> int:
    rng = random.Random(seed)
    for _ in range(count):
        tree = oracles.random_arith_tree(rng, rng.randint(1, 5))
        env0 = {n: rng.randint(-100, 100) for n in "xyz" if rng.random() < 0.7}
        env = dict(env0)
        try:
            want = (oracles.arith_eval(tree, env), env)
        except oracles.OracleError:
            want = "error"
        sh = ShellState(env={k: str(v) for k, v in env0.items()})
        text = oracles.arith_text(tree)
        try:
            v = evaluate_text(sh, text)
            got = (v, {k: int(sh.lookup(k)) for k in "xyz" if sh.lookup(k) is not None})
        except ArithError:
            got = "error"
        assert got == want, (text, env0)
    return count


def _pattern_oracle() -> int:
    strings = ["".join(p) for k in range(7) for p in itertools.product("ab.", repeat=k)]
    tokens = list(oracles.PATTERN_TOKENS)
    n = 0
    for k in range(5):
        for pt in itertools.product(tokens, repeat=k):
            compiled = pat.compile_text("".join(pt))
            rx = oracles.pattern_regex(pt)
            for s in strings:
                want = rx.fullmatch(s) is not None
                assert pat.match(compiled, s) == want, ("".join(pt), s)
                assert pat.match_filename(compiled, s) == oracles.filename_match(pt, s), ("".join(pt), s)
                n += 1
    return n


def _split_oracle(count: int, seed: int) -> int:
    rng = random.Random(seed)
    alphabet = " \t\n,:ab"
    for _ in range(count):
        ifs = "".join(rng.sample(" \t\n,:a", rng.randint(0, 4)))
        pieces = []
        for _ in range(rng.randint(1, 3)):
            text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 8)))
            pieces.append((text, rng.random() < 0.75))
        words = tuple(Exp(t) if splittable else Src(t) for t, splittable in pieces)
        got = combine_fields(remove_quotes(split_with_ifs(ifs, words)))
        assert got == oracles.split_fields(ifs, pieces), (ifs, pieces)
    return count


@criterion(9, "arithmetic, pattern and field-splitting oracles")
def test_oracle_suites():
    a = _arith_oracle(10_000, 2024)
    p = _pattern_oracle()
    s = _split_oracle(5_000, 2025)
    return "%d trees, %d matches, %d splits" % (a, p, s)


# ---------------------------------------------------------------------------
# 10. determinism

@criterion(10, "symbolic traces are deterministic")
def test_deterministic_traces():
    names = harness.discover(CORPUS)
    for name in names:
        with open(os.path.join(CORPUS, name + ".test"), encoding="latin-1") as f:
            script = f.read()
        kw = dict(env={"HOME": "/home/test"}, cwd="/home/test",
                  fs_spec={"dir": {"home": {"dir": {"test": {"dir": {}}}}, "tmp": {"dir": {}}}})
        first = trace_json(run_symbolic(script, **kw))
        second = trace_json(run_symbolic(script, **kw))
        assert first == second, name
    return "%d scripts" % len(names)


if __name__ == "__main__":
    code = pytest.main([__file__, "-q"])
    sys.exit(code)

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import PATTERN_TOKENS, affix_remove, filename_match, pattern_match
from smolsh import pattern as pat


def c(text):
    return pat.compile_text(text)


# affix results recorded from dash with x=abcabc
@pytest.mark.parametrize("side,mode,p,out", [
    ("prefix", "shortest", "*b", "cabc"),
    ("prefix", "longest", "*b", "c"),
    ("suffix", "shortest", "b*", "abca"),
    ("suffix", "longest", "b*", "a"),
    ("prefix", "shortest", "zz", "abcabc"),
])
def test_affix_removal(side, mode, p, out):
    assert pat.remove_affix(side, mode, c(p), "abcabc") == out


def test_affixes_with_brackets():
    assert pat.remove_affix("prefix", "shortest", c("*[ab]"), "a b c") == " b c"
    assert pat.remove_affix("prefix", "longest", c("*[ab]"), "a b c") == " c"


@pytest.mark.parametrize("p,s,ok", [
    ("ap?", "app", True), ("ap?", "ap", False), ("a*", "a", True), ("*", "", True),
    ("[!]]?", "a]", True), ("[[:alpha:]]", "b", True), ("[a-]", "-", True), ("[\\\\]", "\\", True),
    ("[[:digit:]]", "\xe9", False), ("[!a]", "\xe9", True), ("[", "[", True), ("a[", "a[", True),
])
def test_match_examples(p, s, ok):
    assert pat.match(c(p), s) is ok


def test_quoted_segments_match_literally():
    p = pat.compile([("*", True)])
    assert pat.match(p, "*") and not pat.match(p, "x")
    assert not pat.is_magic(p) and pat.literal_text(p) == "*"
    assert pat.is_magic(c("a*"))


def test_filename_dot_rule():
    assert not pat.match_filename(c("*"), ".profile")
    assert pat.match_filename(c(".*"), ".profile")
    assert pat.match_filename(c("*"), ".x", explicit_dot_required=False)


TOKENS = st.lists(st.sampled_from(sorted(PATTERN_TOKENS)), max_size=5)
SUBJECT = st.text(alphabet="ab.", max_size=6)


@given(TOKENS, SUBJECT)
def test_match_agrees_with_regex(tokens, s):
    assert pat.match(c("".join(tokens)), s) == pattern_match(tokens, s)
    assert pat.match_filename(c("".join(tokens)), s) == filename_match(tokens, s)


@given(TOKENS, SUBJECT, st.sampled_from(["prefix", "suffix"]), st.sampled_from(["shortest", "longest"]))
def test_affix_agrees_with_regex(tokens, s, side, mode):
    assert pat.remove_affix(side, mode, c("".join(tokens)), s) == affix_remove(side, mode, tokens, s)


@given(TOKENS, SUBJECT, st.sampled_from(["prefix", "suffix"]))
def test_shortest_removal_keeps_at_least_as_much(tokens, s, side):
    p = c("".join(tokens))
    short = pat.remove_affix(side, "shortest", p, s)
    long_ = pat.remove_affix(side, "longest", p, s)
    assert len(short) >= len(long_)

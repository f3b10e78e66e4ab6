"""Reference implementations used to cross-check the interpreter.

Each oracle is written from the POSIX/C definitions and shares no code
with the package under test.
"""

from __future__ import annotations

import ctypes
import re
from fractions import Fraction


# ---------------------------------------------------------------------------
# arithmetic: trees are nested tuples, evaluated with C int64 semantics

class OracleError(Exception):
    pass


def i64(v: int) -> int:
    return ctypes.c_int64(v).value


def c_div(a: int, b: int) -> int:
    if b == 0:
        raise OracleError("div0")
    # int() of an exact rational truncates toward zero
    return i64(int(Fraction(a, b)))


def c_mod(a: int, b: int) -> int:
    if b == 0:
        raise OracleError("div0")
    return i64(a - b * c_div(a, b))


BINOPS = {
    "+": lambda a, b: i64(a + b),
    "-": lambda a, b: i64(a - b),
    "*": lambda a, b: i64(a * b),
    "/": c_div,
    "%": c_mod,
    "<<": lambda a, b: i64(a << (b % 64)),
    ">>": lambda a, b: a >> (b % 64),
    "<": lambda a, b: int(a < b),
    "<=": lambda a, b: int(a <= b),
    ">": lambda a, b: int(a > b),
    ">=": lambda a, b: int(a >= b),
    "==": lambda a, b: int(a == b),
    "!=": lambda a, b: int(a != b),
    "&": lambda a, b: i64(a & b),
    "^": lambda a, b: i64(a ^ b),
    "|": lambda a, b: i64(a | b),
}


def arith_eval(tree, env: dict) -> int:
    """Evaluate a tuple tree; ``env`` maps names to ints and is updated."""
    kind = tree[0]
    if kind == "num":
        return i64(tree[1])
    if kind == "var":
        return env.get(tree[1], 0)
    if kind == "neg":
        return i64(-arith_eval(tree[1], env))
    if kind == "not":
        return int(arith_eval(tree[1], env) == 0)
    if kind == "inv":
        return i64(~arith_eval(tree[1], env))
    if kind == "and":
        return int(arith_eval(tree[1], env) != 0 and arith_eval(tree[2], env) != 0)
    if kind == "or":
        return int(arith_eval(tree[1], env) != 0 or arith_eval(tree[2], env) != 0)
    if kind == "cond":
        if arith_eval(tree[1], env) != 0:
            return arith_eval(tree[2], env)
        return arith_eval(tree[3], env)
    if kind == "set":
        _, name, op, rhs = tree
        v = arith_eval(rhs, env)
        if op != "=":
            v = BINOPS[op[:-1]](env.get(name, 0), v)
        env[name] = v
        return v
    if kind == "bin":
        _, op, a, b = tree
        x = arith_eval(a, env)
        y = arith_eval(b, env)
        return BINOPS[op](x, y)
    raise ValueError(kind)


def arith_text(tree) -> str:
    """Fully parenthesized source text for a tree."""
    kind = tree[0]
    if kind == "num":
        return "(%d)" % tree[1] if tree[1] >= 0 else "(-%d)" % -tree[1]
    if kind == "var":
        return tree[1]
    if kind == "neg":
        return "(-%s)" % arith_text(tree[1])
    if kind == "not":
        return "(!%s)" % arith_text(tree[1])
    if kind == "inv":
        return "(~%s)" % arith_text(tree[1])
    if kind == "and":
        return "(%s && %s)" % (arith_text(tree[1]), arith_text(tree[2]))
    if kind == "or":
        return "(%s || %s)" % (arith_text(tree[1]), arith_text(tree[2]))
    if kind == "cond":
        return "(%s ? %s : %s)" % tuple(arith_text(t) for t in tree[1:])
    if kind == "set":
        return "(%s %s %s)" % (tree[1], tree[2], arith_text(tree[3]))
    if kind == "bin":
        return "(%s %s %s)" % (arith_text(tree[2]), tree[1], arith_text(tree[3]))
    raise ValueError(kind)


def random_arith_tree(rng, depth: int, names=("x", "y", "z")):
    if depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.3:
            return ("var", rng.choice(names))
        r = rng.random()
        if r < 0.4:
            return ("num", rng.randint(-2 ** 40, 2 ** 40))
        if r < 0.8:
            return ("num", rng.randint(-9, 9))
        return ("num", rng.choice([0, 1, 63, 64, 65, 2 ** 40]))
    k = rng.random()
    if k < 0.08:
        return (rng.choice(["neg", "not", "inv"]), random_arith_tree(rng, depth - 1, names))
    if k < 0.15:
        return (rng.choice(["and", "or"]), random_arith_tree(rng, depth - 1, names),
                random_arith_tree(rng, depth - 1, names))
    if k < 0.2:
        return ("cond",) + tuple(random_arith_tree(rng, depth - 1, names) for _ in range(3))
    if k < 0.3:
        op = rng.choice(["=", "+=", "-=", "*=", "/=", "%=", "<<=", ">>=", "&=", "^=", "|="])
        return ("set", rng.choice(names), op, random_arith_tree(rng, depth - 1, names))
    return ("bin", rng.choice(list(BINOPS)), random_arith_tree(rng, depth - 1, names),
            random_arith_tree(rng, depth - 1, names))


# ---------------------------------------------------------------------------
# patterns: token lists translated to Python regular expressions

PATTERN_TOKENS = {
    "a": "a",
    "b": "b",
    ".": r"\.",
    "*": ".*",
    "?": ".",
    "[!.]": r"[^.]",
    "[a-b]": "[ab]",
}


def pattern_regex(tokens) -> "re.Pattern":
    return re.compile("".join(PATTERN_TOKENS[t] for t in tokens), re.DOTALL)


def pattern_match(tokens, s: str) -> bool:
    return pattern_regex(tokens).fullmatch(s) is not None


def filename_match(tokens, name: str) -> bool:
    """Globbing: a leading dot must be matched by a literal dot."""
    if name.startswith(".") and (not tokens or tokens[0] != "."):
        return False
    return pattern_match(tokens, name)


def affix_remove(side: str, mode: str, tokens, s: str) -> str:
    rx = pattern_regex(tokens)
    cuts = range(len(s) + 1)
    if mode == "longest":
        cuts = reversed(cuts)
    for i in cuts:
        if side == "prefix" and rx.fullmatch(s[:i]):
            return s[i:]
        if side == "suffix" and rx.fullmatch(s[len(s) - i:]):
            return s[:len(s) - i]
    return s


# ---------------------------------------------------------------------------
# field splitting

def split_fields(ifs: str, pieces) -> list:
    """Split a word given as (text, splittable) pieces, per POSIX rules."""
    chars = [(c, splittable) for text, splittable in pieces for c in text]
    white = {c for c in ifs if c in " \t\n"}
    other = set(ifs) - white

    def is_white(k):
        return chars[k][1] and chars[k][0] in white

    def is_other(k):
        return chars[k][1] and chars[k][0] in other

    lo, hi = 0, len(chars)
    while lo < hi and is_white(lo):
        lo += 1
    while hi > lo and is_white(hi - 1):
        hi -= 1
    chars = chars[lo:hi]
    if not ifs:
        text = "".join(c for c, _ in chars)
        return [text] if text else []
    fields = []
    cur = ""
    k = 0
    n = len(chars)
    while k < n:
        if is_white(k) or is_other(k):
            while k < n and is_white(k):
                k += 1
            if k < n and is_other(k):
                k += 1
            while k < n and is_white(k):
                k += 1
            fields.append(cur)
            cur = ""
        else:
            cur += chars[k][0]
            k += 1
    if cur:
        fields.append(cur)
    return fields

"""Shell pattern matching for ``case``, affix removal and globbing.

Patterns arrive as ``(text, quoted)`` segments so that quoting applied
during expansion survives to matching: quoted characters only ever match
themselves.  Character classes follow the C locale; bytes >= 0x80 belong
to no named class.
"""

from __future__ import annotations

import string
from typing import Iterable, Sequence

LIT, ANY, STAR, BRACKET = 0, 1, 2, 3

_CLASSES = {
    "alnum": string.ascii_letters + string.digits,
    "alpha": string.ascii_letters,
    "blank": " \t",
    "cntrl": "".join(chr(c) for c in range(32)) + "\x7f",
    "digit": string.digits,
    "graph": "".join(chr(c) for c in range(33, 127)),
    "lower": string.ascii_lowercase,
    "print": "".join(chr(c) for c in range(32, 127)),
    "punct": string.punctuation,
    "space": " \t\n\r\v\f",
    "upper": string.ascii_uppercase,
    "xdigit": string.hexdigits,
}


def _flatten(segments: Iterable[tuple[str, bool]]) -> list[tuple[str, bool]]:
    """Expand segments to per-character (char, literal) pairs.

    An unquoted backslash escapes the following character, as it does in
    the text of an unquoted expansion.
    """
    chars: list[tuple[str, bool]] = []
    for text, quoted in segments:
        if quoted:
            chars.extend((ch, True) for ch in text)
            continue
        i = 0
        while i < len(text):
            ch = text[i]
            if ch == "\\" and i + 1 < len(text):
                chars.append((text[i + 1], True))
                i += 2
            else:
                chars.append((ch, False))
                i += 1
    return chars


def _bracket(chars: list[tuple[str, bool]], start: int):
    """Parse a bracket expression whose ``[`` is at ``start``.

    Returns ``(token, next_index)`` or None when the bracket is malformed.
    """
    i = start + 1
    n = len(chars)
    negated = False
    if i < n and chars[i] in (("!", False), ("^", False)):
        negated = True
        i += 1
    members: set[str] = set()
    first = True
    while i < n:
        ch, lit = chars[i]
        if ch == "]" and not lit and not first:
            return (BRACKET, negated, frozenset(members)), i + 1
        first = False
        if ch == "[" and not lit and i + 1 < n and chars[i + 1][0] in ":=." and not chars[i + 1][1]:
            kind = chars[i + 1][0]
            j = i + 2
            while j + 1 < n and not (chars[j] == (kind, False) and chars[j + 1] == ("]", False)):
                j += 1
            if j + 1 >= n:
                return None
            name = "".join(c for c, _ in chars[i + 2:j])
            if kind == ":":
                if name not in _CLASSES:
                    return None
                members.update(_CLASSES[name])
            elif len(name) == 1:
                members.add(name)
            else:
                return None
            i = j + 2
            continue
        lo = ch
        if (i + 2 < n and chars[i + 1] == ("-", False)
                and not (chars[i + 2] == ("]", False))):
            hi = chars[i + 2][0]
            members.update(chr(c) for c in range(ord(lo), ord(hi) + 1))
            i += 3
            continue
        members.add(lo)
        i += 1
    return None


def compile(segments: Sequence[tuple[str, bool]]) -> tuple:
    """Compile quote-marked pattern text to a token tuple."""
    return compile_pairs(_flatten(segments))


def compile_pairs(chars: list[tuple[str, bool]]) -> tuple:
    """Compile per-character ``(char, literal)`` pairs."""
    out: list[tuple] = []
    i = 0
    while i < len(chars):
        ch, lit = chars[i]
        if lit:
            out.append((LIT, ch))
        elif ch == "*":
            if not out or out[-1][0] != STAR:
                out.append((STAR,))
        elif ch == "?":
            out.append((ANY,))
        elif ch == "[":
            parsed = _bracket(chars, i)
            if parsed is None:
                out.append((LIT, "["))
            else:
                out.append(parsed[0])
                i = parsed[1]
                continue
        else:
            out.append((LIT, ch))
        i += 1
    return tuple(out)


def compile_text(text: str) -> tuple:
    """Compile an entirely unquoted pattern string."""
    return compile([(text, False)])


def is_magic(p: tuple) -> bool:
    return any(tok[0] != LIT for tok in p)


def literal_text(p: tuple) -> str:
    return "".join(tok[1] for tok in p)


def _one(tok: tuple, ch: str) -> bool:
    kind = tok[0]
    if kind == LIT:
        return tok[1] == ch
    if kind == ANY:
        return True
    return (ch in tok[2]) != tok[1]


def match(p: tuple, s: str) -> bool:
    """Anchored match of the whole of ``s``."""
    n = len(p)
    pi = si = 0
    star = -1
    mark = 0
    while si < len(s):
        if pi < n and p[pi][0] != STAR and _one(p[pi], s[si]):
            pi += 1
            si += 1
        elif pi < n and p[pi][0] == STAR:
            star = pi
            mark = si
            pi += 1
        elif star >= 0:
            pi = star + 1
            mark += 1
            si = mark
        else:
            return False
    while pi < n and p[pi][0] == STAR:
        pi += 1
    return pi == n


def match_filename(p: tuple, name: str, explicit_dot_required: bool = True) -> bool:
    if explicit_dot_required and name.startswith("."):
        if not p or p[0] != (LIT, "."):
            return False
    return match(p, name)


def remove_affix(side: str, mode: str, p: tuple, s: str) -> str:
    """Strip the shortest or longest prefix/suffix of ``s`` matching ``p``."""
    n = len(s)
    if side == "prefix":
        cuts = range(0, n + 1) if mode == "shortest" else range(n, -1, -1)
        for i in cuts:
            if match(p, s[:i]):
                return s[i:]
        return s
    cuts = range(n, -1, -1) if mode == "shortest" else range(0, n + 1)
    for i in cuts:
        if match(p, s[i:]):
            return s[:i]
    return s

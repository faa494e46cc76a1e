"""Minimal s-expression reader with source positions.

Atoms are :class:`Sym` (bare words) or :class:`Str` (double-quoted); lists
are :class:`SList`.  Comments run from ``;`` to end of line.
"""

from __future__ import annotations

from .errors import ParseError


class Sym(str):
    line = 0
    column = 0


class Str(str):
    line = 0
    column = 0


class SList(list):
    line = 0
    column = 0


def _at(x, line: int, col: int):
    x.line, x.column = line, col
    return x


def read_all(text: str) -> list:
    """Parse every top-level expression in ``text``."""
    out: list = []
    stack: list[SList] = []
    i, n = 0, len(text)
    line, col = 1, 1

    def advance(k: int = 1) -> None:
        nonlocal i, line, col
        for _ in range(k):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    def emit(x) -> None:
        (stack[-1] if stack else out).append(x)

    while i < n:
        c = text[i]
        if c.isspace():
            advance()
        elif c == ";":
            while i < n and text[i] != "\n":
                advance()
        elif c == "(":
            stack.append(_at(SList(), line, col))
            advance()
        elif c == ")":
            if not stack:
                raise ParseError("unexpected ')'", line, col)
            lst = stack.pop()
            advance()
            emit(lst)
        elif c == '"':
            l0, c0 = line, col
            advance()
            buf = []
            while True:
                if i >= n:
                    raise ParseError("unterminated string", l0, c0)
                if text[i] == "\\" and i + 1 < n:
                    buf.append(text[i + 1])
                    advance(2)
                    continue
                if text[i] == '"':
                    advance()
                    break
                buf.append(text[i])
                advance()
            emit(_at(Str("".join(buf)), l0, c0))
        else:
            l0, c0 = line, col
            start = i
            while i < n and not text[i].isspace() and text[i] not in '();"':
                advance()
            emit(_at(Sym(text[start:i]), l0, c0))
    if stack:
        lst = stack[-1]
        raise ParseError("unbalanced '(' opened here", lst.line, lst.column)
    return out


def pos(x) -> tuple[int, int]:
    return getattr(x, "line", 0), getattr(x, "column", 0)


def fail(msg: str, x) -> ParseError:
    return ParseError(msg, *pos(x))


def quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


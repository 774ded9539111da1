"""Tokenizer. Newlines are statement separators except inside ( ) and [ ]."""

from __future__ import annotations

from dataclasses import dataclass

from noteg.errors import ParseError

KEYWORDS = frozenset({
    "fn", "return", "if", "else", "while", "for", "in", "range",
    "true", "false", "nil", "and", "or", "not",
})

_TWO_CHAR_OPS = ("==", "!=", "<=", ">=")
_ONE_CHAR_OPS = "=<>+-*/%"
_PUNCT = "(){}[],.;"
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


def _is_digit(ch: str) -> bool:
    # ASCII only; unicode "digits" like superscripts are not numbers here
    return "0" <= ch <= "9"


@dataclass(frozen=True)
class Token:
    kind: str      # number | string | ident | keyword | op | punct | newline | eof
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    brackets: list[str] = []
    line, col = 1, 1
    i = 0
    n = len(source)

    def push(kind: str, text: str, tline: int, tcol: int) -> None:
        tokens.append(Token(kind, text, tline, tcol))

    while i < n:
        ch = source[i]
        if ch == "\n":
            # inside ( or [ a newline is plain whitespace
            if not (brackets and brackets[-1] in "(["):
                if tokens and tokens[-1].kind not in ("newline",):
                    push("newline", "\n", line, col)
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
                col += 1
            continue
        start_line, start_col = line, col
        if _is_digit(ch):
            j = i
            while j < n and _is_digit(source[j]):
                j += 1
            if j < n and source[j] == "." and j + 1 < n and _is_digit(source[j + 1]):
                j += 1
                while j < n and _is_digit(source[j]):
                    j += 1
            text = source[i:j]
            push("number", text, start_line, start_col)
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalpha() or _is_digit(source[j]) or source[j] == "_"):
                j += 1
            text = source[i:j]
            push("keyword" if text in KEYWORDS else "ident", text, start_line, start_col)
            col += j - i
            i = j
            continue
        if ch == '"':
            i += 1
            col += 1
            out: list[str] = []
            while True:
                if i >= n or source[i] == "\n":
                    raise ParseError("unterminated string", start_line, start_col, '"')
                c = source[i]
                if c == '"':
                    i += 1
                    col += 1
                    break
                if c == "\\":
                    if i + 1 >= n:
                        raise ParseError("unterminated string", start_line, start_col, "\\")
                    esc = source[i + 1]
                    if esc not in _ESCAPES:
                        raise ParseError(f"invalid escape '\\{esc}'", line, col, esc)
                    out.append(_ESCAPES[esc])
                    i += 2
                    col += 2
                    continue
                out.append(c)
                i += 1
                col += 1
            push("string", "".join(out), start_line, start_col)
            continue
        two = source[i:i + 2]
        if two in _TWO_CHAR_OPS:
            push("op", two, start_line, start_col)
            i += 2
            col += 2
            continue
        if ch in _ONE_CHAR_OPS:
            push("op", ch, start_line, start_col)
            i += 1
            col += 1
            continue
        if ch in _PUNCT:
            if ch in "([{":
                brackets.append(ch)
            elif ch in ")]}" and brackets:
                brackets.pop()
            push("punct", ch, start_line, start_col)
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", start_line, start_col, ch)

    if tokens and tokens[-1].kind != "newline":
        push("newline", "\n", line, col)
    push("eof", "", line, col)
    return tokens

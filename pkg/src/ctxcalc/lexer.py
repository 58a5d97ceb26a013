"""Tokenizer shared by the context, context-set, and stream grammars."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ExprSyntaxError, UnknownToken

NAME = "name"
INT = "int"
STRING = "string"
END = "end"

# Fixed lexemes, longest first so maximal munch wins.
SYMBOLS = (
    "(+)", "(-)", "<=>", "<<=", ">>=", "[&]", "[+]",
    "=>", "<=", ">=", "==", "!=", "><",
    "^", "!", "|", "/", "&", "%", "<", ">",
    "{", "}", "(", ")", "[", "]", ",", ".", "@", "#",
    "+", "-", "*", "=",
)

# Single-character synonyms for the ASCII operator spellings.
UNICODE_ALIASES = {
    "⊕": "(+)",   # circled plus
    "⊖": "(-)",   # circled minus
    "↑": "^",     # up arrow
    "↓": "!",     # down arrow
    "⇔": "<=>",   # left-right double arrow
    "⇒": "=>",    # rightwards double arrow
    "⇐": "<=",    # leftwards double arrow
    "∩": "&",     # intersection
    "∪": "%",     # union
    "⋈": "><",    # bowtie
    "⊓": "[&]",   # square cap
    "⊞": "[+]",   # squared plus
    "⊆": "<<=",   # subset or equal
    "⊇": ">>=",   # superset or equal
    "≠": "!=",    # not equal
    "≤": "<=",    # less than or equal
    "≥": ">=",    # greater than or equal
    "⟨": "<",     # left angle bracket
    "⟩": ">",     # right angle bracket
}


@dataclass(frozen=True)
class Token:
    kind: str  # NAME | INT | STRING | END | one of SYMBOLS
    text: str
    pos: int  # 0-based offset into the source

    @property
    def column(self) -> int:
        return self.pos + 1


def tokenize(text: str) -> list:
    """Break source text into tokens, ending with an end-of-input marker."""
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in UNICODE_ALIASES:
            tokens.append(Token(UNICODE_ALIASES[ch], ch, i))
            i += 1
            continue
        if ch == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise ExprSyntaxError(
                    f"unterminated string starting at column {i + 1}",
                    position=i + 1,
                )
            tokens.append(Token(STRING, text[i + 1:end], i))
            i = end + 1
            continue
        if ch.isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token(INT, text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token(NAME, text[i:j], i))
            i = j
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token(sym, sym, i))
                i += len(sym)
                break
        else:
            raise UnknownToken(
                f"unknown token {ch!r} at position {i + 1}", position=i + 1
            )
    tokens.append(Token(END, "", n))
    return tokens

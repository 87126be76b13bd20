"""Tokenizer shared by the set-expression and polynomial parsers."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .errors import ParseError

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<int>[0-9]+)|(?P<var>x[0-9]+)|(?P<sym>[{}()+*^])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'int', 'var', a symbol character, or 'eof'
    text: str
    offset: int  # byte offset into the UTF-8 encoding


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    byte = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", byte)
        kind = match.lastgroup
        chunk = match.group()
        if kind != "ws":
            tokens.append(Token(chunk if kind == "sym" else kind, chunk, byte))
        pos = match.end()
        byte += len(chunk.encode("utf-8"))
    tokens.append(Token("eof", "", byte))
    return tokens


class TokenStream:
    def __init__(self, text: str):
        self._tokens = tokenize(text)
        self._i = 0

    def __iter__(self) -> Iterator[Token]:
        return iter(self._tokens[self._i:])

    @property
    def peek(self) -> Token:
        return self._tokens[self._i]

    def next(self) -> Token:
        tok = self._tokens[self._i]
        if tok.kind != "eof":
            self._i += 1
        return tok

    def accept(self, kind: str) -> Token | None:
        if self.peek.kind == kind:
            return self.next()
        return None

    def expect(self, kind: str) -> Token:
        tok = self.peek
        if tok.kind != kind:
            found = tok.text or "end of input"
            raise ParseError(f"expected {kind!r}, found {found!r}", tok.offset)
        return self.next()

    def expect_end(self) -> None:
        tok = self.peek
        if tok.kind != "eof":
            raise ParseError(f"unexpected {tok.text!r}", tok.offset)

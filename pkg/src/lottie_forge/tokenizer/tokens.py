"""Tokens, token streams and their whitespace-separated text form."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple

from ..errors import MalformedStream
from ..numeric import NUMBER_RE, format_number
from .vocab import VOCAB, Vocabulary


class TokenKind(Enum):
    STRUCTURAL = "structural"
    NUMERIC = "numeric"
    TEXT = "text"


class Token(NamedTuple):
    kind: TokenKind
    value: str  # marker name, decimal literal, or the decoded string

    def render(self) -> str:
        if self.kind is TokenKind.STRUCTURAL:
            return f"<|{self.value}|>"
        if self.kind is TokenKind.NUMERIC:
            return self.value
        return json.dumps(self.value, ensure_ascii=True)

    def __str__(self) -> str:
        return self.render()


@lru_cache(maxsize=None)
def S(name: str) -> Token:
    return Token(TokenKind.STRUCTURAL, name)


def N(x) -> Token:
    return Token(TokenKind.NUMERIC, x if isinstance(x, str) else format_number(x))


def T(text: str) -> Token:
    return Token(TokenKind.TEXT, text)


@dataclass(frozen=True)
class TokenStream:
    tokens: tuple[Token, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return TokenStream(self.tokens[k])
        return self.tokens[k]

    def structural_count(self) -> int:
        return sum(t.kind is TokenKind.STRUCTURAL for t in self.tokens)

    def to_ids(self, vocab: Vocabulary = VOCAB) -> list[int]:
        """Integer ids; numeric literals are spelled with digit tokens, text literals are rejected."""
        ids: list[int] = []
        for tok in self.tokens:
            if tok.kind is TokenKind.STRUCTURAL:
                ids.append(vocab.id(tok.value))
            elif tok.kind is TokenKind.NUMERIC:
                ids.extend(vocab.digit_ids(tok.value))
            else:
                raise ValueError("text literals have no vocabulary id")
        return ids


def render_text(stream: Iterable[Token]) -> str:
    return " ".join(tok.render() for tok in stream)


_TEXT_RE = re.compile(
    r'\s*(?:<\|(?P<marker>[^|]*)\|>|(?P<text>"(?:[^"\\]|\\.)*")|(?P<bare>[^\s<"]+)|(?P<junk>\S))'
)


def parse_text(text: str, vocab: Vocabulary = VOCAB) -> TokenStream:
    """Inverse of :func:`render_text`; whitespace between tokens is optional."""
    out: list[Token] = []
    pos, end = 0, len(text.rstrip())
    while pos < end:
        m = _TEXT_RE.match(text, pos)
        if m is None:  # pragma: no cover - the junk branch matches any character
            raise MalformedStream(f"unreadable text at offset {pos}")
        pos = m.end()
        if m["marker"] is not None:
            if m["marker"] not in vocab:
                raise MalformedStream(f"unknown token <|{m['marker']}|>")
            out.append(S(m["marker"]))
        elif m["text"] is not None:
            try:
                out.append(T(json.loads(m["text"])))
            except json.JSONDecodeError:
                raise MalformedStream(f"bad string literal {m['text']}") from None
        elif m["bare"] is not None:
            if not NUMBER_RE.match(m["bare"]):
                raise MalformedStream(f"bad numeric literal {m['bare']!r}")
            out.append(N(m["bare"]))
        else:
            raise MalformedStream(f"unexpected character {m['junk']!r} at offset {m.start('junk')}")
    return TokenStream(out)

"""Lexer derived from a grammar's ident definitions and literals."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .diagnostics import GrammarError, LexError, Position
from .grammar_ast import Constant, Literal, walk_rhs
from .transforms import effective_transform, transform_ident

IDENT = "ident"
KEYWORD = "keyword"
PUNCT = "punct"

DEFAULT_SKIP = (r"\s+", r"//[^\n]*", r"/\*[\s\S]*?\*/")


@dataclass(frozen=True)
class IdentToken:
    name: str
    regex: str
    transform: str = "string"
    compiled: re.Pattern = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "compiled", re.compile(self.regex))

    def fullmatch(self, lexeme: str) -> bool:
        return self.compiled.fullmatch(lexeme) is not None


@dataclass(frozen=True)
class TokenSpec:
    ident_tokens: tuple
    keywords: frozenset
    punctuation: frozenset
    skip: tuple = DEFAULT_SKIP

    def ident(self, name: str):
        for tok in self.ident_tokens:
            if tok.name == name:
                return tok
        return None

    @property
    def literals(self) -> frozenset:
        return self.keywords | self.punctuation


@dataclass(frozen=True)
class Token:
    category: str  # ident, keyword or punct
    kind: str
    lexeme: str
    value: object = None
    line: int = 1
    column: int = 1

    @property
    def position(self) -> Position:
        return Position(self.line, self.column)

    def describe(self) -> str:
        if self.category == IDENT:
            return f"{self.kind} {self.lexeme!r}"
        return repr(self.lexeme)


def _grammar_literals(g) -> list:
    found = []
    for p in g.productions:
        for node in walk_rhs(p.rhs):
            if isinstance(node, Literal):
                found.append(node.text)
            elif isinstance(node, Constant):
                found.extend(node.literals)
    return list(dict.fromkeys(found))


def build_token_spec(g) -> TokenSpec:
    seen = {}
    for ident in g.idents:
        if ident.name in seen:
            raise GrammarError(f"duplicate ident definition {ident.name} (first at {seen[ident.name]})", ident.pos)
        seen[ident.name] = ident.pos
    tokens = tuple(
        IdentToken(ident.name, ident.regex, effective_transform(ident) or "string") for ident in g.all_idents()
    )
    word = next(t for t in tokens if t.name == "IDENT")
    literals = _grammar_literals(g)
    keywords = frozenset(lit for lit in literals if word.fullmatch(lit))
    return TokenSpec(tokens, keywords, frozenset(literals) - keywords)


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.offset = 0
        self.line = 1
        self.column = 1

    def consume(self, length: int) -> str:
        chunk = self.text[self.offset:self.offset + length]
        newlines = chunk.count("\n")
        if newlines:
            self.line += newlines
            self.column = len(chunk) - chunk.rfind("\n")
        else:
            self.column += len(chunk)
        self.offset += length
        return chunk

    @property
    def position(self) -> Position:
        return Position(self.line, self.column)


def tokenize(spec: TokenSpec, text: str) -> list:
    """Split ``text`` into tokens by maximal munch; a literal wins a tie with an ident token."""
    skips = [re.compile(s) for s in spec.skip]
    literals = sorted(spec.literals, key=lambda lit: (-len(lit), lit))
    cursor = _Cursor(text)
    tokens = []
    while cursor.offset < len(text):
        skipped = False
        for rx in skips:
            m = rx.match(text, cursor.offset)
            if m and m.end() > cursor.offset:
                cursor.consume(m.end() - cursor.offset)
                skipped = True
                break
        if skipped:
            continue
        if text.startswith("/*", cursor.offset):
            raise LexError("unterminated block comment", cursor.position)

        literal = next((lit for lit in literals if text.startswith(lit, cursor.offset)), None)
        best, best_len = None, 0
        for tok in spec.ident_tokens:
            m = tok.compiled.match(text, cursor.offset)
            if m and m.end() - cursor.offset > best_len:
                best, best_len = tok, m.end() - cursor.offset

        position = cursor.position
        if literal is not None and len(literal) >= best_len:
            category = KEYWORD if literal in spec.keywords else PUNCT
            tokens.append(Token(category, literal, cursor.consume(len(literal)), None, position.line, position.column))
        elif best is not None:
            lexeme = cursor.consume(best_len)
            value = transform_ident(best.transform, lexeme, position)
            tokens.append(Token(IDENT, best.name, lexeme, value, position.line, position.column))
        else:
            raise LexError(f"unexpected character {text[cursor.offset]!r}", position)
    return tokens


def token_end(tokens: list) -> Position:
    """Position just past the last token, used to report end of input."""
    if not tokens:
        return Position(1, 1)
    last = tokens[-1]
    return Position(last.line, last.column + len(last.lexeme))


__all__ = [
    "IdentToken",
    "Token",
    "TokenSpec",
    "build_token_spec",
    "tokenize",
    "transform_ident",
]

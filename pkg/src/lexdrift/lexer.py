"""Deterministic grammar-level lexing of Java and Python source.

Produces a flat token stream with exact half-open character spans.  Whitespace
is never tokenized (it stays recoverable from the gaps between spans), while
comments and string literals are carried as single opaque literal tokens so
that no downstream rewrite can reach inside them.

The lexer is intentionally not a parser: it knows token shapes, not grammar
productions.  Python indentation is plain inter-token whitespace here, and a
backslash-newline line join is treated as whitespace as well.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum

from .errors import LexError


class Language(str, Enum):
    JAVA = "java"
    PYTHON = "python"


class TokenKind(str, Enum):
    IDENTIFIER = "identifier"
    OPERATOR = "operator"
    KEYWORD = "keyword"
    LITERAL = "literal"
    PUNCTUATION = "punctuation"


@dataclass(frozen=True)
class CodeToken:
    """One grammar-level token: its text, kind, and [start, end) span."""

    lexeme: str
    kind: TokenKind
    start: int
    end: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class TokenIndex:
    """The full token sequence for one source text.

    Invariants (checked by the test suite, relied on everywhere):
      * spans are non-empty, strictly increasing, and non-overlapping;
      * each lexeme equals the source slice at its span;
      * joining lexemes with the original inter-token gaps reproduces the
        source byte-for-byte;
      * only literal-kind tokens (strings, comments) may contain whitespace.
    """

    tokens: tuple[CodeToken, ...]
    source: str
    language: Language

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def identifiers(self) -> list[CodeToken]:
        return [t for t in self.tokens if t.kind is TokenKind.IDENTIFIER]

    def kind_lexeme_seq(self) -> list[tuple[TokenKind, str]]:
        return [(t.kind, t.lexeme) for t in self.tokens]


_JAVA_KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while true false null""".split()
)

_PYTHON_KEYWORDS = frozenset(
    """False None True and as assert async await break class continue def del
    elif else except finally for from global if import in is lambda nonlocal
    not or pass raise return try while with yield""".split()
)

_JAVA_OPERATORS = (
    ">>>=", ">>>", ">>=", "<<=", "->", "::", "==", "!=", "<=", ">=", "&&",
    "||", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<",
    ">>", "+", "-", "*", "/", "%", "=", "<", ">", "!", "&", "|", "^", "~", "?",
)

_PYTHON_OPERATORS = (
    "**=", "//=", ">>=", "<<=", "...", "==", "!=", "<=", ">=", "->", ":=",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=", "**", "//", "<<",
    ">>", "+", "-", "*", "/", "%", "=", "<", ">", "&", "|", "^", "~", "@",
)

_JAVA_PUNCTUATION = frozenset("()[]{};,.@:")
_PYTHON_PUNCTUATION = frozenset("()[]{};,.:")

_JAVA_NUMBER = re.compile(
    r"0[xX][0-9a-fA-F_]+[lL]?"
    r"|0[bB][01_]+[lL]?"
    r"|(?:\d[\d_]*(?:\.[\d_]*)?|\.\d[\d_]*)(?:[eE][+-]?\d[\d_]*)?[fFdDlL]?"
)

_PYTHON_NUMBER = re.compile(
    r"0[xX][0-9a-fA-F_]+"
    r"|0[oO][0-7_]+"
    r"|0[bB][01_]+"
    r"|(?:\d[\d_]*(?:\.[\d_]*)?|\.\d[\d_]*)(?:[eE][+-]?\d[\d_]*)?[jJ]?"
)

# 1- and 2-letter string prefixes accepted before a quote in Python.
_PY_STRING_PREFIXES = frozenset(
    "".join(chars)
    for base in ("r", "b", "u", "f", "rb", "br", "fr", "rf")
    for chars in itertools.product(*[(c, c.upper()) for c in base])
)


def lex(source: str, language: Language | str) -> TokenIndex:
    """Tokenize source text; raises LexError with a character position."""
    language = Language(language)
    if language is Language.JAVA:
        tokens = _lex_java(source)
    else:
        tokens = _lex_python(source)
    return TokenIndex(tokens=tuple(tokens), source=source, language=language)


def _is_ident_start(ch: str, java: bool) -> bool:
    return ch.isalpha() or ch == "_" or (java and ch == "$")


def _is_ident_part(ch: str, java: bool) -> bool:
    return ch.isalnum() or ch == "_" or (java and ch == "$")


def _scan_ident(source: str, i: int, java: bool) -> int:
    n = len(source)
    j = i + 1
    while j < n and _is_ident_part(source[j], java):
        j += 1
    return j


def _scan_quoted(source: str, i: int, allow_triple: bool) -> int:
    """Scan a quoted string starting at the quote char; returns end index.

    Backslash always consumes the next character, which matches how raw
    strings terminate too (a backslash still prevents the closing quote).
    """
    n = len(source)
    quote = source[i]
    if allow_triple and source.startswith(quote * 3, i):
        closer = quote * 3
        j = i + 3
        while j < n:
            if source[j] == "\\":
                j += 2
                continue
            if source.startswith(closer, j):
                return j + 3
            j += 1
        raise LexError("unterminated triple-quoted string", i)
    j = i + 1
    while j < n:
        ch = source[j]
        if ch == "\\":
            j += 2
            continue
        if ch == quote:
            return j + 1
        if ch == "\n":
            break
        j += 1
    raise LexError("unterminated string literal", i)


def _match_operator(source: str, i: int, table: tuple[str, ...]) -> str | None:
    for op in table:  # table is longest-first
        if source.startswith(op, i):
            return op
    return None


def _lex_java(source: str) -> list[CodeToken]:
    tokens: list[CodeToken] = []
    n = len(source)
    i = 0
    while i < n:
        ch = source[i]
        if ch in " \t\r\n\f\x0b":
            i += 1
            continue
        if ch == "/" and source.startswith("//", i):
            j = source.find("\n", i)
            j = n if j < 0 else j
            tokens.append(CodeToken(source[i:j], TokenKind.LITERAL, i, j))
            i = j
            continue
        if ch == "/" and source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j < 0:
                raise LexError("unterminated block comment", i)
            j += 2
            tokens.append(CodeToken(source[i:j], TokenKind.LITERAL, i, j))
            i = j
            continue
        if ch in "\"'":
            j = _scan_quoted(source, i, allow_triple=(ch == '"'))
            tokens.append(CodeToken(source[i:j], TokenKind.LITERAL, i, j))
            i = j
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            m = _JAVA_NUMBER.match(source, i)
            tokens.append(CodeToken(m.group(), TokenKind.LITERAL, i, m.end()))
            i = m.end()
            continue
        if _is_ident_start(ch, java=True):
            j = _scan_ident(source, i, java=True)
            word = source[i:j]
            kind = TokenKind.KEYWORD if word in _JAVA_KEYWORDS else TokenKind.IDENTIFIER
            tokens.append(CodeToken(word, kind, i, j))
            i = j
            continue
        op = _match_operator(source, i, _JAVA_OPERATORS)
        if op is not None:
            tokens.append(CodeToken(op, TokenKind.OPERATOR, i, i + len(op)))
            i += len(op)
            continue
        if ch in _JAVA_PUNCTUATION:
            tokens.append(CodeToken(ch, TokenKind.PUNCTUATION, i, i + 1))
            i += 1
            continue
        raise LexError(f"illegal character {ch!r}", i)
    return tokens


def _lex_python(source: str) -> list[CodeToken]:
    tokens: list[CodeToken] = []
    n = len(source)
    i = 0
    while i < n:
        ch = source[i]
        if ch in " \t\r\n\f\x0b":
            i += 1
            continue
        if ch == "\\":
            # Explicit line join: backslash directly before a line break.
            if source.startswith("\\\r\n", i):
                i += 3
                continue
            if i + 1 < n and source[i + 1] == "\n":
                i += 2
                continue
            raise LexError("stray backslash", i)
        if ch == "#":
            j = source.find("\n", i)
            j = n if j < 0 else j
            tokens.append(CodeToken(source[i:j], TokenKind.LITERAL, i, j))
            i = j
            continue
        if ch in "\"'":
            j = _scan_quoted(source, i, allow_triple=True)
            tokens.append(CodeToken(source[i:j], TokenKind.LITERAL, i, j))
            i = j
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            m = _PYTHON_NUMBER.match(source, i)
            tokens.append(CodeToken(m.group(), TokenKind.LITERAL, i, m.end()))
            i = m.end()
            continue
        if _is_ident_start(ch, java=False):
            j = _scan_ident(source, i, java=False)
            word = source[i:j]
            # A string prefix like f"..." or rb'...' glues onto its quote.
            if j < n and source[j] in "\"'" and word in _PY_STRING_PREFIXES:
                j = _scan_quoted(source, j, allow_triple=True)
                tokens.append(CodeToken(source[i:j], TokenKind.LITERAL, i, j))
                i = j
                continue
            kind = TokenKind.KEYWORD if word in _PYTHON_KEYWORDS else TokenKind.IDENTIFIER
            tokens.append(CodeToken(word, kind, i, j))
            i = j
            continue
        op = _match_operator(source, i, _PYTHON_OPERATORS)
        if op is not None:
            tokens.append(CodeToken(op, TokenKind.OPERATOR, i, i + len(op)))
            i += len(op)
            continue
        if ch in _PYTHON_PUNCTUATION:
            tokens.append(CodeToken(ch, TokenKind.PUNCTUATION, i, i + 1))
            i += 1
            continue
        raise LexError(f"illegal character {ch!r}", i)
    return tokens

"""Identifier context analysis: immutable and declaration identifier sets.

Naming rewrites need two sets of identifier lexemes per sample:

* ``immutable`` -- names bound outside the sample (imported names, called
  methods, attribute/field accesses, annotations), which must not be renamed
  unless the sample itself declares them;
* ``declarations`` -- names the sample declares and is therefore free to
  rename consistently, except Java methods carrying an ``@Override`` marker.

Both are computed from the token stream alone.  Declaration detection is a
targeted lexical analysis, not a parse; the binding forms it recognizes are:

Java
  class/interface/enum names; method declarations (name + ``(`` preceded by a
  type token, minus ``@Override`` methods); variable, parameter, catch and
  enhanced-for declarations (name preceded by a type token and followed by
  ``= ; , ) :``).

Python
  ``def``/``class`` names; ``def`` and ``lambda`` parameters; ``for`` loop
  targets; ``as`` targets (``with``/``except``/imports); ``global`` and
  ``nonlocal`` names; walrus targets; plain and annotated assignment targets
  at statement start, including tuple and chained forms.

Not recognized (documented gaps, all conservative): Java lambda parameters
and old-style ``int x[]`` arrays; Python augmented-assignment targets,
parenthesized/starred unpacking targets, and backslash-continued import
statements.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Mapping

from .errors import ConfigError
from .lexer import CodeToken, Language, TokenIndex, TokenKind

JAVA_CONTEXTS = frozenset(
    {"importDeclaration", "packageDeclaration", "methodCall", "fieldAccess", "annotation"}
)
PYTHON_CONTEXTS = frozenset({"import_as_name", "trailer", "decorator"})

_JAVA_PRIMITIVES = frozenset(
    {"void", "int", "long", "short", "byte", "char", "float", "double", "boolean"}
)


@dataclass(frozen=True)
class IdentifierContext:
    """Immutable and declaration lexeme sets for one token index."""

    immutable: frozenset[str]
    declarations: frozenset[str]


def load_immutable_types(path: str) -> dict[Language, frozenset[str]]:
    """Read a language -> context-name config file (JSON object)."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read immutable-types config {path}: {exc}") from exc
    return parse_immutable_types(raw)


def parse_immutable_types(raw: Mapping[str, Iterable[str]]) -> dict[Language, frozenset[str]]:
    if not isinstance(raw, Mapping):
        raise ConfigError("immutable-types config must map language -> context list")
    known = {Language.JAVA: JAVA_CONTEXTS, Language.PYTHON: PYTHON_CONTEXTS}
    out: dict[Language, frozenset[str]] = {}
    for lang_name, names in raw.items():
        try:
            lang = Language(lang_name)
        except ValueError:
            raise ConfigError(f"unknown language {lang_name!r} in immutable-types config")
        names = list(names)
        unknown = sorted(set(names) - known[lang])
        if unknown:
            raise ConfigError(
                f"unknown context name(s) for {lang.value}: {', '.join(unknown)}"
            )
        out[lang] = frozenset(names)
    return out


def default_immutable_types() -> dict[Language, frozenset[str]]:
    data = resources.files("lexdrift.data").joinpath("immutable_types.json")
    return parse_immutable_types(json.loads(data.read_text(encoding="utf-8")))


_DEFAULT_TYPES: dict[Language, frozenset[str]] | None = None


def classify_identifiers(
    index: TokenIndex,
    immutable_types: Mapping[Language, frozenset[str]] | None = None,
) -> IdentifierContext:
    """Populate the immutable/declaration sets for one token index."""
    global _DEFAULT_TYPES
    if immutable_types is None:
        if _DEFAULT_TYPES is None:
            _DEFAULT_TYPES = default_immutable_types()
        immutable_types = _DEFAULT_TYPES
    contexts = immutable_types.get(index.language, frozenset())

    sig = _Significant(index)
    if index.language is Language.JAVA:
        immutable = _java_immutable(sig, contexts)
        declarations = _java_declarations(sig)
    else:
        immutable = _python_immutable(sig, contexts)
        declarations = _python_declarations(sig)
    return IdentifierContext(frozenset(immutable), frozenset(declarations))


def _is_comment(token: CodeToken, language: Language) -> bool:
    if token.kind is not TokenKind.LITERAL:
        return False
    if language is Language.JAVA:
        return token.lexeme.startswith(("//", "/*"))
    return token.lexeme.startswith("#")


class _Significant:
    """Comment-free token view with line numbers and neighbor access."""

    def __init__(self, index: TokenIndex):
        self.language = index.language
        self.tokens = [t for t in index.tokens if not _is_comment(t, index.language)]
        newlines = [k for k, ch in enumerate(index.source) if ch == "\n"]
        self.lines = [bisect_right(newlines, t.start) for t in self.tokens]

    def lex(self, k: int) -> str | None:
        if 0 <= k < len(self.tokens):
            return self.tokens[k].lexeme
        return None

    def kind(self, k: int) -> TokenKind | None:
        if 0 <= k < len(self.tokens):
            return self.tokens[k].kind
        return None

    def statement_starts(self) -> list[bool]:
        """Token starts a new statement: depth 0 and first on line or after ';'."""
        starts = []
        depth = 0
        for k, tok in enumerate(self.tokens):
            first_on_line = k == 0 or self.lines[k] > self.lines[k - 1]
            starts.append(depth == 0 and (first_on_line or self.lex(k - 1) == ";"))
            if tok.lexeme in "([{":
                depth += 1
            elif tok.lexeme in ")]}":
                depth = max(0, depth - 1)
        return starts


# ---------------------------------------------------------------------------
# Java
# ---------------------------------------------------------------------------


def _java_immutable(sig: _Significant, contexts: frozenset[str]) -> set[str]:
    toks = sig.tokens
    out: set[str] = set()
    for stmt_kw, ctx in (("import", "importDeclaration"), ("package", "packageDeclaration")):
        if ctx not in contexts:
            continue
        k = 0
        while k < len(toks):
            if toks[k].kind is TokenKind.KEYWORD and toks[k].lexeme == stmt_kw:
                j = k + 1
                while j < len(toks) and toks[j].lexeme != ";":
                    if toks[j].kind is TokenKind.IDENTIFIER:
                        out.add(toks[j].lexeme)
                    j += 1
                k = j
            k += 1
    for k, tok in enumerate(toks):
        if tok.kind is not TokenKind.IDENTIFIER:
            continue
        if "methodCall" in contexts and sig.lex(k + 1) == "(":
            out.add(tok.lexeme)
        if "fieldAccess" in contexts and sig.lex(k - 1) == ".":
            out.add(tok.lexeme)
        if "annotation" in contexts and sig.lex(k - 1) == "@":
            out.add(tok.lexeme)
            j = k + 1
            while sig.lex(j) == "." and sig.kind(j + 1) is TokenKind.IDENTIFIER:
                out.add(toks[j + 1].lexeme)
                j += 2
    return out


_TYPE_ARG_LEXEMES = frozenset({",", ".", "?", "extends", "super", "[", "]"}) | _JAVA_PRIMITIVES


def _angle_open(sig: _Significant, close_k: int) -> int | None:
    """Index of the '<' matching a closing '>'/'>>'/'>>>' token, or None.

    Only type-argument material may appear in between; anything else means
    the '>' was a comparison, not a generic type.
    """
    depth = {"<": -1, ">": 1, ">>": 2, ">>>": 3}
    need = depth[sig.lex(close_k)]
    k = close_k - 1
    steps = 0
    while k >= 0 and steps < 60:
        lex = sig.lex(k)
        if lex in depth:
            need += depth[lex]
            if need <= 0:
                return k
        elif sig.kind(k) is not TokenKind.IDENTIFIER and lex not in _TYPE_ARG_LEXEMES:
            return None
        k -= 1
        steps += 1
    return None


def _java_typeish_before(sig: _Significant, k: int) -> bool:
    """Token k-1 plausibly ends a type, making token k a declared name."""
    prev = sig.lex(k - 1)
    if prev is None:
        return False
    if sig.kind(k - 1) is TokenKind.IDENTIFIER or prev in _JAVA_PRIMITIVES or prev == "]":
        return True
    if prev in {">", ">>", ">>>"}:
        open_k = _angle_open(sig, k - 1)
        # 'obj.<T>call(...)' is a generic call, not a declaration.
        return open_k is not None and sig.lex(open_k - 1) != "."
    return False


def _java_has_override(sig: _Significant, name_k: int) -> bool:
    """Scan back through the declaration header for an '@ Override' marker."""
    k = name_k - 1
    window: list[str] = []
    while k >= 0:
        lex = sig.lex(k)
        if lex in {";", "{", "}"}:
            break
        if lex == ")":
            depth = 1
            k -= 1
            while k >= 0 and depth:
                if sig.lex(k) == ")":
                    depth += 1
                elif sig.lex(k) == "(":
                    depth -= 1
                k -= 1
            continue
        window.append(lex)
        k -= 1
    window.reverse()
    return any(a == "@" and b == "Override" for a, b in zip(window, window[1:]))


def _java_declarations(sig: _Significant) -> set[str]:
    toks = sig.tokens
    out: set[str] = set()
    for k, tok in enumerate(toks):
        if tok.kind is not TokenKind.IDENTIFIER:
            continue
        prev = sig.lex(k - 1)
        if prev in {"class", "interface", "enum"} and sig.kind(k - 1) is TokenKind.KEYWORD:
            out.add(tok.lexeme)
            continue
        if not _java_typeish_before(sig, k):
            continue
        nxt = sig.lex(k + 1)
        if nxt == "(":
            if not _java_has_override(sig, k):
                out.add(tok.lexeme)
        elif nxt in {"=", ";", ",", ")", ":"}:
            out.add(tok.lexeme)
    return out


# ---------------------------------------------------------------------------
# Python
# ---------------------------------------------------------------------------


def _python_immutable(sig: _Significant, contexts: frozenset[str]) -> set[str]:
    toks = sig.tokens
    starts = sig.statement_starts()
    out: set[str] = set()
    if "import_as_name" in contexts:
        for k, tok in enumerate(toks):
            if not starts[k] or tok.kind is not TokenKind.KEYWORD:
                continue
            if tok.lexeme not in {"import", "from"}:
                continue
            depth = 0
            j = k
            while j < len(toks):
                lex = toks[j].lexeme
                if lex in "([{":
                    depth += 1
                elif lex in ")]}":
                    depth -= 1
                elif lex == ";" and depth == 0:
                    break
                if toks[j].kind is TokenKind.IDENTIFIER:
                    out.add(lex)
                at_line_end = j + 1 >= len(toks) or sig.lines[j + 1] > sig.lines[j]
                if at_line_end and depth == 0:
                    break
                j += 1
    if "trailer" in contexts:
        for k, tok in enumerate(toks):
            if tok.kind is not TokenKind.IDENTIFIER:
                continue
            if sig.lex(k - 1) == ".":
                out.add(tok.lexeme)
            elif sig.lex(k + 1) == "(" and sig.lex(k - 1) not in {"def", "class"}:
                # A def/class header's name-plus-paren is a binding site,
                # not a call trailer.
                out.add(tok.lexeme)
    if "decorator" in contexts:
        for k, tok in enumerate(toks):
            if tok.lexeme != "@" or (k > 0 and sig.lines[k - 1] == sig.lines[k]):
                continue
            j = k + 1
            while sig.kind(j) is TokenKind.IDENTIFIER:
                out.add(sig.lex(j))
                if sig.lex(j + 1) != ".":
                    break
                j += 2
    return out


def _python_params(sig: _Significant, open_k: int, out: set[str]) -> None:
    """Collect parameter names between a def's parens."""
    depth = 0
    j = open_k
    while j < len(sig.tokens):
        lex = sig.lex(j)
        if lex in "([{":
            depth += 1
        elif lex in ")]}":
            depth -= 1
            if depth == 0:
                return
        elif (
            depth == 1
            and sig.kind(j) is TokenKind.IDENTIFIER
            and sig.lex(j - 1) in {"(", ",", "*", "**", "/"}
        ):
            out.add(lex)
        j += 1


def _python_declarations(sig: _Significant) -> set[str]:
    toks = sig.tokens
    starts = sig.statement_starts()
    out: set[str] = set()
    for k, tok in enumerate(toks):
        if tok.kind is TokenKind.KEYWORD:
            lex = tok.lexeme
            if lex in {"def", "class"} and sig.kind(k + 1) is TokenKind.IDENTIFIER:
                out.add(sig.lex(k + 1))
                if lex == "def" and sig.lex(k + 2) == "(":
                    _python_params(sig, k + 2, out)
            elif lex == "lambda":
                j = k + 1
                while j < len(toks) and sig.lex(j) != ":":
                    if toks[j].kind is TokenKind.IDENTIFIER and sig.lex(j - 1) in {
                        "lambda", ",", "*", "**",
                    }:
                        out.add(toks[j].lexeme)
                    j += 1
            elif lex == "for":
                j = k + 1
                while j < len(toks) and sig.lex(j) != "in":
                    if toks[j].kind is TokenKind.IDENTIFIER and sig.lex(j - 1) in {
                        "for", ",", "(", "[",
                    }:
                        out.add(toks[j].lexeme)
                    j += 1
            elif lex == "as" and sig.kind(k + 1) is TokenKind.IDENTIFIER:
                out.add(sig.lex(k + 1))
            elif lex in {"global", "nonlocal"}:
                j = k + 1
                while sig.kind(j) is TokenKind.IDENTIFIER:
                    out.add(sig.lex(j))
                    if sig.lex(j + 1) != ",":
                        break
                    j += 2
        elif tok.kind is TokenKind.IDENTIFIER and sig.lex(k + 1) == ":=":
            out.add(tok.lexeme)
        elif tok.kind is TokenKind.IDENTIFIER and starts[k]:
            _python_assign_targets(sig, k, out)
    return out


def _python_assign_targets(sig: _Significant, k: int, out: set[str]) -> None:
    """Mark targets of 'a = ...', 'a, b = ...', 'a: T = ...', 'a = b = ...'."""
    while True:
        targets = []
        j = k
        while sig.kind(j) is TokenKind.IDENTIFIER:
            targets.append(sig.lex(j))
            if sig.lex(j + 1) != ",":
                j += 1
                break
            j += 2
        if not targets:
            return
        if sig.lex(j) == ":" and sig.lines[k] == sig.lines[min(j, len(sig.tokens) - 1)]:
            # Annotated assignment or bare annotation: "x: T" / "x: T = v".
            if len(targets) == 1:
                out.update(targets)
            return
        if sig.lex(j) != "=":
            return
        out.update(targets)
        k = j + 1

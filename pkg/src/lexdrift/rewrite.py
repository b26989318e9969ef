"""Semantics-preserving rewrite rules and their application.

Two rule families operate on a lexed sample:

* naming rules re-case every eligible identifier (eligible = identifier-kind,
  not immutable unless locally declared, and full-matching the rule's source
  casing style), recording one edit event per underscore inserted or removed;
* spacing rules insert exactly one space between strictly adjacent token
  pairs matching the rule's (first, second) kind bigram, recording one +1
  whitespace event per insertion.

Edit positions are always expressed in original-text coordinates; the
boundary classifier applies its own cumulative shifts when replaying them.
Rules are applied one at a time -- feeding a rule its own output is out of
contract and would double-space.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Mapping

from .casing import CaseStyle, convert_case, match_case_style, underscore_edit_offsets
from .errors import ConfigError
from .identifiers import IdentifierContext
from .lexer import CodeToken, Language, TokenIndex, TokenKind, lex

# Sentinels for spacing bigram sides (everything else is a literal lexeme).
WILDCARD_OP = "OP"
IDENT_SIDE = "ID"
IDENT_OR_OP_SIDE = "ID_OR_OP"


class RuleKind(str, Enum):
    NAMING = "naming"
    SPACING = "spacing"


class EditType(str, Enum):
    UNDERSCORE = "underscore"
    WHITESPACE = "whitespace"


@dataclass(frozen=True)
class RewriteRule:
    id: str
    kind: RuleKind
    languages: frozenset[Language]
    source_style: CaseStyle | None = None
    target_style: CaseStyle | None = None
    first: str | None = None
    second: str | None = None
    # Lexemes excluded from the OP wildcard, per language.
    wildcard_excludes: Mapping[Language, frozenset[str]] = field(default_factory=dict)

    def applies_to(self, language: Language) -> bool:
        return language in self.languages

    @property
    def edit_type(self) -> EditType:
        return EditType.UNDERSCORE if self.kind is RuleKind.NAMING else EditType.WHITESPACE


@dataclass(frozen=True)
class EditEvent:
    pos: int
    delta: int
    edit_type: EditType


@dataclass(frozen=True)
class RewriteResult:
    rewritten: str
    events: tuple[EditEvent, ...]
    renames: dict[str, str]

    @property
    def changed(self) -> bool:
        return bool(self.events) or bool(self.renames)


def load_rules(path: str | None = None) -> list[RewriteRule]:
    """Load a rule catalog; the bundled catalog when path is None."""
    if path is None:
        raw = json.loads(
            resources.files("lexdrift.data").joinpath("rules.json").read_text("utf-8")
        )
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read rule catalog {path}: {exc}") from exc
    return parse_rules(raw)


def parse_rules(raw: Mapping) -> list[RewriteRule]:
    excludes = {
        Language(lang): frozenset(lexemes)
        for lang, lexemes in raw.get("wildcard_excludes", {}).items()
    }
    rules = []
    seen = set()
    for entry in raw["rules"]:
        rule = _parse_rule(entry, excludes)
        if rule.id in seen:
            raise ConfigError(f"duplicate rule id {rule.id}")
        seen.add(rule.id)
        rules.append(rule)
    return rules


def _parse_rule(entry: Mapping, excludes: Mapping[Language, frozenset[str]]) -> RewriteRule:
    try:
        kind = RuleKind(entry["kind"])
        languages = frozenset(Language(lang) for lang in entry["languages"])
        if not languages:
            raise ConfigError(f"rule {entry.get('id')} has no languages")
        if kind is RuleKind.NAMING:
            return RewriteRule(
                id=entry["id"],
                kind=kind,
                languages=languages,
                source_style=CaseStyle(entry["source_style"]),
                target_style=CaseStyle(entry["target_style"]),
            )
        return RewriteRule(
            id=entry["id"],
            kind=kind,
            languages=languages,
            first=entry["first"],
            second=entry["second"],
            wildcard_excludes=excludes,
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad rule entry {entry!r}: {exc}") from exc


def rules_by_id(rules: list[RewriteRule]) -> dict[str, RewriteRule]:
    return {r.id: r for r in rules}


# ---------------------------------------------------------------------------
# Naming rewrite
# ---------------------------------------------------------------------------


def apply_naming_rewrite(
    source: str,
    index: TokenIndex,
    context: IdentifierContext,
    rule: RewriteRule,
) -> RewriteResult:
    """Re-case all eligible identifiers; returns rewritten text + edit log.

    The rename map is decided per lexeme on first occurrence.  A conversion
    whose result would collide with another identifier in the sample (or with
    a previously chosen target) is skipped entirely, keeping the rename map
    injective and the rewrite free of accidental capture.
    """
    if rule.kind is not RuleKind.NAMING:
        raise ValueError(f"rule {rule.id} is not a naming rule")
    all_idents = {t.lexeme for t in index.tokens if t.kind is TokenKind.IDENTIFIER}
    renames: dict[str, str] = {}
    taken: set[str] = set()
    skipped: set[str] = set()
    for tok in index.tokens:
        if tok.kind is not TokenKind.IDENTIFIER:
            continue
        x = tok.lexeme
        if x in renames or x in skipped:
            continue
        eligible = (
            (x not in context.immutable or x in context.declarations)
            and match_case_style(x, rule.source_style)
        )
        if not eligible:
            skipped.add(x)
            continue
        y = convert_case(x, rule.source_style, rule.target_style)
        if y == x or y in all_idents or y in taken:
            skipped.add(x)
            continue
        renames[x] = y
        taken.add(y)

    events: list[EditEvent] = []
    pieces: list[str] = []
    last = 0
    for tok in index.tokens:
        if tok.kind is not TokenKind.IDENTIFIER or tok.lexeme not in renames:
            continue
        for offset, delta in underscore_edit_offsets(
            tok.lexeme, rule.source_style, rule.target_style
        ):
            events.append(EditEvent(tok.start + offset, delta, EditType.UNDERSCORE))
        pieces.append(source[last : tok.start])
        pieces.append(renames[tok.lexeme])
        last = tok.end
    pieces.append(source[last:])
    return RewriteResult("".join(pieces), tuple(events), renames)


# ---------------------------------------------------------------------------
# Spacing rewrite
# ---------------------------------------------------------------------------


def _side_matches(token: CodeToken, side: str, rule: RewriteRule, language: Language) -> bool:
    if side == IDENT_SIDE:
        return token.kind is TokenKind.IDENTIFIER
    op_like = token.kind in (TokenKind.OPERATOR, TokenKind.PUNCTUATION)
    if side == WILDCARD_OP or side == IDENT_OR_OP_SIDE:
        if token.kind is TokenKind.IDENTIFIER:
            return side == IDENT_OR_OP_SIDE
        excluded = token.lexeme in rule.wildcard_excludes.get(language, frozenset())
        return op_like and not excluded
    return op_like and token.lexeme == side


def apply_spacing_rewrite(source: str, index: TokenIndex, rule: RewriteRule) -> RewriteResult:
    """Insert one space between each strictly adjacent pair matching the rule.

    Pairs already separated by any character (whitespace, comment, ...) never
    match, so re-running a rule on untouched text is idempotent on the pairs
    it already spaced.
    """
    if rule.kind is not RuleKind.SPACING:
        raise ValueError(f"rule {rule.id} is not a spacing rule")
    language = index.language
    events: list[EditEvent] = []
    pieces: list[str] = []
    last = 0
    toks = index.tokens
    for k in range(len(toks) - 1):
        first, second = toks[k], toks[k + 1]
        if first.end != second.start:
            continue
        if _side_matches(first, rule.first, rule, language) and _side_matches(
            second, rule.second, rule, language
        ):
            events.append(EditEvent(second.start, +1, EditType.WHITESPACE))
            pieces.append(source[last : second.start])
            pieces.append(" ")
            last = second.start
    pieces.append(source[last:])
    return RewriteResult("".join(pieces), tuple(events), {})


def apply_rewrite(
    source: str,
    index: TokenIndex,
    rule: RewriteRule,
    context: IdentifierContext | None = None,
) -> RewriteResult:
    if rule.kind is RuleKind.NAMING:
        if context is None:
            raise ValueError("naming rewrites need an IdentifierContext")
        return apply_naming_rewrite(source, index, context, rule)
    return apply_spacing_rewrite(source, index, rule)


def propagate_renames(
    patches: list[str], renames: Mapping[str, str], language: Language | str
) -> list[str]:
    """Apply a sample's rename map to its ancillary patch texts.

    Replacement is token-level: each patch is lexed and only identifier
    tokens whose whole lexeme is renamed are substituted, so no substring of
    a longer identifier is ever captured.
    """
    if not renames:
        return list(patches)
    out = []
    for patch in patches:
        index = lex(patch, language)
        pieces: list[str] = []
        last = 0
        for tok in index.tokens:
            if tok.kind is TokenKind.IDENTIFIER and tok.lexeme in renames:
                pieces.append(patch[last : tok.start])
                pieces.append(renames[tok.lexeme])
                last = tok.end
        pieces.append(patch[last:])
        out.append("".join(pieces))
    return out

"""Identifier casing styles: recognition, segmentation, and conversion.

The snake and camel patterns are load-bearing: an identifier is only eligible
for a naming rewrite if it full-matches its rule's source pattern.  The pascal
and screaming-snake patterns mirror them.  Segmentation of camel-ish names
puts a boundary before each run of capitals (so "parseURL" segments as
["parse", "URL"]), and digit runs stick to the segment they follow.
"""

from __future__ import annotations

import re
from enum import Enum

from .errors import StyleError


class CaseStyle(str, Enum):
    CAMEL = "camel"
    SNAKE = "snake"
    PASCAL = "pascal"
    SCREAMING_SNAKE = "screaming_snake"


_STYLE_PATTERNS = {
    CaseStyle.SNAKE: re.compile(r"[a-z0-9]+(?:_[A-Za-z0-9]+)+"),
    CaseStyle.CAMEL: re.compile(r"[a-z]+(?:[A-Z]+[A-Za-z0-9]+[A-Za-z0-9]*)+"),
    CaseStyle.PASCAL: re.compile(r"[A-Z][a-z0-9]+(?:[A-Z][A-Za-z0-9]*)*"),
    CaseStyle.SCREAMING_SNAKE: re.compile(r"[A-Z0-9]+(?:_[A-Z0-9]+)+"),
}

# Styles whose surface form separates segments with underscores.
_UNDERSCORE_STYLES = frozenset({CaseStyle.SNAKE, CaseStyle.SCREAMING_SNAKE})


def match_case_style(identifier: str, style: CaseStyle | str) -> bool:
    """True iff the identifier full-matches the style's pattern."""
    return _STYLE_PATTERNS[CaseStyle(style)].fullmatch(identifier) is not None


def segment(identifier: str, style: CaseStyle | str) -> list[str]:
    """Split an identifier of the given style into its segments.

    Underscore styles split at underscores.  Camel/pascal split before each
    run of uppercase letters; a digit run never starts a segment.
    """
    style = CaseStyle(style)
    if style in _UNDERSCORE_STYLES:
        return identifier.split("_")
    segments: list[str] = []
    start = 0
    prev_upper = identifier[0].isupper() if identifier else False
    for k in range(1, len(identifier)):
        upper = identifier[k].isupper()
        if upper and not prev_upper:
            segments.append(identifier[start:k])
            start = k
        prev_upper = upper
    segments.append(identifier[start:])
    return segments


def _join(segments: list[str], target: CaseStyle) -> str:
    if target is CaseStyle.SNAKE:
        return "_".join(s.lower() for s in segments)
    if target is CaseStyle.SCREAMING_SNAKE:
        return "_".join(s.upper() for s in segments)
    if target is CaseStyle.CAMEL:
        head, *rest = segments
        return head.lower() + "".join(s[:1].upper() + s[1:].lower() for s in rest)
    head_cased = [s[:1].upper() + s[1:].lower() for s in segments]
    return "".join(head_cased)


def convert_case(
    identifier: str, source_style: CaseStyle | str, target_style: CaseStyle | str
) -> str:
    """Re-join an identifier's segments in the target style.

    Raises StyleError when the identifier does not match the source style.
    """
    source_style = CaseStyle(source_style)
    target_style = CaseStyle(target_style)
    if not match_case_style(identifier, source_style):
        raise StyleError(f"{identifier!r} does not match {source_style.value} style")
    segments = segment(identifier, source_style)
    # Single-segment pascal names carry no boundary to re-case deterministically.
    if source_style is CaseStyle.PASCAL and len(segments) < 2:
        raise StyleError(f"{identifier!r} has no internal boundary to convert")
    return _join(segments, target_style)


def underscore_edit_offsets(
    identifier: str, source_style: CaseStyle | str, target_style: CaseStyle | str
) -> list[tuple[int, int]]:
    """(offset, delta) underscore edits for converting one identifier.

    Offsets are relative to the identifier's own first character:
      * insertion (+1): the offset of the character the new underscore lands
        in front of;
      * deletion (-1): the offset of the removed underscore itself.

    Case flips alone never produce an edit, so camel->pascal and
    snake->screaming conversions return an empty list.
    """
    source_style = CaseStyle(source_style)
    target_style = CaseStyle(target_style)
    src_sep = source_style in _UNDERSCORE_STYLES
    tgt_sep = target_style in _UNDERSCORE_STYLES
    if src_sep == tgt_sep:
        return []
    if src_sep:
        return [(k, -1) for k, ch in enumerate(identifier) if ch == "_"]
    offsets = []
    pos = 0
    for seg in segment(identifier, source_style)[:-1]:
        pos += len(seg)
        offsets.append((pos, +1))
    return offsets

"""Fragment-change classification: how a rewrite moved subword boundaries.

Given the subword encodings of a code context before and after one rewrite,
plus the rewrite's edit-event log, the classifier decides whether subword
token boundaries were lost (merged), gained (split), both (mixed), or
neither (unchanged).  Edit positions are replayed with a cumulative offset to
bring the old boundary set into the new text's coordinate frame, and
boundaries that exist only because of the edit itself are masked out:

* underscore edits ignore a new boundary appearing right after an inserted
  underscore (tokenizers that keep standalone underscores would otherwise
  report a spurious split);
* whitespace edits ignore a new boundary created exactly at the inserted
  space, unless a boundary already sat there before the rewrite.

Classification is computed over the whole code context; the lost/gained
boundary sets are exposed raw for per-site diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .bpe import Encoding, TokenizerSpec, encode
from .errors import ContractError, EncodingError, LexError
from .identifiers import IdentifierContext, classify_identifiers
from .lexer import Language, lex
from .rewrite import (
    EditEvent,
    EditType,
    RewriteResult,
    RewriteRule,
    RuleKind,
    apply_rewrite,
)


class FragmentLabel(str, Enum):
    UNCHANGED = "unchanged"
    MERGED = "merged"
    SPLIT = "split"
    MIXED = "mixed"


@dataclass
class BoundaryState:
    """Working state of the boundary replay (exposed for diagnostics)."""

    s_old: set[int]
    s_new: set[int]
    s_ed: set[int]
    s_ed_plus: set[int] = field(default_factory=set)
    offset: int = 0


@dataclass(frozen=True)
class FragmentChange:
    label: FragmentLabel
    lost: frozenset[int]
    gained: frozenset[int]


@dataclass(frozen=True)
class DriftRecord:
    sample_id: str
    rule_id: str
    original: str
    rewritten: str
    original_encoding: Encoding
    rewritten_encoding: Encoding
    events: tuple[EditEvent, ...]
    change: FragmentChange
    affected: bool


def _label_for(lost: frozenset[int], gained: frozenset[int]) -> FragmentLabel:
    if lost and not gained:
        return FragmentLabel.MERGED
    if gained and not lost:
        return FragmentLabel.SPLIT
    if lost and gained:
        return FragmentLabel.MIXED
    return FragmentLabel.UNCHANGED


def _check_events(events: Sequence[EditEvent], edit_type: EditType) -> None:
    prev = None
    for ev in events:
        if ev.delta not in (-1, 1):
            raise ContractError(f"event delta {ev.delta} outside {{-1, +1}}")
        if ev.edit_type is not edit_type:
            raise ContractError(
                f"event at {ev.pos} has type {ev.edit_type.value}, expected {edit_type.value}"
            )
        if prev is not None and ev.pos <= prev:
            raise ContractError("event positions must be strictly ascending")
        prev = ev.pos


def classify_fragment_change(
    old_enc: Encoding,
    new_enc: Encoding,
    events: Iterable[EditEvent],
    edit_type: EditType | str,
) -> FragmentChange:
    """Boundary-diff with edit-site masking; events are original-text offsets."""
    edit_type = EditType(edit_type)
    events = tuple(events)
    _check_events(events, edit_type)

    state = BoundaryState(
        s_old=set(old_enc.starts),
        s_new=set(new_enc.starts),
        s_ed={ev.pos for ev in events},
    )
    for ev in events:
        adjusted = ev.pos + state.offset
        state.s_old = {p + ev.delta if p > adjusted else p for p in state.s_old}
        state.s_ed = {e + ev.delta if e > adjusted else e for e in state.s_ed}
        state.s_ed_plus.add(adjusted + max(ev.delta, 0))
        state.offset += ev.delta

    if edit_type is EditType.UNDERSCORE:
        state.s_new -= state.s_ed_plus - state.s_ed
    else:
        state.s_new -= state.s_ed - state.s_old

    lost = frozenset(state.s_old - state.s_new)
    gained = frozenset(state.s_new - state.s_old)
    return FragmentChange(_label_for(lost, gained), lost, gained)


def analyze_sample(
    source: str,
    language: Language | str,
    rule: RewriteRule,
    spec: TokenizerSpec,
    context: IdentifierContext | None = None,
    sample_id: str = "",
    index=None,
    original_encoding: Encoding | None = None,
) -> DriftRecord:
    """Rewrite one sample with one rule, encode both sides, and classify.

    The token index and the original text's encoding can be passed in when a
    caller loops several rules over the same sample.
    """
    language = Language(language)
    try:
        if index is None:
            index = lex(source, language)
        if rule.kind is RuleKind.NAMING and context is None:
            context = classify_identifiers(index)
        result: RewriteResult = apply_rewrite(source, index, rule, context)
        if original_encoding is None:
            original_encoding = encode(spec, source)
        if result.changed:
            rewritten_encoding = encode(spec, result.rewritten)
            change = classify_fragment_change(
                original_encoding, rewritten_encoding, result.events, rule.edit_type
            )
        else:
            rewritten_encoding = original_encoding
            change = FragmentChange(FragmentLabel.UNCHANGED, frozenset(), frozenset())
    except (LexError, EncodingError) as exc:
        tag = f" [sample {sample_id or '<unnamed>'}, rule {rule.id}]"
        exc.args = (str(exc) + tag,)
        raise
    return DriftRecord(
        sample_id=sample_id,
        rule_id=rule.id,
        original=source,
        rewritten=result.rewritten,
        original_encoding=original_encoding,
        rewritten_encoding=rewritten_encoding,
        events=result.events,
        change=change,
        affected=result.changed,
    )

import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexdrift.casing import (
    CaseStyle,
    convert_case,
    match_case_style,
    segment,
    underscore_edit_offsets,
)
from lexdrift.errors import StyleError


@pytest.mark.parametrize(
    "identifier,style,expected",
    [
        ("a_b", CaseStyle.SNAKE, True),
        ("x", CaseStyle.SNAKE, False),
        ("x", CaseStyle.CAMEL, False),
        ("sortedLst", CaseStyle.CAMEL, True),
        ("sorted_lst", CaseStyle.SNAKE, True),
        ("sorted_lst", CaseStyle.CAMEL, False),
        ("SortedLst", CaseStyle.PASCAL, True),
        ("SortedLst", CaseStyle.CAMEL, False),
        ("MAX_VALUE", CaseStyle.SCREAMING_SNAKE, True),
        ("MAX_VALUE", CaseStyle.SNAKE, False),
        ("_private", CaseStyle.SNAKE, False),
        ("trailing_", CaseStyle.SNAKE, False),
        ("a__b", CaseStyle.SNAKE, False),
        ("parseURL", CaseStyle.CAMEL, True),
        ("value2Go", CaseStyle.CAMEL, False),  # digit blocks the first segment
        ("myVar2", CaseStyle.CAMEL, True),
        ("a2_b", CaseStyle.SNAKE, True),
    ],
)
def test_match_case_style(identifier, style, expected):
    assert match_case_style(identifier, style) is expected


@pytest.mark.parametrize(
    "identifier,src,tgt,expected",
    [
        ("sortedLst", CaseStyle.CAMEL, CaseStyle.SNAKE, "sorted_lst"),
        ("sorted_lst", CaseStyle.SNAKE, CaseStyle.CAMEL, "sortedLst"),
        ("maxValue", CaseStyle.CAMEL, CaseStyle.SCREAMING_SNAKE, "MAX_VALUE"),
        ("myVar", CaseStyle.CAMEL, CaseStyle.PASCAL, "MyVar"),
        ("item_count", CaseStyle.SNAKE, CaseStyle.PASCAL, "ItemCount"),
        ("item_count", CaseStyle.SNAKE, CaseStyle.SCREAMING_SNAKE, "ITEM_COUNT"),
        ("parseURL", CaseStyle.CAMEL, CaseStyle.SNAKE, "parse_url"),
        ("myVar2", CaseStyle.CAMEL, CaseStyle.SNAKE, "my_var2"),
        ("a2_b", CaseStyle.SNAKE, CaseStyle.CAMEL, "a2B"),
    ],
)
def test_convert_case(identifier, src, tgt, expected):
    assert convert_case(identifier, src, tgt) == expected


def test_convert_rejects_mismatched_source():
    with pytest.raises(StyleError):
        convert_case("plain", CaseStyle.CAMEL, CaseStyle.SNAKE)
    with pytest.raises(StyleError):
        convert_case("Sorted", CaseStyle.PASCAL, CaseStyle.SNAKE)


def test_segmentation():
    assert segment("sortedLst", CaseStyle.CAMEL) == ["sorted", "Lst"]
    assert segment("parseURLNow", CaseStyle.CAMEL) == ["parse", "URLNow"]
    assert segment("maxItemCount", CaseStyle.CAMEL) == ["max", "Item", "Count"]
    assert segment("a_b_c", CaseStyle.SNAKE) == ["a", "b", "c"]


def test_underscore_edit_offsets():
    assert underscore_edit_offsets("sortedLst", CaseStyle.CAMEL, CaseStyle.SNAKE) == [(6, 1)]
    assert underscore_edit_offsets("foo_bar", CaseStyle.SNAKE, CaseStyle.CAMEL) == [(3, -1)]
    assert underscore_edit_offsets("myVar", CaseStyle.CAMEL, CaseStyle.PASCAL) == []
    assert underscore_edit_offsets("a_b", CaseStyle.SNAKE, CaseStyle.SCREAMING_SNAKE) == []
    assert underscore_edit_offsets("maxItemCount", CaseStyle.CAMEL, CaseStyle.SCREAMING_SNAKE) == [
        (3, 1),
        (7, 1),
    ]


# At least one lowercase after the capital: the camel pattern requires two
# characters beyond the head run, and adjacent capitals are excluded anyway.
_CAMEL_SEGMENT = st.from_regex(re.compile(r"[A-Z][a-z]{1,5}[0-9]{0,2}"), fullmatch=True)


@st.composite
def camel_identifiers(draw):
    head = draw(st.from_regex(re.compile(r"[a-z]{1,6}"), fullmatch=True))
    rest = draw(st.lists(_CAMEL_SEGMENT, min_size=1, max_size=4))
    return head + "".join(rest)


@given(camel_identifiers())
@settings(max_examples=300, deadline=None)
def test_camel_snake_round_trip(identifier):
    # No consecutive capitals by construction, so the round trip is exact.
    assert match_case_style(identifier, CaseStyle.CAMEL)
    snake = convert_case(identifier, CaseStyle.CAMEL, CaseStyle.SNAKE)
    assert match_case_style(snake, CaseStyle.SNAKE)
    assert convert_case(snake, CaseStyle.SNAKE, CaseStyle.CAMEL) == identifier


@given(camel_identifiers())
@settings(max_examples=200, deadline=None)
def test_edit_offsets_reconstruct_target_length(identifier):
    for target in (CaseStyle.SNAKE, CaseStyle.SCREAMING_SNAKE, CaseStyle.PASCAL):
        converted = convert_case(identifier, CaseStyle.CAMEL, target)
        deltas = sum(d for _, d in underscore_edit_offsets(identifier, CaseStyle.CAMEL, target))
        assert len(converted) == len(identifier) + deltas

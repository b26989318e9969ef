import json
import random
import string

import pytest

from conftest import make_spec, random_spec

from lexdrift.bpe import (
    PretokenizerConfig,
    TokenizerSpec,
    build_spec,
    decode,
    encode,
    import_tokenizer_json,
    import_vocab_merges,
    load_tokenizer,
    pretokenize,
    save_tokenizer,
    shared_vocab_fraction,
    validate_spec,
    vocab_distance,
)
from lexdrift.errors import EncodingError, FormatError, ValidationError


def test_minimal_spec_valid():
    spec = build_spec({"a": 0, "b": 1, "ab": 2}, [("a", "b")])
    assert validate_spec(spec) == []


def test_merge_product_missing_is_invalid():
    with pytest.raises(ValidationError) as err:
        build_spec({"a": 0, "b": 1}, [("a", "b")])
    assert "product" in str(err.value)


def test_validation_reports_every_breach():
    spec = TokenizerSpec(
        vocab={"a": 0, "b": 0, "ab": 1},
        merges=(("a", "b"), ("b", "a")),
        specials=frozenset({"ab"}),
    )
    violations = validate_spec(spec)
    assert len(violations) == 3  # missing 'ba', special collides, dup ids


def test_tiny_merge_chain():
    spec = make_spec([("a", "b"), ("ab", "c")])
    enc = encode(spec, "abc")
    assert enc.tokens == ("abc",)
    assert enc.starts == (0,)


def test_empty_text():
    spec = make_spec([("a", "b")])
    enc = encode(spec, "")
    assert enc.tokens == () and enc.ids == () and enc.starts == ()


def test_encode_offsets_and_decode(sortedlst_spec):
    enc = encode(sortedlst_spec, " sortedLst")
    assert enc.tokens == (" sorted", "L", "st")
    assert enc.starts == (0, 7, 8)
    assert decode(sortedlst_spec, enc.ids) == " sortedLst"


def test_out_of_alphabet_raises():
    spec = make_spec([("a", "b")])
    with pytest.raises(EncodingError):
        encode(spec, "aZ")


def test_merge_priority_order():
    # 'bc' has priority over 'ab': "abc" -> ['a', 'bc']
    spec = make_spec([("b", "c"), ("a", "b")])
    assert encode(spec, "abc").tokens == ("a", "bc")
    # reversed priority merges the front pair first
    spec2 = make_spec([("a", "b"), ("b", "c")])
    assert encode(spec2, "abc").tokens == ("ab", "c")


def test_leftmost_first_on_overlaps():
    spec = make_spec([("a", "a")])
    assert encode(spec, "aaa").tokens == ("aa", "a")
    assert encode(spec, "aaaa").tokens == ("aa", "aa")


def test_prefix_space_sensitivity(sortedlst_spec):
    with_space = encode(sortedlst_spec, " sortedLst")
    without = encode(sortedlst_spec, "sortedLst")
    assert with_space.tokens != tuple(t for t in without.tokens)


# ---------------------------------------------------------------------------
# Pre-tokenizer behaviors
# ---------------------------------------------------------------------------


def chunks(text, **flags):
    return [c for _, c in pretokenize(text, PretokenizerConfig(**flags))]


def test_pretokenize_space_attachment():
    assert chunks("a bc") == ["a", " bc"]
    assert chunks("  bc") == [" ", " bc"]
    assert chunks("a bc", attach_space_prefix=False) == ["a", " ", "bc"]


def test_pretokenize_covers_text():
    cfgs = [
        PretokenizerConfig(),
        PretokenizerConfig(digit_mode="max3", split_punctuation=True),
        PretokenizerConfig(digit_mode="per_digit", newline_blocks=True),
        PretokenizerConfig(split_whitespace=False),
    ]
    text = "def f(x1):\n  return x1 + 123456 ... 'ok'\n\n"
    for cfg in cfgs:
        pieces = pretokenize(text, cfg)
        assert "".join(c for _, c in pieces) == text
        pos = 0
        for start, chunk in pieces:
            assert start == pos
            pos += len(chunk)


def test_pretokenize_digit_modes():
    assert chunks("ab12345", digit_mode="off") == ["ab12345"]
    assert chunks("ab12345", digit_mode="runs") == ["ab", "12345"]
    assert chunks("ab12345", digit_mode="max3") == ["ab", "123", "45"]
    assert chunks("ab12345", digit_mode="per_digit") == ["ab", "1", "2", "3", "4", "5"]
    # digit chunks only absorb a space prefix in whole-run mode
    assert chunks(" 12 ab", digit_mode="runs") == [" 12", " ab"]
    assert chunks(" 12 ab", digit_mode="max3") == [" ", "12", " ab"]


def test_pretokenize_punctuation_and_newlines():
    assert chunks("x.y", split_punctuation=True) == ["x", ".", "y"]
    assert chunks("x.y", split_punctuation=False) == ["x.y"]
    assert chunks("a\n\nb", newline_blocks=True) == ["a", "\n\n", "b"]
    assert chunks("foo_bar", split_punctuation=True) == ["foo_bar"]  # '_' is a word char
    assert chunks("foo_bar", split_punctuation=True, extra_word_chars="") == [
        "foo", "_", "bar",
    ]


def test_pretokenize_clitics():
    got = chunks("don't stop", split_punctuation=True, split_clitics=True)
    assert got == ["don", "'t", " stop"]


def _byte_vocab():
    from lexdrift.bpe import _BYTE_ENCODER

    return {_BYTE_ENCODER[b]: b for b in range(256)}


def _mapped(text: str) -> str:
    from lexdrift.bpe import _BYTE_ENCODER

    return "".join(_BYTE_ENCODER[b] for b in text.encode("utf-8"))


def test_byte_level_round_trip():
    vocab = _byte_vocab()
    e_acute = _mapped("é")
    merges = [("h", "i"), ("Ġ", "hi"), (e_acute[0], e_acute[1])]
    for a, b in merges:
        vocab.setdefault(a + b, len(vocab))
    spec = build_spec(vocab, merges, byte_level=True)
    enc = encode(spec, "hi hi")
    assert enc.tokens == ("hi", " hi")
    assert enc.starts == (0, 2)
    assert decode(spec, enc.ids) == "hi hi"
    # a multi-byte char whose bytes merge keeps char-aligned offsets
    enc2 = encode(spec, "héllo")
    assert "".join(enc2.tokens) == "héllo"
    assert decode(spec, enc2.ids) == "héllo"
    assert enc2.starts == tuple(sorted(set(enc2.starts)))


def test_byte_level_uncovered_char_is_mid_character_error():
    # Without a merge for its two bytes, 'é' would start a token mid-character.
    spec = build_spec(_byte_vocab(), [], byte_level=True)
    with pytest.raises(ValidationError):
        encode(spec, "é")


def test_offset_soundness_random_specs():
    rng = random.Random(1234)
    alphabet = string.ascii_lowercase + " _.123"
    for round_no in range(30):
        spec = random_spec(rng, alphabet, n_merges=25)
        text = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 40)))
        enc = encode(spec, text)
        assert decode(spec, enc.ids) == text
        assert "".join(enc.tokens) == text
        ends = list(enc.starts[1:]) + [len(text)]
        for tok, start, end in zip(enc.tokens, enc.starts, ends):
            assert text[start:end] == tok
        if enc.starts:
            assert enc.starts[0] == 0


# ---------------------------------------------------------------------------
# Files and importers
# ---------------------------------------------------------------------------


def test_load_save_round_trip(tmp_path, sortedlst_spec):
    path = tmp_path / "spec.json"
    save_tokenizer(sortedlst_spec, str(path))
    loaded = load_tokenizer(str(path))
    assert loaded.vocab == dict(sortedlst_spec.vocab)
    assert loaded.merges == sortedlst_spec.merges
    assert loaded.pretokenizer == sortedlst_spec.pretokenizer
    assert encode(loaded, " sortedLst").tokens == (" sorted", "L", "st")


def test_load_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("not json at all{", encoding="utf-8")
    with pytest.raises(FormatError):
        load_tokenizer(str(bad))
    missing = tmp_path / "fields.json"
    missing.write_text('{"vocab": {"a": 0}}', encoding="utf-8")
    with pytest.raises(FormatError):
        load_tokenizer(str(missing))


def test_load_reports_invariant_breaches(tmp_path):
    path = tmp_path / "invalid.json"
    path.write_text(
        json.dumps({"vocab": {"a": 0, "b": 1}, "merges": [["a", "b"]]}),
        encoding="utf-8",
    )
    with pytest.raises(ValidationError) as err:
        load_tokenizer(str(path))
    assert err.value.violations


def test_import_vocab_merges(tmp_path):
    from lexdrift.bpe import _BYTE_ENCODER

    vocab = {_BYTE_ENCODER[b]: b for b in range(256)}
    vocab["ab"] = 256
    (tmp_path / "vocab.json").write_text(json.dumps(vocab), encoding="utf-8")
    (tmp_path / "merges.txt").write_text("#version: 0.2\na b\n", encoding="utf-8")
    spec = import_vocab_merges(str(tmp_path / "vocab.json"), str(tmp_path / "merges.txt"))
    assert spec.byte_level
    assert spec.merges == (("a", "b"),)
    assert encode(spec, "ab").tokens == ("ab",)


def test_import_tokenizer_json(tmp_path):
    from lexdrift.bpe import _BYTE_ENCODER

    vocab = {_BYTE_ENCODER[b]: b for b in range(256)}
    vocab["ab"] = 256
    payload = {
        "added_tokens": [{"content": "<|end|>"}],
        "model": {"type": "BPE", "vocab": vocab, "merges": ["a b"]},
        "pre_tokenizer": {
            "type": "Sequence",
            "pretokenizers": [
                {
                    "type": "Split",
                    "pattern": {"Regex": "(?i:'s|'t|'re|'ve|'m|'ll|'d)|[^\\r\\n\\p{L}\\p{N}]?\\p{L}+|\\p{N}{1,3}| ?[^\\s\\p{L}\\p{N}]+[\\r\\n]*|\\s*[\\r\\n]+|\\s+(?!\\S)|\\s+"},
                    "behavior": "Isolated",
                },
                {"type": "ByteLevel", "add_prefix_space": False, "use_regex": False},
            ],
        },
    }
    path = tmp_path / "tokenizer.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    spec = import_tokenizer_json(str(path))
    assert spec.byte_level
    assert spec.pretokenizer.digit_mode == "max3"
    assert spec.pretokenizer.split_punctuation
    assert spec.pretokenizer.split_clitics
    assert "<|end|>" in spec.specials
    assert encode(spec, "ab").tokens == ("ab",)


# ---------------------------------------------------------------------------
# Vocabulary comparison
# ---------------------------------------------------------------------------


def test_vocab_distance_identity_and_disjoint():
    a = make_spec([("a", "b")])
    assert vocab_distance(a, a) == 0.0
    b = make_spec([("c", "d")])
    assert vocab_distance(a, b) == 1.0
    assert shared_vocab_fraction(a, b) == 0.0


def test_vocab_distance_partial_overlap():
    a = build_spec({"a": 0, "b": 1, "c": 2}, [])
    b = build_spec({"b": 0, "c": 1, "d": 2}, [])
    assert vocab_distance(a, b) == pytest.approx(1 - 2 / 4)

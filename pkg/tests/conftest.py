"""Shared fixtures: tiny tokenizer specs and randomized-spec builders."""

from __future__ import annotations

import random

import pytest

from lexdrift.bpe import PretokenizerConfig, TokenizerSpec, build_spec


def make_spec(merges, extra_vocab=(), pretok=None, byte_level=False) -> TokenizerSpec:
    """Build a validated spec whose vocab covers the merges plus extras."""
    vocab: dict[str, int] = {}

    def add(token: str) -> None:
        if token not in vocab:
            vocab[token] = len(vocab)

    base = set()
    for a, b in merges:
        base.update(a)
        base.update(b)
    for ch in sorted(base):
        add(ch)
    for token in extra_vocab:
        add(token)
    for a, b in merges:
        add(a + b)
    return build_spec(vocab, merges, pretok or PretokenizerConfig(), byte_level=byte_level)


def random_spec(rng: random.Random, alphabet: str, n_merges: int = 40,
                pretok: PretokenizerConfig | None = None) -> TokenizerSpec:
    """Random but valid BPE spec over the given alphabet."""
    vocab = {ch: i for i, ch in enumerate(alphabet)}
    symbols = list(alphabet)
    merges: list[tuple[str, str]] = []
    seen = set()
    for _ in range(n_merges * 3):
        if len(merges) >= n_merges:
            break
        a, b = rng.choice(symbols), rng.choice(symbols)
        if (a, b) in seen or len(a + b) > 8:
            continue
        seen.add((a, b))
        merges.append((a, b))
        product = a + b
        if product not in vocab:
            vocab[product] = len(vocab)
            symbols.append(product)
    if pretok is None:
        pretok = PretokenizerConfig(
            attach_space_prefix=rng.random() < 0.7,
            digit_mode=rng.choice(["off", "runs", "max3", "per_digit"]),
            split_punctuation=rng.random() < 0.5,
            newline_blocks=rng.random() < 0.5,
        )
    return build_spec(vocab, merges, pretok, byte_level=False)


@pytest.fixture
def sortedlst_spec() -> TokenizerSpec:
    """Tokenizes ' sortedLst' as [' sorted', 'L', 'st']."""
    merges = [
        ("s", "t"), ("l", "st"), ("_", "lst"), ("s", "o"), ("so", "r"),
        ("sor", "t"), ("sort", "e"), ("sorte", "d"), (" ", "sorted"),
    ]
    return make_spec(merges, extra_vocab=["L", "S", "_", " "])


@pytest.fixture
def factorial_spec() -> TokenizerSpec:
    """Tokenizes '.factorial' as ['.factor', 'ial']."""
    merges = [
        ("f", "a"), ("fa", "c"), ("fac", "t"), ("fact", "o"), ("facto", "r"),
        ("i", "a"), ("ia", "l"), (".", "factor"), ("factor", "ial"),
        (" ", "factorial"),
    ]
    return make_spec(merges, extra_vocab=[" ", ".", "q", "(", ")", "n"])


@pytest.fixture
def foobar_spec() -> TokenizerSpec:
    """Tokenizes 'foo_bar' as a single token but 'fooBar' as ['foo', 'Bar']."""
    merges = [
        ("f", "o"), ("fo", "o"), ("B", "a"), ("Ba", "r"), ("b", "a"),
        ("ba", "r"), ("_", "bar"), ("foo", "_bar"),
    ]
    return make_spec(merges, extra_vocab=["_"])

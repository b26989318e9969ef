"""BPE tokenizer: loading, encoding with character offsets, vocab comparison.

A tokenizer definition carries a vocabulary, an ordered merge list (list
position = priority), a pre-tokenizer configuration, and a byte-level flag.
Encoding applies the pre-tokenizer splits, then within each chunk repeatedly
applies the highest-priority applicable merge, leftmost occurrence first,
until no merge applies.  Every output token records the character offset of
its first character in the input text, which is what the drift classifier
consumes.

Pre-tokenization behaviors are composable flags rather than per-model
hardcoding: optional single-space prefix attachment, digit runs (whole runs,
runs capped at three digits, or one chunk per digit), punctuation runs,
newline blocks, and English clitic detachment.  Importers map published
tokenizer files onto these flags.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import EncodingError, FormatError, ValidationError

_DIGIT_MODES = ("off", "runs", "max3", "per_digit")


@dataclass(frozen=True)
class PretokenizerConfig:
    split_whitespace: bool = True
    attach_space_prefix: bool = True
    digit_mode: str = "off"
    split_punctuation: bool = False
    newline_blocks: bool = False
    split_clitics: bool = False
    extra_word_chars: str = "_"

    def to_dict(self) -> dict:
        return {
            "split_whitespace": self.split_whitespace,
            "attach_space_prefix": self.attach_space_prefix,
            "digit_mode": self.digit_mode,
            "split_punctuation": self.split_punctuation,
            "newline_blocks": self.newline_blocks,
            "split_clitics": self.split_clitics,
            "extra_word_chars": self.extra_word_chars,
        }


@dataclass(frozen=True)
class TokenizerSpec:
    """Immutable tokenizer definition; shareable across concurrent encoders."""

    vocab: Mapping[str, int]
    merges: tuple[tuple[str, str], ...]
    pretokenizer: PretokenizerConfig = PretokenizerConfig()
    byte_level: bool = False
    specials: frozenset[str] = frozenset()
    ranks: Mapping[tuple[str, str], int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ranks = {}
        for i, pair in enumerate(self.merges):
            if pair not in ranks:
                ranks[pair] = i
        object.__setattr__(self, "ranks", ranks)


@dataclass(frozen=True)
class Encoding:
    """Token strings (in text form), their vocab ids, and char start offsets."""

    tokens: tuple[str, ...]
    ids: tuple[int, ...]
    starts: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.tokens)


# GPT-2 style printable mapping for byte-level vocabularies.
def _bytes_to_unicode() -> dict[int, str]:
    bs = (
        list(range(ord("!"), ord("~") + 1))
        + list(range(ord("\xa1"), ord("\xac") + 1))
        + list(range(ord("\xae"), ord("\xff") + 1))
    )
    cs = bs[:]
    n = 0
    for b in range(256):
        if b not in bs:
            bs.append(b)
            cs.append(256 + n)
            n += 1
    return {b: chr(c) for b, c in zip(bs, cs)}


_BYTE_ENCODER = _bytes_to_unicode()
_BYTE_DECODER = {c: b for b, c in _BYTE_ENCODER.items()}

_CLITICS = ("ll", "re", "ve", "s", "t", "m", "d")


def _char_class(ch: str, cfg: PretokenizerConfig) -> str:
    if cfg.newline_blocks and ch in "\r\n":
        return "nl"
    if ch.isspace():
        return "ws"
    if ch.isdigit():
        return "digit" if cfg.digit_mode != "off" else "word"
    if ch.isalpha() or ch in cfg.extra_word_chars:
        return "word"
    return "punct" if cfg.split_punctuation else "word"


def _clitic_at(text: str, i: int) -> int:
    """Length of a clitic chunk ('s, 't, 're, ...) starting at i, else 0."""
    if text[i] != "'":
        return 0
    for suffix in _CLITICS:
        end = i + 1 + len(suffix)
        if text[i + 1 : end].lower() == suffix:
            if end >= len(text) or not (text[end].isalnum() or text[end] == "_"):
                return end - i
    return 0


def pretokenize(text: str, cfg: PretokenizerConfig) -> list[tuple[int, str]]:
    """Split text into (start_offset, chunk) pieces whose concatenation is text."""
    if not text:
        return []
    if not cfg.split_whitespace:
        return [(0, text)]
    chunks: list[tuple[int, str]] = []
    pending_space: int | None = None  # offset of a space awaiting attachment

    def flush_pending() -> None:
        nonlocal pending_space
        if pending_space is not None:
            chunks.append((pending_space, " "))
            pending_space = None

    n = len(text)
    i = 0
    while i < n:
        cls = _char_class(text[i], cfg)
        if cls == "nl":
            flush_pending()
            j = i
            while j < n and text[j] in "\r\n":
                j += 1
            chunks.append((i, text[i:j]))
            i = j
            continue
        if cls == "ws":
            flush_pending()
            j = i
            while j < n and _char_class(text[j], cfg) == "ws":
                j += 1
            if cfg.attach_space_prefix and j < n and text[j - 1] == " ":
                if j - 1 > i:
                    chunks.append((i, text[i : j - 1]))
                pending_space = j - 1
            else:
                chunks.append((i, text[i:j]))
            i = j
            continue
        if cfg.split_clitics:
            clen = _clitic_at(text, i)
            if clen:
                start = pending_space if pending_space is not None else i
                pending_space = None
                chunks.append((start, text[start : i + clen]))
                i += clen
                continue
        j = i
        while j < n and _char_class(text[j], cfg) == cls:
            j += 1
        if cls == "digit":
            attach = cfg.digit_mode == "runs"
            if not attach:
                flush_pending()
            step = {"runs": j - i, "max3": 3, "per_digit": 1}[cfg.digit_mode]
            k = i
            while k < j:
                end = min(k + step, j)
                start = pending_space if pending_space is not None else k
                pending_space = None
                chunks.append((start, text[start:end]))
                k = end
            i = j
            continue
        start = pending_space if pending_space is not None else i
        pending_space = None
        chunks.append((start, text[start:j]))
        i = j
    flush_pending()
    return chunks


def _apply_merges(symbols: list[str], ranks: Mapping[tuple[str, str], int]) -> list[str]:
    """Merge to fixpoint: best-ranked pair first, leftmost occurrences first."""
    while len(symbols) >= 2:
        best_pair = None
        best_rank = None
        for pair in zip(symbols, symbols[1:]):
            rank = ranks.get(pair)
            if rank is not None and (best_rank is None or rank < best_rank):
                best_rank = rank
                best_pair = pair
        if best_pair is None:
            break
        merged = best_pair[0] + best_pair[1]
        out: list[str] = []
        i = 0
        while i < len(symbols):
            if (
                i + 1 < len(symbols)
                and symbols[i] == best_pair[0]
                and symbols[i + 1] == best_pair[1]
            ):
                out.append(merged)
                i += 2
            else:
                out.append(symbols[i])
                i += 1
        symbols = out
    return symbols


def encode(spec: TokenizerSpec, text: str) -> Encoding:
    """Encode text; token starts are character offsets into the input."""
    tokens: list[str] = []
    ids: list[int] = []
    starts: list[int] = []
    for chunk_start, chunk in pretokenize(text, spec.pretokenizer):
        if spec.byte_level:
            _encode_byte_chunk(spec, chunk, chunk_start, tokens, ids, starts)
        else:
            _encode_char_chunk(spec, chunk, chunk_start, tokens, ids, starts)
    return Encoding(tuple(tokens), tuple(ids), tuple(starts))


def _encode_char_chunk(spec, chunk, chunk_start, tokens, ids, starts) -> None:
    missing = sorted({c for c in chunk if c not in spec.vocab})
    if missing:
        raise EncodingError(
            f"characters outside tokenizer alphabet: {', '.join(map(repr, missing))}"
        )
    pos = 0
    for sym in _apply_merges(list(chunk), spec.ranks):
        tokens.append(sym)
        ids.append(spec.vocab[sym])
        starts.append(chunk_start + pos)
        pos += len(sym)


def _encode_byte_chunk(spec, chunk, chunk_start, tokens, ids, starts) -> None:
    char_at_byte: dict[int, int] = {}
    byte_pos = 0
    for char_pos, ch in enumerate(chunk):
        char_at_byte[byte_pos] = char_pos
        byte_pos += len(ch.encode("utf-8"))
    char_at_byte[byte_pos] = len(chunk)

    mapped = "".join(_BYTE_ENCODER[b] for b in chunk.encode("utf-8"))
    pos = 0
    for sym in _apply_merges(list(mapped), spec.ranks):
        if pos not in char_at_byte:
            raise ValidationError(
                [f"token {sym!r} starts mid-character: malformed byte-level vocab"]
            )
        raw = bytes(_BYTE_DECODER[c] for c in sym)
        try:
            tok_text = raw.decode("utf-8")
        except UnicodeDecodeError:
            raise ValidationError(
                [f"token {sym!r} ends mid-character: malformed byte-level vocab"]
            ) from None
        tokens.append(tok_text)
        ids.append(spec.vocab[sym])
        starts.append(chunk_start + char_at_byte[pos])
        pos += len(sym)


def decode(spec: TokenizerSpec, ids: Iterable[int]) -> str:
    """Inverse of encode: vocabulary ids back to text."""
    by_id = {i: t for t, i in spec.vocab.items()}
    joined = "".join(by_id[i] for i in ids)
    if spec.byte_level:
        return bytes(_BYTE_DECODER[c] for c in joined).decode("utf-8")
    return joined


def vocab_distance(a: TokenizerSpec, b: TokenizerSpec) -> float:
    """Jaccard distance between the two vocabularies' token-string sets."""
    va, vb = set(a.vocab), set(b.vocab)
    if not va and not vb:
        return 0.0
    return 1.0 - len(va & vb) / len(va | vb)


def shared_vocab_fraction(a: TokenizerSpec, b: TokenizerSpec) -> float:
    va, vb = set(a.vocab), set(b.vocab)
    if not va and not vb:
        return 1.0
    return len(va & vb) / len(va | vb)


# ---------------------------------------------------------------------------
# Loading, validation, saving, importers
# ---------------------------------------------------------------------------


def _parse_pretokenizer(raw: Mapping) -> PretokenizerConfig:
    known = set(PretokenizerConfig().to_dict())
    unknown = set(raw) - known
    if unknown:
        raise FormatError(f"unknown pretokenizer fields: {', '.join(sorted(unknown))}")
    cfg = PretokenizerConfig(**raw)
    if cfg.digit_mode not in _DIGIT_MODES:
        raise FormatError(f"digit_mode must be one of {_DIGIT_MODES}")
    return cfg


def build_spec(
    vocab: Mapping[str, int],
    merges: Iterable[tuple[str, str]],
    pretokenizer: PretokenizerConfig | None = None,
    byte_level: bool = False,
    specials: Iterable[str] = (),
) -> TokenizerSpec:
    """Assemble and validate a TokenizerSpec; raises ValidationError."""
    spec = TokenizerSpec(
        vocab=dict(vocab),
        merges=tuple((a, b) for a, b in merges),
        pretokenizer=pretokenizer or PretokenizerConfig(),
        byte_level=byte_level,
        specials=frozenset(specials),
    )
    violations = validate_spec(spec)
    if violations:
        raise ValidationError(violations)
    return spec


def validate_spec(spec: TokenizerSpec) -> list[str]:
    """Every violated invariant, in a stable order."""
    violations = []
    products = set()
    for a, b in spec.merges:
        product = a + b
        products.add(product)
        if product not in spec.vocab:
            violations.append(f"merge ({a!r},{b!r}) product {product!r} not in vocab")
    for special in sorted(spec.specials & products):
        violations.append(f"special token {special!r} collides with a merge product")
    ids = list(spec.vocab.values())
    if len(set(ids)) != len(ids):
        violations.append("vocab ids are not unique")
    if spec.byte_level:
        missing = [b for b in range(256) if _BYTE_ENCODER[b] not in spec.vocab]
        if missing:
            violations.append(
                f"byte-level vocab lacks {len(missing)} single-byte tokens"
            )
    return violations


def load_tokenizer(path: str) -> TokenizerSpec:
    """Load the native single-file tokenizer definition format."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read tokenizer file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"tokenizer file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise FormatError("tokenizer file must hold a JSON object")
    try:
        vocab = raw["vocab"]
        merges = [tuple(m) for m in raw["merges"]]
    except KeyError as exc:
        raise FormatError(f"tokenizer file missing field {exc}") from exc
    if not all(isinstance(t, str) and isinstance(i, int) for t, i in vocab.items()):
        raise FormatError("vocab must map token strings to integer ids")
    if not all(len(m) == 2 for m in merges):
        raise FormatError("each merge must be a [left, right] pair")
    return build_spec(
        vocab=vocab,
        merges=merges,
        pretokenizer=_parse_pretokenizer(raw.get("pretokenizer", {})),
        byte_level=bool(raw.get("byte_level", False)),
        specials=raw.get("specials", ()),
    )


def save_tokenizer(spec: TokenizerSpec, path: str) -> None:
    payload = {
        "vocab": dict(spec.vocab),
        "merges": [list(m) for m in spec.merges],
        "pretokenizer": spec.pretokenizer.to_dict(),
        "byte_level": spec.byte_level,
        "specials": sorted(spec.specials),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=1)
        fh.write("\n")


def import_vocab_merges(
    vocab_path: str,
    merges_path: str,
    pretokenizer: PretokenizerConfig | None = None,
    byte_level: bool = True,
    specials: Iterable[str] = (),
) -> TokenizerSpec:
    """Import the common published two-file (vocab.json + merges.txt) layout."""
    try:
        with open(vocab_path, encoding="utf-8") as fh:
            vocab = json.load(fh)
        with open(merges_path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise FormatError(str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"vocab file is not valid JSON: {exc}") from exc
    merges = []
    for line in lines:
        if not line or line.startswith("#"):
            continue
        left, sep, right = line.partition(" ")
        if not sep:
            raise FormatError(f"bad merges line: {line!r}")
        merges.append((left, right))
    if pretokenizer is None:
        pretokenizer = PretokenizerConfig(
            digit_mode="runs", split_punctuation=True, split_clitics=True,
            newline_blocks=True, extra_word_chars="",
        )
    return build_spec(vocab, merges, pretokenizer, byte_level, specials)


def import_tokenizer_json(path: str) -> TokenizerSpec:
    """Import a published single-file BPE tokenizer definition.

    The file's pre-tokenizer section is mapped heuristically onto this
    module's composable flags; merge list and vocabulary import exactly.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise FormatError(str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from exc
    model = raw.get("model", {})
    if model.get("type") not in (None, "BPE"):
        raise FormatError(f"unsupported model type {model.get('type')!r}")
    try:
        vocab = model["vocab"]
        raw_merges = model["merges"]
    except KeyError as exc:
        raise FormatError(f"missing model field {exc}") from exc
    merges = []
    for m in raw_merges:
        if isinstance(m, str):
            left, _, right = m.partition(" ")
            merges.append((left, right))
        else:
            merges.append((m[0], m[1]))
    specials = [t["content"] for t in raw.get("added_tokens", [])]

    byte_level = False
    flags = {
        "digit_mode": "off",
        "split_punctuation": False,
        "split_clitics": False,
        "newline_blocks": False,
        "extra_word_chars": "",
    }
    for pre in _iter_pretokenizers(raw.get("pre_tokenizer")):
        kind = pre.get("type")
        if kind == "ByteLevel":
            byte_level = True
            if pre.get("use_regex", True):
                flags.update(
                    digit_mode="runs", split_punctuation=True,
                    split_clitics=True, newline_blocks=True,
                )
        elif kind == "Split":
            pattern = pre.get("pattern", {}).get("Regex", "")
            if r"\p{N}{1,3}" in pattern:
                flags["digit_mode"] = "max3"
            elif r"\p{N}{1,2}" in pattern or r"\p{N}(?" in pattern:
                flags["digit_mode"] = "per_digit"
            elif r"\p{N}" in pattern:
                flags["digit_mode"] = "runs"
            if r"[^\s\p{L}\p{N}]" in pattern or r"[^\r\n\p{L}\p{N}]" in pattern:
                flags["split_punctuation"] = True
            if "'s|'t|'re|'ve|'m|'ll|'d" in pattern.replace("?i:", "").lower():
                flags["split_clitics"] = True
            if r"[\r\n]" in pattern:
                flags["newline_blocks"] = True
        elif kind == "Whitespace":
            flags["split_punctuation"] = True
    cfg = PretokenizerConfig(**flags)
    return build_spec(vocab, merges, cfg, byte_level, specials)


def _iter_pretokenizers(node) -> Iterable[Mapping]:
    if not node:
        return
    if node.get("type") == "Sequence":
        for sub in node.get("pretokenizers", []):
            yield from _iter_pretokenizers(sub)
    else:
        yield node

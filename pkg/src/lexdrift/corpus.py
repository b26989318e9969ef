"""Corpus records and line-delimited JSON serialization.

A corpus is one JSON object per line:

    {"id": "...", "language": "java"|"python", "source": "...",
     "patches": ["...", ...]}        # patches optional

The bundled desk corpus (data/desk_corpus.jsonl) holds small Java and Python
snippets that exercise every rewrite rule's left-hand side several times; it
backs the acceptance suite and gives the CLI something to chew on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Iterator

from .errors import FormatError, IoError
from .lexer import Language


@dataclass(frozen=True)
class SampleRecord:
    id: str
    language: Language
    source: str
    patches: tuple[str, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        out = {"id": self.id, "language": self.language.value, "source": self.source}
        if self.patches:
            out["patches"] = list(self.patches)
        return out


def parse_sample(raw: dict) -> SampleRecord:
    try:
        return SampleRecord(
            id=str(raw["id"]),
            language=Language(raw["language"]),
            source=raw["source"],
            patches=tuple(raw.get("patches", ())),
        )
    except (KeyError, ValueError) as exc:
        raise FormatError(f"bad sample record {raw.get('id', '<no id>')!r}: {exc}") from exc


def load_corpus(path: str) -> list[SampleRecord]:
    """Read a JSONL corpus; ids must be unique."""
    samples = []
    seen = set()
    for raw in _read_jsonl(path):
        sample = parse_sample(raw)
        if sample.id in seen:
            raise FormatError(f"duplicate sample id {sample.id!r} in {path}")
        seen.add(sample.id)
        samples.append(sample)
    return samples


def _read_jsonl(path: str) -> Iterator[dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    yield json.loads(line)
                except json.JSONDecodeError as exc:
                    raise FormatError(f"{path}:{lineno}: bad JSON: {exc}") from exc
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc


def write_jsonl(path: str, rows: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False))
            fh.write("\n")


def read_jsonl(path: str) -> list[dict]:
    return list(_read_jsonl(path))


def desk_corpus_path() -> str:
    """Filesystem path of the bundled desk corpus."""
    return str(resources.files("lexdrift.data").joinpath("desk_corpus.jsonl"))


def load_desk_corpus() -> list[SampleRecord]:
    return load_corpus(desk_corpus_path())


def bundled_tokenizer_path() -> str:
    """Filesystem path of the bundled toy tokenizer definition."""
    return str(resources.files("lexdrift.data").joinpath("toy_tokenizer.json"))
